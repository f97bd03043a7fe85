#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semmg/basis.hpp"
#include "semmg/mesh.hpp"
#include "semmg/operators.hpp"
#include "semmg/schwarz.hpp"

namespace semmg {

/// Number of adopted node layers as a function of the level order p_l.
struct OverlapRule {
  enum class Kind { fixed, floor_p_over_8, ceil_p_over_8, ceil_p_over_2 };
  Kind kind = Kind::fixed;
  int layers = 1;  ///< used by Kind::fixed only

  static OverlapRule fixed(int k) { return {Kind::fixed, k}; }
  static OverlapRule floor_p8() { return {Kind::floor_p_over_8, 0}; }
  static OverlapRule ceil_p8() { return {Kind::ceil_p_over_8, 0}; }
  static OverlapRule ceil_p2() { return {Kind::ceil_p_over_2, 0}; }

  /// Result is clamped to [0, p_l - 1].
  [[nodiscard]] int evaluate(int p_level) const;

  /// "fixed:<k>", "floorp8", "ceilp8", "ceilp2"
  [[nodiscard]] std::string to_string() const;
  static OverlapRule parse(std::string_view text);
};

enum class CycleType { standard, variable };

std::string_view to_string(CycleType type);

struct MultigridOptions {
  int order = 8;  ///< top-level order, a power of two >= 2
  OverlapRule overlap = OverlapRule::fixed(1);
  SmootherConfig smoother{};
  int n_pre = 1;
  int n_post = 0;
  CycleType cycle = CycleType::standard;
  /// When set, every level discretizes -div(nu grad u) with nu sampled at its own nodes.
  std::optional<ScalarFunction> diffusivity;
  double coarse_tolerance = 1e-12;
};

/// Outcome of the most recent coarse-grid CG solve.
struct CoarseSolveInfo {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = true;
};

/// Polynomial multigrid hierarchy with levels p_l = 2^l, l = 0..L.
class MultigridHierarchy {
 public:
  MultigridHierarchy(const MeshConfig& mesh, const MultigridOptions& options);
  ~MultigridHierarchy();

  MultigridHierarchy(const MultigridHierarchy&) = delete;
  MultigridHierarchy& operator=(const MultigridHierarchy&) = delete;

  [[nodiscard]] int num_levels() const { return static_cast<int>(levels_.size()); }
  [[nodiscard]] int top() const { return num_levels() - 1; }
  [[nodiscard]] int order(int level) const;
  [[nodiscard]] int overlap(int level) const;
  [[nodiscard]] int pre_steps(int level) const;
  [[nodiscard]] int post_steps(int level) const;
  [[nodiscard]] const FieldLayout& layout(int level) const;
  [[nodiscard]] const Basis1D& basis(int level) const;
  [[nodiscard]] const Operator& op(int level) const;
  [[nodiscard]] const Operator& top_operator() const { return op(top()); }
  [[nodiscard]] const MeshConfig& mesh() const { return mesh_; }
  [[nodiscard]] const MultigridOptions& options() const { return options_; }
  /// Null on level 0.
  [[nodiscard]] SchwarzSmoother* smoother(int level);
  /// Element-local interpolation from level-1 to level.
  [[nodiscard]] const Interp1D& interpolation(int level) const;

  /// I_l * coarse, from level l-1 to level l (1 <= l <= L).
  [[nodiscard]] Field prolongate(int level, const Field& coarse) const;
  /// I_l^T * fine, from level l to level l-1.
  [[nodiscard]] Field restrict_residual(int level, const Field& fine) const;

  /// Zero-mean solution of A_0 u = f0 after projecting out the constant component.
  [[nodiscard]] Field coarse_solve(const Field& f0);
  [[nodiscard]] const CoarseSolveInfo& last_coarse_solve() const { return coarse_info_; }
  [[nodiscard]] int coarse_failures() const { return coarse_failures_; }

  /// One V-cycle on the top level, in place.
  void v_cycle(Field& u, const Field& f);
  [[nodiscard]] Field v_cycle(const Field& u, const Field& f);

 private:
  struct Level;

  MeshConfig mesh_;
  MultigridOptions options_;
  std::vector<std::unique_ptr<Level>> levels_;
  CoarseSolveInfo coarse_info_;
  int coarse_failures_ = 0;
};

}  // namespace semmg
