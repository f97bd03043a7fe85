#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "semmg/mesh.hpp"
#include "semmg/metrics.hpp"
#include "semmg/operators.hpp"

namespace semmg {

class MultigridHierarchy;

/// 64-bit splitmix generator; uniform() draws from [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t state_;
};

/// Uniform random values in [0, 1) at every node; identical for equal seeds.
Field random_initial_guess(const FieldLayout& layout, std::uint64_t seed);

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Unpreconditioned CG on A x = b starting from x, to ||r|| <= rel_tol ||b||.
CgResult conjugate_gradient(const Operator& op, const Field& b, Field& x, double rel_tol,
                            int max_iterations);

enum class SolverKind { mg, mgcg };

struct SolveConfig {
  SolverKind solver = SolverKind::mg;
  double tol_reduction = 1e10;  ///< stop once ||r|| <= ||r0|| / tol_reduction
  int max_cycles = 200;
  std::uint64_t seed = 1;
  bool random_start = true;     ///< false: start from zero
};

struct SolveResult {
  Field u;
  ConvergenceReport report;
  std::vector<double> betas;  ///< MGCG direction-update coefficients, in order
};

/// Stand-alone multigrid: repeated V-cycles on the top level.
SolveResult solve_mg(MultigridHierarchy& h, const Field& f, const SolveConfig& cfg);

/// Inexact multigrid-preconditioned CG; preconditioner is one V-cycle from zero.
SolveResult solve_mgcg(MultigridHierarchy& h, const Field& f, const SolveConfig& cfg);

using VectorMap = std::function<void(std::span<const double>, std::span<double>)>;

struct FlexibleCgResult {
  std::vector<double> x;
  ConvergenceReport report;
  std::vector<double> betas;
};

/// Flexible PCG with the Polak-Ribiere coefficient
///   beta = z^T (r - r_old) / delta,  delta = z^T r,
/// on plain vectors. r_old starts at zero, so the first update coincides with
/// Fletcher-Reeves. Iterates while ||r|| > r_max, at most max_iterations times.
FlexibleCgResult flexible_pcg(const VectorMap& apply_a, const VectorMap& precondition,
                              std::span<const double> f, std::vector<double> x0,
                              double tol_reduction, int max_iterations);

}  // namespace semmg
