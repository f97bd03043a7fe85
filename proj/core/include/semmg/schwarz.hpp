#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semmg/basis.hpp"
#include "semmg/linalg.hpp"
#include "semmg/mesh.hpp"
#include "semmg/operators.hpp"

namespace semmg {

/// Blending profile for overlapping corrections.
enum class WeightKind { arithmetic, linear, cubic, quintic, seventh, tophat };

/// Short names used on the command line and in CSV output: wa w1 w3 w5 w7 wt.
std::string_view to_string(WeightKind kind);
/// Throws std::invalid_argument for unknown names.
WeightKind parse_weight_kind(std::string_view name);

/// Shape function phi_kappa: the polynomial profile inside (-1, 1), sgn(x) outside.
double shape_function(WeightKind kind, double x);

/// w(xi) = 0.5 * [phi((xi + 1) / delta) - phi((xi - 1) / delta)]
double weight_value(WeightKind kind, double xi, double delta);

/// Extended element region: the owner element plus `overlap` node layers
/// adopted from each neighbour. The outer layer on the subdomain boundary is
/// excluded, so p + 1 + 2*overlap nodes per direction are updated, with local
/// indices -overlap ... p + overlap relative to the owner element.
struct SubdomainGeometry {
  int p = 1;
  int overlap = 0;
  double delta = 0.0;               ///< overlap width in the standard coordinate
  std::vector<double> coordinates;  ///< standard coordinate of each updated node

  [[nodiscard]] int extent() const { return p + 1 + 2 * overlap; }
};

/// Requires 0 <= overlap <= p-1.
SubdomainGeometry subdomain_geometry(const Basis1D& basis, int overlap);

/// 1D stiffness and (diagonal) mass restricted to the updated subdomain nodes
/// with homogeneous Dirichlet data on the excluded outer layer.
struct Restricted1D {
  Matrix stiff;
  std::vector<double> mass;
};

/// Assembles the periodic 1D operators on a ring of `ring` elements of size h
/// (the owner and its neighbours; ring = 2 when the mesh has only two elements
/// in this direction) and restricts them to the updated nodes.
Restricted1D restricted_1d(const Basis1D& basis, double h, int overlap, int ring = 3);

/// Per-direction weights at the updated nodes of a subdomain.
std::vector<double> weights_1d(WeightKind kind, const SubdomainGeometry& geometry);

/// Diagonal of W = W_y (x) W_x over the updated nodes, row-major by y then x.
std::vector<double> build_weight_tensor(WeightKind kind, const SubdomainGeometry& geometry);

/// Factored inverse of the subdomain operator
///   A_ss^-1 = (S_y (x) S_x)(I (x) Lambda_x + Lambda_y (x) I)^-1 (S_y^T (x) S_x^T)
/// with S^T M_s S = I and L_s S = M_s S Lambda per direction.
class FastDiagSolver {
 public:
  /// Generalized eigenproblems are reduced with M_s^-1/2 and solved by cyclic
  /// Jacobi. Weight tensor is omitted when `kind` is empty.
  static FastDiagSolver build(const Basis1D& basis, double dx, double dy, int overlap,
                              std::optional<WeightKind> kind, int ring_x = 3, int ring_y = 3);

  [[nodiscard]] int extent() const { return extent_; }
  [[nodiscard]] const SubdomainGeometry& geometry() const { return geometry_; }
  [[nodiscard]] const Matrix& eigenvectors_x() const { return sx_; }
  [[nodiscard]] const Matrix& eigenvectors_y() const { return sy_; }
  [[nodiscard]] const std::vector<double>& eigenvalues_x() const { return lambda_x_; }
  [[nodiscard]] const std::vector<double>& eigenvalues_y() const { return lambda_y_; }
  [[nodiscard]] const Restricted1D& restricted_x() const { return rx_; }
  [[nodiscard]] const Restricted1D& restricted_y() const { return ry_; }
  /// Empty for unweighted (multiplicative) use.
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }

  /// out = A_ss^-1 r on an extent x extent block (row-major by y then x).
  void solve(std::span<const double> r, std::span<double> out) const;

 private:
  int extent_ = 0;
  SubdomainGeometry geometry_;
  Restricted1D rx_, ry_;
  Matrix sx_, sy_, sx_t_, sy_t_;
  std::vector<double> lambda_x_, lambda_y_;
  std::vector<double> weights_;
};

enum class SmootherKind { additive, multiplicative };

struct SmootherConfig {
  SmootherKind kind = SmootherKind::additive;
  WeightKind weight = WeightKind::quintic;
};

/// Overlapping Schwarz smoother on one level. Holds references to the level
/// operator; scratch storage makes an instance single-user.
class SchwarzSmoother {
 public:
  /// `local_scale` multiplies each subdomain correction (one entry per element,
  /// row-major; empty means 1). For diffusion it holds 1 / mean(nu) per element.
  SchwarzSmoother(const Operator& op, const MeshConfig& mesh, const Basis1D& basis, int overlap,
                  SmootherConfig config, std::vector<double> local_scale = {});

  SchwarzSmoother(const SchwarzSmoother&) = delete;
  SchwarzSmoother& operator=(const SchwarzSmoother&) = delete;

  void smooth(Field& u, const Field& f, int iterations);

  /// n_it times: r = f - A u; u += sum_s R_s^T W A_ss^-1 R_s r
  void additive_sweep(Field& u, const Field& f, int iterations);

  /// Sequential subdomain corrections with residual refresh; lexicographic
  /// (ey, ex) order on odd iterations, reversed on even iterations.
  void multiplicative_sweep(Field& u, const Field& f, int iterations);

  [[nodiscard]] int extent() const { return solver_.extent(); }
  [[nodiscard]] int overlap() const { return overlap_; }
  [[nodiscard]] const SmootherConfig& config() const { return config_; }
  [[nodiscard]] const FastDiagSolver& solver() const { return solver_; }

  /// R_s v for subdomain s = (ex, ey).
  void gather_subdomain(const Field& v, int ex, int ey, std::span<double> block) const;
  /// v += R_s^T block
  void scatter_add_subdomain(Field& v, int ex, int ey, std::span<const double> block) const;
  /// du_s = scale_s [W] A_ss^-1 r_s; the weight is applied only for additive smoothing.
  void local_correction(int ex, int ey, std::span<const double> r_s, std::span<double> du_s) const;

 private:
  void update_residual_locally(int ex, int ey, std::span<const double> du_s, Field& r);

  const Operator& op_;
  MeshConfig mesh_;
  FieldLayout layout_;
  int overlap_;
  SmootherConfig config_;
  FastDiagSolver solver_;
  std::vector<double> local_scale_;

  Field r_, correction_, scratch_;
  std::vector<double> rs_, dus_, elem_in_, elem_out_;
};

/// 1 / (quadrature mean of nu) for each element, row-major.
std::vector<double> inverse_mean_diffusivity(const DiffusionOperator& op);

}  // namespace semmg
