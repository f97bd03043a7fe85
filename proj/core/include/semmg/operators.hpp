#pragma once

#include <functional>
#include <span>
#include <vector>

#include "semmg/basis.hpp"
#include "semmg/mesh.hpp"

namespace semmg {

/// Matrix-free global operator assembled from identical-shape element kernels.
/// Implementations are immutable; apply() is safe to call concurrently with
/// distinct output fields.
class Operator {
 public:
  virtual ~Operator() = default;

  [[nodiscard]] virtual const FieldLayout& layout() const = 0;

  /// out = A_e * in on the (p+1)^2 local block of element (ex, ey).
  virtual void apply_element(int ex, int ey, std::span<const double> in,
                             std::span<double> out) const = 0;

  /// out = A u. Elements are processed in row-major element order.
  void apply(const Field& u, Field& out) const;
  [[nodiscard]] Field apply(const Field& u) const;
};

/// f - A u
Field residual(const Operator& op, const Field& u, const Field& f);
void residual(const Operator& op, const Field& u, const Field& f, Field& r);

/// Constant-coefficient Laplacian A = M_y (x) L_x + L_y (x) M_x.
class PoissonOperator final : public Operator {
 public:
  PoissonOperator(Basis1D basis, const MeshConfig& mesh);

  [[nodiscard]] const FieldLayout& layout() const override { return layout_; }
  void apply_element(int ex, int ey, std::span<const double> in,
                     std::span<double> out) const override;

  [[nodiscard]] const Basis1D& basis() const { return basis_; }
  [[nodiscard]] const MeshConfig& mesh() const { return mesh_; }

 private:
  Basis1D basis_;
  MeshConfig mesh_;
  FieldLayout layout_;
  double ratio_yx_;  // dy/dx
  double ratio_xy_;  // dx/dy
};

/// Variable-coefficient operator for -div(nu grad u) with GLL collocation of nu.
class DiffusionOperator final : public Operator {
 public:
  /// nu must be strictly positive at every node; throws std::invalid_argument otherwise.
  DiffusionOperator(Basis1D basis, const MeshConfig& mesh, Field nu);

  [[nodiscard]] const FieldLayout& layout() const override { return layout_; }
  void apply_element(int ex, int ey, std::span<const double> in,
                     std::span<double> out) const override;

  [[nodiscard]] const Basis1D& basis() const { return basis_; }
  [[nodiscard]] const MeshConfig& mesh() const { return mesh_; }
  [[nodiscard]] const Field& nu() const { return nu_; }

  /// Quadrature mean of nu over element (ex, ey): sum nu_ij rho_i rho_j / 4.
  [[nodiscard]] double element_mean_nu(int ex, int ey) const;

 private:
  Basis1D basis_;
  MeshConfig mesh_;
  FieldLayout layout_;
  Field nu_;
  std::vector<double> coeff_;  // per element: nu_ij * rho_i * rho_j
  double ratio_yx_;
  double ratio_xy_;
};

using ScalarFunction = std::function<double(double, double)>;

/// A smooth exact solution with its Laplacian, for manufactured right-hand sides.
struct AnalyticSolution {
  ScalarFunction value;
  ScalarFunction laplacian;
};

/// u = sin(k x) sin(k y)
AnalyticSolution sine_product(double wavenumber);

/// Samples fn at every global GLL node.
Field sample_field(const FieldLayout& layout, const MeshConfig& mesh, const Basis1D& basis,
                   const ScalarFunction& fn);

/// Galerkin load with GLL quadrature: sum_e R_e^T (J rho_i rho_j g(x_ij)).
Field weighted_load(const MeshConfig& mesh, const Basis1D& basis, const ScalarFunction& g);

/// Load vector for -lap u = f with f from the exact solution, mean removed.
Field manufactured_rhs_poisson(const MeshConfig& mesh, const Basis1D& basis,
                               const AnalyticSolution& exact);

/// nu(x, y) = 1 + amplitude sin(2 pi (x - s)) sin(2 pi (y - s))
struct Diffusivity {
  double amplitude = 0.0;
  double shift = 0.2;

  double operator()(double x, double y) const;
  [[nodiscard]] double dx(double x, double y) const;
  [[nodiscard]] double dy(double x, double y) const;
};

struct DiffusionProblem {
  Field f;
  Field nu;
};

/// Right-hand side for -div(nu grad u) = f with u = sin(2 pi x) sin(2 pi y) and
/// f = -(nu lap u + grad nu . grad u), plus nu sampled at the nodes.
/// Requires 0 <= amplitude < 1.
DiffusionProblem manufactured_rhs_diffusion(const MeshConfig& mesh, const Basis1D& basis,
                                            const Diffusivity& nu);

/// max |u - u_exact - c| over the nodes, with c the mean offset of u - u_exact.
double max_nodal_error(const Field& u, const MeshConfig& mesh, const Basis1D& basis,
                       const ScalarFunction& exact);

}  // namespace semmg
