#include "semmg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semmg {

void Operator::apply(const Field& u, Field& out) const {
  const auto& lay = layout();
  if (!(u.layout() == lay)) throw std::invalid_argument("Operator::apply: layout mismatch");
  if (!(out.layout() == lay)) out = Field(lay);
  out.fill(0.0);
  const std::size_t n = static_cast<std::size_t>(lay.p + 1) * (lay.p + 1);
  std::vector<double> in_block(n);
  std::vector<double> out_block(n);
  for (int ey = 0; ey < lay.ny; ++ey)
    for (int ex = 0; ex < lay.nx; ++ex) {
      gather_element(u, ex, ey, in_block);
      apply_element(ex, ey, in_block, out_block);
      scatter_add_element(out, ex, ey, out_block);
    }
}

Field Operator::apply(const Field& u) const {
  Field out(layout());
  apply(u, out);
  return out;
}

void residual(const Operator& op, const Field& u, const Field& f, Field& r) {
  if (!(f.layout() == op.layout())) throw std::invalid_argument("residual: layout mismatch");
  op.apply(u, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - r[i];
}

Field residual(const Operator& op, const Field& u, const Field& f) {
  Field r(op.layout());
  residual(op, u, f, r);
  return r;
}

PoissonOperator::PoissonOperator(Basis1D basis, const MeshConfig& mesh)
    : basis_(std::move(basis)),
      mesh_(mesh),
      layout_{basis_.p, mesh.nx, mesh.ny},
      ratio_yx_(mesh.dy() / mesh.dx()),
      ratio_xy_(mesh.dx() / mesh.dy()) {}

void PoissonOperator::apply_element(int, int, std::span<const double> in,
                                    std::span<double> out) const {
  // (dy/2) rho_j (2/dx) L^_ik u_jk + (dx/2) rho_i (2/dy) L^_jk u_ki
  const int n = basis_.size();
  const auto& L = basis_.stiff;
  const auto& rho = basis_.weights;
  for (int j = 0; j < n; ++j) {
    const double* row = &in[j * n];
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += L(i, k) * row[k];
      out[j * n + i] = ratio_yx_ * rho[j] * s;
    }
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += L(j, k) * in[k * n + i];
      out[j * n + i] += ratio_xy_ * rho[i] * s;
    }
}

DiffusionOperator::DiffusionOperator(Basis1D basis, const MeshConfig& mesh, Field nu)
    : basis_(std::move(basis)),
      mesh_(mesh),
      layout_{basis_.p, mesh.nx, mesh.ny},
      nu_(std::move(nu)),
      ratio_yx_(mesh.dy() / mesh.dx()),
      ratio_xy_(mesh.dx() / mesh.dy()) {
  if (!(nu_.layout() == layout_)) throw std::invalid_argument("DiffusionOperator: nu layout mismatch");
  for (double v : nu_.values())
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("DiffusionOperator: diffusivity must be positive and finite");

  const int n = basis_.size();
  const std::size_t block = static_cast<std::size_t>(n) * n;
  coeff_.resize(block * layout_.nx * layout_.ny);
  std::vector<double> nu_block(block);
  for (int ey = 0; ey < layout_.ny; ++ey)
    for (int ex = 0; ex < layout_.nx; ++ex) {
      gather_element(nu_, ex, ey, nu_block);
      double* c = &coeff_[(static_cast<std::size_t>(ey) * layout_.nx + ex) * block];
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          c[j * n + i] = nu_block[j * n + i] * basis_.weights[i] * basis_.weights[j];
    }
}

void DiffusionOperator::apply_element(int ex, int ey, std::span<const double> in,
                                      std::span<double> out) const {
  const int n = basis_.size();
  const std::size_t block = static_cast<std::size_t>(n) * n;
  const double* c = &coeff_[(static_cast<std::size_t>(ey) * layout_.nx + ex) * block];
  const auto& D = basis_.diff;

  thread_local std::vector<double> gx;
  thread_local std::vector<double> gy;
  gx.resize(block);
  gy.resize(block);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double sx = 0.0;
      for (int k = 0; k < n; ++k) sx += D(i, k) * in[j * n + k];
      gx[j * n + i] = c[j * n + i] * sx;
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double sy = 0.0;
      for (int k = 0; k < n; ++k) sy += D(j, k) * in[k * n + i];
      gy[j * n + i] = c[j * n + i] * sy;
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double sx = 0.0;
      double sy = 0.0;
      for (int k = 0; k < n; ++k) {
        sx += D(k, i) * gx[j * n + k];
        sy += D(k, j) * gy[k * n + i];
      }
      out[j * n + i] = ratio_yx_ * sx + ratio_xy_ * sy;
    }
}

double DiffusionOperator::element_mean_nu(int ex, int ey) const {
  const int n = basis_.size();
  const std::size_t block = static_cast<std::size_t>(n) * n;
  const double* c = &coeff_[(static_cast<std::size_t>(ey) * layout_.nx + ex) * block];
  double s = 0.0;
  for (std::size_t k = 0; k < block; ++k) s += c[k];
  return 0.25 * s;
}

AnalyticSolution sine_product(double k) {
  return {
      [k](double x, double y) { return std::sin(k * x) * std::sin(k * y); },
      [k](double x, double y) { return -2.0 * k * k * std::sin(k * x) * std::sin(k * y); },
  };
}

Field sample_field(const FieldLayout& layout, const MeshConfig& mesh, const Basis1D& basis,
                   const ScalarFunction& fn) {
  const auto xs = node_coordinates_x(layout, mesh, basis.nodes);
  const auto ys = node_coordinates_y(layout, mesh, basis.nodes);
  Field f(layout);
  for (int iy = 0; iy < layout.Ny(); ++iy)
    for (int ix = 0; ix < layout.Nx(); ++ix) f(ix, iy) = fn(xs[ix], ys[iy]);
  return f;
}

Field weighted_load(const MeshConfig& mesh, const Basis1D& basis, const ScalarFunction& g) {
  const FieldLayout layout{basis.p, mesh.nx, mesh.ny};
  Field load(layout);
  const int n = basis.size();
  const double jac = 0.25 * mesh.dx() * mesh.dy();
  std::vector<double> block(static_cast<std::size_t>(n) * n);
  for (int ey = 0; ey < mesh.ny; ++ey)
    for (int ex = 0; ex < mesh.nx; ++ex) {
      for (int j = 0; j < n; ++j) {
        const double y = (ey + 0.5 * (basis.nodes[j] + 1.0)) * mesh.dy();
        for (int i = 0; i < n; ++i) {
          const double x = (ex + 0.5 * (basis.nodes[i] + 1.0)) * mesh.dx();
          block[j * n + i] = jac * basis.weights[i] * basis.weights[j] * g(x, y);
        }
      }
      scatter_add_element(load, ex, ey, block);
    }
  return load;
}

Field manufactured_rhs_poisson(const MeshConfig& mesh, const Basis1D& basis,
                               const AnalyticSolution& exact) {
  Field f = weighted_load(mesh, basis, [&](double x, double y) { return -exact.laplacian(x, y); });
  f.remove_mean();
  return f;
}

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double Diffusivity::operator()(double x, double y) const {
  return 1.0 + amplitude * std::sin(two_pi * (x - shift)) * std::sin(two_pi * (y - shift));
}

double Diffusivity::dx(double x, double y) const {
  return amplitude * two_pi * std::cos(two_pi * (x - shift)) * std::sin(two_pi * (y - shift));
}

double Diffusivity::dy(double x, double y) const {
  return amplitude * two_pi * std::sin(two_pi * (x - shift)) * std::cos(two_pi * (y - shift));
}

DiffusionProblem manufactured_rhs_diffusion(const MeshConfig& mesh, const Basis1D& basis,
                                            const Diffusivity& nu) {
  if (!(nu.amplitude >= 0.0 && nu.amplitude < 1.0))
    throw std::invalid_argument("manufactured_rhs_diffusion: amplitude must lie in [0, 1)");
  const auto source = [&nu](double x, double y) {
    const double sx = std::sin(two_pi * x), cx = std::cos(two_pi * x);
    const double sy = std::sin(two_pi * y), cy = std::cos(two_pi * y);
    const double lap = -2.0 * two_pi * two_pi * sx * sy;
    const double ux = two_pi * cx * sy;
    const double uy = two_pi * sx * cy;
    return -(nu(x, y) * lap + nu.dx(x, y) * ux + nu.dy(x, y) * uy);
  };
  DiffusionProblem prob;
  prob.f = weighted_load(mesh, basis, source);
  prob.f.remove_mean();
  prob.nu = sample_field(FieldLayout{basis.p, mesh.nx, mesh.ny}, mesh, basis, nu);
  return prob;
}

double max_nodal_error(const Field& u, const MeshConfig& mesh, const Basis1D& basis,
                       const ScalarFunction& exact) {
  Field diff = u;
  diff -= sample_field(u.layout(), mesh, basis, exact);
  diff.remove_mean();
  double e = 0.0;
  for (double v : diff.values()) e = std::max(e, std::abs(v));
  return e;
}

}  // namespace semmg
