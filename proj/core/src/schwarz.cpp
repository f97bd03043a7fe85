#include "semmg/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semmg {

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::arithmetic: return "wa";
    case WeightKind::linear: return "w1";
    case WeightKind::cubic: return "w3";
    case WeightKind::quintic: return "w5";
    case WeightKind::seventh: return "w7";
    case WeightKind::tophat: return "wt";
  }
  return "?";
}

WeightKind parse_weight_kind(std::string_view name) {
  if (name == "wa") return WeightKind::arithmetic;
  if (name == "w1") return WeightKind::linear;
  if (name == "w3") return WeightKind::cubic;
  if (name == "w5") return WeightKind::quintic;
  if (name == "w7") return WeightKind::seventh;
  if (name == "wt") return WeightKind::tophat;
  throw std::invalid_argument("unknown weight kind '" + std::string(name) + "'");
}

namespace {
double sign(double x) { return (x > 0.0) - (x < 0.0); }
}  // namespace

double shape_function(WeightKind kind, double x) {
  if (std::abs(x) >= 1.0) return sign(x);
  const double x2 = x * x;
  switch (kind) {
    case WeightKind::arithmetic: return 0.0;
    case WeightKind::linear: return x;
    case WeightKind::cubic: return 0.5 * x * (3.0 - x2);
    case WeightKind::quintic: return 0.125 * x * (15.0 + x2 * (-10.0 + 3.0 * x2));
    case WeightKind::seventh: return 0.0625 * x * (35.0 + x2 * (-35.0 + x2 * (21.0 - 5.0 * x2)));
    case WeightKind::tophat: return sign(x);
  }
  return 0.0;
}

double weight_value(WeightKind kind, double xi, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("weight_value: delta must be positive");
  return 0.5 * (shape_function(kind, (xi + 1.0) / delta) - shape_function(kind, (xi - 1.0) / delta));
}

SubdomainGeometry subdomain_geometry(const Basis1D& basis, int overlap) {
  SubdomainGeometry g;
  g.p = basis.p;
  g.overlap = overlap;
  g.delta = overlap_width(basis, overlap);  // validates the range
  const int p = basis.p;
  g.coordinates.reserve(g.extent());
  for (int k = -overlap; k <= p + overlap; ++k) {
    if (k < 0)
      g.coordinates.push_back(basis.nodes[p + k] - 2.0);
    else if (k > p)
      g.coordinates.push_back(basis.nodes[k - p] + 2.0);
    else
      g.coordinates.push_back(basis.nodes[k]);
  }
  return g;
}

Restricted1D restricted_1d(const Basis1D& basis, double h, int overlap, int ring) {
  const int p = basis.p;
  if (overlap < 0 || overlap > p - 1)
    throw std::invalid_argument("restricted_1d: overlap outside [0, p-1]");
  if (ring < 2) throw std::invalid_argument("restricted_1d: ring needs at least two elements");
  const int m = p + 1 + 2 * overlap;
  const int n_ring = ring * p;
  if (m > n_ring) throw std::invalid_argument("restricted_1d: subdomain wraps onto itself");

  Matrix stiff_ring(n_ring, n_ring);
  std::vector<double> mass_ring(n_ring, 0.0);
  for (int e = 0; e < ring; ++e)
    for (int i = 0; i <= p; ++i) {
      const int gi = (e * p + i) % n_ring;
      mass_ring[gi] += 0.5 * h * basis.weights[i];
      for (int j = 0; j <= p; ++j) stiff_ring(gi, (e * p + j) % n_ring) += (2.0 / h) * basis.stiff(i, j);
    }

  // owner element is element 1 of the ring
  std::vector<int> index(m);
  for (int k = 0; k < m; ++k) index[k] = FieldLayout::wrap(p + k - overlap, n_ring);

  Restricted1D r{Matrix(m, m), std::vector<double>(m)};
  for (int a = 0; a < m; ++a) {
    r.mass[a] = mass_ring[index[a]];
    for (int b = 0; b < m; ++b) r.stiff(a, b) = stiff_ring(index[a], index[b]);
  }
  return r;
}

std::vector<double> weights_1d(WeightKind kind, const SubdomainGeometry& geometry) {
  std::vector<double> w;
  w.reserve(geometry.coordinates.size());
  for (double xi : geometry.coordinates) w.push_back(weight_value(kind, xi, geometry.delta));
  return w;
}

std::vector<double> build_weight_tensor(WeightKind kind, const SubdomainGeometry& geometry) {
  const auto w = weights_1d(kind, geometry);
  const std::size_t m = w.size();
  std::vector<double> tensor(m * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) tensor[j * m + i] = w[j] * w[i];
  return tensor;
}

namespace {

struct GeneralizedEigen {
  Matrix vectors;  // M-orthonormal columns
  std::vector<double> values;
};

GeneralizedEigen generalized_eigen(const Restricted1D& r) {
  const std::size_t m = r.mass.size();
  std::vector<double> inv_sqrt(m);
  for (std::size_t i = 0; i < m; ++i) inv_sqrt[i] = 1.0 / std::sqrt(r.mass[i]);
  Matrix reduced(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) reduced(i, j) = inv_sqrt[i] * r.stiff(i, j) * inv_sqrt[j];
  auto eig = jacobi_eigen(reduced);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) eig.vectors(i, k) *= inv_sqrt[i];
  for (double lambda : eig.values)
    if (!(lambda > 0.0))
      throw std::runtime_error("FastDiagSolver: restricted operator is not positive definite");
  return {std::move(eig.vectors), std::move(eig.values)};
}

}  // namespace

FastDiagSolver FastDiagSolver::build(const Basis1D& basis, double dx, double dy, int overlap,
                                     std::optional<WeightKind> kind, int ring_x, int ring_y) {
  FastDiagSolver s;
  s.geometry_ = subdomain_geometry(basis, overlap);
  s.extent_ = s.geometry_.extent();
  s.rx_ = restricted_1d(basis, dx, overlap, ring_x);
  s.ry_ = restricted_1d(basis, dy, overlap, ring_y);
  auto ex = generalized_eigen(s.rx_);
  auto ey = generalized_eigen(s.ry_);
  s.sx_ = std::move(ex.vectors);
  s.sy_ = std::move(ey.vectors);
  s.sx_t_ = s.sx_.transposed();
  s.sy_t_ = s.sy_.transposed();
  s.lambda_x_ = std::move(ex.values);
  s.lambda_y_ = std::move(ey.values);
  if (kind) s.weights_ = build_weight_tensor(*kind, s.geometry_);
  return s;
}

void FastDiagSolver::solve(std::span<const double> r, std::span<double> out) const {
  const int m = extent_;
  thread_local std::vector<double> t1;
  thread_local std::vector<double> t2;
  t1.assign(static_cast<std::size_t>(m) * m, 0.0);
  t2.assign(static_cast<std::size_t>(m) * m, 0.0);

  // t1 = r (S_x) along x: t1[j][a] = sum_i r[j][i] Sx(i, a)
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double rji = r[j * m + i];
      for (int a = 0; a < m; ++a) t1[j * m + a] += rji * sx_(i, a);
    }
  // t2[b][a] = sum_j Sy(j, b) t1[j][a], scaled by the inverse eigenvalue sum
  for (int j = 0; j < m; ++j)
    for (int b = 0; b < m; ++b) {
      const double syjb = sy_(j, b);
      for (int a = 0; a < m; ++a) t2[b * m + a] += syjb * t1[j * m + a];
    }
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a) t2[b * m + a] /= (lambda_x_[a] + lambda_y_[b]);
  // back-transform: t1[j][a] = sum_b Sy(j, b) t2[b][a]; out[j][i] = sum_a t1[j][a] Sx(i, a)
  std::fill(t1.begin(), t1.end(), 0.0);
  for (int b = 0; b < m; ++b)
    for (int j = 0; j < m; ++j) {
      const double syjb = sy_t_(b, j);
      for (int a = 0; a < m; ++a) t1[j * m + a] += syjb * t2[b * m + a];
    }
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int a = 0; a < m; ++a) s += t1[j * m + a] * sx_t_(a, i);
      out[j * m + i] = s;
    }
}

SchwarzSmoother::SchwarzSmoother(const Operator& op, const MeshConfig& mesh, const Basis1D& basis,
                                 int overlap, SmootherConfig config,
                                 std::vector<double> local_scale)
    : op_(op),
      mesh_(mesh),
      layout_(op.layout()),
      overlap_(overlap),
      config_(config),
      local_scale_(std::move(local_scale)) {
  if (layout_.p != basis.p || layout_.nx != mesh.nx || layout_.ny != mesh.ny)
    throw std::invalid_argument("SchwarzSmoother: operator, mesh and basis disagree");
  const int m = basis.p + 1 + 2 * overlap;
  if (m > layout_.Nx() || m > layout_.Ny())
    throw std::invalid_argument("SchwarzSmoother: subdomain wraps onto itself on this mesh");
  if (!local_scale_.empty() && local_scale_.size() != static_cast<std::size_t>(mesh.num_elements()))
    throw std::invalid_argument("SchwarzSmoother: local scale needs one entry per element");

  const std::optional<WeightKind> kind =
      config.kind == SmootherKind::additive ? std::optional(config.weight) : std::nullopt;
  solver_ = FastDiagSolver::build(basis, mesh.dx(), mesh.dy(), overlap, kind, std::min(mesh.nx, 3),
                                  std::min(mesh.ny, 3));

  r_ = Field(layout_);
  correction_ = Field(layout_);
  scratch_ = Field(layout_);
  rs_.resize(static_cast<std::size_t>(m) * m);
  dus_.resize(rs_.size());
  elem_in_.resize(static_cast<std::size_t>(basis.p + 1) * (basis.p + 1));
  elem_out_.resize(elem_in_.size());
}

void SchwarzSmoother::smooth(Field& u, const Field& f, int iterations) {
  if (iterations <= 0) return;
  if (config_.kind == SmootherKind::additive)
    additive_sweep(u, f, iterations);
  else
    multiplicative_sweep(u, f, iterations);
}

void SchwarzSmoother::gather_subdomain(const Field& v, int ex, int ey, std::span<double> block) const {
  const int m = extent();
  for (int j = 0; j < m; ++j) {
    const int gy = layout_.global_y(ey, j - overlap_);
    for (int i = 0; i < m; ++i) block[j * m + i] = v(layout_.global_x(ex, i - overlap_), gy);
  }
}

void SchwarzSmoother::scatter_add_subdomain(Field& v, int ex, int ey,
                                            std::span<const double> block) const {
  const int m = extent();
  for (int j = 0; j < m; ++j) {
    const int gy = layout_.global_y(ey, j - overlap_);
    for (int i = 0; i < m; ++i) v(layout_.global_x(ex, i - overlap_), gy) += block[j * m + i];
  }
}

void SchwarzSmoother::local_correction(int ex, int ey, std::span<const double> r_s,
                                       std::span<double> du_s) const {
  solver_.solve(r_s, du_s);
  double scale = 1.0;
  if (!local_scale_.empty()) scale = local_scale_[static_cast<std::size_t>(ey) * mesh_.nx + ex];
  const auto& w = solver_.weights();
  if (config_.kind == SmootherKind::additive && !w.empty()) {
    for (std::size_t k = 0; k < du_s.size(); ++k) du_s[k] *= scale * w[k];
  } else if (scale != 1.0) {
    for (double& v : du_s) v *= scale;
  }
}

void SchwarzSmoother::additive_sweep(Field& u, const Field& f, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    residual(op_, u, f, r_);
    correction_.fill(0.0);
    for (int ey = 0; ey < mesh_.ny; ++ey)
      for (int ex = 0; ex < mesh_.nx; ++ex) {
        gather_subdomain(r_, ex, ey, rs_);
        local_correction(ex, ey, rs_, dus_);
        scatter_add_subdomain(correction_, ex, ey, dus_);
      }
    u += correction_;
  }
}

void SchwarzSmoother::update_residual_locally(int ex, int ey, std::span<const double> du_s, Field& r) {
  scatter_add_subdomain(scratch_, ex, ey, du_s);

  int xs[3], ys[3];
  int nxs = 0, nys = 0;
  for (int d = -1; d <= 1; ++d) {
    const int cx = FieldLayout::wrap(ex + d, mesh_.nx);
    if (std::find(xs, xs + nxs, cx) == xs + nxs) xs[nxs++] = cx;
    const int cy = FieldLayout::wrap(ey + d, mesh_.ny);
    if (std::find(ys, ys + nys, cy) == ys + nys) ys[nys++] = cy;
  }
  for (int b = 0; b < nys; ++b)
    for (int a = 0; a < nxs; ++a) {
      gather_element(scratch_, xs[a], ys[b], elem_in_);
      op_.apply_element(xs[a], ys[b], elem_in_, elem_out_);
      for (double& v : elem_out_) v = -v;
      scatter_add_element(r, xs[a], ys[b], elem_out_);
    }

  // clear the scratch entries touched by this subdomain
  const int m = extent();
  for (int j = 0; j < m; ++j) {
    const int gy = layout_.global_y(ey, j - overlap_);
    for (int i = 0; i < m; ++i) scratch_(layout_.global_x(ex, i - overlap_), gy) = 0.0;
  }
}

void SchwarzSmoother::multiplicative_sweep(Field& u, const Field& f, int iterations) {
  if (iterations <= 0) return;
  residual(op_, u, f, r_);
  const int n_el = mesh_.num_elements();
  for (int it = 1; it <= iterations; ++it) {
    for (int e = 0; e < n_el; ++e) {
      const int s = (it % 2 == 1) ? e : n_el - 1 - e;
      const int ex = s % mesh_.nx;
      const int ey = s / mesh_.nx;
      gather_subdomain(r_, ex, ey, rs_);
      local_correction(ex, ey, rs_, dus_);
      scatter_add_subdomain(u, ex, ey, dus_);
      update_residual_locally(ex, ey, dus_, r_);
    }
  }
}

std::vector<double> inverse_mean_diffusivity(const DiffusionOperator& op) {
  const auto& lay = op.layout();
  std::vector<double> scale(static_cast<std::size_t>(lay.nx) * lay.ny);
  for (int ey = 0; ey < lay.ny; ++ey)
    for (int ex = 0; ex < lay.nx; ++ex)
      scale[static_cast<std::size_t>(ey) * lay.nx + ex] = 1.0 / op.element_mean_nu(ex, ey);
  return scale;
}

}  // namespace semmg
