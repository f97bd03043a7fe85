#include "semmg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace semmg {

LegendreValue legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p_curr = x;
  for (int k = 2; k <= n; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p_curr - (k - 1.0) * p_prev) / k;
    p_prev = p_curr;
    p_curr = p_next;
  }
  double deriv = 0.0;
  if (std::abs(x) == 1.0) {
    // P_n'(+-1) = (+-1)^(n-1) n(n+1)/2
    deriv = 0.5 * n * (n + 1.0) * ((n % 2 == 0) ? x : 1.0);
  } else {
    deriv = n * (x * p_curr - p_prev) / (x * x - 1.0);
  }
  return {p_curr, deriv};
}

namespace {

std::vector<double> gll_nodes(int p) {
  std::vector<double> x(p + 1);
  for (int i = 0; i <= p; ++i) x[i] = -std::cos(std::numbers::pi * i / p);

  // Newton on x P_p(x) - P_{p-1}(x), whose roots are the GLL points and whose
  // derivative is (p+1) P_p(x).
  for (int i = 1; i < p; ++i) {
    double xi = x[i];
    for (int it = 0; it < 100; ++it) {
      const double pp = legendre(p, xi).value;
      const double pm = legendre(p - 1, xi).value;
      const double step = (xi * pp - pm) / ((p + 1.0) * pp);
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[i] = xi;
  }
  x.front() = -1.0;
  x.back() = 1.0;
  for (int i = 0; i <= p / 2; ++i) {
    const double s = 0.5 * (x[p - i] - x[i]);
    x[i] = -s;
    x[p - i] = s;
  }
  if (p % 2 == 0) x[p / 2] = 0.0;
  return x;
}

std::vector<double> barycentric_weights(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> b(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) b[j] /= (x[j] - x[k]);
  const double scale = *std::max_element(b.begin(), b.end(), [](double a, double c) {
    return std::abs(a) < std::abs(c);
  });
  for (double& v : b) v /= std::abs(scale);
  return b;
}

}  // namespace

std::vector<double> Basis1D::lagrange_values(double x) const {
  std::vector<double> phi(nodes.size(), 0.0);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (x == nodes[j]) {
      phi[j] = 1.0;
      return phi;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    phi[j] = bary[j] / (x - nodes[j]);
    denom += phi[j];
  }
  for (double& v : phi) v /= denom;
  return phi;
}

double Basis1D::interpolate(std::span<const double> values, double x) const {
  const auto phi = lagrange_values(x);
  return dot(phi, values);
}

Basis1D gll_basis(int p) {
  if (p < 1) throw std::invalid_argument("gll_basis: order must be >= 1, got " + std::to_string(p));

  Basis1D b;
  b.p = p;
  b.nodes = gll_nodes(p);
  b.weights.resize(p + 1);
  for (int i = 0; i <= p; ++i) {
    const double lp = legendre(p, b.nodes[i]).value;
    b.weights[i] = 2.0 / (p * (p + 1.0) * lp * lp);
  }
  b.bary = barycentric_weights(b.nodes);
  b.mass = b.weights;

  const int n = p + 1;
  b.diff = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      b.diff(i, j) = (b.bary[j] / b.bary[i]) / (b.nodes[i] - b.nodes[j]);
      row += b.diff(i, j);
    }
    b.diff(i, i) = -row;
  }

  b.stiff = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += b.diff(k, i) * b.weights[k] * b.diff(k, j);
      b.stiff(i, j) = s;
      b.stiff(j, i) = s;
    }
  return b;
}

Interp1D interp_matrix(const Basis1D& from, const Basis1D& to) {
  if (from.p > to.p) throw std::invalid_argument("interp_matrix: source order exceeds target order");
  Interp1D result{from.p, to.p, Matrix(to.size(), from.size())};
  for (int i = 0; i < to.size(); ++i) {
    const auto phi = from.lagrange_values(to.nodes[i]);
    for (int j = 0; j < from.size(); ++j) result.matrix(i, j) = phi[j];
  }
  return result;
}

double overlap_width(const Basis1D& basis, int layers) {
  if (layers < 0 || layers > basis.p - 1)
    throw std::invalid_argument("overlap_width: layer count " + std::to_string(layers) +
                                " outside [0, p-1]");
  return basis.nodes[layers + 1] + 1.0;
}

}  // namespace semmg
