#pragma once

#include <span>
#include <vector>

#include "semmg/linalg.hpp"

namespace semmg {

/// Lagrange basis on the Gauss-Lobatto-Legendre points of [-1, 1] together with
/// the 1D operators of the standard element. Immutable after construction.
struct Basis1D {
  int p = 0;
  std::vector<double> nodes;       ///< ascending, nodes.front() == -1, nodes.back() == 1
  std::vector<double> weights;     ///< GLL quadrature weights, sum to 2
  std::vector<double> bary;        ///< barycentric weights of the nodes
  Matrix diff;                     ///< diff(i, j) = d phi_j / d xi at node i
  std::vector<double> mass;        ///< diagonal of the lumped (GLL) mass matrix
  Matrix stiff;                    ///< diff^T diag(weights) diff

  [[nodiscard]] int size() const { return p + 1; }

  /// Values of all p+1 Lagrange polynomials at x (barycentric second form).
  [[nodiscard]] std::vector<double> lagrange_values(double x) const;

  /// Interpolant through `values` at the nodes, evaluated at x.
  [[nodiscard]] double interpolate(std::span<const double> values, double x) const;
};

/// Legendre polynomial P_n and its derivative at x, by three-term recurrence.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int n, double x);

/// Builds the GLL basis of order p >= 1. Nodes by Newton iteration started
/// from Chebyshev-Gauss-Lobatto points. Throws std::invalid_argument for p < 1.
Basis1D gll_basis(int p);

/// Evaluation of the `from` basis at the nodes of `to`.
struct Interp1D {
  int p_from = 0;
  int p_to = 0;
  Matrix matrix;  ///< (p_to+1) x (p_from+1)
};

/// Requires from.p <= to.p.
Interp1D interp_matrix(const Basis1D& from, const Basis1D& to);

/// Nondimensional width of a subdomain strip that adopts `layers` node layers
/// from each neighbour: nodes[layers + 1] + 1. Requires 0 <= layers <= p-1.
double overlap_width(const Basis1D& basis, int layers);

}  // namespace semmg
