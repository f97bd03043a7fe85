#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "semmg/basis.hpp"
#include "semmg/linalg.hpp"

using semmg::gll_basis;

namespace {
std::vector<int> orders() {
  std::vector<int> ps;
  for (int p = 1; p <= 32; ++p) ps.push_back(p);
  return ps;
}
}  // namespace

TEST_CASE("low-order nodes and weights") {
  const auto b1 = gll_basis(1);
  CHECK(b1.nodes == std::vector<double>{-1.0, 1.0});
  CHECK(b1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b1.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  const auto b2 = gll_basis(2);
  CHECK(std::abs(b2.nodes[1]) < 1e-16);
  CHECK(std::abs(b2.weights[0] - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(b2.weights[1] - 4.0 / 3.0) < 1e-15);
  CHECK(std::abs(b2.weights[2] - 1.0 / 3.0) < 1e-15);

  const auto b3 = gll_basis(3);
  CHECK(std::abs(b3.nodes[1] + 1.0 / std::sqrt(5.0)) < 1e-15);
  CHECK(std::abs(b3.nodes[2] - 1.0 / std::sqrt(5.0)) < 1e-15);
}

TEST_CASE("nodes agree with bisection on (1 - x^2) P'_p") {
  for (int p : {3, 5, 8, 16, 24, 32}) {
    const auto b = gll_basis(p);
    const auto ref = oracle::gll_nodes_bisection(p);
    REQUIRE(ref.size() == b.nodes.size());
    for (int i = 0; i <= p; ++i) CHECK(std::abs(ref[i] - b.nodes[i]) < 1e-13);
  }
}

TEST_CASE("structural invariants") {
  for (int p : orders()) {
    CAPTURE(p);
    const auto b = gll_basis(p);
    CHECK(b.nodes.front() == -1.0);
    CHECK(b.nodes.back() == 1.0);
    for (int i = 0; i <= p; ++i) CHECK(b.nodes[i] == -b.nodes[p - i]);
    CHECK(std::abs(std::accumulate(b.weights.begin(), b.weights.end(), 0.0) - 2.0) < 1e-13);
    for (int i = 0; i <= p; ++i) {
      double row = 0.0;
      for (int j = 0; j <= p; ++j) row += b.diff(i, j);
      CHECK(std::abs(row) < 1e-10 * p * p);
    }
    const auto L = oracle::reference_stiffness(b);
    const double scale = p * p;
    for (int i = 0; i <= p; ++i) {
      double row = 0.0;
      for (int j = 0; j <= p; ++j) {
        CHECK(b.stiff(i, j) == b.stiff(j, i));
        CHECK(std::abs(b.stiff(i, j) - L[i * (p + 1) + j]) < 1e-12 * scale);
        row += b.stiff(i, j);
      }
      CHECK(std::abs(row) < 1e-10 * scale);
    }
  }
}

TEST_CASE("stiffness is positive semidefinite") {
  for (int p : {1, 2, 4, 8, 12}) {
    const auto eig = semmg::jacobi_eigen(gll_basis(p).stiff);
    CHECK(eig.values.front() >= -1e-12);
    CHECK(eig.values[1] > 1e-6);
  }
}

TEST_CASE("quadrature exactness up to degree 2p-1") {
  for (int p : orders()) {
    const auto b = gll_basis(p);
    for (int k = 0; k <= 2 * p - 1; ++k) {
      double q = 0.0;
      for (int i = 0; i <= p; ++i) q += b.weights[i] * std::pow(b.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(q - exact) < 1e-12 * std::max(1.0, exact));
    }
  }
}

TEST_CASE("derivative matrix is exact on monomials up to degree p") {
  for (int p : orders()) {
    const auto b = gll_basis(p);
    for (int k = 0; k <= p; ++k) {
      double err = 0.0;
      for (int i = 0; i <= p; ++i) {
        double d = 0.0;
        for (int j = 0; j <= p; ++j) d += b.diff(i, j) * std::pow(b.nodes[j], k);
        const double exact = k == 0 ? 0.0 : k * std::pow(b.nodes[i], k - 1);
        err = std::max(err, std::abs(d - exact));
      }
      CAPTURE(p);
      CAPTURE(k);
      CHECK(err < 1e-11 * std::max(1, k));
    }
  }
}

TEST_CASE("Lagrange evaluation matches the product formula") {
  const auto b = gll_basis(7);
  for (double x : {-0.93, -0.2, 0.0, 0.31, 0.999}) {
    const auto v = b.lagrange_values(x);
    for (int j = 0; j <= 7; ++j) CHECK(std::abs(v[j] - oracle::lagrange(b.nodes, j, x)) < 1e-13);
  }
  const auto at_node = b.lagrange_values(b.nodes[3]);
  for (int j = 0; j <= 7; ++j) CHECK(at_node[j] == (j == 3 ? 1.0 : 0.0));
}

TEST_CASE("interpolation matrices") {
  const auto b1 = gll_basis(1);
  const auto b2 = gll_basis(2);
  const auto b4 = gll_basis(4);
  const auto same = semmg::interp_matrix(b4, b4);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) CHECK(std::abs(same.matrix(i, j) - (i == j)) < 1e-15);

  const auto J12 = semmg::interp_matrix(b1, b2);
  const double expect[3][2] = {{1, 0}, {0.5, 0.5}, {0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(J12.matrix(i, j) - expect[i][j]) < 1e-15);

  const auto J24 = semmg::interp_matrix(b2, b4);
  for (int i = 0; i <= 4; ++i) {
    double v = 0.0;
    for (int j = 0; j <= 2; ++j) v += J24.matrix(i, j) * b2.nodes[j] * b2.nodes[j];
    CHECK(std::abs(v - b4.nodes[i] * b4.nodes[i]) < 1e-14);
  }

  for (auto [pf, pt] : {std::pair{2, 4}, {4, 8}, {8, 16}, {16, 32}}) {
    const auto from = gll_basis(pf);
    const auto to = gll_basis(pt);
    const auto J = semmg::interp_matrix(from, to);
    for (int i = 0; i <= pt; ++i) {
      double row = 0.0;
      double poly = 0.0;
      for (int j = 0; j <= pf; ++j) {
        row += J.matrix(i, j);
        poly += J.matrix(i, j) * std::pow(from.nodes[j], pf);
      }
      CHECK(std::abs(row - 1.0) < 1e-13);
      CHECK(std::abs(poly - std::pow(to.nodes[i], pf)) < 1e-13);
    }
  }
  CHECK_THROWS_AS(semmg::interp_matrix(b4, b2), std::invalid_argument);
}

TEST_CASE("overlap width") {
  CHECK(semmg::overlap_width(gll_basis(2), 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(semmg::overlap_width(gll_basis(1), 0) == doctest::Approx(2.0).epsilon(1e-15));
  const auto ref = oracle::gll_nodes_bisection(8);
  CHECK(std::abs(semmg::overlap_width(gll_basis(8), 1) - (ref[2] + 1.0)) < 1e-13);
  CHECK(std::abs(semmg::overlap_width(gll_basis(8), 1) - 0.3228) < 1e-4);
  CHECK_THROWS_AS(semmg::overlap_width(gll_basis(4), 4), std::invalid_argument);
  CHECK_THROWS_AS(semmg::overlap_width(gll_basis(4), -1), std::invalid_argument);
}

TEST_CASE("invalid order") {
  CHECK_THROWS_AS(gll_basis(0), std::invalid_argument);
}
