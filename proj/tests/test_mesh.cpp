#include <doctest.h>

#include "oracles.hpp"
#include "semmg/mesh.hpp"

using semmg::Field;
using semmg::FieldLayout;

TEST_CASE("mesh configuration") {
  const auto m = semmg::MeshConfig::make(4, 2, 8.0, 2.0);
  CHECK(m.dx() == 2.0);
  CHECK(m.dy() == 1.0);
  CHECK(m.aspect_ratio() == 2.0);
  CHECK(m.num_elements() == 8);
  CHECK_THROWS_AS(semmg::MeshConfig::make(1, 2, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(semmg::MeshConfig::make(2, 2, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("node count is p^2 n_el") {
  for (int p : {1, 2, 4, 8})
    for (auto [nx, ny] : {std::pair{2, 2}, {3, 5}}) {
      const FieldLayout lay{p, nx, ny};
      CHECK(lay.size() == static_cast<std::size_t>(p * p * nx * ny));
    }
}

TEST_CASE("gather") {
  const FieldLayout lay{3, 3, 2};
  const Field c(lay, 2.5);
  for (double v : semmg::gather_element(c, 1, 1)) CHECK(v == 2.5);

  const FieldLayout lay1{1, 2, 2};
  Field g(lay1);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = static_cast<double>(k);
  const auto block = semmg::gather_element(g, 1, 1);
  CHECK(block[3] == g(0, 0));

  Field xi(lay);
  for (int iy = 0; iy < lay.Ny(); ++iy)
    for (int ix = 0; ix < lay.Nx(); ++ix) xi(ix, iy) = ix;
  for (int ex = 0; ex < 3; ++ex) {
    const auto b = semmg::gather_element(xi, ex, 1);
    for (int j = 0; j <= 3; ++j)
      for (int i = 0; i <= 3; ++i) CHECK(b[j * 4 + i] == (ex * 3 + i) % lay.Nx());
  }
  CHECK_THROWS_AS(semmg::gather_element(c, 3, 0), std::out_of_range);
  CHECK_THROWS_AS(semmg::gather_element(c, 0, -1), std::out_of_range);
}

TEST_CASE("scatter") {
  const FieldLayout lay{1, 2, 2};
  Field f(lay);
  const std::vector<double> ones(4, 1.0);
  for (int ey = 0; ey < 2; ++ey)
    for (int ex = 0; ex < 2; ++ex) semmg::scatter_add_element(f, ex, ey, ones);
  for (double v : f.values()) CHECK(v == 4.0);

  const FieldLayout lay2{2, 3, 3};
  Field g(lay2, 1.0);
  Field h(lay2);
  semmg::scatter_add_element(h, 1, 1, semmg::gather_element(g, 1, 1));
  double total = 0.0;
  for (double v : h.values()) total += v;
  CHECK(total == 9.0);
}

TEST_CASE("scatter is the transpose of gather") {
  std::uint64_t seed = 11;
  for (int p : {1, 2, 4, 8})
    for (auto [nx, ny] : {std::pair{2, 2}, {3, 5}}) {
      const FieldLayout lay{p, nx, ny};
      const auto gv = oracle::random_vector(lay.size(), seed++);
      const auto b = oracle::random_vector(static_cast<std::size_t>((p + 1) * (p + 1)), seed++);
      const Field g = oracle::to_field(lay, gv);
      for (int ey = 0; ey < ny; ++ey)
        for (int ex = 0; ex < nx; ++ex) {
          Field s(lay);
          semmg::scatter_add_element(s, ex, ey, b);
          const double lhs = oracle::dot(oracle::to_vector(s), gv);
          const double rhs = oracle::dot(b, semmg::gather_element(g, ex, ey));
          CHECK(std::abs(lhs - rhs) < 1e-13);
        }
    }
}

TEST_CASE("field arithmetic") {
  const FieldLayout lay{2, 2, 2};
  Field a(lay, 3.0);
  Field b(lay, 1.0);
  a -= b;
  a *= 0.5;
  a += b;
  for (double v : a.values()) CHECK(v == 2.0);
  a(1, 1) = 18.0;
  CHECK(a.mean() == doctest::Approx(2.0 + 16.0 / 16.0));
  a.remove_mean();
  CHECK(std::abs(a.mean()) < 1e-15);
  Field other(FieldLayout{2, 3, 2});
  CHECK_THROWS_AS(a += other, std::invalid_argument);
}

TEST_CASE("node coordinates") {
  const auto mesh = semmg::MeshConfig::make(2, 3, 2.0, 3.0);
  const FieldLayout lay{2, 2, 3};
  const std::vector<double> nodes{-1.0, 0.0, 1.0};
  const auto x = semmg::node_coordinates_x(lay, mesh, nodes);
  const auto y = semmg::node_coordinates_y(lay, mesh, nodes);
  CHECK(x == std::vector<double>{0.0, 0.5, 1.0, 1.5});
  REQUIRE(y.size() == 6);
  CHECK(y[5] == doctest::Approx(2.5));
}
