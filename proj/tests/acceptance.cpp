/// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "semmg/experiment.hpp"

using namespace semmg;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail, double seconds) {
  if (!pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr std::uint64_t kSeeds[] = {1, 2, 3};

struct Mean {
  double rbar = 0.0;
  double cost_ratio = 0.0;  ///< omega1 * rbar, fixed by the configuration
  [[nodiscard]] double omega1() const { return cost_ratio / rbar; }
  [[nodiscard]] int n10() const { return cycles_for_ten_decades(rbar); }
};

Mean mean_rate(RunConfig c) {
  Mean m;
  for (auto seed : kSeeds) {
    c.seed = seed;
    const auto rec = run_single(c).record;
    m.rbar += rec.rbar / std::size(kSeeds);
    m.cost_ratio = rec.omega1 * rec.rbar;
  }
  return m;
}

RunConfig mg10(int p, int n, OverlapRule rule, SmootherKind kind, WeightKind w = WeightKind::quintic) {
  RunConfig c;
  c.p = p;
  c.nx = c.ny = n;
  c.overlap = rule;
  c.smoother = {kind, w};
  return c;
}

bool within(double value, double ref) { return std::abs(value - ref) <= rate_tolerance(ref); }

/// --- property criteria ---

void basis_correctness() {
  const auto t = Clock::now();
  double quad = 0.0, deriv = 0.0;
  std::vector<int> orders;
  for (int p = 1; p <= 16; ++p) orders.push_back(p);
  orders.push_back(32);
  for (int p : orders) {
    const auto b = gll_basis(p);
    for (int k = 0; k <= 2 * p - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i <= p; ++i) s += b.weights[i] * std::pow(b.nodes[i], k);
      quad = std::max(quad, std::abs(s - (k % 2 == 0 ? 2.0 / (k + 1) : 0.0)));
    }
    for (int k = 0; k <= p; ++k)
      for (int i = 0; i <= p; ++i) {
        double d = 0.0;
        for (int j = 0; j <= p; ++j) d += b.diff(i, j) * std::pow(b.nodes[j], k);
        const double exact = k == 0 ? 0.0 : k * std::pow(b.nodes[i], k - 1);
        deriv = std::max(deriv, std::abs(d - exact));
      }
  }
  report(7, quad < 1e-12 && deriv < 1e-11, "GLL quadrature and differentiation exactness",
         "quadrature error " + fmt("%.2e", quad) + ", derivative error " + fmt("%.2e", deriv), since(t));
}

void operator_equivalence() {
  const auto t = Clock::now();
  double rel = 0.0, asym = 0.0, null = 0.0;
  std::uint64_t seed = 1000;
  for (auto [nx, ny] : {std::pair{2, 2}, std::pair{3, 2}})
    for (int p : {1, 2, 3}) {
      const auto b = gll_basis(p);
      const auto mesh = MeshConfig::make(nx, ny, 1.0 * nx, 2.0);
      const FieldLayout lay{p, nx, ny};
      auto nu_v = oracle::random_vector(lay.size(), seed++);
      for (double& x : nu_v) x += 1.5;
      const PoissonOperator A(b, mesh);
      const DiffusionOperator B(b, mesh, oracle::to_field(lay, nu_v));
      const auto Ad = oracle::assemble(b, nx, ny, mesh.dx(), mesh.dy());
      const auto Bd = oracle::assemble(b, nx, ny, mesh.dx(), mesh.dy(), &nu_v);
      const std::pair<const Operator*, const oracle::Dense*> pairs[] = {{&A, &Ad}, {&B, &Bd}};
      for (auto [op, dense] : pairs) {
        for (int k = 0; k < 20; ++k) {
          const auto u = oracle::random_vector(lay.size(), seed++);
          const auto ref = dense->mul(u);
          const auto got = oracle::to_vector(op->apply(oracle::to_field(lay, u)));
          rel = std::max(rel, oracle::max_abs_diff(got, ref) / oracle::max_abs(ref));
        }
        const double scale = oracle::max_abs(dense->a);
        for (int i = 0; i < dense->n; ++i)
          for (int j = 0; j < dense->n; ++j) asym = std::max(asym, std::abs((*dense)(i, j) - (*dense)(j, i)) / scale);
        null = std::max(null, oracle::max_abs(oracle::to_vector(op->apply(Field(lay, 1.0)))) / scale);
      }
    }
  report(8, rel < 1e-12 && asym < 1e-13 && null < 1e-13, "matrix-free operators equal dense assembly",
         "relative error " + fmt("%.2e", rel) + ", asymmetry " + fmt("%.2e", asym) + ", A*1 " + fmt("%.2e", null),
         since(t));
}

void partition_of_unity() {
  const auto t = Clock::now();
  double err = 0.0;
  for (auto kind : {WeightKind::arithmetic, WeightKind::linear, WeightKind::cubic, WeightKind::quintic,
                    WeightKind::seventh, WeightKind::tophat})
    for (int p : {4, 8, 16})
      for (int no : {1, 2}) {
        const auto b = gll_basis(p);
        const auto mesh = MeshConfig::make(3, 4, 3.0, 4.0);
        const PoissonOperator op(b, mesh);
        SchwarzSmoother s(op, mesh, b, no, {SmootherKind::additive, kind});
        Field cover(op.layout());
        for (int ey = 0; ey < mesh.ny; ++ey)
          for (int ex = 0; ex < mesh.nx; ++ex) s.scatter_add_subdomain(cover, ex, ey, s.solver().weights());
        for (double v : cover.values()) err = std::max(err, std::abs(v - 1.0));
      }
  report(9, err < 1e-13, "weights form a partition of unity", "max |sum - 1| " + fmt("%.2e", err), since(t));
}

void fast_diagonalization() {
  const auto t = Clock::now();
  double err = 0.0;
  std::uint64_t seed = 2000;
  for (int p : {2, 4, 8})
    for (int no : {0, 1, 2}) {
      if (no > p - 1) continue;
      for (double ratio : {1.0, 4.0}) {
        const double dx = 0.5 * ratio;
        const double dy = 0.5;
        const auto b = gll_basis(p);
        const auto solver = FastDiagSolver::build(b, dx, dy, no, std::nullopt);
        const auto Ass = oracle::assemble(b, 4, 4, dx, dy).sub(oracle::subdomain_indices(p, 4, 4, no, 1, 2));
        for (int k = 0; k < 10; ++k) {
          const auto v = oracle::random_vector(static_cast<std::size_t>(Ass.n), seed++);
          std::vector<double> x(v.size());
          solver.solve(Ass.mul(v), x);
          err = std::max(err, oracle::max_abs_diff(x, v) / oracle::max_abs(v));
        }
      }
    }
  report(10, err < 1e-10, "fast diagonalization inverts the subdomain operator",
         "max relative error of A_ss^-1 A_ss v " + fmt("%.2e", err), since(t));
}

void transfer_and_coarse_solve() {
  const auto t = Clock::now();
  double adj = 0.0, exact = 0.0;
  {
    const auto mesh = MeshConfig::make(3, 4, 3.0, 2.0);
    MultigridOptions o;
    o.order = 16;
    o.overlap = OverlapRule::ceil_p8();
    MultigridHierarchy h(mesh, o);
    for (int l = 1; l < h.num_levels(); ++l) {
      const auto& lc = h.layout(l - 1);
      const auto& lf = h.layout(l);
      const auto x = oracle::random_vector(lc.size(), 10 + l);
      const auto y = oracle::random_vector(lf.size(), 20 + l);
      const double lhs = oracle::dot(oracle::to_vector(h.prolongate(l, oracle::to_field(lc, x))), y);
      const double rhs = oracle::dot(x, oracle::to_vector(h.restrict_residual(l, oracle::to_field(lf, y))));
      adj = std::max(adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));

      // a continuous element-wise polynomial of the coarse order is reproduced at the fine nodes
      const auto& bc = h.basis(l - 1);
      const auto& bf = h.basis(l);
      const int pc = lc.p;
      const auto q = [pc](double xi) {
        const double s = 0.5 * (xi + 1.0);
        return pc >= 2 ? 1.0 + std::pow(s, pc - 1) * (1.0 - s) : 1.0;
      };
      Field c(lc);
      for (int ey = 0; ey < mesh.ny; ++ey)
        for (int ex = 0; ex < mesh.nx; ++ex)
          for (int b = 0; b <= pc; ++b)
            for (int a = 0; a <= pc; ++a)
              c(lc.global_x(ex, a), lc.global_y(ey, b)) = q(bc.nodes[a]) * (2.0 - q(bc.nodes[b]));
      const Field fine = h.prolongate(l, c);
      for (int ey = 0; ey < mesh.ny; ++ey)
        for (int ex = 0; ex < mesh.nx; ++ex)
          for (int j = 0; j <= lf.p; ++j)
            for (int i = 0; i <= lf.p; ++i)
              exact = std::max(exact, std::abs(fine(lf.global_x(ex, i), lf.global_y(ey, j)) -
                                               q(bf.nodes[i]) * (2.0 - q(bf.nodes[j]))));
    }
  }
  double coarse = 0.0;
  {
    const auto mesh = MeshConfig::make(4, 4, 2.0, 2.0);
    MultigridOptions o;
    o.order = 2;
    MultigridHierarchy h(mesh, o);
    Field f0 = oracle::to_field(h.layout(0), oracle::random_vector(h.layout(0).size(), 31));
    f0.remove_mean();
    const Field u0 = h.coarse_solve(f0);
    const auto ref = oracle::pseudo_solve(oracle::assemble(gll_basis(1), 4, 4, mesh.dx(), mesh.dy()),
                                          oracle::to_vector(f0));
    coarse = oracle::max_abs_diff(oracle::to_vector(u0), ref) / oracle::max_abs(ref);
  }
  report(11, adj < 1e-13 && exact < 1e-13 && coarse < 1e-11, "transfer adjointness and coarse solve",
         "adjointness " + fmt("%.2e", adj) + ", interpolation " + fmt("%.2e", exact) + ", coarse vs pseudoinverse " +
             fmt("%.2e", coarse),
         since(t));
}

void multiplicative_symmetry() {
  const auto t = Clock::now();
  const auto b = gll_basis(2);
  const auto mesh = MeshConfig::make(2, 2, 2.0, 2.0);
  const PoissonOperator op(b, mesh);
  const auto& lay = op.layout();
  SchwarzSmoother s(op, mesh, b, 0, {SmootherKind::multiplicative, WeightKind::quintic});
  const int n = static_cast<int>(lay.size());
  oracle::Dense B(n);
  for (int k = 0; k < n; ++k) {
    Field e(lay);
    e[k] = 1.0;
    Field u(lay);
    s.multiplicative_sweep(u, e, 2);
    for (int i = 0; i < n; ++i) B(i, k) = u[i];
  }
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) asym = std::max(asym, std::abs(B(i, j) - B(j, i)));
  report(12, asym < 1e-11, "forward plus backward multiplicative sweep is symmetric",
         "max |B - B^T| " + fmt("%.2e", asym), since(t));
}

void discretization_accuracy() {
  const auto t = Clock::now();
  RunConfig c;
  c.solver = SolverKind::mgcg;
  const auto out = run_single(c);
  const double err = max_nodal_error(out.result.u, out.problem.mesh, gll_basis(c.p), out.problem.exact);
  report(13, out.record.converged && err < 1e-9, "MGCG solution is spectrally accurate",
         std::to_string(out.record.cycles) + " iterations, max nodal error " + fmt("%.2e", err), since(t));
}

/// --- rate reproductions ---

std::string cell(const std::string& name, double got, double ref) {
  return name + " " + fmt("%.3f", got) + "/" + fmt("%.2f", ref) + (within(got, ref) ? "" : "!");
}

void table2_row() {
  const auto t = Clock::now();
  struct Ref {
    SmootherKind kind;
    WeightKind w;
    double ref;
    const char* name;
  };
  const Ref refs[] = {{SmootherKind::additive, WeightKind::arithmetic, 0.40, "wa"},
                      {SmootherKind::additive, WeightKind::linear, 0.83, "w1"},
                      {SmootherKind::additive, WeightKind::cubic, 1.17, "w3"},
                      {SmootherKind::additive, WeightKind::quintic, 1.29, "w5"},
                      {SmootherKind::additive, WeightKind::seventh, 1.23, "w7"},
                      {SmootherKind::additive, WeightKind::tophat, 0.52, "wt"},
                      {SmootherKind::multiplicative, WeightKind::quintic, 1.29, "mult"}};
  bool pass = true;
  std::string detail;
  for (const auto& r : refs) {
    const double got = mean_rate(mg10(8, 8, OverlapRule::fixed(1), r.kind, r.w)).rbar;
    pass = pass && within(got, r.ref);
    detail += (detail.empty() ? "" : ", ") + cell(r.name, got, r.ref);
  }
  report(1, pass, "p=8 fixed overlap rates by weight", detail, since(t));
}

void table3_cells() {
  const auto t = Clock::now();
  const double a = mean_rate(mg10(16, 8, OverlapRule::floor_p8(), SmootherKind::additive)).rbar;
  const double b = mean_rate(mg10(32, 8, OverlapRule::floor_p8(), SmootherKind::additive)).rbar;
  const double c = mean_rate(mg10(32, 8, OverlapRule::floor_p8(), SmootherKind::multiplicative)).rbar;
  report(2, within(a, 1.28) && within(b, 1.50) && within(c, 1.56), "floor(p/8) overlap rates",
         cell("p=16 w5", a, 1.28) + ", " + cell("p=32 w5", b, 1.50) + ", " + cell("p=32 mult", c, 1.56), since(t));
}

void mesh_robustness_and_work() {
  auto t = Clock::now();
  struct Row {
    int p, n;
    double omega_ref;
  };
  const Row rows[] = {{8, 16, 5.4}, {8, 32, 5.4}, {8, 64, 5.4}, {16, 8, 5.1},
                      {16, 16, 4.9}, {16, 32, 5.0}, {16, 64, 5.0}};
  std::vector<Mean> means;
  for (const auto& r : rows) means.push_back(mean_rate(mg10(r.p, r.n, OverlapRule::ceil_p8(), SmootherKind::additive)));

  double lo = 1e9, hi = -1e9;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    lo = std::min(lo, means[k].rbar);
    hi = std::max(hi, means[k].rbar);
    detail += (k ? ", " : "") + std::to_string(rows[k].n) + "^2 " + fmt("%.3f", means[k].rbar);
  }
  const bool in_band = lo >= 1.28 && hi <= 1.30;
  report(3, in_band && hi - lo < 0.08, "p=8 rate independent of mesh size",
         detail + ", spread " + fmt("%.3f", hi - lo), since(t));

  t = Clock::now();
  bool pass = true;
  detail.clear();
  for (std::size_t k = 0; k < std::size(rows); ++k) {
    const double w = means[k].omega1();
    const bool ok = std::abs(w - rows[k].omega_ref) <= 0.15 * rows[k].omega_ref;
    pass = pass && ok;
    detail += (k ? ", " : "") + std::string("p=") + std::to_string(rows[k].p) + " " + std::to_string(rows[k].n) +
              "^2 " + fmt("%.2f", w) + "/" + fmt("%.1f", rows[k].omega_ref) + (ok ? "" : "!");
  }
  report(5, pass, "work per decade matches the tabulated values", detail, since(t));
}

void anisotropy() {
  const auto t = Clock::now();
  auto c = mg10(8, 16, OverlapRule::ceil_p8(), SmootherKind::additive);
  c.ar = 8.0;
  const auto mg = mean_rate(c);
  c.solver = SolverKind::mgcg;
  const auto cg = mean_rate(c);
  report(4, cg.n10() <= 0.6 * mg.n10(), "MGCG robust at aspect ratio 8",
         "MG rbar " + fmt("%.3f", mg.rbar) + " n10 " + std::to_string(mg.n10()) + ", MGCG rbar " +
             fmt("%.3f", cg.rbar) + " n10 " + std::to_string(cg.n10()),
         since(t));
}

void variable_diffusion() {
  const auto t = Clock::now();
  RunConfig c;
  c.p = 16;
  c.nx = c.ny = 8;
  c.overlap = OverlapRule::ceil_p8();
  c.n_pre = c.n_post = 1;
  c.nu_hat = 0.9;
  const auto mg = mean_rate(c);
  c.solver = SolverKind::mgcg;
  const auto cg = mean_rate(c);
  report(6, cg.rbar >= 0.75 && cg.rbar >= mg.rbar, "variable diffusion at nu_hat = 0.9",
         "MGCG rbar " + fmt("%.3f", cg.rbar) + ", MG rbar " + fmt("%.3f", mg.rbar), since(t));
}

}  // namespace

int main() {
  try {
    basis_correctness();
    operator_equivalence();
    partition_of_unity();
    fast_diagonalization();
    transfer_and_coarse_solve();
    multiplicative_symmetry();
    discretization_accuracy();
    table2_row();
    table3_cells();
    mesh_robustness_and_work();
    anisotropy();
    variable_diffusion();
  } catch (const std::exception& e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
