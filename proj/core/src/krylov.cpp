#include "semmg/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "semmg/multigrid.hpp"

namespace semmg {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Field random_initial_guess(const FieldLayout& layout, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Field u(layout);
  for (double& v : u.values()) v = rng.uniform();
  return u;
}

CgResult conjugate_gradient(const Operator& op, const Field& b, Field& x, double rel_tol,
                            int max_iterations) {
  CgResult result;
  const double bnorm = norm2(b.values());
  if (bnorm == 0.0) {
    x.fill(0.0);
    result.converged = true;
    return result;
  }
  Field r = residual(op, x, b);
  Field p = r;
  Field q(op.layout());
  double rr = dot(r.values(), r.values());
  const double target = rel_tol * bnorm;
  while (std::sqrt(rr) > target) {
    if (result.iterations == max_iterations) break;
    op.apply(p, q);
    const double pq = dot(p.values(), q.values());
    if (!(pq > 0.0)) break;
    const double alpha = rr / pq;
    axpy(alpha, p.values(), x.values());
    axpy(-alpha, q.values(), r.values());
    const double rr_new = dot(r.values(), r.values());
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    ++result.iterations;
  }
  result.relative_residual = std::sqrt(rr) / bnorm;
  result.converged = std::sqrt(rr) <= target;
  return result;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Field initial_guess(const FieldLayout& layout, const SolveConfig& cfg) {
  return cfg.random_start ? random_initial_guess(layout, cfg.seed) : Field(layout);
}

void validate(const SolveConfig& cfg) {
  if (!(cfg.tol_reduction > 1.0)) throw std::invalid_argument("SolveConfig: tol_reduction must exceed 1");
  if (cfg.max_cycles < 1) throw std::invalid_argument("SolveConfig: max_cycles must be >= 1");
}

void note_coarse_failures(const MultigridHierarchy& h, ConvergenceReport& report) {
  if (h.coarse_failures() > 0)
    report.diagnostic = "coarse CG hit its iteration cap " + std::to_string(h.coarse_failures()) + " time(s)";
}

}  // namespace

SolveResult solve_mg(MultigridHierarchy& h, const Field& f, const SolveConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  const Operator& A = h.top_operator();

  SolveResult out{initial_guess(A.layout(), cfg), {}, {}};
  Field r = residual(A, out.u, f);
  const double r0 = norm2(r.values());
  const double r_max = r0 / cfg.tol_reduction;
  auto& rep = out.report;
  rep.residuals.push_back(r0);
  rep.converged = r0 <= r_max;

  for (int cycle = 0; cycle < cfg.max_cycles && !rep.converged; ++cycle) {
    h.v_cycle(out.u, f);
    residual(A, out.u, f, r);
    const double rn = norm2(r.values());
    rep.residuals.push_back(rn);
    if (!std::isfinite(rn)) {
      rep.diagnostic = "residual is not finite";
      break;
    }
    rep.converged = rn <= r_max;
  }
  rep.finalize();
  note_coarse_failures(h, rep);
  rep.wallclock = seconds_since(start);
  return out;
}

FlexibleCgResult flexible_pcg(const VectorMap& apply_a, const VectorMap& precondition,
                              std::span<const double> f, std::vector<double> x0,
                              double tol_reduction, int max_iterations) {
  const std::size_t n = f.size();
  FlexibleCgResult out;
  out.x = std::move(x0);
  auto& rep = out.report;

  std::vector<double> r(n), r_old(n, 0.0), p(n), q(n), z(n);
  apply_a(out.x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = f[i] - q[i];
  const double r0 = norm2(r);
  const double r_max = r0 / tol_reduction;
  rep.residuals.push_back(r0);
  rep.converged = r0 <= r_max;
  if (rep.converged) {
    rep.finalize();
    return out;
  }

  precondition(r, p);
  double delta = dot(p, r);
  for (int it = 1; it <= max_iterations; ++it) {
    apply_a(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0) || !(delta > 0.0)) {
      rep.breakdown = true;
      rep.diagnostic = "loss of positivity in MGCG (p^T A p or z^T r not positive)";
      break;
    }
    const double alpha = delta / pq;
    axpy(alpha, p, out.x);
    axpy(-alpha, q, r);
    const double rn = norm2(r);
    rep.residuals.push_back(rn);
    if (rn <= r_max) {
      rep.converged = true;
      break;
    }
    if (!std::isfinite(rn)) {
      rep.diagnostic = "residual is not finite";
      break;
    }
    precondition(r, z);
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += z[i] * (r[i] - r_old[i]);
    const double beta = num / delta;
    out.betas.push_back(beta);
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    delta = dot(z, r);
    r_old = r;
  }
  rep.finalize();
  return out;
}

SolveResult solve_mgcg(MultigridHierarchy& h, const Field& f, const SolveConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  const Operator& A = h.top_operator();
  const FieldLayout layout = A.layout();

  Field in(layout), out(layout);
  const VectorMap apply_a = [&](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), in.values().begin());
    A.apply(in, out);
    std::copy(out.values().begin(), out.values().end(), y.begin());
  };
  const VectorMap precondition = [&](std::span<const double> r, std::span<double> z) {
    std::copy(r.begin(), r.end(), in.values().begin());
    out.fill(0.0);
    h.v_cycle(out, in);
    std::copy(out.values().begin(), out.values().end(), z.begin());
  };

  const Field u0 = initial_guess(layout, cfg);
  auto res = flexible_pcg(apply_a, precondition, f.values(),
                          std::vector<double>(u0.values().begin(), u0.values().end()),
                          cfg.tol_reduction, cfg.max_cycles);

  SolveResult result{Field(layout), std::move(res.report), std::move(res.betas)};
  std::copy(res.x.begin(), res.x.end(), result.u.values().begin());
  note_coarse_failures(h, result.report);
  result.report.wallclock = seconds_since(start);
  return result;
}

}  // namespace semmg
