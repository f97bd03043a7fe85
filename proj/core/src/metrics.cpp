#include "semmg/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace semmg {

double convergence_rate(std::span<const double> residuals) {
  if (residuals.size() < 2) throw std::invalid_argument("convergence_rate: need at least one cycle");
  const double r0 = residuals.front();
  const double rn = residuals.back();
  if (!(r0 > 0.0) || !(rn > 0.0)) throw std::invalid_argument("convergence_rate: norms must be positive");
  const auto n = static_cast<double>(residuals.size() - 1);
  return std::log10(r0 / rn) / n;
}

int cycles_for_ten_decades(double rbar) {
  if (!(rbar > 0.0) || !std::isfinite(rbar)) return 0;
  // guard against 10 / rbar landing a hair above an integer through rounding
  const double q = 10.0 / rbar;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) < 1e-12 * q) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(q));
}

void ConvergenceReport::finalize() {
  cycles = residuals.empty() ? 0 : static_cast<int>(residuals.size()) - 1;
  if (cycles >= 1 && residuals.front() > 0.0 && residuals.back() > 0.0) {
    rbar = convergence_rate(residuals);
    n10 = cycles_for_ten_decades(rbar);
  } else {
    rbar = std::numeric_limits<double>::quiet_NaN();
    n10 = 0;
  }
}

CycleCost cycle_cost(int p, int n_el, int overlap_top, int smoothing_steps, bool variable,
                     bool with_cg) {
  const double np = p + 1.0;
  const double cs = variable ? 2.0 : 4.0 / 3.0;
  const double ccg = with_cg ? 2.0 : 0.0;
  const double rel = 1.0 + 2.0 * overlap_top / np;
  const double bracket = 4.0 * rel * rel * rel * cs * smoothing_steps + 2.0 * cs + ccg;
  const double vol = np * np * np * n_el;
  CycleCost c;
  c.w_cyc = bracket * vol;
  c.w_op = 2.0 * vol;
  c.ratio = c.w_cyc / c.w_op;
  return c;
}

double work_per_decades(double k, double rbar, double cost_ratio) { return k / rbar * cost_ratio; }

}  // namespace semmg
