#pragma once

#include <span>
#include <string>
#include <vector>

namespace semmg {

/// Residual history of one solve with the derived convergence metrics.
struct ConvergenceReport {
  std::vector<double> residuals;  ///< ||r^(0)|| ... ||r^(n)||, Euclidean
  double rbar = 0.0;              ///< average log10 reduction per cycle
  int n10 = 0;                    ///< ceil(10 / rbar)
  double omega1 = 0.0;            ///< operator applications per decade
  bool converged = false;
  bool breakdown = false;         ///< MGCG lost positivity of p^T A p
  int cycles = 0;
  double wallclock = 0.0;         ///< seconds
  std::string diagnostic;

  /// Fills rbar and n10 from the residual history (NaN / 0 when undefined).
  void finalize();
};

/// (1/n) log10(||r0|| / ||rn||) with n = residuals.size() - 1.
/// Throws std::invalid_argument for fewer than two entries or non-positive norms.
double convergence_rate(std::span<const double> residuals);

/// Smallest integer >= 10 / rbar. Returns 0 for non-positive or non-finite rates.
int cycles_for_ten_decades(double rbar);

struct CycleCost {
  double w_cyc = 0.0;
  double w_op = 0.0;
  double ratio = 0.0;  ///< w_cyc / w_op
};

/// W_cyc = [4 (1 + 2 n_o/n_p)^3 c_s n_s + 2 c_s + c_cg] n_p^3 n_el and
/// W_op = 2 n_p^3 n_el with n_p = p + 1, c_s = 4/3 (standard) or 2 (variable),
/// c_cg = 2 with conjugate gradients.
CycleCost cycle_cost(int p, int n_el, int overlap_top, int smoothing_steps, bool variable,
                     bool with_cg);

/// (k / rbar) * W_cyc / W_op
double work_per_decades(double k, double rbar, double cost_ratio);

}  // namespace semmg
