#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semmg/krylov.hpp"
#include "semmg/multigrid.hpp"
#include "semmg/operators.hpp"
#include "semmg/schwarz.hpp"

namespace semmg {

/// Everything needed to reproduce one solve.
///
/// Poisson runs use u = sin(pi x) sin(pi y) on [0, 2 ar] x [0, 2]; setting
/// `nu_hat` switches to variable diffusion with u = sin(2 pi x) sin(2 pi y)
/// on [0, ar] x [0, 1].
struct RunConfig {
  SolverKind solver = SolverKind::mg;
  SmootherConfig smoother{};
  int p = 8;
  int nx = 8;
  int ny = 8;
  double ar = 1.0;
  OverlapRule overlap = OverlapRule::fixed(1);
  int n_pre = 1;
  int n_post = 0;
  CycleType cycle = CycleType::standard;
  double tol = 1e10;
  int max_cycles = 200;
  std::uint64_t seed = 1;
  std::optional<double> nu_hat;
  double nu_shift = 0.2;
};

/// One output row. Field names double as the CSV header.
struct RunRecord {
  std::string solver;
  std::string smoother;
  std::string weight;
  int p = 0;
  int n_x = 0;
  int n_y = 0;
  double AR = 1.0;
  std::string overlap_rule;
  int n_pre = 0;
  int n_post = 0;
  std::string cycle_type;
  std::optional<double> nu_hat;
  std::optional<double> shift_s;
  std::uint64_t seed = 0;
  int cycles = 0;
  double rbar = 0.0;
  int n10 = 0;
  double omega1 = 0.0;
  bool converged = false;
  double wallclock = 0.0;
};

std::string_view to_string(SolverKind kind);
std::string_view to_string(SmootherKind kind);

/// Mesh, load vector and exact solution for a run configuration.
struct Problem {
  MeshConfig mesh;
  Field f;
  std::optional<Diffusivity> diffusivity;
  ScalarFunction exact;
};

Problem make_problem(const RunConfig& cfg);
MultigridOptions multigrid_options(const RunConfig& cfg);

struct RunOutcome {
  RunRecord record;
  SolveResult result;
  Problem problem;
};

/// Builds the hierarchy, solves, and derives the record (omega1 from the cycle cost model).
RunOutcome run_single(const RunConfig& cfg);

/// Names of the built-in experiment presets.
std::span<const std::string_view> preset_names();

struct PresetCell {
  RunConfig config;
  std::string label;
  std::optional<double> reference_rbar;  ///< tabulated reference value, when one exists
};

/// Expands a preset into its grid; `full` adds the largest meshes of table4.
/// Throws std::invalid_argument for unknown names.
std::vector<PresetCell> expand_preset(std::string_view name, bool full = false);

/// Absolute tolerance for comparing a mean rate with a reference value:
/// max(0.15, 0.15 * reference).
double rate_tolerance(double reference);

struct CellSummary {
  std::string label;
  double mean_rbar = 0.0;
  std::optional<double> reference;
  double tolerance = 0.0;
  bool pass = true;
};

struct PresetResult {
  std::vector<RunRecord> records;  ///< grid order, then seed order
  std::vector<CellSummary> summary;
};

/// Runs every cell for every seed; `jobs` worker threads (0 = hardware concurrency).
PresetResult run_preset(std::string_view name, std::span<const std::uint64_t> seeds, bool full = false,
                        unsigned jobs = 0);

void write_csv(std::ostream& out, std::span<const RunRecord> records);
std::vector<RunRecord> read_csv(std::istream& in);
/// JSON array of records, full floating-point precision.
std::string to_json(std::span<const RunRecord> records);
void write_summary_csv(std::ostream& out, std::span<const CellSummary> summary);

}  // namespace semmg
