#include "semmg/experiment.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <mutex>
#include <limits>
#include <algorithm>

#include <json.hpp>

namespace semmg {

std::string_view to_string(SolverKind kind) { return kind == SolverKind::mg ? "mg" : "mgcg"; }

std::string_view to_string(SmootherKind kind) {
  return kind == SmootherKind::additive ? "add" : "mult";
}

Problem make_problem(const RunConfig& cfg) {
  const Basis1D basis = gll_basis(cfg.p);
  if (!(cfg.ar > 0.0)) throw std::invalid_argument("aspect ratio must be positive");
  if (cfg.nu_hat) {
    Problem prob{MeshConfig::make(cfg.nx, cfg.ny, cfg.ar, 1.0), Field(), Diffusivity{*cfg.nu_hat, cfg.nu_shift},
                 sine_product(2.0 * std::numbers::pi).value};
    prob.f = manufactured_rhs_diffusion(prob.mesh, basis, *prob.diffusivity).f;
    return prob;
  }
  const auto exact = sine_product(std::numbers::pi);
  Problem prob{MeshConfig::make(cfg.nx, cfg.ny, 2.0 * cfg.ar, 2.0), Field(), std::nullopt, exact.value};
  prob.f = manufactured_rhs_poisson(prob.mesh, basis, exact);
  return prob;
}

MultigridOptions multigrid_options(const RunConfig& cfg) {
  MultigridOptions opt;
  opt.order = cfg.p;
  opt.overlap = cfg.overlap;
  opt.smoother = cfg.smoother;
  opt.n_pre = cfg.n_pre;
  opt.n_post = cfg.n_post;
  opt.cycle = cfg.cycle;
  if (cfg.nu_hat) opt.diffusivity = Diffusivity{*cfg.nu_hat, cfg.nu_shift};
  return opt;
}

RunOutcome run_single(const RunConfig& cfg) {
  Problem problem = make_problem(cfg);
  MultigridHierarchy h(problem.mesh, multigrid_options(cfg));

  SolveConfig sc;
  sc.solver = cfg.solver;
  sc.tol_reduction = cfg.tol;
  sc.max_cycles = cfg.max_cycles;
  sc.seed = cfg.seed;
  SolveResult result = cfg.solver == SolverKind::mg ? solve_mg(h, problem.f, sc)
                                                    : solve_mgcg(h, problem.f, sc);

  auto& rep = result.report;
  const auto cost = cycle_cost(cfg.p, problem.mesh.num_elements(), cfg.overlap.evaluate(cfg.p),
                               cfg.n_pre + cfg.n_post, cfg.cycle == CycleType::variable,
                               cfg.solver == SolverKind::mgcg);
  rep.omega1 = std::isfinite(rep.rbar) && rep.rbar > 0.0 ? work_per_decades(1.0, rep.rbar, cost.ratio)
                                                         : std::numeric_limits<double>::quiet_NaN();

  RunRecord rec;
  rec.solver = to_string(cfg.solver);
  rec.smoother = to_string(cfg.smoother.kind);
  rec.weight = cfg.smoother.kind == SmootherKind::additive ? std::string(to_string(cfg.smoother.weight))
                                                           : std::string("none");
  rec.p = cfg.p;
  rec.n_x = cfg.nx;
  rec.n_y = cfg.ny;
  rec.AR = cfg.ar;
  rec.overlap_rule = cfg.overlap.to_string();
  rec.n_pre = cfg.n_pre;
  rec.n_post = cfg.n_post;
  rec.cycle_type = to_string(cfg.cycle);
  if (cfg.nu_hat) {
    rec.nu_hat = *cfg.nu_hat;
    rec.shift_s = cfg.nu_shift;
  }
  rec.seed = cfg.seed;
  rec.cycles = rep.cycles;
  rec.rbar = rep.rbar;
  rec.n10 = rep.n10;
  rec.omega1 = rep.omega1;
  rec.converged = rep.converged;
  rec.wallclock = rep.wallclock;
  return {std::move(rec), std::move(result), std::move(problem)};
}

// ---------------------------------------------------------------------------
// presets

namespace {

constexpr std::array<std::string_view, 6> kPresetNames = {
    "table2", "table3", "table4", "table5", "fig3-diffusion", "fig4-diffusion-ar"};

constexpr std::array<int, 4> kOrders = {4, 8, 16, 32};

// Reference rates, columns wa w1 w3 w5 w7 wt mult.
constexpr double kTable2[4][7] = {
    {0.66, 0.86, 1.01, 1.17, 1.25, 0.72, 1.01},
    {0.40, 0.83, 1.17, 1.29, 1.23, 0.52, 1.29},
    {0.34, 0.80, 0.84, 0.84, 0.84, 0.42, 1.26},
    {0.32, 0.43, 0.43, 0.43, 0.43, 0.38, 0.76},
};
constexpr double kTable3[4][7] = {
    {0.63, 0.91, 0.98, 0.96, 0.79, 0.31, 1.03},
    {0.40, 0.75, 1.06, 1.28, 1.28, 0.64, 1.30},
    {0.51, 1.07, 1.36, 1.28, 1.12, 0.53, 1.40},
    {0.71, 1.39, 1.48, 1.50, 1.51, 0.19, 1.56},
};

struct SizeRow {
  int p;
  int sqrt_nel;
  double add_w5;
  double mult;
};
constexpr SizeRow kTable4[] = {
    {4, 32, 1.17, 0.87},  {4, 64, 1.17, 0.86},  {4, 128, 1.17, 0.85}, {4, 256, 1.17, 0.85},
    {8, 16, 1.30, 1.28},  {8, 32, 1.29, 1.26},  {8, 64, 1.29, 1.26},  {8, 128, 1.28, 1.26},
    {16, 8, 1.33, 1.44},  {16, 16, 1.37, 1.42}, {16, 32, 1.36, 1.46}, {16, 64, 1.36, 1.46},
    {32, 4, 1.90, 1.65},  {32, 8, 1.58, 1.59},  {32, 16, 1.87, 1.63}, {32, 32, 1.93, 1.64},
    {32, 64, 1.93, 1.65},
};

struct AspectRow {
  int p;
  int ar;
  double mg;
  double mgcg;
};
constexpr AspectRow kTable5[] = {
    {4, 1, 1.17, 1.30},  {4, 2, 0.99, 1.10},  {4, 4, 0.39, 0.59},  {4, 8, 0.12, 0.28},
    {8, 1, 1.30, 1.33},  {8, 2, 0.86, 1.03},  {8, 4, 0.43, 0.65},  {8, 8, 0.16, 0.34},
    {16, 1, 1.37, 1.55}, {16, 2, 0.95, 1.14}, {16, 4, 0.50, 0.72}, {16, 8, 0.17, 0.39},
    {32, 1, 1.87, 2.01}, {32, 2, 1.23, 1.42}, {32, 4, 0.65, 0.83}, {32, 8, 0.22, 0.44},
};

constexpr int kDefaultMaxSqrtNel = 64;

std::string format_label(const RunConfig& c) {
  std::ostringstream os;
  os << to_string(c.solver) << '(' << c.n_pre << ',' << c.n_post << ") " << to_string(c.smoother.kind);
  if (c.smoother.kind == SmootherKind::additive) os << ' ' << to_string(c.smoother.weight);
  os << " p=" << c.p << " mesh=" << c.nx << 'x' << c.ny << " AR=" << c.ar << " overlap=" << c.overlap.to_string();
  if (c.cycle == CycleType::variable) os << " var";
  if (c.nu_hat) os << " nu_hat=" << *c.nu_hat;
  return os.str();
}

PresetCell make_cell(RunConfig c, std::optional<double> ref) {
  std::string label = format_label(c);
  return {std::move(c), std::move(label), ref};
}

std::vector<PresetCell> weighting_table(OverlapRule rule, const double (&ref)[4][7]) {
  constexpr std::array<WeightKind, 6> kinds = {WeightKind::arithmetic, WeightKind::linear, WeightKind::cubic,
                                               WeightKind::quintic,    WeightKind::seventh, WeightKind::tophat};
  std::vector<PresetCell> cells;
  for (std::size_t row = 0; row < kOrders.size(); ++row) {
    for (std::size_t col = 0; col < 7; ++col) {
      RunConfig c;
      c.p = kOrders[row];
      c.nx = c.ny = 8;
      c.overlap = rule;
      c.n_pre = 1;
      c.n_post = 0;
      if (col < kinds.size())
        c.smoother = {SmootherKind::additive, kinds[col]};
      else
        c.smoother = {SmootherKind::multiplicative, WeightKind::quintic};
      cells.push_back(make_cell(c, ref[row][col]));
    }
  }
  return cells;
}

}  // namespace

std::span<const std::string_view> preset_names() { return kPresetNames; }

std::vector<PresetCell> expand_preset(std::string_view name, bool full) {
  if (name == "table2") return weighting_table(OverlapRule::fixed(1), kTable2);
  if (name == "table3") return weighting_table(OverlapRule::floor_p8(), kTable3);

  std::vector<PresetCell> cells;
  if (name == "table4") {
    for (const auto& row : kTable4) {
      if (!full && row.sqrt_nel > kDefaultMaxSqrtNel) continue;
      RunConfig c;
      c.p = row.p;
      c.nx = c.ny = row.sqrt_nel;
      c.overlap = OverlapRule::ceil_p8();
      c.smoother = {SmootherKind::additive, WeightKind::quintic};
      cells.push_back(make_cell(c, row.add_w5));
      c.smoother = {SmootherKind::multiplicative, WeightKind::quintic};
      cells.push_back(make_cell(c, row.mult));
    }
    return cells;
  }
  if (name == "table5") {
    for (const auto& row : kTable5) {
      RunConfig c;
      c.p = row.p;
      c.nx = c.ny = 16;
      c.ar = row.ar;
      c.overlap = OverlapRule::ceil_p8();
      c.smoother = {SmootherKind::additive, WeightKind::quintic};
      c.solver = SolverKind::mg;
      cells.push_back(make_cell(c, row.mg));
      c.solver = SolverKind::mgcg;
      cells.push_back(make_cell(c, row.mgcg));
    }
    return cells;
  }
  if (name == "fig3-diffusion") {
    for (int k = 0; k <= 9; ++k) {
      for (SolverKind solver : {SolverKind::mg, SolverKind::mgcg}) {
        RunConfig c;
        c.solver = solver;
        c.p = 16;
        c.nx = c.ny = 8;
        c.overlap = OverlapRule::ceil_p8();
        c.smoother = {SmootherKind::additive, WeightKind::quintic};
        c.n_pre = c.n_post = 1;
        c.nu_hat = k / 10.0;
        std::optional<double> ref;
        if (k == 9 && solver == SolverKind::mgcg) ref = 0.91;
        cells.push_back(make_cell(c, ref));
      }
    }
    return cells;
  }
  if (name == "fig4-diffusion-ar") {
    for (int p : {8, 16})
      for (int n : {8, 16})
        for (int ar : {1, 2, 4, 8, 16}) {
          RunConfig c;
          c.solver = SolverKind::mgcg;
          c.p = p;
          c.nx = c.ny = n;
          c.ar = ar;
          c.overlap = OverlapRule::ceil_p2();
          c.smoother = {SmootherKind::additive, WeightKind::quintic};
          c.n_pre = c.n_post = 1;
          c.cycle = CycleType::variable;
          c.nu_hat = 0.9;
          cells.push_back(make_cell(c, std::nullopt));
        }
    return cells;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

double rate_tolerance(double reference) { return std::max(0.15, 0.15 * std::abs(reference)); }

PresetResult run_preset(std::string_view name, std::span<const std::uint64_t> seeds, bool full,
                        unsigned jobs) {
  const auto cells = expand_preset(name, full);
  if (seeds.empty()) throw std::invalid_argument("run_preset: need at least one seed");
  const std::size_t n_jobs = cells.size() * seeds.size();

  PresetResult result;
  result.records.resize(n_jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < n_jobs; k = next++) {
      try {
        RunConfig cfg = cells[k / seeds.size()].config;
        cfg.seed = seeds[k % seeds.size()];
        result.records[k] = run_single(cfg).record;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n_jobs));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellSummary s;
    s.label = cells[c].label;
    double sum = 0.0;
    for (std::size_t k = 0; k < seeds.size(); ++k) sum += result.records[c * seeds.size() + k].rbar;
    s.mean_rbar = sum / static_cast<double>(seeds.size());
    s.reference = cells[c].reference_rbar;
    if (s.reference) {
      s.tolerance = rate_tolerance(*s.reference);
      s.pass = std::abs(s.mean_rbar - *s.reference) <= s.tolerance;
    }
    result.summary.push_back(std::move(s));
  }
  return result;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

constexpr std::array<std::string_view, 20> kColumns = {
    "solver", "smoother", "weight",     "p",      "n_x",  "n_y",       "AR",     "overlap_rule",
    "n_pre",  "n_post",   "cycle_type", "nu_hat", "shift_s", "seed",   "cycles", "rbar",
    "n10",    "omega1",   "converged",  "wallclock"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt("%g", *v) : std::string(); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

}  // namespace

void write_csv(std::ostream& out, std::span<const RunRecord> records) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const auto& r : records) {
    out << r.solver << ',' << r.smoother << ',' << r.weight << ',' << r.p << ',' << r.n_x << ',' << r.n_y << ','
        << fmt("%g", r.AR) << ',' << r.overlap_rule << ',' << r.n_pre << ',' << r.n_post << ',' << r.cycle_type
        << ',' << fmt_optional(r.nu_hat) << ',' << fmt_optional(r.shift_s) << ',' << r.seed << ',' << r.cycles
        << ',' << fmt("%.4g", r.rbar) << ',' << r.n10 << ',' << fmt("%.4g", r.omega1) << ','
        << (r.converged ? "true" : "false") << ',' << fmt("%.6g", r.wallclock) << '\n';
  }
}

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_csv: missing header");
  const auto header = split(line, ',');
  if (header.size() != kColumns.size()) throw std::invalid_argument("read_csv: unexpected header");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != kColumns[i]) throw std::invalid_argument("read_csv: unexpected column " + header[i]);

  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != kColumns.size()) throw std::invalid_argument("read_csv: wrong field count");
    RunRecord r;
    r.solver = f[0];
    r.smoother = f[1];
    r.weight = f[2];
    r.p = parse_int(f[3]);
    r.n_x = parse_int(f[4]);
    r.n_y = parse_int(f[5]);
    r.AR = parse_double(f[6]);
    r.overlap_rule = f[7];
    r.n_pre = parse_int(f[8]);
    r.n_post = parse_int(f[9]);
    r.cycle_type = f[10];
    if (!f[11].empty()) r.nu_hat = parse_double(f[11]);
    if (!f[12].empty()) r.shift_s = parse_double(f[12]);
    r.seed = std::stoull(f[13]);
    r.cycles = parse_int(f[14]);
    r.rbar = parse_double(f[15]);
    r.n10 = parse_int(f[16]);
    r.omega1 = parse_double(f[17]);
    if (f[18] != "true" && f[18] != "false") throw std::invalid_argument("read_csv: bad flag " + f[18]);
    r.converged = f[18] == "true";
    r.wallclock = parse_double(f[19]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string to_json(std::span<const RunRecord> records) {
  auto number = [](double v) -> nlohmann::json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  auto optional = [&](const std::optional<double>& v) -> nlohmann::json {
    if (!v) return nullptr;
    return number(*v);
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"solver", r.solver},
                   {"smoother", r.smoother},
                   {"weight", r.weight},
                   {"p", r.p},
                   {"n_x", r.n_x},
                   {"n_y", r.n_y},
                   {"AR", number(r.AR)},
                   {"overlap_rule", r.overlap_rule},
                   {"n_pre", r.n_pre},
                   {"n_post", r.n_post},
                   {"cycle_type", r.cycle_type},
                   {"nu_hat", optional(r.nu_hat)},
                   {"shift_s", optional(r.shift_s)},
                   {"seed", r.seed},
                   {"cycles", r.cycles},
                   {"rbar", number(r.rbar)},
                   {"n10", r.n10},
                   {"omega1", number(r.omega1)},
                   {"converged", r.converged},
                   {"wallclock", number(r.wallclock)}});
  }
  return arr.dump(2);
}

void write_summary_csv(std::ostream& out, std::span<const CellSummary> summary) {
  out << "cell,mean_rbar,reference,tolerance,pass\n";
  for (const auto& s : summary) {
    out << '"' << s.label << "\"," << fmt("%.4g", s.mean_rbar) << ',';
    if (s.reference)
      out << fmt("%g", *s.reference) << ',' << fmt("%.4g", s.tolerance) << ',' << (s.pass ? "pass" : "FAIL");
    else
      out << ",,";
    out << '\n';
  }
}

}  // namespace semmg
