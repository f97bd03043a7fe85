#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semmg/experiment.hpp"

namespace {

/// Exit codes of the runner.
enum Exit : int { ok = 0, usage = 1, not_converged = 2 };

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const int v = std::stoi(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad integer '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (int v : parse_int_list(text)) {
    if (v < 0) throw std::invalid_argument("seeds must be non-negative");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

semmg::SolverKind parse_solver(const std::string& s) {
  return s == "mg" ? semmg::SolverKind::mg : semmg::SolverKind::mgcg;
}

std::filesystem::path summary_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_filename(out.stem().string() + "_summary.csv");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-element multigrid with Schwarz smoothers"};
  app.require_subcommand(1);

  semmg::RunConfig cfg;
  std::string nel = "8";
  std::string solver = "mg";
  std::string smoother = "add";
  std::string weight = "w5";
  std::string overlap = "fixed:1";
  std::string cycle = "std";
  std::string format = "csv";
  std::optional<double> nu_hat;

  auto* solve = app.add_subcommand("solve", "Run a single configuration and print one record");
  solve->add_option("--p", cfg.p, "Polynomial order of the finest level")->check(CLI::PositiveNumber);
  solve->add_option("--nel", nel, "Elements per direction, nx or nx,ny");
  solve->add_option("--ar", cfg.ar, "Aspect ratio of the domain")->check(CLI::PositiveNumber);
  solve->add_option("--solver", solver)->check(CLI::IsMember({"mg", "mgcg"}));
  solve->add_option("--smoother", smoother)->check(CLI::IsMember({"add", "mult"}));
  solve->add_option("--weight", weight)->check(CLI::IsMember({"wa", "w1", "w3", "w5", "w7", "wt"}));
  solve->add_option("--overlap", overlap, "fixed:<k>, floorp8, ceilp8 or ceilp2");
  solve->add_option("--pre", cfg.n_pre)->check(CLI::NonNegativeNumber);
  solve->add_option("--post", cfg.n_post)->check(CLI::NonNegativeNumber);
  solve->add_option("--cycle", cycle)->check(CLI::IsMember({"std", "var"}));
  solve->add_option("--tol", cfg.tol, "Required residual reduction factor")->check(CLI::PositiveNumber);
  solve->add_option("--max-cycles", cfg.max_cycles)->check(CLI::PositiveNumber);
  solve->add_option("--seed", cfg.seed);
  solve->add_option("--nu-hat", nu_hat, "Diffusivity amplitude; selects the variable-diffusion problem");
  solve->add_option("--nu-shift", cfg.nu_shift);
  solve->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  std::string name;
  std::string seeds = "1,2,3";
  std::string out_path;
  std::string table_format = "csv";
  bool full = false;
  auto* table = app.add_subcommand("table", "Run a preset grid of configurations");
  table->add_option("--name", name)->required()->check(CLI::IsMember(
      std::vector<std::string>(semmg::preset_names().begin(), semmg::preset_names().end())));
  table->add_option("--seeds", seeds, "Comma-separated list of seeds");
  table->add_option("--out", out_path, "Output file; standard output when omitted");
  table->add_option("--format", table_format)->check(CLI::IsMember({"csv", "json"}));
  table->add_flag("--full", full, "Include the largest meshes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (solve->parsed()) {
      const auto counts = parse_int_list(nel);
      if (counts.size() > 2) throw std::invalid_argument("--nel takes nx or nx,ny");
      cfg.nx = counts[0];
      cfg.ny = counts.size() == 2 ? counts[1] : counts[0];
      cfg.solver = parse_solver(solver);
      cfg.smoother.kind = smoother == "add" ? semmg::SmootherKind::additive : semmg::SmootherKind::multiplicative;
      cfg.smoother.weight = semmg::parse_weight_kind(weight);
      cfg.overlap = semmg::OverlapRule::parse(overlap);
      cfg.cycle = cycle == "std" ? semmg::CycleType::standard : semmg::CycleType::variable;
      cfg.nu_hat = nu_hat;

      semmg::RunOutcome outcome = [&] {
        try {
          return semmg::run_single(cfg);
        } catch (const std::invalid_argument& e) {
          throw CLI::ValidationError(e.what());
        }
      }();
      const semmg::RunRecord records[] = {outcome.record};
      if (format == "json")
        std::cout << semmg::to_json(records) << '\n';
      else
        semmg::write_csv(std::cout, records);
      return outcome.record.converged ? Exit::ok : Exit::not_converged;
    }

    const auto seed_list = parse_seeds(seeds);
    const auto result = semmg::run_preset(name, seed_list, full);
    if (out_path.empty()) {
      if (table_format == "json")
        std::cout << semmg::to_json(result.records) << '\n';
      else
        semmg::write_csv(std::cout, result.records);
      semmg::write_summary_csv(std::cerr, result.summary);
      return Exit::ok;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    if (table_format == "json")
      out << semmg::to_json(result.records) << '\n';
    else
      semmg::write_csv(out, result.records);
    std::ofstream summary(summary_path(out_path));
    if (!summary) throw std::runtime_error("cannot write " + summary_path(out_path).string());
    semmg::write_summary_csv(summary, result.summary);
    if (!out || !summary) throw std::runtime_error("write failed");
    return Exit::ok;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::usage;
  }
}
