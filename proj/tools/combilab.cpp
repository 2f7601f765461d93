// combilab: command-line front end for the experiments.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "combilab/anticoncentration.hpp"
#include "combilab/errors.hpp"
#include "combilab/experiments.hpp"
#include "combilab/persistence.hpp"
#include "combilab/property_suite.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kResourceError = 2;
constexpr int kVerifyFailure = 3;

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw combilab::DomainError("bad vector entry '" + item + "'");
  }
  return out;
}

struct Flags {
  combilab::ExperimentConfig cfg;
  std::optional<int> d, m;
  std::optional<double> alpha;
  std::string eps_grid, vector, format = "csv", mode = "montecarlo";
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n", f.cfg.n, "dimension")->capture_default_str();
  cmd->add_option("--d", f.d, "row weight (default n/2)");
  cmd->add_option("--m", f.m, "number of rows (default n)");
  cmd->add_option("--trials", f.cfg.trials, "Monte Carlo trials")->capture_default_str();
  cmd->add_option("--seed", f.cfg.seed, "master seed")->capture_default_str();
  cmd->add_option("--threads", f.cfg.threads, "worker threads")->capture_default_str();
  cmd->add_option("--out", f.cfg.out, "output path (summary goes next to it for CSV)");
  cmd->add_option("--format", f.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_experiment(CLI::App* cmd, Flags& f) {
  cmd->add_option("--eps-grid", f.eps_grid, "a:b:step or comma list (default 0:1:0.05)");
  cmd->add_option("--alpha", f.alpha, "CLCD cap alpha (default n/2)");
  cmd->add_option("--gamma", f.cfg.gamma, "CLCD slope gamma")->capture_default_str();
  cmd->add_option("--delta", f.cfg.delta, "partition delta")->capture_default_str();
  cmd->add_option("--rho", f.cfg.rho, "partition rho")->capture_default_str();
  cmd->add_option("--horizon", f.cfg.horizon, "CLCD search horizon")->capture_default_str();
}

combilab::ExperimentConfig finish(Flags& f, const std::string& name) {
  auto cfg = f.cfg;
  cfg.experiment = name;
  cfg.d = f.d;
  cfg.m = f.m;
  cfg.alpha = f.alpha;
  if (!f.eps_grid.empty()) cfg.eps_grid = combilab::parse_eps_grid(f.eps_grid);
  if (!f.vector.empty()) {
    cfg.vector = parse_vector(f.vector);
    cfg.n = static_cast<int>(cfg.vector.size());
  }
  cfg.format = f.format == "json" ? combilab::OutputFormat::json : combilab::OutputFormat::csv;
  cfg.mode = f.mode == "exhaustive" ? combilab::RunMode::exhaustive : combilab::RunMode::montecarlo;
  cfg.validate();
  return cfg;
}

void emit(const combilab::ExperimentResult& result, const std::string& command_line) {
  if (result.config.out) {
    combilab::write_result_files(result, command_line);
  } else if (result.config.format == combilab::OutputFormat::json) {
    std::cout << combilab::to_json(result, command_line);
  } else {
    combilab::write_summary_csv(std::cout, result);
  }
  for (const auto& [name, value] : result.metrics) {
    std::cerr << name << " = " << combilab::format_double(value) << '\n';
  }
  for (const auto& c : result.checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on random row-regular 0/1 matrices"};
  app.require_subcommand(1);

  std::string command_line;
  for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);

  Flags f;
  combilab::PropertySuiteOptions verify_opts;
  auto* sample = app.add_subcommand("sample", "draw row-regular matrices");
  auto* svmin = app.add_subcommand("svmin", "smallest singular values of random matrices");
  auto* singularity = app.add_subcommand("singularity", "singularity census (exact arithmetic)");
  auto* tail = app.add_subcommand("tail", "P{s_n <= eps / sqrt(n)} over an eps grid");
  auto* distance = app.add_subcommand("distance", "distance of the last row to the span of the others");
  auto* clcd = app.add_subcommand("clcd", "CLCD of a vector's difference vector");
  auto* smallball = app.add_subcommand("smallball", "small-ball probabilities against the bound shape");
  auto* inequalities = app.add_subcommand("inequalities", "Monte Carlo checks of the tail inequalities");
  auto* verify = app.add_subcommand("verify", "run the property suite");
  auto* calibrate = app.add_subcommand("calibrate-esseen", "fit C_E on a corpus of random laws");
  std::uint64_t calib_seed = 1;
  int calib_laws = 200;
  calibrate->add_option("--seed", calib_seed, "corpus seed")->capture_default_str();
  calibrate->add_option("--laws", calib_laws, "corpus size")->capture_default_str();

  for (auto* cmd : {sample, svmin, singularity, tail, distance, clcd, smallball, inequalities}) {
    add_common(cmd, f);
  }
  for (auto* cmd : {tail, distance, clcd, smallball, inequalities}) add_experiment(cmd, f);
  for (auto* cmd : {singularity, tail}) {
    cmd->add_option("--mode", f.mode, "montecarlo or exhaustive")
        ->check(CLI::IsMember({"montecarlo", "exhaustive"}))
        ->capture_default_str();
  }
  for (auto* cmd : {clcd, smallball}) {
    cmd->add_option("--vector", f.vector, "comma-separated coefficients (overrides --n)");
  }
  verify->add_option("--seed", verify_opts.seed, "seed")->capture_default_str();
  verify->add_option("--threads", verify_opts.threads, "worker threads")->capture_default_str();
  verify->add_flag("--quick", verify_opts.quick, "smaller corpora");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (verify->parsed()) {
      bool ok = true;
      for (const auto& c : combilab::run_property_suite(verify_opts)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok &= c.passed;
      }
      return ok ? 0 : kVerifyFailure;
    }
    if (calibrate->parsed()) {
      std::vector<combilab::AtomicDistribution> laws;
      for (int i = 0; i < calib_laws; ++i) {
        auto rng = combilab::substream(calib_seed, static_cast<std::uint64_t>(i));
        laws.push_back(combilab::random_atomic_law(rng));
      }
      std::vector<double> grid;
      for (int e = 1; e <= 10; ++e) grid.push_back(0.1 * e);
      std::cout << "C_E = " << combilab::format_double(combilab::calibrate_esseen_constant(laws, grid))
                << '\n';
      return 0;
    }
    const std::pair<CLI::App*, combilab::ExperimentResult (*)(const combilab::ExperimentConfig&)>
        table[] = {{sample, combilab::run_sample},
                   {svmin, combilab::run_svmin},
                   {singularity, combilab::run_singularity_experiment},
                   {tail, combilab::run_tail_experiment},
                   {distance, combilab::run_distance_experiment},
                   {clcd, combilab::run_clcd},
                   {smallball, combilab::run_smallball_validation},
                   {inequalities, combilab::run_inequality_suite}};
    for (const auto& [cmd, run] : table) {
      if (cmd->parsed()) emit(run(finish(f, cmd->get_name())), command_line);
    }
    return 0;
  } catch (const combilab::ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kResourceError;
  } catch (const combilab::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
}
