#include "combilab/persistence.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace combilab {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

const char* mode_name(RunMode m) { return m == RunMode::exhaustive ? "exhaustive" : "montecarlo"; }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_records_csv(std::ostream& os, const ExperimentResult& result) {
  const auto& c = result.config;
  os << "experiment,n,d,trial,statistic,value,flag\n";
  for (const auto& r : result.records) {
    os << csv_field(c.experiment) << ',' << c.n << ',' << c.resolved_d() << ',' << r.trial << ','
       << csv_field(r.statistic) << ',' << format_double(r.value) << ',' << csv_field(r.flag)
       << '\n';
  }
}

void write_summary_csv(std::ostream& os, const ExperimentResult& result) {
  os << "experiment,n,eps,estimate,ci_low,ci_high,trials\n";
  for (const auto& s : result.summary) {
    os << csv_field(s.experiment) << ',' << s.n << ',' << format_double(s.eps) << ','
       << format_double(s.estimate) << ',' << format_double(s.ci_low) << ','
       << format_double(s.ci_high) << ',' << s.trials << '\n';
  }
}

std::string to_json(const ExperimentResult& result, const std::string& command_line) {
  using nlohmann::ordered_json;
  const auto& c = result.config;
  ordered_json config = {
      {"experiment", c.experiment}, {"n", c.n},          {"d", c.resolved_d()},
      {"m", c.resolved_m()},        {"trials", c.trials}, {"seed", c.seed},
      {"delta", number(c.delta)},   {"rho", number(c.rho)},
      {"alpha", number(c.resolved_alpha())},
      {"gamma", number(c.gamma)},   {"horizon", number(c.horizon)},
      {"threads", c.threads},       {"mode", mode_name(c.mode)},
  };
  ordered_json grid = ordered_json::array();
  for (double e : c.eps_grid) grid.push_back(number(e));
  config["eps_grid"] = grid;

  ordered_json records = ordered_json::array();
  for (const auto& r : result.records) {
    records.push_back({{"trial", r.trial}, {"statistic", r.statistic}, {"value", number(r.value)},
                       {"flag", r.flag}});
  }
  ordered_json summary = ordered_json::array();
  for (const auto& s : result.summary) {
    summary.push_back({{"experiment", s.experiment}, {"n", s.n}, {"eps", number(s.eps)},
                       {"estimate", number(s.estimate)}, {"ci_low", number(s.ci_low)},
                       {"ci_high", number(s.ci_high)}, {"trials", s.trials}});
  }
  ordered_json metrics = ordered_json::object();
  for (const auto& [k, v] : result.metrics) metrics[k] = number(v);
  ordered_json checks = ordered_json::array();
  for (const auto& ch : result.checks) {
    checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
  }
  ordered_json arrays = ordered_json::object();
  for (const auto& [k, v] : result.arrays) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(number(x));
    arrays[k] = a;
  }
  ordered_json doc = {{"command", command_line}, {"config", config},  {"metrics", metrics},
                      {"checks", checks},        {"arrays", arrays},  {"summary", summary},
                      {"records", records}};
  return doc.dump(2) + "\n";
}

std::string summary_path_for(const std::string& records_path) {
  const auto slash = records_path.find_last_of('/');
  const auto dot = records_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return records_path + ".summary.csv";
  }
  return records_path.substr(0, dot) + ".summary" + records_path.substr(dot);
}

void write_result_files(const ExperimentResult& result, const std::string& command_line) {
  const auto& cfg = result.config;
  if (!cfg.out) throw std::runtime_error("no output path configured");
  auto open = [](const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    return f;
  };
  if (cfg.format == OutputFormat::json) {
    auto f = open(*cfg.out);
    f << to_json(result, command_line);
    if (!f) throw std::runtime_error("write failed: " + *cfg.out);
    return;
  }
  {
    auto f = open(*cfg.out);
    write_records_csv(f, result);
    if (!f) throw std::runtime_error("write failed: " + *cfg.out);
  }
  const auto spath = summary_path_for(*cfg.out);
  auto f = open(spath);
  write_summary_csv(f, result);
  if (!f) throw std::runtime_error("write failed: " + spath);
}

}  // namespace combilab
