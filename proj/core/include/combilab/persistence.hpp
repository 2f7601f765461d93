#pragma once

// CSV and JSON serialization of experiment results. Floats are written with
// 17 significant digits so files round-trip exactly.

#include <ostream>
#include <string>

#include "combilab/harness.hpp"

namespace combilab {

std::string format_double(double x);

/// Header: experiment,n,d,trial,statistic,value,flag
void write_records_csv(std::ostream& os, const ExperimentResult& result);

/// Header: experiment,n,eps,estimate,ci_low,ci_high,trials
void write_summary_csv(std::ostream& os, const ExperimentResult& result);

/// One object with config, records, summary, metrics, checks and arrays.
std::string to_json(const ExperimentResult& result, const std::string& command_line = {});

/// "runs.csv" -> "runs.summary.csv".
std::string summary_path_for(const std::string& records_path);

/// Writes the result in cfg.format to cfg.out (records + summary file for
/// CSV). Throws std::runtime_error on I/O failure.
void write_result_files(const ExperimentResult& result, const std::string& command_line = {});

}  // namespace combilab
