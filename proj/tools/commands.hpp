#pragma once

#include <string>
#include <vector>

#include "cli_support.hpp"

namespace qrem::cli {

/// Library call failed; carries the qrem_status value.
class StatusError : public std::runtime_error {
 public:
  StatusError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

DataSeries run_pdf(const RunConfig& c);
DataSeries run_cdf(const RunConfig& c);
DataSeries run_tv_curve(const RunConfig& c);
DataSeries run_coupling(const RunConfig& c);
DataSeries run_sample(const RunConfig& c);
DataSeries run_gof(const RunConfig& c);
DataSeries run_tables(const RunConfig& c);

/// Writes every figure and table series into c.outdir; returns the file paths.
std::vector<std::string> run_reproduce_all(const RunConfig& c);

/// Runs one subcommand and writes its output (stdout when no --output).
void dispatch(const RunConfig& c);

}  // namespace qrem::cli
