#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "commands.hpp"
#include "qrem/qrem.h"

using qrem::cli::RunConfig;

namespace {

template <typename T>
void opt(CLI::App* app, const std::string& flag, std::optional<T>& field, const std::string& help) {
  app->add_option_function<T>(flag, [&field](const T& v) { field = v; }, help);
}

void flag(CLI::App* app, const std::string& name, std::optional<bool>& field, const std::string& help) {
  app->add_flag_function(name, [&field](std::int64_t count) { field = count > 0; }, help);
}

void common(CLI::App* app, RunConfig& c, std::string& config_path) {
  app->add_option("--config", config_path, "JSON run configuration; explicit flags win");
  opt(app, "--model", c.model, "model spec, e.g. benford:q=10 or power:alpha=0.5");
  opt(app, "--q", c.q, "base q >= 2");
  opt(app, "--seed", c.seed, "RNG seed (default 1)");
  opt(app, "--output,-o", c.output, "output file (default stdout)");
  opt(app, "--format", c.format, "csv or json");
  opt(app, "--threads", c.threads, "worker threads (default QREM_THREADS or hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Base-q remainder law toolkit"};
  app.set_version_flag("--version", std::string(qrem_version()));
  app.require_subcommand(1);

  RunConfig c;
  std::string config_path;

  auto* pdf = app.add_subcommand("pdf", "density f_n of the remainder on a grid");
  auto* cdf = app.add_subcommand("cdf", "distribution F_n of the remainder on a grid");
  for (auto* s : {pdf, cdf}) {
    common(s, c, config_path);
    opt(s, "--n", c.n, "depth n");
    opt(s, "--grid", c.grid, "grid size (default 1000)");
  }

  auto* tv = app.add_subcommand("tv-curve", "exact total variation and bounds against n");
  common(tv, c, config_path);
  opt(tv, "--n", c.n, "depth list, e.g. 0..10 or 1,2,5");
  opt(tv, "--depth", c.depth, "coupling ladder depth");
  opt(tv, "--tolerance", c.tolerance, "quadrature tolerance (default 1e-10)");
  opt(tv, "--xi", c.xi, "second-order rule: left, midpoint, right, cell_sup");
  opt(tv, "--proxy", c.proxy, "proxy density for the mixed bound");

  auto* coupling = app.add_subcommand("coupling", "stopping-depth coupling");
  common(coupling, c, config_path);
  opt(coupling, "--depth", c.depth, "truncation depth D");
  flag(coupling, "--tail", c.tail, "P(N>n) for n = 0..D (default)");
  opt(coupling, "--envelope", c.envelope, "upper envelope of P(N>n|X=x) at this n");
  opt(coupling, "--cond", c.cond, "P(N>n|X=x) on a grid at this n");
  opt(coupling, "--grid", c.grid, "grid size for --cond (default 10000)");
  opt(coupling, "--sample", c.count, "draw this many (X, N) pairs");

  auto* sample = app.add_subcommand("sample", "draw from the model");
  common(sample, c, config_path);
  opt(sample, "--count", c.count, "number of draws (default 1000)");
  opt(sample, "--method", c.method, "inverse or coupling");
  opt(sample, "--depth", c.depth, "ladder depth for --method coupling");

  auto* gof = app.add_subcommand("gof", "chi-square rejection rate for uniform digit blocks");
  common(gof, c, config_path);
  opt(gof, "--n", c.n, "first digit position n");
  opt(gof, "--k", c.k, "block length k");
  opt(gof, "--samples", c.samples, "sample size per replication (default 1000)");
  opt(gof, "--reps", c.reps, "replications (default 2000)");
  flag(gof, "--full", c.full, "10000 replications");
  opt(gof, "--alpha", c.alpha, "test level (default 0.05)");

  auto* tables = app.add_subcommand("tables", "rejection-rate tables");
  common(tables, c, config_path);
  opt(tables, "--which", c.which, "table1 or table2");
  opt(tables, "--n", c.n, "digit positions (default 1..8)");
  opt(tables, "--k", c.k, "block length override");
  opt(tables, "--samples", c.samples, "sample size per replication (default 1000)");
  opt(tables, "--reps", c.reps, "replications (default 2000)");
  flag(tables, "--full", c.full, "10000 replications");
  opt(tables, "--alpha", c.alpha, "test level (default 0.05)");

  auto* all = app.add_subcommand("reproduce-all", "write every figure and table series");
  common(all, c, config_path);
  opt(all, "--outdir", c.outdir, "output directory");
  opt(all, "--reps", c.reps, "replications for the tables (default 2000)");
  flag(all, "--full", c.full, "10000 replications for the tables");
  opt(all, "--samples", c.samples, "sample size per replication (default 1000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qrem::cli::kExitUsage;
  }

  for (auto* s : app.get_subcommands()) c.command = s->get_name();

  try {
    if (!config_path.empty()) {
      const RunConfig file = RunConfig::load(config_path);
      if (!file.command.empty() && file.command != c.command) {
        throw qrem::cli::UsageError("config is for '" + file.command + "', not '" + c.command + "'");
      }
      c.fill_from(file);
    }
    qrem::cli::dispatch(c);
    return 0;
  } catch (const qrem::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return qrem::cli::kExitUsage;
  } catch (const qrem::cli::StatusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qrem::cli::exit_code_for_status(e.status());
  } catch (const qrem::cli::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return qrem::cli::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return qrem::cli::kExitInternal;
  }
}
