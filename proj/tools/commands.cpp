#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>

#include "qrem/qrem.h"

namespace qrem::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check(qrem_status s) {
  if (s != QREM_OK) throw StatusError(s, std::string(qrem_status_name(s)) + ": " + qrem_last_error());
}

class Model {
 public:
  explicit Model(const std::string& spec) { check(qrem_model_parse(spec.c_str(), &p_)); }
  ~Model() { qrem_model_free(p_); }
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  const qrem_model* get() const { return p_; }
  std::string spec() const {
    size_t need = 0;
    check(qrem_model_spec(p_, nullptr, 0, &need));
    std::string s(need, '\0');
    check(qrem_model_spec(p_, s.data(), s.size(), &need));
    s.resize(need - 1);
    return s;
  }

 private:
  qrem_model* p_ = nullptr;
};

class Ladder {
 public:
  Ladder(const Model& m, int q, int depth) { check(qrem_ladder_build(m.get(), q, depth, &p_)); }
  ~Ladder() { qrem_ladder_free(p_); }
  Ladder(const Ladder&) = delete;
  Ladder& operator=(const Ladder&) = delete;
  const qrem_ladder* get() const { return p_; }
  int depth() const { return qrem_ladder_depth(p_); }
  double tail(int n) const {
    double v = 0.0;
    check(qrem_ladder_prob_n_le(p_, n, &v));
    return 1.0 - v;
  }
  std::vector<qrem_envelope_segment> envelope(int n) const {
    size_t need = 0;
    check(qrem_ladder_envelope(p_, n, nullptr, 0, &need));
    std::vector<qrem_envelope_segment> segs(need);
    check(qrem_ladder_envelope(p_, n, segs.data(), segs.size(), &need));
    return segs;
  }

 private:
  qrem_ladder* p_ = nullptr;
};

std::string require_model(const RunConfig& c) {
  if (!c.model || c.model->empty()) throw UsageError(c.command + ": --model is required");
  return *c.model;
}

/// --q, else the base of a Benford model, else 2.
int base_for(const RunConfig& c, const std::string& spec) {
  if (c.q) return *c.q;
  const std::string prefix = "benford:q=";
  if (spec.rfind(prefix, 0) == 0) {
    try {
      return std::stoi(spec.substr(prefix.size()));
    } catch (const std::exception&) {
    }
  }
  return 2;
}

std::uint64_t seed_of(const RunConfig& c) { return c.seed.value_or(1); }

int reps_of(const RunConfig& c) {
  if (c.reps) {
    if (*c.reps < 1) throw UsageError("--reps must be positive");
    return *c.reps;
  }
  return c.full.value_or(false) ? 10000 : 2000;
}

int single_n(const RunConfig& c, int fallback) {
  if (!c.n) return fallback;
  const auto ns = parse_int_list(*c.n);
  if (ns.size() != 1) throw UsageError(c.command + ": --n takes a single depth here");
  return ns.front();
}

int positive(std::optional<int> v, int fallback, const char* flag) {
  const int x = v.value_or(fallback);
  if (x < 1) throw UsageError(std::string(flag) + " must be positive");
  return x;
}

DataSeries make_series(const std::string& name, const RunConfig& c) {
  DataSeries d;
  d.name = name;
  d.add_meta("command", c.command);
  d.add_meta("version", qrem_version());
  return d;
}

std::string num(double v) { return format_value(v); }

qrem_xi_rule xi_of(const RunConfig& c) {
  const std::string s = c.xi.value_or("midpoint");
  if (s == "left") return QREM_XI_LEFT;
  if (s == "midpoint") return QREM_XI_MIDPOINT;
  if (s == "right") return QREM_XI_RIGHT;
  if (s == "cell_sup") return QREM_XI_CELL_SUP;
  throw UsageError("--xi must be left, midpoint, right or cell_sup");
}

double find_bound(const qrem_tv_report& r, const std::string& name) {
  for (size_t i = 0; i < r.bound_count; ++i) {
    if (name == r.bounds[i].name) return r.bounds[i].value;
  }
  return kNaN;
}

double rejection(const Model& m, int q, int n, int k, int samples, int reps, double alpha, std::uint64_t seed,
                 int threads, double* se) {
  qrem_gof_config cfg;
  qrem_gof_config_init(&cfg);
  cfg.model = m.get();
  cfg.q = q;
  cfg.n = n;
  cfg.k = k;
  cfg.sample_size = samples;
  cfg.replications = reps;
  cfg.alpha = alpha;
  cfg.seed = seed;
  cfg.threads = threads;
  qrem_gof_result r;
  check(qrem_gof_rejection_rate(&cfg, &r));
  if (se) *se = r.standard_error;
  return r.rejection_rate;
}

std::string label_of(double v) { return num(v); }

}  // namespace

// ---------------------------------------------------------------------------

DataSeries run_pdf(const RunConfig& c) {
  const Model m(require_model(c));
  const int q = base_for(c, m.spec());
  const int n = single_n(c, 0);
  const int grid = positive(c.grid, 1000, "--grid");
  auto d = make_series("pdf", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", std::to_string(q));
  d.add_meta("n", std::to_string(n));
  d.add_meta("seed", std::to_string(seed_of(c)));
  d.add_meta("grid", "(i+1/2)/" + std::to_string(grid));
  d.columns = {"x", "f_n"};
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    double v = 0.0;
    check(qrem_remainder_pdf(m.get(), q, n, x, &v));
    d.add_row({x, v});
  }
  return d;
}

DataSeries run_cdf(const RunConfig& c) {
  const Model m(require_model(c));
  const int q = base_for(c, m.spec());
  const int n = single_n(c, 0);
  const int grid = positive(c.grid, 1000, "--grid");
  auto d = make_series("cdf", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", std::to_string(q));
  d.add_meta("n", std::to_string(n));
  d.add_meta("seed", std::to_string(seed_of(c)));
  d.add_meta("grid", "i/" + std::to_string(grid));
  d.columns = {"x", "F_n"};
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    double v = 0.0;
    check(qrem_remainder_cdf(m.get(), q, n, x, &v));
    d.add_row({x, v});
  }
  return d;
}

DataSeries run_tv_curve(const RunConfig& c) {
  const Model m(require_model(c));
  const int q = base_for(c, m.spec());
  const auto ns = parse_int_list(c.n.value_or("0..10"));
  const int max_n = *std::max_element(ns.begin(), ns.end());
  if (*std::min_element(ns.begin(), ns.end()) < 0) throw UsageError("--n must be nonnegative");
  const double tol = c.tolerance.value_or(1e-10);
  const auto xi = xi_of(c);

  auto d = make_series("tv-curve", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", std::to_string(q));
  d.add_meta("n", c.n.value_or("0..10"));
  d.add_meta("seed", std::to_string(seed_of(c)));
  d.add_meta("tolerance", num(tol));
  d.add_meta("xi", c.xi.value_or("midpoint"));

  // Coupling columns need a ladder; its depth covers the requested n within budget.
  std::unique_ptr<Ladder> ladder;
  int depth = c.depth.value_or(max_n);
  if (!c.depth) {
    while (depth > 0 && std::pow(static_cast<double>(q), depth) > static_cast<double>(1 << 20)) --depth;
  }
  try {
    ladder = std::make_unique<Ladder>(m, q, depth);
    d.add_meta("depth", std::to_string(depth));
  } catch (const StatusError& e) {
    d.add_meta("coupling", std::string("unavailable (") + e.what() + ")");
  }
  std::unique_ptr<Model> proxy;
  if (c.proxy) {
    proxy = std::make_unique<Model>(*c.proxy);
    d.add_meta("proxy", proxy->spec());
  }

  d.columns = {"n", "exact", "bound_gradient_global", "bound_gradient_percell", "bound_second_order",
               "bound_coupling", "bound_refined", "w1_quarter"};
  if (proxy) d.columns.push_back("bound_mixed");
  for (int n : ns) {
    qrem_tv_options opts;
    qrem_tv_options_init(&opts);
    opts.ladder = ladder ? ladder->get() : nullptr;
    opts.proxy = proxy ? proxy->get() : nullptr;
    opts.xi_rule = xi;
    opts.tolerance = tol;
    qrem_tv_report r;
    check(qrem_tv_report_compute(m.get(), q, n, &opts, &r));
    std::vector<double> row{static_cast<double>(n),
                            r.has_exact ? r.exact : kNaN,
                            find_bound(r, "gradient_global"),
                            find_bound(r, "gradient_percell"),
                            r.has_second_order ? r.second_order_leading : kNaN,
                            find_bound(r, "coupling"),
                            find_bound(r, "refined"),
                            r.has_wasserstein ? r.w_quarter : kNaN};
    if (proxy) row.push_back(find_bound(r, "mixed"));
    d.add_row(std::move(row));
  }
  return d;
}

namespace {

DataSeries coupling_samples(const RunConfig& c, const Model& m, int q, int depth, int count) {
  const Ladder ladder(m, q, depth);
  auto d = make_series("coupling-sample", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", std::to_string(q));
  d.add_meta("depth", std::to_string(depth));
  d.add_meta("seed", std::to_string(seed_of(c)));
  d.add_meta("count", std::to_string(count));
  d.add_meta("note", "N=-1 marks a draw from the residual branch (N > depth); k is the 1-based cell of level N");
  d.columns = {"x", "N", "k"};
  std::vector<qrem_sample> s(static_cast<size_t>(count));
  check(qrem_ladder_sample(ladder.get(), seed_of(c), 0, s.size(), s.data()));
  for (const auto& v : s) {
    d.add_row({v.x, v.has_n ? static_cast<double>(v.n) : -1.0, v.has_n ? static_cast<double>(v.k + 1) : kNaN});
  }
  return d;
}

}  // namespace

DataSeries run_coupling(const RunConfig& c) {
  const Model m(require_model(c));
  const int q = base_for(c, m.spec());
  const int depth = c.depth.value_or(qrem_default_depth(q));
  if (depth < 0) throw UsageError("--depth must be nonnegative");

  if (c.count) return coupling_samples(c, m, q, depth, positive(c.count, 1, "--sample"));

  const Ladder ladder(m, q, depth);
  auto d = make_series("coupling", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", std::to_string(q));
  d.add_meta("depth", std::to_string(depth));
  d.add_meta("seed", std::to_string(seed_of(c)));

  if (c.envelope) {
    const int n = *c.envelope;
    d.name = "coupling-envelope";
    d.add_meta("n", std::to_string(n));
    d.add_meta("note", "upper bound on P(N>n|X=x); linear between consecutive knots of a cell");
    d.columns = {"x", "upper_bound"};
    for (const auto& s : ladder.envelope(n)) {
      d.add_row({s.a, s.left});
      d.add_row({s.b, s.right});
    }
    return d;
  }
  if (c.cond) {
    const int n = *c.cond;
    const int grid = positive(c.grid, 10000, "--grid");
    d.name = "coupling-conditional";
    d.add_meta("n", std::to_string(n));
    d.add_meta("grid", "(i+1/2)/" + std::to_string(grid));
    d.columns = {"x", "cond_tail"};
    for (int i = 0; i < grid; ++i) {
      const double x = (i + 0.5) / grid;
      double v = 0.0;
      check(qrem_ladder_cond_prob_n_le(ladder.get(), x, n, &v));
      d.add_row({x, 1.0 - v});
    }
    return d;
  }
  d.name = "coupling-tail";
  d.columns = {"n", "tail", "cumulative"};
  for (int n = 0; n <= depth; ++n) {
    const double t = ladder.tail(n);
    d.add_row({static_cast<double>(n), t, 1.0 - t});
  }
  return d;
}

DataSeries run_sample(const RunConfig& c) {
  const Model m(require_model(c));
  const int q = base_for(c, m.spec());
  const int count = positive(c.count, 1000, "--count");
  const std::string method = c.method.value_or("inverse");
  if (method == "coupling") return coupling_samples(c, m, q, c.depth.value_or(qrem_default_depth(q)), count);
  if (method != "inverse") throw UsageError("--method must be inverse or coupling");
  auto d = make_series("sample", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", std::to_string(q));
  d.add_meta("seed", std::to_string(seed_of(c)));
  d.add_meta("count", std::to_string(count));
  d.add_meta("method", method);
  d.columns = {"x"};
  std::vector<double> xs(static_cast<size_t>(count));
  check(qrem_model_sample(m.get(), seed_of(c), 0, xs.size(), xs.data()));
  for (double x : xs) d.add_row({x});
  return d;
}

DataSeries run_gof(const RunConfig& c) {
  const Model m(require_model(c));
  const int q = base_for(c, m.spec());
  const int n = single_n(c, 1);
  const int k = positive(c.k, 1, "--k");
  const int samples = positive(c.samples, 1000, "--samples");
  const int reps = reps_of(c);
  const double alpha = c.alpha.value_or(0.05);

  qrem_gof_config cfg;
  qrem_gof_config_init(&cfg);
  cfg.model = m.get();
  cfg.q = q;
  cfg.n = n;
  cfg.k = k;
  cfg.sample_size = samples;
  cfg.replications = reps;
  cfg.alpha = alpha;
  cfg.seed = seed_of(c);
  cfg.threads = c.threads.value_or(0);
  qrem_gof_result r;
  check(qrem_gof_rejection_rate(&cfg, &r));
  if (r.low_expected_count) std::cerr << "warning: expected count per category below 5\n";

  auto d = make_series("gof", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", std::to_string(q));
  d.add_meta("n", std::to_string(n));
  d.add_meta("seed", std::to_string(cfg.seed));
  d.columns = {"n", "k", "samples", "replications", "alpha", "rejection_rate", "rejections", "standard_error",
               "statistic_mean", "statistic_sd"};
  d.add_row({static_cast<double>(n), static_cast<double>(k), static_cast<double>(samples), static_cast<double>(reps),
             alpha, r.rejection_rate, static_cast<double>(r.rejections), r.standard_error, r.statistic_mean,
             r.statistic_sd});
  return d;
}

DataSeries run_tables(const RunConfig& c) {
  const std::string which = c.which.value_or("table1");
  if (which != "table1" && which != "table2") throw UsageError("--which must be table1 or table2");
  const int q = c.q.value_or(2);
  const int reps = reps_of(c);
  const int samples = positive(c.samples, 1000, "--samples");
  const double alpha = c.alpha.value_or(0.05);
  const std::uint64_t seed = seed_of(c);
  const int threads = c.threads.value_or(0);
  const auto ns = parse_int_list(c.n.value_or("1..8"));

  auto d = make_series(which, c);
  d.add_meta("q", std::to_string(q));
  d.add_meta("samples", std::to_string(samples));
  d.add_meta("replications", std::to_string(reps));
  d.add_meta("alpha", num(alpha));
  d.add_meta("seed", std::to_string(seed));
  d.add_meta("cell_seed", "seed + 1000*row + n");

  std::vector<double> params;
  std::vector<std::string> specs;
  std::vector<int> ks;
  if (which == "table1") {
    d.add_meta("model", "benford:q=" + std::to_string(q));
    for (int k : c.k ? std::vector<int>{*c.k} : std::vector<int>{1, 2, 3}) {
      params.push_back(k);
      specs.push_back("benford:q=" + std::to_string(q));
      ks.push_back(k);
    }
    d.columns = {"k"};
  } else {
    const int k = positive(c.k, 3, "--k");
    d.add_meta("model", "power:alpha=<row>");
    d.add_meta("k", std::to_string(k));
    for (double a : {0.1, 0.5, 1.5, 5.0}) {
      params.push_back(a);
      specs.push_back("power:alpha=" + label_of(a));
      ks.push_back(k);
    }
    d.columns = {"alpha"};
  }
  for (int n : ns) d.columns.push_back("n" + std::to_string(n));
  d.columns.push_back("se_max");

  for (size_t row = 0; row < params.size(); ++row) {
    const Model m(specs[row]);
    std::vector<double> out{params[row]};
    double se_max = 0.0;
    for (int n : ns) {
      double se = 0.0;
      out.push_back(rejection(m, q, n, ks[row], samples, reps, alpha, seed + 1000 * row + static_cast<unsigned>(n),
                              threads, &se));
      se_max = std::max(se_max, se);
    }
    out.push_back(se_max);
    d.add_row(std::move(out));
  }
  return d;
}

// ---------------------------------------------------------------------------

namespace {

DataSeries figure1_left(const RunConfig& c) {
  auto d = make_series("figure1_left", c);
  d.add_meta("model", "benford:q=<column>");
  d.add_meta("quantity", "P(N>n)");
  const std::vector<int> qs{2, 3, 5, 10};
  std::vector<std::unique_ptr<Ladder>> ladders;
  std::vector<std::unique_ptr<Model>> models;
  std::string depths;
  int max_depth = 0;
  d.columns = {"n"};
  for (int q : qs) {
    models.push_back(std::make_unique<Model>("benford:q=" + std::to_string(q)));
    const int depth = qrem_default_depth(q);
    ladders.push_back(std::make_unique<Ladder>(*models.back(), q, depth));
    depths += (depths.empty() ? "" : ";") + std::to_string(depth);
    max_depth = std::max(max_depth, depth);
    d.columns.push_back("q" + std::to_string(q));
  }
  d.add_meta("depths", depths);
  for (int n = 0; n <= max_depth; ++n) {
    std::vector<double> row{static_cast<double>(n)};
    for (const auto& l : ladders) row.push_back(n <= l->depth() ? l->tail(n) : kNaN);
    d.add_row(std::move(row));
  }
  return d;
}

DataSeries figure1_middle(const RunConfig& c) {
  const Model m("benford:q=10");
  const Ladder ladder(m, 10, 1);
  const int grid = 10000;
  auto d = make_series("figure1_middle", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", "10");
  d.add_meta("quantity", "P(N>1|X=x)");
  d.add_meta("grid", "(i+1/2)/" + std::to_string(grid));
  d.columns = {"x", "cond_tail"};
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    double v = 0.0;
    check(qrem_ladder_cond_prob_n_le(ladder.get(), x, 1, &v));
    d.add_row({x, 1.0 - v});
  }
  return d;
}

DataSeries figure1_right(const RunConfig& c) {
  const Model m("benford:q=10");
  const Ladder ladder(m, 10, 3);
  const int grid = 10000;
  auto d = make_series("figure1_right", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", "10");
  d.add_meta("quantity", "upper envelope of P(N>n|X=x)");
  d.add_meta("grid", "(i+1/2)/" + std::to_string(grid));
  d.columns = {"x"};
  std::vector<std::vector<qrem_envelope_segment>> envs;
  for (int n = 0; n <= 3; ++n) {
    envs.push_back(ladder.envelope(n));
    d.columns.push_back("n" + std::to_string(n));
  }
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    std::vector<double> row{x};
    for (const auto& segs : envs) {
      const auto it = std::upper_bound(segs.begin(), segs.end(), x,
                                       [](double v, const qrem_envelope_segment& s) { return v < s.a; });
      const auto& s = *std::prev(it);
      row.push_back(s.left + (s.right - s.left) * (x - s.a) / (s.b - s.a));
    }
    d.add_row(std::move(row));
  }
  return d;
}

DataSeries figure2_left(const RunConfig& c) {
  auto d = make_series("figure2_left", c);
  d.add_meta("model", "benford:q=<column>");
  d.add_meta("quantity", "P(X_n=0)-P(X_n=q-1)");
  const std::vector<int> qs{2, 3, 5, 10};
  d.columns = {"n"};
  for (int q : qs) d.columns.push_back("q" + std::to_string(q));
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> row{static_cast<double>(n)};
    for (int q : qs) {
      double v = 0.0;
      check(qrem_benford_digit_gap(q, n, &v));
      row.push_back(v);
    }
    d.add_row(std::move(row));
  }
  return d;
}

DataSeries figure2_right(const RunConfig& c) {
  const Model m("benford:q=2");
  const int grid = 1000;
  auto d = make_series("figure2_right", c);
  d.add_meta("model", m.spec());
  d.add_meta("q", "2");
  d.add_meta("quantity", "f_n(x)");
  d.add_meta("grid", "(i+1/2)/" + std::to_string(grid));
  d.columns = {"x"};
  for (int n = 0; n <= 5; ++n) d.columns.push_back("n" + std::to_string(n));
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    std::vector<double> row{x};
    for (int n = 0; n <= 5; ++n) {
      double v = 0.0;
      check(qrem_remainder_pdf(m.get(), 2, n, x, &v));
      row.push_back(v);
    }
    d.add_row(std::move(row));
  }
  return d;
}

const std::vector<double> kFigure3Alphas{0.1, 0.5, 1.0, 1.5, 2.0, 5.0, 10.0};

std::map<double, std::vector<double>> figure3_tv() {
  std::map<double, std::vector<double>> tv;
  for (double a : kFigure3Alphas) {
    const Model m("power:alpha=" + label_of(a));
    for (int n = 0; n <= 10; ++n) {
      double v = 0.0;
      check(qrem_tv_exact_crossing(m.get(), 2, n, &v, nullptr));
      tv[a].push_back(v);
    }
  }
  return tv;
}

DataSeries figure3_ab(const RunConfig& c, const std::map<double, std::vector<double>>& tv, bool log_scale) {
  auto d = make_series(log_scale ? "figure3_b" : "figure3_a", c);
  d.add_meta("model", "power:alpha=<column>");
  d.add_meta("q", "2");
  d.add_meta("quantity", log_scale ? "ln d_TV(P_n,mu)" : "d_TV(P_n,mu)");
  d.add_meta("method", "crossing");
  d.columns = {"n"};
  for (double a : kFigure3Alphas) d.columns.push_back("alpha_" + label_of(a));
  for (int n = 0; n <= 10; ++n) {
    std::vector<double> row{static_cast<double>(n)};
    for (double a : kFigure3Alphas) {
      const double v = tv.at(a)[static_cast<size_t>(n)];
      row.push_back(log_scale ? (v > 0.0 ? std::log(v) : kNaN) : v);
    }
    d.add_row(std::move(row));
  }
  return d;
}

DataSeries figure3_c(const RunConfig& c, const std::map<double, std::vector<double>>& tv) {
  auto d = make_series("figure3_c", c);
  d.add_meta("model", "power:alpha=<column>");
  d.add_meta("q", "2");
  d.add_meta("quantity", "ln((1/8) q^-2n sum_j sup_{I_j}|f'|) - ln d_TV");
  d.add_meta("xi", "cell_sup");
  const std::vector<double> alphas{2.0, 5.0, 10.0};
  d.columns = {"n"};
  for (double a : alphas) d.columns.push_back("alpha_" + label_of(a));
  for (int n = 1; n <= 10; ++n) {
    std::vector<double> row{static_cast<double>(n)};
    for (double a : alphas) {
      const Model m("power:alpha=" + label_of(a));
      double lead = 0.0;
      check(qrem_tv_bound_second_order(m.get(), 2, n, QREM_XI_CELL_SUP, &lead, nullptr));
      row.push_back(std::log(lead) - std::log(tv.at(a)[static_cast<size_t>(n)]));
    }
    d.add_row(std::move(row));
  }
  return d;
}

std::string render(const DataSeries& d, const std::string& format) {
  if (format == "csv") return d.to_csv();
  if (format == "json") return d.to_json();
  throw UsageError("--format must be csv or json");
}

}  // namespace

std::vector<std::string> run_reproduce_all(const RunConfig& c) {
  const std::string outdir = c.outdir.value_or(c.output.value_or("."));
  const std::string format = c.format.value_or("csv");
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw IoError("cannot create " + outdir + ": " + ec.message());

  std::vector<std::string> written;
  auto emit = [&](const DataSeries& d) {
    const auto path = (std::filesystem::path(outdir) / (d.name + "." + format)).string();
    write_file(path, render(d, format));
    written.push_back(path);
  };
  emit(figure1_left(c));
  emit(figure1_middle(c));
  emit(figure1_right(c));
  emit(figure2_left(c));
  emit(figure2_right(c));
  const auto tv = figure3_tv();
  emit(figure3_ab(c, tv, false));
  emit(figure3_ab(c, tv, true));
  emit(figure3_c(c, tv));
  RunConfig t = c;
  t.q.reset();
  t.k.reset();
  t.n.reset();
  t.which = "table1";
  emit(run_tables(t));
  t.which = "table2";
  emit(run_tables(t));
  return written;
}

void dispatch(const RunConfig& c) {
  if (c.command == "reproduce-all") {
    for (const auto& p : run_reproduce_all(c)) std::cout << p << '\n';
    return;
  }
  DataSeries d;
  if (c.command == "pdf") d = run_pdf(c);
  else if (c.command == "cdf") d = run_cdf(c);
  else if (c.command == "tv-curve") d = run_tv_curve(c);
  else if (c.command == "coupling") d = run_coupling(c);
  else if (c.command == "sample") d = run_sample(c);
  else if (c.command == "gof") d = run_gof(c);
  else if (c.command == "tables") d = run_tables(c);
  else throw UsageError("unknown command '" + c.command + "'");

  const std::string text = render(d, c.format.value_or("csv"));
  if (c.output && *c.output != "-") write_file(*c.output, text);
  else std::cout << text;
}

}  // namespace qrem::cli
