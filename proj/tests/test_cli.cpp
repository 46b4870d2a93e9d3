#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cli_support.hpp"

namespace fs = std::filesystem;
using qrem::cli::DataSeries;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QREM_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qrem_cli_test_" + std::to_string(getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("exit codes per error family") {
  CHECK(run("").code == 2);                                        // no subcommand
  CHECK(run("pdf --model uniform --bogus 1").code == 2);           // unknown flag
  CHECK(run("pdf --model nonsense --n 1").code == 2);              // model parse
  CHECK(run("pdf --n 1").code == 2);                               // missing model
  CHECK(run("tv-curve --model uniform --xi sideways").code == 2);  // bad enum
  CHECK(run("pdf --model uniform --n 1 --q 1").code == 3);         // domain
  CHECK(run("pdf --model benford:q=2 --n 40").code == 4);          // budget
  CHECK(run("tv-curve --model 'pwc:q=3,m=1,w=0.5;1;1.5' --q 2 --n 1 --tolerance 1e-300").code == 5);
  CHECK(run("coupling --model power:alpha=2 --depth 2 --envelope 1").code == 6);  // shape
  CHECK(run("pdf --model uniform --n 1 -o /nonexistent/dir/out.csv").code == 7);  // io
  CHECK(run("coupling --model benford:q=10 --depth 2 --envelope 3").code == 9);   // depth
  CHECK(run("coupling --model 'pwc:q=2,m=1,w=0;2' --depth 1 --cond 1 --grid 10").code == 10);
  CHECK(run("pdf --model uniform --n 1 --grid 4").code == 0);
  CHECK(run("--help").code == 0);
}

TEST_CASE("tv-curve for power alpha=2") {
  const auto r = run("tv-curve --model power:alpha=2 --q 2 --n 0..10");
  REQUIRE(r.code == 0);
  const auto d = DataSeries::parse_csv(r.out);
  REQUIRE(d.rows.size() == 11);
  const auto col = d.column_index("exact");
  for (std::size_t i = 1; i < d.rows.size(); ++i) CHECK(d.rows[i][col] < d.rows[i - 1][col]);
  CHECK(d.meta("model") == "power:alpha=2");
  CHECK(d.meta("q") == "2");
  CHECK(d.meta("seed"));
  CHECK(d.meta("tolerance"));
  CHECK(d.meta("version"));
}

TEST_CASE("coupling tail decreases quickly") {
  const auto r = run("coupling --model benford:q=10 --tail --depth 3");
  REQUIRE(r.code == 0);
  const auto d = DataSeries::parse_csv(r.out);
  REQUIRE(d.rows.size() == 4);
  for (std::size_t i = 1; i < d.rows.size(); ++i) CHECK(d.rows[i][1] < 0.2 * d.rows[i - 1][1]);
}

TEST_CASE("seeded output is byte-identical") {
  for (const char* cmd : {"sample --model benford:q=10 --count 200", "sample --model power:alpha=0.5 --method coupling --count 200",
                          "gof --model benford:q=2 --n 2 --reps 50", "coupling --model benford:q=10 --sample 100"}) {
    CAPTURE(cmd);
    const auto a = run(std::string(cmd) + " --seed 7");
    const auto b = run(std::string(cmd) + " --seed 7");
    const auto c = run(std::string(cmd) + " --seed 8");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
  }
  // thread count does not change the bytes
  CHECK(run("gof --model benford:q=2 --n 2 --reps 60 --threads 1").out ==
        run("gof --model benford:q=2 --n 2 --reps 60 --threads 4").out);
}

TEST_CASE("config files") {
  const auto dir = scratch("config");
  const auto cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"command": "pdf", "model": "benford:q=10", "n": "2", "grid": 8})";
  const auto from_file = run("pdf --config " + cfg.string());
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == run("pdf --model benford:q=10 --n 2 --grid 8").out);
  // flags override the file
  CHECK(run("pdf --config " + cfg.string() + " --grid 4").out == run("pdf --model benford:q=10 --n 2 --grid 4").out);

  std::ofstream(dir / "bad.json") << R"({"model": "uniform", "colour": "red"})";
  CHECK(run("pdf --config " + (dir / "bad.json").string()).code == 2);
  std::ofstream(dir / "other.json") << R"({"command": "gof"})";
  CHECK(run("pdf --model uniform --config " + (dir / "other.json").string()).code == 2);
  CHECK(run("pdf --config " + (dir / "missing.json").string()).code == 7);
}

TEST_CASE("json format") {
  const auto r = run("cdf --model power:alpha=2 --n 1 --grid 4 --format json");
  REQUIRE(r.code == 0);
  const auto d = DataSeries::parse_json(r.out);
  REQUIRE(d.rows.size() == 5);
  CHECK(d.rows[2][1] == doctest::Approx(0.5 - 0.25 / 2));
  CHECK(run("cdf --model uniform --format xml").code == 2);
}

TEST_CASE("output file") {
  const auto dir = scratch("out");
  const auto path = dir / "pdf.csv";
  REQUIRE(run("pdf --model uniform --n 0 --grid 3 -o " + path.string()).code == 0);
  const auto d = DataSeries::parse_csv(slurp(path));
  CHECK(d.rows.size() == 3);
}

TEST_CASE("reproduce-all writes every series deterministically") {
  const auto a = scratch("all_a"), b = scratch("all_b");
  const auto ra = run("reproduce-all --reps 20 --outdir " + a.string());
  REQUIRE(ra.code == 0);
  REQUIRE(run("reproduce-all --reps 20 --outdir " + b.string()).code == 0);
  const std::vector<std::string> names{"figure1_left", "figure1_middle", "figure1_right", "figure2_left",
                                       "figure2_right", "figure3_a",      "figure3_b",     "figure3_c",
                                       "table1",        "table2"};
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) files += e.is_regular_file();
  CHECK(files == names.size());
  for (const auto& n : names) {
    CAPTURE(n);
    const auto text = slurp(a / (n + ".csv"));
    CHECK(text == slurp(b / (n + ".csv")));
    const auto d = DataSeries::parse_csv(text);
    CHECK(d.name == n);
    CHECK_FALSE(d.rows.empty());
  }
  const auto t1 = DataSeries::parse_csv(slurp(a / "table1.csv"));
  REQUIRE(t1.rows.size() == 3);
  for (const auto& row : t1.rows) CHECK(row[t1.column_index("n1")] == 1.0);
  const auto f1 = DataSeries::parse_csv(slurp(a / "figure1_left.csv"));
  CHECK(f1.rows.size() == 13);
}
