#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace qrem::cli {

int exit_code_for_status(int status) {
  switch (status) {
    case 0: return kExitOk;
    case 1: return kExitDomain;         // domain
    case 2: return kExitBudget;         // budget
    case 3: return kExitTolerance;      // tolerance
    case 4: return kExitUnsupported;    // unsupported
    case 5: return kExitUsage;          // parse
    case 6: return kExitIo;             // io
    case 7: return kExitNumerical;      // convergence
    case 8: return kExitNumerical;      // precision
    case 9: return kExitZeroDensity;    // zero density
    case 10: return kExitDepth;         // depth
    case 11: return kExitNumerical;     // rejection
    case 12: return kExitUnsupported;   // shape
    case 13: return kExitDomain;        // invalid argument
    default: return kExitInternal;
  }
}

// ---------------------------------------------------------------------------
// RunConfig

namespace {

template <class F>
void for_each_field(RunConfig& c, F&& f) {
  f("model", c.model);
  f("q", c.q);
  f("n", c.n);
  f("depth", c.depth);
  f("seed", c.seed);
  f("output", c.output);
  f("format", c.format);
  f("tolerance", c.tolerance);
  f("threads", c.threads);
  f("full", c.full);
  f("reps", c.reps);
  f("samples", c.samples);
  f("alpha", c.alpha);
  f("k", c.k);
  f("grid", c.grid);
  f("xi", c.xi);
  f("proxy", c.proxy);
  f("tail", c.tail);
  f("envelope", c.envelope);
  f("cond", c.cond);
  f("count", c.count);
  f("method", c.method);
  f("which", c.which);
  f("outdir", c.outdir);
}

template <class T>
bool json_matches(const nlohmann::json& v) {
  if constexpr (std::is_same_v<T, std::string>) return v.is_string();
  else if constexpr (std::is_same_v<T, bool>) return v.is_boolean();
  else if constexpr (std::is_same_v<T, double>) return v.is_number();
  else if constexpr (std::is_same_v<T, std::uint64_t>) return v.is_number_unsigned();
  else return v.is_number_integer();
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  if (!command.empty()) j["command"] = command;
  auto self = *this;
  for_each_field(self, [&](const char* key, auto& field) {
    if (field) j[key] = *field;
  });
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  RunConfig c;
  std::set<std::string> known{"command"};
  for_each_field(c, [&](const char* key, auto& field) {
    known.insert(key);
    using T = typename std::decay_t<decltype(field)>::value_type;
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return;
    if (!json_matches<T>(*it)) throw UsageError(std::string("config key '") + key + "' has the wrong type");
    field = it->template get<T>();
  });
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw UsageError("unknown config key '" + it.key() + "'");
  }
  if (auto it = j.find("command"); it != j.end()) {
    if (!it->is_string()) throw UsageError("config key 'command' has the wrong type");
    c.command = it->get<std::string>();
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  return from_json(j);
}

void RunConfig::fill_from(const RunConfig& other) {
  const nlohmann::json o = other.to_json();
  for_each_field(*this, [&](const char* key, auto& field) {
    using T = typename std::decay_t<decltype(field)>::value_type;
    if (!field && o.contains(key)) field = o[key].template get<T>();
  });
  if (command.empty()) command = other.command;
}

// ---------------------------------------------------------------------------
// DataSeries

std::string format_value(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void DataSeries::add_meta(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }

void DataSeries::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row width " + std::to_string(row.size()) + " does not match " +
                           std::to_string(columns.size()) + " columns in " + name);
  }
  rows.push_back(std::move(row));
}

std::optional<std::string> DataSeries::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::size_t DataSeries::column_index(const std::string& label) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == label) return i;
  }
  throw std::out_of_range("no column " + label + " in " + name);
}

std::string DataSeries::to_csv() const {
  std::ostringstream out;
  out << "# series=" << name << '\n';
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_value(r[i]);
    out << '\n';
  }
  return out.str();
}

std::string DataSeries::to_json() const {
  nlohmann::ordered_json j;
  j["series"] = name;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) j["metadata"][k] = v;
  j["columns"] = columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    auto row = nlohmann::ordered_json::array();
    for (double v : r) {
      if (std::isfinite(v)) row.push_back(v);
      else row.push_back(nullptr);
    }
    j["rows"].push_back(row);
  }
  return j.dump(1) + "\n";
}

namespace {

double parse_cell(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw UsageError("bad numeric field '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

DataSeries DataSeries::parse_csv(const std::string& text) {
  DataSeries d;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') throw UsageError("CRLF line endings are not allowed");
    if (line.rfind("# ", 0) == 0) {
      if (header) throw UsageError("metadata line after the header");
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw UsageError("malformed metadata line '" + line + "'");
      const std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
      if (key == "series") d.name = value;
      else d.metadata.emplace_back(key, value);
      continue;
    }
    if (!header) {
      d.columns = split(line, ',');
      header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) row.push_back(parse_cell(cell));
    if (row.size() != d.columns.size()) throw UsageError("ragged row in " + d.name);
    d.rows.push_back(std::move(row));
  }
  if (!header) throw UsageError("missing header line");
  return d;
}

DataSeries DataSeries::parse_json(const std::string& text) {
  DataSeries d;
  try {
    const auto j = nlohmann::json::parse(text);
    d.name = j.at("series").get<std::string>();
    for (auto it = j.at("metadata").begin(); it != j.at("metadata").end(); ++it) {
      d.metadata.emplace_back(it.key(), it->get<std::string>());
    }
    d.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<double> row;
      for (const auto& v : r) row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
      if (row.size() != d.columns.size()) throw UsageError("ragged row in " + d.name);
      d.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed data series: ") + e.what());
  }
  return d;
}

// ---------------------------------------------------------------------------

std::vector<int> parse_int_list(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw UsageError("bad integer list '" + text + "'");
    }
    return v;
  };
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int a = to_int(text.substr(0, dots)), b = to_int(text.substr(dots + 2));
    if (b < a) throw UsageError("empty range '" + text + "'");
    for (int i = a; i <= b; ++i) out.push_back(i);
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(to_int(part));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace qrem::cli
