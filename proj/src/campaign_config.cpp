#include "nnvar/campaign_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "nnvar/errors.hpp"

namespace nnvar {

namespace {

struct Entry {
  std::variant<std::string, double, std::vector<double>, std::uint64_t> value;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void syntax(std::size_t line, const std::string& what) {
  throw ParseError("config line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view s, std::size_t line) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    syntax(line, "expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::map<std::string, Entry> tokenize(std::string_view text) {
  std::map<std::string, Entry> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) syntax(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) syntax(line_no, "missing key");
    for (char c : key) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
        syntax(line_no, "invalid key '" + key + "'");
      }
    }
    std::string_view raw = trim(line.substr(eq + 1));
    if (raw.empty()) syntax(line_no, "missing value for '" + key + "'");
    Entry entry{std::string{}, line_no};
    if (raw.front() == '"') {
      if (raw.size() < 2 || raw.back() != '"') syntax(line_no, "unterminated string");
      const std::string_view body = raw.substr(1, raw.size() - 2);
      if (body.find('"') != std::string_view::npos) syntax(line_no, "stray quote");
      entry.value = std::string(body);
    } else if (raw.front() == '[') {
      if (raw.back() != ']') syntax(line_no, "unterminated list");
      std::string_view body = trim(raw.substr(1, raw.size() - 2));
      std::vector<double> list;
      while (!body.empty()) {
        const std::size_t comma = body.find(',');
        list.push_back(parse_number(body.substr(0, comma), line_no));
        if (comma == std::string_view::npos) break;
        body = body.substr(comma + 1);
        if (trim(body).empty()) syntax(line_no, "trailing comma");
      }
      entry.value = std::move(list);
    } else {
      // Plain digit strings stay exact integers (seeds may exceed 2^53).
      std::uint64_t u = 0;
      const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), u);
      if (res.ec == std::errc() && res.ptr == raw.data() + raw.size()) {
        entry.value = u;
      } else {
        entry.value = parse_number(raw, line_no);
      }
    }
    if (out.contains(key)) syntax(line_no, "duplicate key '" + key + "'");
    out.emplace(key, std::move(entry));
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.contains(key); }

  std::string string(const std::string& key) const {
    const Entry& e = get(key);
    if (const auto* s = std::get_if<std::string>(&e.value)) return *s;
    fail(e, key, "must be a quoted string");
  }

  std::uint64_t integer(const std::string& key) const {
    const Entry& e = get(key);
    if (const auto* u = std::get_if<std::uint64_t>(&e.value)) return *u;
    const auto* v = std::get_if<double>(&e.value);
    if (!v || !(*v >= 0.0) || *v != std::floor(*v) || *v >= 18446744073709551616.0) {
      fail(e, key, "must be a nonnegative integer");
    }
    return static_cast<std::uint64_t>(*v);
  }

  std::vector<double> list(const std::string& key) const {
    const Entry& e = get(key);
    if (const auto* l = std::get_if<std::vector<double>>(&e.value)) return *l;
    fail(e, key, "must be a bracketed list");
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  const Entry& get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }

  [[noreturn]] static void fail(const Entry& e, const std::string& key, const char* what) {
    throw ConfigError("config line " + std::to_string(e.line) + ": '" + key + "' " + what);
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace

CampaignConfig parse_campaign_config(std::string_view text) {
  const Reader r(tokenize(text));
  static const char* const known[] = {"name",           "spec",           "n_grid",
                                      "replications",   "seed",           "estimand",
                                      "transform_matrix", "transform_shift"};
  for (const auto& [key, entry] : r.entries()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigError("config line " + std::to_string(entry.line) + ": unknown key '" + key +
                        "'");
    }
  }
  CampaignConfig config;
  if (r.has("name")) config.name = r.string("name");
  try {
    config.spec = parse_distribution(r.string("spec"));
  } catch (const ParseError& e) {
    throw ConfigError(std::string("spec: ") + e.what());
  } catch (const InvalidParamsError& e) {
    throw ConfigError(std::string("spec: ") + e.what());
  }
  for (double v : r.list("n_grid")) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e12) {
      throw ConfigError("n_grid entries must be nonnegative integers");
    }
    config.n_grid.push_back(static_cast<std::size_t>(v));
  }
  if (r.has("replications")) config.replications = static_cast<std::size_t>(r.integer("replications"));
  if (r.has("seed")) config.seed = r.integer("seed");
  if (r.has("estimand")) config.estimand = parse_estimand(r.string("estimand"));
  if (r.has("transform_shift") && !r.has("transform_matrix")) {
    throw ConfigError("transform_shift requires transform_matrix");
  }
  if (r.has("transform_matrix")) {
    AffineMap map;
    map.matrix = r.list("transform_matrix");
    map.shift = r.has("transform_shift") ? r.list("transform_shift")
                                         : std::vector<double>(config.spec.dim(), 0.0);
    config.transform = std::move(map);
  }
  validate(config);
  return config;
}

CampaignConfig load_campaign_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_campaign_config(buf.str());
}

}  // namespace nnvar
