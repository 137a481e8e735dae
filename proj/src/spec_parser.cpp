#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nnvar/distributions.hpp"
#include "nnvar/errors.hpp"

namespace nnvar {

namespace {

using Value = std::variant<double, std::vector<double>>;

class SpecLexer {
 public:
  explicit SpecLexer(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_space();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (begin < end && *begin == '+') ++begin;
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc()) fail("expected number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  Value value() {
    if (accept('[')) {
      std::vector<double> list;
      if (accept(']')) return list;
      do {
        list.push_back(number());
      } while (accept(','));
      expect(']');
      return list;
    }
    return number();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("distribution spec '" + std::string(text_) + "': " + what + " at offset " +
                     std::to_string(pos_));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Params {
 public:
  Params(std::string family, std::map<std::string, Value> values)
      : family_(std::move(family)), values_(std::move(values)) {}

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : values_) {
      if (!ok.contains(k)) throw ParseError(family_ + ": unknown parameter '" + k + "'");
    }
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  double scalar(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw ParseError(family_ + ": missing parameter '" + key + "'");
    }
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    throw ParseError(family_ + ": parameter '" + key + "' must be a number");
  }

  std::vector<double> list(const std::string& key) const {
    const auto& v = values_.at(key);
    if (const auto* l = std::get_if<std::vector<double>>(&v)) return *l;
    return {std::get<double>(v)};
  }

  std::size_t dimension(const std::string& key, std::optional<std::size_t> fallback) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ParseError(family_ + ": missing parameter '" + key + "'");
    }
    const double d = scalar(key);
    if (!(d >= 1.0) || d != std::floor(d) || d > 1e6) {
      throw InvalidParamsError(family_ + ": dimension must be a positive integer");
    }
    return static_cast<std::size_t>(d);
  }

 private:
  std::string family_;
  std::map<std::string, Value> values_;
};

Distribution build_normal(const Params& p) {
  p.allow({"d", "mu", "sigma", "cov"});
  if (p.has("sigma") && p.has("cov")) {
    throw InvalidParamsError("normal: give either sigma or cov, not both");
  }
  std::optional<std::size_t> inferred;
  if (p.has("sigma")) inferred = p.list("sigma").size();
  if (p.has("mu")) inferred = p.list("mu").size();
  const std::size_t d = p.dimension("d", inferred.value_or(1));

  auto vector_or = [&](const char* key, double fill) {
    if (!p.has(key)) return std::vector<double>(d, fill);
    auto v = p.list(key);
    if (v.size() == 1 && d > 1) v.assign(d, v[0]);
    if (v.size() != d) {
      throw InvalidParamsError(std::string("normal: '") + key + "' must have d entries");
    }
    return v;
  };
  std::vector<double> mean = vector_or("mu", 0.0);
  if (p.has("cov")) {
    std::vector<double> cov = p.list("cov");
    if (cov.size() != d * d) throw InvalidParamsError("normal: 'cov' must have d*d entries");
    return Distribution::normal_full(std::move(mean), std::move(cov));
  }
  return Distribution::normal_diag(std::move(mean), vector_or("sigma", 1.0));
}

}  // namespace

Distribution parse_distribution(std::string_view text) {
  SpecLexer lex(text);
  std::string family = lex.identifier();
  std::map<std::string, Value> values;
  if (lex.accept('(')) {
    if (!lex.accept(')')) {
      do {
        std::string key = lex.identifier();
        lex.expect('=');
        if (values.contains(key)) lex.fail("duplicate parameter '" + key + "'");
        values.emplace(std::move(key), lex.value());
      } while (lex.accept(','));
      lex.expect(')');
    }
  }
  if (!lex.at_end()) lex.fail("trailing characters");

  const Params p(family, std::move(values));
  if (family == "normal") return build_normal(p);
  if (family == "exponential") {
    p.allow({"lambda"});
    return Distribution::exponential(p.scalar("lambda", 1.0));
  }
  if (family == "uniform") {
    p.allow({"a", "b", "d"});
    return Distribution::uniform(p.scalar("a", 0.0), p.scalar("b", 1.0), p.dimension("d", 1));
  }
  if (family == "student_t") {
    p.allow({"nu"});
    return Distribution::student_t(p.scalar("nu"));
  }
  if (family == "pareto") {
    p.allow({"alpha", "xm"});
    return Distribution::pareto(p.scalar("alpha"), p.scalar("xm", 1.0));
  }
  throw ParseError("unknown distribution family '" + family + "'");
}

}  // namespace nnvar
