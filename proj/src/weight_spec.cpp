#include "ksplit/weight_spec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace ksplit {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  WeightSpec parse_top() {
    WeightSpec spec = parse_spec();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "weight spec: " << what << " at position " << pos_ << " in '" << s_ << "'";
    throw InputError(os.str());
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string word() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
            s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || !std::isfinite(v)) fail("expected a number");
    pos_ += static_cast<size_t>(ptr - first);
    return v;
  }

  WeightSpec parenthesized() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '('");
    ++pos_;
    WeightSpec inner = parse_spec();
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
    ++pos_;
    return inner;
  }

  bool at_end_of_spec() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == ')';
  }

  WeightSpec parse_spec() {
    WeightSpec spec;
    spec.family = word();
    static const std::set<std::string> known{"const", "power", "exp-cos", "separating",
                                             "product"};
    if (!known.count(spec.family)) fail("unknown family '" + spec.family + "'");
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ':') {
      ++pos_;
      const double v = number();
      if (spec.family == "const") spec.params["value"] = v;
      else if (spec.family == "power") spec.params["alpha"] = v;
      else if (spec.family == "exp-cos") spec.params["eps"] = v;
      else fail("shorthand not available for " + spec.family);
      return spec;
    }
    while (!at_end_of_spec()) {
      if (s_[pos_] == '(') {
        if (spec.family != "product") fail("unexpected '('");
        spec.factors.push_back(parenthesized());
        continue;
      }
      const std::string key = word();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '=' after " + key);
      ++pos_;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        if (spec.named.count(key)) fail("duplicate key " + key);
        spec.named.emplace(key, parenthesized());
      } else {
        if (spec.params.count(key)) fail("duplicate key " + key);
        spec.params[key] = number();
      }
    }
    validate(spec);
    return spec;
  }

  void validate(const WeightSpec& spec) {
    auto allow = [&](std::set<std::string> keys, std::set<std::string> nested) {
      for (const auto& [k, v] : spec.params)
        if (!keys.count(k)) fail("unexpected key '" + k + "' for " + spec.family);
      for (const auto& [k, v] : spec.named)
        if (!nested.count(k)) fail("unexpected key '" + k + "' for " + spec.family);
    };
    if (spec.family == "const") {
      allow({"value"}, {});
    } else if (spec.family == "power") {
      allow({"alpha", "center", "axis"}, {});
      if (!spec.params.count("alpha")) fail("power needs alpha=");
      if (spec.params.count("axis")) {
        const double a = spec.params.at("axis");
        if (a != 1.0 && a != 2.0) fail("axis must be 1 or 2");
      }
    } else if (spec.family == "exp-cos") {
      allow({"eps", "freq", "center"}, {});
      if (!spec.params.count("eps")) fail("exp-cos needs eps=");
    } else if (spec.family == "separating") {
      allow({}, {"a", "b"});
      if (!spec.named.count("a") || !spec.named.count("b"))
        fail("separating needs a=(...) and b=(...)");
    } else if (spec.family == "product") {
      allow({}, {});
      if (spec.factors.empty()) fail("product needs at least one factor");
    }
  }

  std::string_view s_;
  size_t pos_ = 0;
};

double param(const WeightSpec& s, const std::string& key, double fallback) {
  auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

double chord(double t, double floor_value) {
  return std::max(2.0 * std::abs(std::sin(0.5 * t)), floor_value);
}

double chord_floor(int n) { return 2.0 * std::sin(std::numbers::pi / (2.0 * n)); }

}  // namespace

WeightSpec parse_weight_spec(std::string_view text) { return Parser(text).parse_top(); }

std::string to_string(const WeightSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << spec.family;
  for (const auto& [k, v] : spec.params) os << ' ' << k << '=' << v;
  for (const auto& [k, v] : spec.named) os << ' ' << k << "=(" << to_string(v) << ')';
  for (const auto& f : spec.factors) os << " (" << to_string(f) << ')';
  return os.str();
}

Weight1D power_weight(const Grid1D& grid, double alpha, double center) {
  const double fl = chord_floor(grid.size());
  return Weight1D::from_function(
      grid, [&](double t) { return std::pow(chord(t - center, fl), alpha); });
}

Weight1D build_weight_1d(const WeightSpec& spec, const Grid1D& grid) {
  if (spec.family == "const") {
    const double v = param(spec, "value", 1.0);
    if (!(v > 0.0)) throw InputError("const weight needs a positive value");
    return Weight1D::constant(grid, v);
  }
  if (spec.family == "power")
    return power_weight(grid, spec.params.at("alpha"), param(spec, "center", 0.0));
  if (spec.family == "exp-cos") {
    const double eps = spec.params.at("eps"), freq = param(spec, "freq", 1.0),
                 c = param(spec, "center", 0.0);
    return Weight1D::from_function(
        grid, [&](double t) { return std::exp(eps * std::cos(freq * (t - c))); });
  }
  if (spec.family == "product") {
    Weight1D w = build_weight_1d(spec.factors.front(), grid);
    for (size_t i = 1; i < spec.factors.size(); ++i)
      w = w * build_weight_1d(spec.factors[i], grid);
    return w;
  }
  throw InputError("weight family '" + spec.family + "' is not defined on T");
}

Weight2D build_weight_2d(const WeightSpec& spec, const Grid1D& grid1,
                         const Grid1D& grid2) {
  if (spec.family == "const") {
    const double v = param(spec, "value", 1.0);
    if (!(v > 0.0)) throw InputError("const weight needs a positive value");
    return Weight2D::constant(grid1, grid2, v);
  }
  if (spec.family == "power") {
    const double alpha = spec.params.at("alpha"), c = param(spec, "center", 0.0);
    if (spec.params.count("axis")) {
      const bool first = spec.params.at("axis") == 1.0;
      Weight1D p = power_weight(first ? grid1 : grid2, alpha, c);
      Weight1D one = Weight1D::constant(first ? grid2 : grid1, 1.0);
      return first ? Weight2D::separating(p, one) : Weight2D::separating(one, p);
    }
    const double fl = std::min(chord_floor(grid1.size()), chord_floor(grid2.size()));
    return Weight2D::from_function(grid1, grid2, [&](double t1, double t2) {
      const double s1 = 2.0 * std::sin(0.5 * (t1 - c)), s2 = 2.0 * std::sin(0.5 * (t2 - c));
      return std::pow(std::max(std::sqrt(s1 * s1 + s2 * s2), fl), alpha);
    });
  }
  if (spec.family == "exp-cos") {
    const double eps = spec.params.at("eps"), freq = param(spec, "freq", 1.0),
                 c = param(spec, "center", 0.0);
    return Weight2D::from_function(grid1, grid2, [&](double t1, double t2) {
      return std::exp(eps * std::cos(freq * (t1 + t2 - c)));
    });
  }
  if (spec.family == "separating")
    return Weight2D::separating(build_weight_1d(spec.named.at("a"), grid1),
                                build_weight_1d(spec.named.at("b"), grid2));
  if (spec.family == "product") {
    Weight2D w = build_weight_2d(spec.factors.front(), grid1, grid2);
    for (size_t i = 1; i < spec.factors.size(); ++i)
      w = w * build_weight_2d(spec.factors[i], grid1, grid2);
    return w;
  }
  throw InputError("unknown weight family '" + spec.family + "'");
}

}  // namespace ksplit
