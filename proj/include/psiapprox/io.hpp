#pragma once

// JSON and CSV conversions, the compact --psi syntax, n-range parsing and
// the configuration hash embedded in every output file.

#include <psiapprox/calculus.hpp>
#include <psiapprox/errors.hpp>
#include <psiapprox/order_harness.hpp>
#include <psiapprox/psi.hpp>
#include <psiapprox/trig_poly.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace psiapprox {

using nlohmann::json;

// ---- ψ -----------------------------------------------------------------

inline json to_json(const PsiSpec& spec) {
  json params = json::object();
  if (const auto* f = spec.as<Power>()) {
    params["r"] = f->r;
  } else if (const auto* f = spec.as<PowerLogDamped>()) {
    params = {{"r", f->r}, {"alpha", f->alpha}, {"c", f->c}};
  } else if (const auto* f = spec.as<PowerLogGrown>()) {
    params = {{"r", f->r}, {"alpha", f->alpha}, {"c", f->c}};
  } else if (const auto* f = spec.as<Geometric>()) {
    params["q"] = f->q;
  } else if (const auto* f = spec.as<Tabulated>()) {
    params = {{"values", f->values}, {"tail_exponent", f->tail_exponent}};
  }
  return {{"family", spec.name()}, {"params", params}};
}

inline PsiSpec psi_from_json(const json& j) {
  try {
    const auto family = j.at("family").get<std::string>();
    const json& p = j.at("params");
    if (family == "power") return PsiSpec::power(p.at("r").get<double>());
    if (family == "power_log_damped") {
      return PsiSpec::power_log_damped(p.at("r").get<double>(), p.at("alpha").get<double>(), p.at("c").get<double>());
    }
    if (family == "power_log_grown") {
      return PsiSpec::power_log_grown(p.at("r").get<double>(), p.at("alpha").get<double>(), p.at("c").get<double>());
    }
    if (family == "geometric") return PsiSpec::geometric(p.at("q").get<double>());
    if (family == "tabulated") {
      return PsiSpec::tabulated(p.at("values").get<std::vector<double>>(), p.value("tail_exponent", 0.0));
    }
    throw ValidationError("unknown psi family '" + family + "'");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed psi spec: ") + e.what());
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline double parse_double(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

inline std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_double(part));
  return out;
}

inline int parse_int(const std::string& s) {
  const double v = parse_double(s);
  if (v != static_cast<int>(v)) throw ValidationError("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace detail

/// FAMILY:PARAMS, e.g. power:2, geometric:0.5, logdamped:1,1,1,
/// loggrown:1,1,2, tabulated:1,0.5,0.25@2 (values, then tail exponent).
inline PsiSpec parse_psi(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("psi must look like FAMILY:PARAMS, got '" + text + "'");
  const std::string family = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  auto expect = [&](const std::vector<double>& v, std::size_t count) {
    if (v.size() != count) {
      throw ValidationError("psi family '" + family + "' takes " + std::to_string(count) + " parameter(s)");
    }
  };
  try {
    if (family == "power") {
      const auto v = detail::parse_doubles(rest);
      expect(v, 1);
      return PsiSpec::power(v[0]);
    }
    if (family == "geometric") {
      const auto v = detail::parse_doubles(rest);
      expect(v, 1);
      return PsiSpec::geometric(v[0]);
    }
    if (family == "logdamped" || family == "power_log_damped") {
      const auto v = detail::parse_doubles(rest);
      expect(v, 3);
      return PsiSpec::power_log_damped(v[0], v[1], v[2]);
    }
    if (family == "loggrown" || family == "power_log_grown") {
      const auto v = detail::parse_doubles(rest);
      expect(v, 3);
      return PsiSpec::power_log_grown(v[0], v[1], v[2]);
    }
    if (family == "tabulated" || family == "custom") {
      const auto at = rest.find('@');
      const auto values = detail::parse_doubles(rest.substr(0, at));
      const double tail = at == std::string::npos ? 0.0 : detail::parse_double(rest.substr(at + 1));
      return PsiSpec::tabulated(values, tail);
    }
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  throw ValidationError("unknown psi family '" + family + "'");
}

/// A..B (step 1), A..B+S (step S), A..B*F (geometric factor F) or a comma list.
inline std::vector<int> parse_n_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::vector<int> out;
    for (const auto& part : detail::split(text, ',')) out.push_back(detail::parse_int(part));
    return out;
  }
  const int start = detail::parse_int(text.substr(0, dots));
  std::string tail = text.substr(dots + 2);
  int step = 1;
  bool geometric = false;
  if (const auto star = tail.find('*'); star != std::string::npos) {
    step = detail::parse_int(tail.substr(star + 1));
    geometric = true;
    tail = tail.substr(0, star);
  } else if (const auto plus = tail.find('+'); plus != std::string::npos) {
    step = detail::parse_int(tail.substr(plus + 1));
    tail = tail.substr(0, plus);
  }
  const int stop = detail::parse_int(tail);
  if (start < 1 || stop < start) throw ValidationError("n range must satisfy 1 <= A <= B");
  if (step < (geometric ? 2 : 1)) throw ValidationError("n range step is too small");
  std::vector<int> out;
  for (long long n = start; n <= stop; n = geometric ? n * step : n + step) out.push_back(static_cast<int>(n));
  return out;
}

inline std::vector<int> n_range_from_json(const json& j) {
  if (j.is_string()) return parse_n_range(j.get<std::string>());
  if (j.is_array()) return j.get<std::vector<int>>();
  const int start = j.at("start").get<int>();
  const int stop = j.at("stop").get<int>();
  const int step = j.value("step", 1);
  const bool geometric = j.value("geometric", false);
  return parse_n_range(std::to_string(start) + ".." + std::to_string(stop) + (geometric ? "*" : "+") +
                       std::to_string(step));
}

// ---- trigonometric polynomials ------------------------------------------

inline json to_json(const TrigPoly& p) { return {{"a0", p.a0()}, {"a", p.cos_coeffs()}, {"b", p.sin_coeffs()}}; }

inline TrigPoly trig_poly_from_json(const json& j) {
  try {
    return TrigPoly(j.value("a0", 0.0), j.value("a", std::vector<double>{}), j.value("b", std::vector<double>{}));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed polynomial: ") + e.what());
  }
}

// ---- class specs ----------------------------------------------------------

inline ClassKind parse_kind(const std::string& s) {
  if (s == "C" || s == "c" || s == "C_class") return ClassKind::C_class;
  if (s == "L1" || s == "l1" || s == "L1_class") return ClassKind::L1_class;
  throw ValidationError("class kind must be C or L1, got '" + s + "'");
}

inline double exponent_from_json(const json& j) {
  if (j.is_string()) return detail::parse_double(j.get<std::string>());
  return j.get<double>();
}

inline json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

// ---- output -----------------------------------------------------------------

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Hash of the canonical (key-sorted, compact) JSON form.
inline std::string config_hash(const json& config) { return hex64(fnv1a(config.dump())); }

/// Shortest round-trip form is not required; 17 significant digits are.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(const std::string& text) { os_ << "# " << text << "\r\n"; }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) os_ << ',';
      os_ << csv_field(fields[i]);
    }
    os_ << "\r\n";
  }

 private:
  std::ostream& os_;
};

inline void write_order_csv(std::ostream& os, const OrderTable& table, const std::string& meta) {
  CsvWriter csv(os);
  csv.comment(meta);
  csv.row({"n", "upper", "lower", "normalizer", "upper_ratio", "lower_ratio"});
  for (const auto& r : table.records) {
    csv.row({std::to_string(r.n), format_real(r.upper), format_real(r.lower), format_real(r.normalizer),
             format_real(r.upper_ratio), format_real(r.lower_ratio)});
  }
}

inline json order_summary(const OrderTable& table) {
  json j;
  j["slope"] = table.slope ? json(*table.slope) : json(nullptr);
  j["slope_expected"] = table.slope_expected ? json(*table.slope_expected) : json(nullptr);
  j["ratio_band"] = {{"upper_min", table.band.upper_min},
                     {"upper_max", table.band.upper_max},
                     {"lower_min", table.band.lower_min},
                     {"lower_max", table.band.lower_max}};
  json failures = json::array();
  for (const auto& f : table.failures) failures.push_back({{"n", f.n}, {"error", f.message}});
  j["failures"] = failures;
  return j;
}

inline json to_json(const ConditionReport& r) {
  json j;
  j["p"] = r.p;
  j["horizon"] = r.horizon;
  j["in_b"] = r.in_b;
  j["b_ratio_sup"] = r.b_ratio_sup;
  j["theta_p_alpha"] = r.theta_p_alpha ? json(*r.theta_p_alpha) : json(nullptr);
  j["theta_majorant"] = r.theta_majorant;
  j["theta_status"] = to_string(r.theta_status);
  j["delta2_sign"] = to_string(r.delta2_sign);
  j["nerb2_sum_bound"] = r.nerb2_sum_bound;
  return j;
}

}  // namespace psiapprox
