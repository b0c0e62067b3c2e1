#pragma once

// Command-line front end. Every subcommand reads an optional JSON config
// (--config) whose keys mirror the long flag names; flags given on the
// command line override it. Exit codes: 0 success, 1 usage, 2 validation
// failure, 3 numerical non-convergence.

#include <psiapprox/best_approx.hpp>
#include <psiapprox/calculus.hpp>
#include <psiapprox/errors.hpp>
#include <psiapprox/io.hpp>
#include <psiapprox/kernels.hpp>
#include <psiapprox/lp_norms.hpp>
#include <psiapprox/order_harness.hpp>
#include <psiapprox/psi.hpp>
#include <psiapprox/version.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace psiapprox::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kNonConvergence = 3 };

namespace detail {

inline std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_color_mt("psiapprox");
    const char* env = std::getenv("APPROX_LOG_LEVEL");
    l->set_level(env != nullptr ? spdlog::level::from_str(env) : spdlog::level::warn);
    return l;
  }();
  return log;
}

/// Flag values collected as strings; only flags actually given are kept.
struct Flags {
  std::map<std::string, std::string> values;
  std::string config_path;
  std::string out_dir;
  bool jobs_given = false;
};

class Settings {
 public:
  Settings(std::string command, json cfg) : command_(std::move(command)), cfg_(std::move(cfg)) {}

  bool has(const std::string& key) const { return cfg_.contains(key) && !cfg_.at(key).is_null(); }

  std::string str(const std::string& key, const std::string& fallback = "") const {
    if (!has(key)) return fallback;
    const json& v = cfg_.at(key);
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = cfg_.at(key);
    return v.is_string() ? psiapprox::detail::parse_double(v.get<std::string>()) : v.get<double>();
  }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = cfg_.at(key);
    return v.is_string() ? psiapprox::detail::parse_int(v.get<std::string>()) : v.get<int>();
  }

  PsiSpec psi() const {
    if (!has("psi")) throw ValidationError("missing --psi");
    const json& v = cfg_.at("psi");
    return v.is_string() ? parse_psi(v.get<std::string>()) : psi_from_json(v);
  }

  std::vector<int> n_range(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return parse_n_range(fallback);
    return n_range_from_json(cfg_.at(key));
  }

  TrigPoly poly() const {
    if (!has("poly")) throw ValidationError("missing --poly");
    const json& v = cfg_.at("poly");
    if (v.is_object()) return trig_poly_from_json(v);
    const std::string s = v.get<std::string>();
    if (!s.empty() && s.front() == '{') return trig_poly_from_json(json::parse(s));
    std::ifstream in(s);
    if (!in) throw ValidationError("cannot open polynomial file '" + s + "'");
    return trig_poly_from_json(json::parse(in));
  }

  std::string hash() const {
    json keyed = cfg_;
    keyed["command"] = command_;
    return config_hash(keyed);
  }

  std::string meta() const { return std::string("psiapprox ") + kVersion + " config=" + hash(); }

  const std::string& command() const { return command_; }

 private:
  std::string command_;
  json cfg_;
};

inline Settings load_settings(const std::string& command, Flags& flags, int& jobs) {
  json cfg = json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw ValidationError("cannot open config '" + flags.config_path + "'");
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
  }
  for (const auto& [key, value] : flags.values) cfg[key] = value;
  if (flags.out_dir.empty() && cfg.contains("out")) flags.out_dir = cfg["out"].get<std::string>();
  if (cfg.contains("jobs") && !flags.jobs_given) jobs = cfg["jobs"].get<int>();
  cfg.erase("out");
  cfg.erase("jobs");
  return Settings(command, std::move(cfg));
}

/// Writes `content` to DIR/name when an output directory is set, else to out.
inline void emit(const Flags& flags, const std::string& name, const std::string& content, std::ostream& out) {
  if (flags.out_dir.empty()) {
    out << content;
    return;
  }
  std::filesystem::create_directories(flags.out_dir);
  const auto path = std::filesystem::path(flags.out_dir) / name;
  std::ofstream file(path, std::ios::binary);
  file << content;
  logger()->info("wrote {}", path.string());
}

inline json stamped(const Settings& s, json body) {
  body["version"] = kVersion;
  body["config_hash"] = s.hash();
  return body;
}

inline int cmd_conditions(const Settings& s, const Flags& flags, std::ostream& out) {
  const PsiSpec psi = s.psi();
  const double p = s.real("p", 1.0);
  if (!(p >= 1.0) || std::isinf(p)) throw ValidationError("--p must lie in [1, inf) for conditions");
  const auto report = check_class_conditions(psi, p, s.integer("horizon", 10000), s.real("tol", 1e-12));
  json body = to_json(report);
  body["psi"] = to_json(psi);
  emit(flags, "conditions.json", stamped(s, body).dump(2) + "\n", out);
  return kOk;
}

inline int cmd_kernel_eval(const Settings& s, const Flags& flags, std::ostream& out) {
  if (!s.has("t")) throw ValidationError("missing --t");
  const KernelTailSpec spec{s.psi(), s.real("beta", 0.0), s.integer("n", 1)};
  const double tol = s.real("tol", 1e-10);
  std::ostringstream os;
  CsvWriter csv(os);
  csv.comment(s.meta());
  csv.row({"t", "value"});
  for (double t : psiapprox::detail::parse_doubles(s.str("t"))) {
    csv.row({format_real(t), format_real(kernel_tail_eval(spec, t, tol))});
  }
  emit(flags, "kernel_eval.csv", os.str(), out);
  return kOk;
}

inline int cmd_norm(const Settings& s, const Flags& flags, std::ostream& out) {
  const double q = s.real("q", 2.0);
  const double tol = s.real("tol", 1e-8);
  NormResult r;
  json body;
  if (s.has("poly")) {
    const TrigPoly p = s.poly();
    r = lp_norm(p, q, tol);
    body["poly"] = to_json(p);
  } else {
    const KernelTailSpec spec{s.psi(), s.real("beta", 0.0), s.integer("n", 1)};
    r = kernel_tail_norm(spec, q, tol);
    body["psi"] = to_json(spec.psi);
    body["beta"] = spec.beta;
    body["n"] = spec.n;
  }
  body["q"] = exponent_to_json(q);
  body["value"] = r.value;
  body["error_estimate"] = r.error_estimate;
  body["mesh_level"] = r.mesh_level;
  body["converged"] = r.converged;
  emit(flags, "norm.json", stamped(s, body).dump(2) + "\n", out);
  return r.converged ? kOk : kNonConvergence;
}

inline int cmd_best_approx(const Settings& s, const Flags& flags, std::ostream& out) {
  const TrigPoly f = s.poly();
  const int n = s.integer("n", 1);
  const double p = s.real("p", kInf);
  const int grid = s.integer("grid", 0);
  ApproxResult r;
  if (std::isinf(p)) {
    r = best_uniform(f, n, grid);
  } else if (p == 2.0) {
    r = best_l2(f, n);
  } else {
    r = best_lp(f, n, p, grid, s.real("tol", 1e-10));
  }
  json body;
  body["n"] = n;
  body["p"] = exponent_to_json(p);
  body["value"] = r.value;
  body["certificate"] = r.certificate ? json(*r.certificate) : json(nullptr);
  body["iterations"] = r.iterations;
  body["status"] = to_string(r.status);
  body["grid"] = r.grid;
  body["discretization_caveat"] = r.discretization_caveat;
  body["fourier_deviation"] = fourier_deviation(f, n, p);
  body["argmin"] = to_json(r.argmin);
  if (!r.note.empty()) body["note"] = r.note;
  emit(flags, "best_approx.json", stamped(s, body).dump(2) + "\n", out);
  return r.status == SolverStatus::Converged ? kOk : kNonConvergence;
}

inline int cmd_lemma1(const Settings& s, const Flags& flags, std::ostream& out) {
  const PsiSpec psi = s.psi();
  const double r = s.real("r", 0.5);
  const auto ns = s.n_range("n", "2..512");
  const auto report = lemma1_verify(psi, r, ns, s.integer("tail-cap", 1'000'000), s.real("tol", 1e-13));
  std::ostringstream os;
  CsvWriter csv(os);
  csv.comment(s.meta());
  csv.row({"n", "sum", "lower", "slack", "ratio"});
  for (const auto& row : report.rows) {
    csv.row({std::to_string(row.n), format_real(row.sum), format_real(row.lower), format_real(row.slack),
             format_real(row.ratio)});
  }
  emit(flags, "lemma1.csv", os.str(), out);
  json summary = {{"max_ratio", report.max_ratio},
                  {"min_slack", report.min_slack},
                  {"cutoff", report.cutoff},
                  {"tail_error", report.tail_error}};
  if (flags.out_dir.empty()) {
    out << "# summary " << stamped(s, summary).dump() << "\r\n";
  } else {
    emit(flags, "lemma1_summary.json", stamped(s, summary).dump(2) + "\n", out);
  }
  return kOk;
}

inline TrigPoly random_poly(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  std::vector<double> a(static_cast<std::size_t>(m));
  std::vector<double> b(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    a[k] = dist(rng);
    b[k] = dist(rng);
  }
  return TrigPoly(0.0, std::move(a), std::move(b));
}

inline int cmd_bernstein(const Settings& s, const Flags& flags, std::ostream& out) {
  const PsiSpec psi = s.psi();
  const double beta = s.real("beta", 0.0);
  const double p = s.real("p", 2.0);
  const auto ms = s.n_range("m", "4..128*2");
  const std::string family = s.str("family", "dirichlet");
  std::mt19937_64 rng(static_cast<std::uint64_t>(s.integer("seed", 1)));
  std::ostringstream os;
  CsvWriter csv(os);
  csv.comment(s.meta());
  csv.row({"m", "family", "degree", "ratio"});
  for (int m : ms) {
    TrigPoly f;
    if (family == "dirichlet") {
      f = dirichlet_poly(m);
    } else if (family == "fejer") {
      f = fejer_poly(m);
    } else if (family == "vp") {
      f = vallee_poussin_poly(std::max(1, m / 2));
    } else if (family == "random") {
      f = random_poly(m, rng);
    } else {
      throw ValidationError("--family must be dirichlet, fejer, vp or random");
    }
    csv.row({std::to_string(m), family, std::to_string(f.degree()), format_real(bernstein_ratio(f, psi, beta, p))});
  }
  emit(flags, "bernstein.csv", os.str(), out);
  return kOk;
}

inline int cmd_order_table(const Settings& s, const Flags& flags, std::ostream& out, int jobs) {
  ClassSpec spec{s.psi(), s.real("beta", 0.0), s.real("p", 2.0), parse_kind(s.str("kind", "C"))};
  const auto report = check_admissible(spec);
  logger()->info("admissible: alpha={} delta2={}", *report.theta_p_alpha, to_string(report.delta2_sign));
  const auto ns = s.n_range("n", "4..128*2");
  const auto table = order_table(spec, ns, {s.real("tol", 1e-8), jobs});
  std::ostringstream os;
  write_order_csv(os, table, s.meta());
  emit(flags, "order_table.csv", os.str(), out);
  json summary = order_summary(table);
  summary["delta2_sign"] = to_string(report.delta2_sign);
  if (flags.out_dir.empty()) {
    out << "# summary " << stamped(s, summary).dump() << "\r\n";
  } else {
    emit(flags, "summary.json", stamped(s, summary).dump(2) + "\n", out);
  }
  for (const auto& f : table.failures) logger()->error("n={}: {}", f.n, f.message);
  return table.failures.empty() ? kOk : kNonConvergence;
}

}  // namespace detail

/// Runs one subcommand. args[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"psiapprox: (psi,beta)-calculus, kernels and order estimates"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  detail::Flags flags;
  int jobs = 1;

  struct Sub {
    CLI::App* app;
    std::vector<std::string> keys;
  };
  std::vector<Sub> subs;
  auto add = [&](const std::string& name, const std::string& help, std::vector<std::string> keys) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config_path, "JSON config; flags override its keys");
    sub->add_option("--out", flags.out_dir, "output directory (default: standard output)");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 64));
    for (const auto& key : keys) sub->add_option("--" + key, flags.values[key]);
    subs.push_back({sub, std::move(keys)});
  };
  add("conditions", "class-condition report for psi", {"psi", "p", "horizon", "tol"});
  add("kernel-eval", "evaluate the tail kernel at points t", {"psi", "beta", "n", "t", "tol"});
  add("norm", "L_q norm of the tail kernel or of a polynomial", {"psi", "beta", "n", "q", "tol", "poly"});
  add("best-approx", "best approximation of a polynomial", {"poly", "n", "p", "grid", "tol"});
  add("lemma1", "Lemma-1 sum check", {"psi", "r", "n", "tail-cap", "tol"});
  add("bernstein", "Bernstein ratios over degrees m", {"psi", "beta", "p", "m", "family", "seed"});
  add("order-table", "upper/lower bound table over n", {"psi", "beta", "p", "kind", "n", "tol"});

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const Sub* chosen = nullptr;
  for (const auto& s : subs) {
    if (s.app->parsed()) chosen = &s;
  }
  // drop flags that were not given
  for (const auto& key : chosen->keys) {
    if (chosen->app->count("--" + key) == 0) flags.values.erase(key);
  }
  for (auto it = flags.values.begin(); it != flags.values.end();) {
    it = std::find(chosen->keys.begin(), chosen->keys.end(), it->first) == chosen->keys.end() ? flags.values.erase(it)
                                                                                            : std::next(it);
  }

  const std::string name = chosen->app->get_name();
  try {
    flags.jobs_given = chosen->app->count("--jobs") > 0;
    const auto settings = detail::load_settings(name, flags, jobs);
    detail::logger()->debug("{} {}", name, settings.meta());
    if (name == "conditions") return detail::cmd_conditions(settings, flags, out);
    if (name == "kernel-eval") return detail::cmd_kernel_eval(settings, flags, out);
    if (name == "norm") return detail::cmd_norm(settings, flags, out);
    if (name == "best-approx") return detail::cmd_best_approx(settings, flags, out);
    if (name == "lemma1") return detail::cmd_lemma1(settings, flags, out);
    if (name == "bernstein") return detail::cmd_bernstein(settings, flags, out);
    return detail::cmd_order_table(settings, flags, out, jobs);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const SingularPoint& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  }
}

inline int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace psiapprox::cli
