#include "experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wick/error.hpp"
#include "wick/gaussian_stream.hpp"
#include "wick/limits.hpp"
#include "wick/sampling.hpp"
#include "wick/serialization.hpp"
#include "wick/verify.hpp"
#include "wick/wick_algebra.hpp"

namespace wick::cli {
namespace {

using nlohmann::json;

const std::vector<std::string> kKeys = {"expansion", "n_list", "n_max",   "n",         "samples",  "seed",
                                        "out",       "cases",  "tolerance", "concentration_epsilon", "min_order"};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ChaosExpansion expansion_from_value(const json& v) {
  try {
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      const auto first = s.find_first_not_of(" \t\r\n");
      if (first != std::string::npos && s[first] == '{') return expansion_from_json(json::parse(s));
      return expansion_from_json(read_json_file(s));
    }
    return expansion_from_json(v);
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid expansion: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid expansion: ") + e.what());
  }
}

template <class T>
T get_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  } else {
    if (!v.is_number_unsigned()) throw ConfigError(std::string(key) + " must be a non-negative integer");
  }
  return v.get<T>();
}

ChaosExpansion expansion_or(const ExperimentConfig& c, ChaosExpansion fallback) {
  return c.expansion ? *c.expansion : std::move(fallback);
}

std::string json_double(double v) { return std::isfinite(v) ? format_double(v) : "nan"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw ConfigError("write failed for " + path);
}

std::string derived_path(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  auto stem = p.parent_path() / p.stem();
  return stem.string() + suffix;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ConfigError("unknown config key: " + key);
  }
  ExperimentConfig c;
  if (j.contains("expansion") && !j["expansion"].is_null()) c.expansion = expansion_from_value(j["expansion"]);
  if (j.contains("n_list") && !j["n_list"].is_null()) {
    if (!j["n_list"].is_array()) throw ConfigError("n_list must be an array");
    std::vector<unsigned> ns;
    for (const auto& v : j["n_list"]) {
      if (!v.is_number_unsigned() || v.get<unsigned>() == 0) throw ConfigError("n_list entries must be positive");
      ns.push_back(v.get<unsigned>());
    }
    c.n_list = std::move(ns);
  }
  if (j.contains("n_max")) c.n_max = get_number<unsigned>(j, "n_max");
  if (j.contains("n")) c.n = get_number<unsigned>(j, "n");
  if (j.contains("samples")) c.samples = get_number<std::size_t>(j, "samples");
  if (j.contains("seed") && !j["seed"].is_null()) c.seed = get_number<std::uint64_t>(j, "seed");
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("out must be a string");
    c.out = j["out"].get<std::string>();
  }
  if (j.contains("cases")) c.cases = get_number<unsigned>(j, "cases");
  if (j.contains("tolerance")) c.tolerance = get_number<double>(j, "tolerance");
  if (j.contains("concentration_epsilon")) c.concentration_epsilon = get_number<double>(j, "concentration_epsilon");
  if (j.contains("min_order")) {
    if (!j["min_order"].is_boolean()) throw ConfigError("min_order must be a boolean");
    c.min_order = j["min_order"].get<bool>();
  }
  if (c.n == 0) throw ConfigError("n must be positive");
  if (c.samples == 0) throw ConfigError("samples must be positive");
  if (!(c.tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
  if (!(c.concentration_epsilon > 0.0)) throw ConfigError("concentration_epsilon must be > 0");
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["expansion"] = c.expansion ? to_json(*c.expansion) : json(nullptr);
  j["n_list"] = c.n_list ? json(*c.n_list) : json(nullptr);
  j["n_max"] = c.n_max;
  j["n"] = c.n;
  j["samples"] = c.samples;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["out"] = c.out;
  j["cases"] = c.cases;
  j["tolerance"] = c.tolerance;
  j["concentration_epsilon"] = c.concentration_epsilon;
  j["min_order"] = c.min_order;
  return j;
}

int run_verify(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  VerifyOptions opt;
  opt.cases = c.cases;
  opt.tolerance = c.tolerance;
  if (c.seed) opt.seed = *c.seed;
  const auto report = run_identity_suites(opt);
  std::ostringstream text;
  text << "# " << kToolVersion << " verify cases=" << opt.cases << " seed=" << opt.seed
       << " tolerance=" << format_double(opt.tolerance) << "\n";
  for (const auto& s : report.suites) {
    text << (s.passed ? "PASS " : "FAIL ") << s.name << " cases=" << s.cases
         << " max_deviation=" << format_double(s.max_deviation) << "\n";
  }
  text << (report.all_passed() ? "all identities hold\n" : "identity check FAILED\n");
  out << text.str();
  if (!c.out.empty()) write_file(c.out, text.str());
  if (!report.all_passed()) {
    for (const auto& s : report.suites) {
      if (!s.passed) err << "failed identity: " << s.name << " (max deviation " << format_double(s.max_deviation) << ")\n";
    }
    return kVerificationFailure;
  }
  return kSuccess;
}

int run_converge(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const ChaosExpansion x = expansion_or(c, univariate({1.0, 1.0}));
  const std::vector<unsigned> ns = c.n_list ? *c.n_list : power_of_two_schedule(c.n_max);
  const std::string path = c.out.empty() ? "converge.csv" : c.out;
  std::ostringstream csv;
  csv << "# tool: " << kToolVersion << "\n# input_hash: " << expansion_hash(x) << "\n# seed: none\n";

  if (c.min_order) {
    csv << "n,min_order\n";
    for (unsigned n : ns) {
      const auto order = min_chaos_order(x, n);
      csv << n << ',' << (order ? std::to_string(*order) : std::string("empty")) << '\n';
    }
    write_file(path, csv.str());
    out << "wrote " << path << "\n";
    return kSuccess;
  }

  if (std::abs(x.mean()) < kZeroMeanThreshold) {
    err << "zero-mean expansion: no rescaled Wick power sequence has a nonzero limit, since all chaos components "
           "of X^<>n below order n vanish. Rerun with --min-order to tabulate the lowest surviving order.\n";
    return kInvalidInput;
  }

  const auto report = convergence_report(x, ns);
  csv << "# fitted_rate: " << json_double(report.fitted_rate) << "\n";
  csv << "n,error,bound,norm_gamma,rate_running\n";
  std::vector<double> xs, ys;
  for (const auto& e : report.entries) {
    xs.push_back(e.n);
    ys.push_back(e.error);
    csv << e.n << ',' << json_double(e.error) << ',' << json_double(e.bound) << ',' << json_double(e.norm_gamma) << ','
        << json_double(fitted_log_slope(xs, ys)) << '\n';
  }
  write_file(path, csv.str());
  out << "fitted_rate " << json_double(report.fitted_rate) << "\n";
  out << "wrote " << path << "\n";
  return kSuccess;
}

int run_dist(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.seed) throw ConfigError("dist needs a seed");
  const ChaosExpansion x = expansion_or(c, univariate({1.0, 0.5}));
  if (std::abs(x.mean()) < kZeroMeanThreshold) {
    err << "zero-mean expansion: the rescaled Wick powers have no nonzero limit law to test\n";
    return kInvalidInput;
  }
  const std::string path = c.out.empty() ? "dist.json" : c.out;
  const auto r = limit_distribution_test(x, c.n, c.samples, *c.seed, c.concentration_epsilon);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";

  const std::string hash = expansion_hash(x);
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["input_hash"] = hash;
  j["generator"] = GaussianStream::kName;
  j["n"] = r.n;
  j["N"] = r.sample_count;
  j["seed"] = r.seed;
  j["ks_lognormal"] = optional_number(r.ks_lognormal);
  j["ks_log_normal"] = optional_number(r.ks_log_normal);
  j["frac_nonpositive"] = r.frac_nonpositive;
  j["target_mu"] = r.target_mu;
  j["target_sigma_sq"] = r.target_sigma_sq;
  j["ks_critical_5pct"] = r.ks_critical;
  j["ks_threshold"] = 1.5 * r.ks_critical;
  j["ks_lognormal_below_threshold"] = r.ks_lognormal ? json(*r.ks_lognormal < 1.5 * r.ks_critical) : json(nullptr);
  j["degenerate"] = r.degenerate;
  j["concentration"] = optional_number(r.concentration);
  j["concentration_epsilon"] = r.degenerate ? json(r.concentration_epsilon) : json(nullptr);
  j["warnings"] = r.warnings;
  write_file(path, j.dump(2) + "\n");

  SampleBatch batch{r.samples, r.seed};
  write_samples_csv(batch, derived_path(path, "_samples.csv"), derived_path(path, "_samples.meta.json"),
                    {kToolVersion, hash});
  if (r.ks_lognormal) {
    out << "ks_lognormal " << format_double(*r.ks_lognormal) << " (threshold " << format_double(1.5 * r.ks_critical)
        << ")\n";
  }
  if (r.concentration) out << "concentration " << format_double(*r.concentration) << "\n";
  out << "wrote " << path << "\n";
  return kSuccess;
}

int run_bench(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const ChaosExpansion x = expansion_or(c, univariate({1.0, 1.0}));
  std::vector<unsigned> ns;
  if (c.n_list) {
    ns = *c.n_list;
  } else {
    for (unsigned n = 1; n <= c.n_max && n != 0; n *= 2) ns.push_back(n);
  }
  constexpr unsigned kCrossCheckMax = 64;
  std::ostringstream csv;
  csv << "# tool: " << kToolVersion << "\n# input_hash: " << expansion_hash(x) << "\n# seed: none\n";
  csv << "n,degree,coeff_count,millis\n";
  bool consistent = true;
  for (unsigned n : ns) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = wick_power(x, n);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    csv << n << ',' << p.max_degree() << ',' << p.size() << ',' << format_double(ms) << '\n';
    if (n <= kCrossCheckMax) {
      const double dev = coefficient_deviation(p, wick_power_iterated(x, n));
      if (dev > 1e-12) {
        err << "wick_power mismatch against iterated products at n = " << n << " (" << format_double(dev) << ")\n";
        consistent = false;
      }
    }
  }
  const std::string path = c.out.empty() ? "bench.csv" : c.out;
  write_file(path, csv.str());
  out << "wrote " << path << "\n";
  return consistent ? kSuccess : kVerificationFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wick calculus on finite Wiener chaos expansions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, expansion_arg, n_arg;
  std::uint64_t seed = 0;
  unsigned cases = 0, n_max = 0;
  std::size_t samples = 0;
  double tolerance = 0, epsilon = 0;
  bool min_order = false;
  auto* o_config = app.add_option("--config", config_path, "JSON experiment config");
  auto* o_out = app.add_option("--out", out_path, "Output path");
  auto* o_seed = app.add_option("--seed", seed, "Random seed");
  auto* o_cases = app.add_option("--cases", cases, "Randomized cases per identity suite");
  auto* o_exp = app.add_option("--expansion", expansion_arg, "Expansion as inline JSON or a file path");
  auto* o_n = app.add_option("--n", n_arg, "Power index, or comma-separated list");
  auto* o_nmax = app.add_option("--n-max", n_max, "Largest n of the power-of-two schedule");
  auto* o_samples = app.add_option("--samples", samples, "Monte Carlo sample count");
  auto* o_tol = app.add_option("--tolerance", tolerance, "Identity deviation tolerance");
  auto* o_eps = app.add_option("--epsilon", epsilon, "Concentration window around 1");
  auto* o_min = app.add_flag("--min-order", min_order, "Tabulate the lowest chaos order of X^<>n");

  auto* verify = app.add_subcommand("verify", "Run the algebraic identity suites");
  auto* converge = app.add_subcommand("converge", "L2 convergence of rescaled Wick powers");
  auto* dist = app.add_subcommand("dist", "Distribution of rescaled Wick powers vs the lognormal limit");
  auto* bench = app.add_subcommand("bench", "Time wick_power");

  std::vector<std::string> argv_store{"wickchaos"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    json j = json::object();
    if (*o_config) j = read_json_file(config_path);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (*o_out) j["out"] = out_path;
    if (*o_seed) j["seed"] = seed;
    if (*o_cases) j["cases"] = cases;
    if (*o_exp) j["expansion"] = expansion_arg;
    if (*o_nmax) j["n_max"] = n_max;
    if (*o_samples) j["samples"] = samples;
    if (*o_tol) j["tolerance"] = tolerance;
    if (*o_eps) j["concentration_epsilon"] = epsilon;
    if (*o_min) j["min_order"] = min_order;
    if (*o_n) {
      std::vector<unsigned> ns;
      std::stringstream ss(n_arg);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const long v = std::stol(item, &used);
        if (used != item.size() || v <= 0) throw ConfigError("--n entries must be positive integers");
        ns.push_back(static_cast<unsigned>(v));
      }
      j["n_list"] = ns;
      if (!ns.empty()) j["n"] = ns.front();
    }
    const ExperimentConfig config = parse_config(j);
    if (*verify) return run_verify(config, out, err);
    if (*converge) return run_converge(config, out, err);
    if (*dist) return run_dist(config, out, err);
    if (*bench) return run_bench(config, out, err);
    return kInvalidInput;
  } catch (const ConfigError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace wick::cli
