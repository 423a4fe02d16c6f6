// Experiment driver: every module is exposed as a seeded subcommand emitting
// machine-readable JSON (or CSV) so benchmark runs are reproducible.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subsketch/subsketch.hpp"

using json = nlohmann::ordered_json;
using namespace subsketch;

namespace {

struct OutputOptions {
  std::string out_path;  // empty = stdout
  std::string format = "json";
};

void emit(const std::string& payload, const OutputOptions& opt) {
  if (opt.out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream f(opt.out_path);
    if (!f) throw std::runtime_error("cannot open output path: " + opt.out_path);
    f << payload;
    if (!payload.empty() && payload.back() != '\n') f << '\n';
  }
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Flat key/value CSV rendering of a JSON object (arrays join with ';').
std::string json_to_kv_csv(const json& j) {
  std::ostringstream os;
  os << "field,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    os << it.key() << ",";
    if (it->is_array()) {
      bool first = true;
      for (const auto& v : *it) {
        if (!first) os << ';';
        first = false;
        os << (v.is_number_float() ? fmt_double(v.get<double>()) : v.dump());
      }
    } else if (it->is_number_float()) {
      os << fmt_double(it->get<double>());
    } else if (it->is_string()) {
      os << it->get<std::string>();
    } else {
      os << it->dump();
    }
    os << "\n";
  }
  return os.str();
}

void emit_record(json& record, const OutputOptions& opt,
                 std::chrono::steady_clock::time_point start) {
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  record["wall_clock_ms"] = static_cast<std::int64_t>(elapsed);
  if (opt.format == "csv")
    emit(json_to_kv_csv(record), opt);
  else
    emit(record.dump(2), opt);
}

json base_record(const std::string& subcommand) {
  json j;
  j["schema"] = 1;
  j["version"] = "1.0.0";
  j["subcommand"] = subcommand;
  return j;
}

Eigen::MatrixXd random_matrix(std::size_t n, std::size_t d, RngStream& rng) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.next_normal();
  return a;
}

std::vector<double> random_vector(std::size_t d, RngStream& rng) {
  std::vector<double> x(d);
  for (auto& v : x) v = rng.next_normal();
  return x;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(int d, double p, const OutputOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  KernelFunction kernel = KernelFunction::power(p);
  GridSpectrum spec = fourier_spectrum(kernel, d);
  auto c = subsketch::detail::binomial_table(d);
  if (opt.format == "csv") {
    std::ostringstream os;
    os << "d,kernel,p,weight,coefficient,multiplicity\n";
    for (int w = 0; w <= d; ++w)
      os << d << "," << kernel.name() << "," << fmt_double(p) << "," << w << ","
         << fmt_double(spec.by_weight[w]) << "," << subsketch::detail::binom(c, d, w)
         << "\n";
    emit(os.str(), opt);
    return 0;
  }
  json j = base_record("spectrum");
  j["d"] = d;
  j["kernel"] = kernel.name();
  j["p"] = p;
  j["lambda0"] = spec.lambda0;
  j["multiplicity"] = spec.multiplicity;
  json rows = json::array();
  for (int w = 0; w <= d; ++w) {
    json row;
    row["weight"] = w;
    row["coefficient"] = spec.by_weight[w];
    row["multiplicity"] = subsketch::detail::binom(c, d, w);
    rows.push_back(row);
  }
  j["rows"] = rows;
  emit_record(j, opt, start);
  return 0;
}

// ------------------------------------------------------------ hard-instance

bool is_even_integer(double p) {
  return p == std::round(p) && std::llround(p) % 2 == 0;
}

// For even p no truncated grid instance exists (exact sketches do), so the
// subcommand runs the incoherent-row distinguishing experiment instead.
int cmd_hard_instance_distinguish(int d, double p, std::size_t m,
                                  std::size_t trials, std::uint64_t seed,
                                  const OutputOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  RngStream rng(seed, "distinguish");
  IncoherentSet set = sample_incoherent_set(d, m, rng);
  std::int64_t rows = choose_distinguishing_rows(d, p, set.coherence);
  std::size_t successes = 0;
  json details = json::array();
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream trial = rng.derive(t);
    DistinguishResult r = distinguishing_experiment(set, p, rows, trial);
    successes += r.separation ? 1 : 0;
    json dj;
    dj["trial"] = t;
    dj["separation"] = r.separation;
    dj["planted"] = r.planted;
    dj["foreign"] = r.foreign;
    details.push_back(dj);
  }
  json j = base_record("hard-instance");
  j["mode"] = "distinguishing";
  j["d"] = d;
  j["p"] = p;
  j["m"] = m;
  j["seed"] = seed;
  j["coherence"] = set.coherence;
  j["rows"] = rows;
  j["threshold"] = static_cast<double>(rows) * std::pow(set.coherence, p);
  j["trials"] = trials;
  j["separation_rate"] =
      static_cast<double>(successes) / static_cast<double>(std::max<std::size_t>(trials, 1));
  j["trial_details"] = details;
  emit_record(j, opt, start);
  return 0;
}

int cmd_hard_instance(int d, double p, std::size_t m, std::size_t trials,
                      std::uint64_t seed, const OutputOptions& opt) {
  if (is_even_integer(p))
    return cmd_hard_instance_distinguish(d, p, m, trials, seed, opt);

  auto start = std::chrono::steady_clock::now();
  RngStream rng(seed, "hard-instance");
  GridSpectrum spec = fourier_spectrum(KernelFunction::power(p), d);
  HardInstance inst = build_hard_instance(d, p, rng);
  std::size_t n = std::size_t{1} << d;

  double sd = std::sqrt(static_cast<double>(d));
  double ytp_min = std::numeric_limits<double>::infinity(), ytp_max = 0.0;
  double max_round = 0.0;
  for (std::size_t jx = 0; jx < n; ++jx) {
    double v = std::pow(inst.ytilde[jx], p);
    ytp_min = std::min(ytp_min, v);
    ytp_max = std::max(ytp_max, v);
    max_round = std::max(max_round, std::abs(v - (inst.x[jx] + inst.shift)));
  }
  bool exhaustive = d <= 14;
  std::size_t audit_count = exhaustive ? n : 4096;
  double max_query = 0.0;
  RngStream audit_rng = rng.derive("query-audit");
  for (std::size_t k = 0; k < audit_count; ++k) {
    std::size_t i = exhaustive ? k : audit_rng.next_below(n);
    max_query = std::max(max_query, exact_query_answer(inst, i));
  }
  double query_bound =
      std::pow(2.0, d) * std::pow(8.0 * std::pow(static_cast<double>(d), 1.5), p);

  json j = base_record("hard-instance");
  j["mode"] = "grid-instance";
  j["d"] = d;
  j["p"] = p;
  j["seed"] = seed;
  j["lambda0"] = spec.lambda0;
  j["sigma"] = inst.sigma;
  j["multiplicity"] = inst.level_rank;
  j["bits"] = inst.bit_indices.size();
  j["row_norm"] = inst.row_norm;
  j["shift"] = inst.shift;
  j["grain"] = inst.grain;
  j["row_sum"] = inst.row_sum;
  j["ytilde_p_min"] = ytp_min;
  j["ytilde_p_max"] = ytp_max;
  j["ytilde_p_lower_bound"] = 2.0 * sd;
  j["ytilde_p_upper_bound"] = 8.0 * sd + std::pow(2.0, -d);
  j["max_rounding_error"] = max_round;
  j["rounding_bound"] = std::pow(2.0, -d);
  j["max_query_value"] = max_query;
  j["query_bound"] = query_bound;
  j["query_audit"] = exhaustive ? "exhaustive" : "sampled";
  j["kappa"] = condition_number(inst.a);
  emit_record(j, opt, start);
  return 0;
}

// ---------------------------------------------------------------- recover

int cmd_recover(int d, double p, const std::string& noise, std::size_t trials,
                std::uint64_t seed, double eps_flag, bool eps_set,
                const OutputOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  GridSpectrum spec = fourier_spectrum(KernelFunction::power(p), d);
  SpectrumLevel level = dominant_level(spec);
  double n = std::pow(2.0, d);
  double row_norm = level.sigma * std::sqrt(static_cast<double>(level.multiplicity) / n);

  NoiseModel model = NoiseModel::exact();
  double parameter = 0.0;
  if (noise == "additive") {
    parameter = 0.1 * row_norm;
    model = NoiseModel::additive_adversarial(parameter);
  } else if (noise == "multiplicative") {
    parameter = eps_set ? eps_flag : multiplicative_eps_over_threshold(d, p, 100.0);
    model = NoiseModel::multiplicative(parameter);
  }

  RngStream rng(seed, "recover");
  RecoveryResult res = recovery_experiment(d, p, model, trials, rng);
  RngStream trial0 = rng.derive(std::uint64_t{0});
  HardInstance inst0 = build_hard_instance(d, p, trial0);

  json j = base_record("recover");
  j["d"] = d;
  j["p"] = p;
  j["noise_model"] = noise;
  j["noise_parameter"] = parameter;
  j["trials"] = trials;
  j["seed"] = seed;
  j["per_bit_success_rate"] = res.per_bit_rate;
  j["success_rate"] = res.success_rate;
  j["bits"] = res.bits;
  j["lambda0"] = spec.lambda0;
  j["sigma"] = res.sigma;
  j["multiplicity"] = res.level_rank;
  j["kappa"] = condition_number(inst0.a);
  j["row_norm"] = res.row_norm;
  j["additive_threshold"] = res.additive_threshold;
  emit_record(j, opt, start);
  return 0;
}

// ------------------------------------------------------------- sketch-bench

int cmd_sketch_bench(const std::string& sketch, double p, double eps,
                     std::size_t n, std::size_t d, std::size_t trials,
                     std::uint64_t seed, const OutputOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  RngStream rng(seed, "sketch-bench");
  double eps_eff = eps > 0.0 ? eps : 1e-9;
  std::size_t covered = 0;
  double rel_sum = 0.0;
  std::uint64_t size_bits = 0;
  json params;
  params["p"] = p;
  params["eps"] = eps;
  params["n"] = n;
  params["d"] = d;

  for (std::size_t t = 0; t < trials; ++t) {
    RngStream trial = rng.derive(t);
    Eigen::MatrixXd a = random_matrix(n, d, trial);
    std::vector<double> x = random_vector(d, trial);
    double estimate = 0.0, oracle = 0.0;
    if (sketch == "gram") {
      GramSketch s = build_gram_sketch(a);
      estimate = s.query(x);
      oracle = phi_norm(a, x, KernelFunction::power(2.0));
      size_bits = s.size_bits();
    } else if (sketch == "even") {
      int ip = static_cast<int>(std::llround(p));
      EvenMomentSketch s = build_even_moment_sketch(a, ip);
      estimate = s.query(x);
      oracle = phi_norm(a, x, KernelFunction::power(static_cast<double>(ip)));
      size_bits = s.size_bits();
    } else if (sketch == "stable") {
      StableSketch s = build_stable_sketch(a, p, eps_eff, trial);
      estimate = s.query(x);
      oracle = phi_norm(a, x, KernelFunction::power(p));
      size_bits = s.size_bits();
    } else {  // sampling
      auto m = static_cast<std::size_t>(std::ceil(0.6 * static_cast<double>(n)));
      params["m"] = m;
      SamplingSketch s = build_sampling_sketch(a, p, m, trial);
      estimate = s.query(x);
      oracle = phi_norm(a, x, KernelFunction::power(p));
      size_bits = s.size_bits();
    }
    double rel = oracle != 0.0 ? std::abs(estimate - oracle) / oracle : 0.0;
    rel_sum += rel;
    if (rel <= eps_eff) ++covered;
  }

  json j = base_record("sketch-bench");
  j["sketch"] = sketch;
  j["params"] = params;
  j["seed"] = seed;
  j["trials"] = trials;
  j["size_bits"] = size_bits;
  j["coverage_rate"] =
      static_cast<double>(covered) / static_cast<double>(std::max<std::size_t>(trials, 1));
  j["mean_rel_err"] =
      rel_sum / static_cast<double>(std::max<std::size_t>(trials, 1));
  emit_record(j, opt, start);
  return 0;
}

// -------------------------------------------------------------- tukey-bench

int cmd_tukey_bench(std::size_t n, double tau, double eps, std::size_t spikes,
                    std::size_t trials, std::uint64_t seed,
                    const OutputOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  if (spikes > n) throw std::runtime_error("tukey-bench: --spikes exceeds --n");
  RngStream rng(seed, "tukey-bench");
  RngStream data_rng = rng.derive("instance");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < spikes)
      x[i] = data_rng.next_sign() * (1.5 + 1.5 * data_rng.next_double()) * tau;
    else
      x[i] = data_rng.next_sign() * 0.5 * data_rng.next_double() * tau;
  }
  double exact = exact_tukey_mass(x, tau);

  double est_sum = 0.0, rel_sum = 0.0, s1_sum = 0.0, s2_sum = 0.0, s3_sum = 0.0;
  double rate = 0.0;
  int degree = 0;
  double r_used = 1.0, beta = 0.0;
  json per_trial = json::array();
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream trial = rng.derive(t);
    TukeyEstimate e = estimate_tukey_detailed(x, tau, eps, trial);
    est_sum += e.estimate;
    double rel = exact != 0.0 ? std::abs(e.estimate - exact) / exact : 0.0;
    rel_sum += rel;
    s1_sum += e.s1;
    s2_sum += e.s2;
    s3_sum += e.s3;
    if (rel <= 3.0 * eps) rate += 1.0;
    degree = e.band_degree;
    r_used = e.sampling_rate;
    beta = e.beta;
    json tj;
    tj["trial"] = t;
    tj["estimate"] = e.estimate;
    tj["rel_err"] = rel;
    tj["sampled"] = e.sampled_count;
    per_trial.push_back(tj);
  }
  double tn = static_cast<double>(std::max<std::size_t>(trials, 1));

  json j = base_record("tukey-bench");
  j["n"] = n;
  j["tau"] = tau;
  j["eps"] = eps;
  j["spikes"] = spikes;
  j["trials"] = trials;
  j["seed"] = seed;
  j["exact"] = exact;
  j["estimate"] = est_sum / tn;
  j["rel_err"] = rel_sum / tn;
  j["r"] = r_used;
  j["beta"] = beta;
  j["degree"] = degree;
  j["S1"] = s1_sum / tn;
  j["S2"] = s2_sum / tn;
  j["S3"] = s3_sum / tn;
  j["success_rate_3eps"] = rate / tn;
  j["coarse_oracle_assisted"] = true;
  j["trial_details"] = per_trial;
  emit_record(j, opt, start);
  return 0;
}

// ----------------------------------------------------------- median2d-bench

int cmd_median2d_bench(std::size_t n, double eps, std::uint64_t seed,
                       std::size_t grid, const OutputOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  RngStream rng(seed, "median2d-bench");
  RngStream data_rng = rng.derive("matrix");
  Eigen::MatrixXd a = random_matrix(n, 2, data_rng);
  L1Sketch2D sketch = build_l1_2d_sketch(a, eps);

  RngStream dir_rng = rng.derive("directions");
  double max_rel = 0.0;
  for (std::size_t g = 0; g < grid; ++g) {
    double theta = 2.0 * M_PI * dir_rng.next_double();
    std::array<double, 2> x{std::cos(theta), std::sin(theta)};
    double exact = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      exact += std::abs(a(i, 0) * x[0] + a(i, 1) * x[1]);
    double est = sketch.query(x);
    if (exact > 0.0)
      max_rel = std::max(max_rel, std::abs(est - exact) / exact);
  }
  double ln = std::log(static_cast<double>(n));
  std::size_t size = sketch.coreset_plus().size() + sketch.coreset_minus().size();

  json j = base_record("median2d-bench");
  j["n"] = n;
  j["eps"] = eps;
  j["seed"] = seed;
  j["grid"] = grid;
  j["coreset_size_plus"] = sketch.coreset_plus().size();
  j["coreset_size_minus"] = sketch.coreset_minus().size();
  j["max_rel_err"] = max_rel;
  j["K_observed"] = static_cast<double>(size) * eps / (ln * ln);
  emit_record(j, opt, start);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subsketch: lp subspace-sketch experiment driver"};
  app.require_subcommand(1);

  int d = 8;
  double p = 1.0;
  double eps = 0.1;
  double tau = 1.0;
  std::size_t n = 1000;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t spikes = 0;
  std::size_t grid = 1000;
  std::string noise = "exact";
  std::string sketch = "gram";
  OutputOptions opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--out", opt.out_path, "write the record to this path");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* sp = app.add_subcommand("spectrum", "kernel matrix spectrum by Hamming weight");
  sp->add_option("--d", d, "cube dimension")->check(CLI::Range(1, 24));
  sp->add_option("--p", p, "power-kernel exponent")->check(CLI::PositiveNumber);
  add_common(sp);

  CLI::App* hi = app.add_subcommand(
      "hard-instance",
      "grid instance audit (non-even p) or distinguishing experiment (even p)");
  hi->add_option("--d", d, "cube dimension")->check(CLI::Range(2, 64));
  hi->add_option("--p", p, "exponent")->check(CLI::PositiveNumber);
  hi->add_option("--n", n, "incoherent set size (even-p mode)");
  hi->add_option("--trials", trials, "repetitions (even-p mode)");
  add_common(hi);

  CLI::App* rc = app.add_subcommand("recover", "sign-recovery experiment");
  rc->add_option("--d", d, "cube dimension")->check(CLI::Range(10, 20));
  rc->add_option("--p", p, "exponent")->check(CLI::PositiveNumber);
  rc->add_option("--noise", noise, "oracle noise model")
      ->check(CLI::IsMember({"exact", "additive", "multiplicative"}));
  rc->add_option("--trials", trials, "number of trials");
  double rc_eps = 0.0;
  CLI::Option* rc_eps_opt =
      rc->add_option("--eps", rc_eps, "multiplicative noise epsilon");
  add_common(rc);

  CLI::App* sb = app.add_subcommand("sketch-bench", "sketch coverage benchmark");
  sb->add_option("--sketch", sketch, "sketch family")
      ->check(CLI::IsMember({"gram", "even", "stable", "sampling"}));
  sb->add_option("--p", p, "norm exponent")->check(CLI::PositiveNumber);
  sb->add_option("--eps", eps, "target relative error")
      ->check(CLI::Range(0.0, 1.0));
  sb->add_option("--n", n, "matrix rows");
  sb->add_option("--d", d, "matrix columns")->check(CLI::Range(1, 64));
  sb->add_option("--trials", trials, "number of (A, x) trials");
  add_common(sb);

  CLI::App* tb = app.add_subcommand("tukey-bench", "mollified Tukey estimator benchmark");
  tb->add_option("--n", n, "vector length");
  tb->add_option("--tau", tau, "Tukey threshold")->check(CLI::PositiveNumber);
  tb->add_option("--eps", eps, "target relative error")
      ->check(CLI::Range(1e-6, 0.999));
  tb->add_option("--spikes", spikes, "number of large entries");
  tb->add_option("--trials", trials, "number of estimator runs");
  add_common(tb);

  CLI::App* mb = app.add_subcommand("median2d-bench", "2-D l1 coreset benchmark");
  mb->add_option("--n", n, "matrix rows");
  mb->add_option("--eps", eps, "target relative error")
      ->check(CLI::Range(1e-6, 0.999));
  mb->add_option("--grid", grid, "number of query directions");
  add_common(mb);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // Domain constraints that span several flags; violations are usage errors.
  auto usage_error = [](const std::string& msg) {
    std::cerr << "invalid flags: " << msg << "\nRun with --help for usage.\n";
    return 2;
  };
  if (rc->parsed()) {
    if (d % 2 != 0) return usage_error("recover requires an even --d");
    if (is_even_integer(p))
      return usage_error("recover requires a non-even-integer --p");
  }
  if (hi->parsed() && !is_even_integer(p)) {
    if (d % 2 != 0 || d < 10 || d > 20)
      return usage_error("hard-instance with non-even p requires even --d in [10, 20]");
  }
  if (hi->parsed() && is_even_integer(p)) {
    if (p < 2.0) return usage_error("distinguishing mode requires --p >= 2");
    if (static_cast<double>(n) > std::pow(2.0, d / 4.0))
      return usage_error("distinguishing mode requires --n <= 2^(d/4)");
  }
  if (sb->parsed()) {
    if (sketch == "even" && (p != 2.0 && p != 4.0 && p != 6.0))
      return usage_error("even sketch requires --p in {2, 4, 6}");
    if (sketch == "stable" && (p <= 0.0 || p > 2.0))
      return usage_error("stable sketch requires --p in (0, 2]");
    if (sketch == "stable" && !(eps > 0.0 && eps < 1.0))
      return usage_error("stable sketch requires --eps in (0, 1)");
  }

  try {
    if (sp->parsed()) {
      if (sp->count("--format") == 0) opt.format = "csv";
      return cmd_spectrum(d, p, opt);
    }
    if (hi->parsed()) return cmd_hard_instance(d, p, n, trials, seed, opt);
    if (rc->parsed())
      return cmd_recover(d, p, noise, trials, seed, rc_eps,
                         rc_eps_opt->count() > 0, opt);
    if (sb->parsed())
      return cmd_sketch_bench(sketch, p, eps, n, d, trials, seed, opt);
    if (tb->parsed())
      return cmd_tukey_bench(n, tau, eps, spikes, trials, seed, opt);
    if (mb->parsed()) return cmd_median2d_bench(n, eps, seed, grid, opt);
    std::cerr << "no subcommand dispatched\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
