#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mmvd/csv.hpp"
#include "mmvd/errors.hpp"
#include "mmvd/nulldist.hpp"
#include "mmvd/permtest.hpp"
#include "mmvd/simgen.hpp"

using json = nlohmann::json;

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("MMVD_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;
}

mmvd::GroupWeights resolve_weights(const std::string& mode,
                                   const std::vector<Eigen::Index>& sizes) {
  if (mode.empty() || mode == "proportional")
    return mmvd::GroupWeights::proportional(sizes);
  std::vector<double> pi;
  std::stringstream ss(mode);
  std::string field;
  while (std::getline(ss, field, ',')) pi.push_back(std::stod(field));
  if (pi.size() != sizes.size())
    throw std::invalid_argument("weight count does not match group count");
  std::cerr << "note: explicit weights decoupled from sample sizes; the "
               "asymptotic theory is stated for proportional weights\n";
  return mmvd::GroupWeights(std::move(pi));
}

std::vector<mmvd::FunctionalSample> load_groups(
    const std::vector<std::string>& paths) {
  if (paths.size() < 2)
    throw std::invalid_argument("need at least 2 input files");
  std::vector<mmvd::FunctionalSample> samples;
  for (const auto& p : paths) samples.push_back(mmvd::read_sample_csv(p));
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].grid() == samples.front().grid()))
      throw std::invalid_argument(paths[i] + ": grid differs from " +
                                  paths.front());
  return samples;
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument(out_path + ": cannot open");
    out << doc.dump(2) << "\n";
  }
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

struct CommonOpts {
  double gamma = 0.5;
  std::string weights = "proportional";
  std::uint64_t seed = 0;
  double alpha = 0.05;
  int threads = 0;
  std::string out;
};

int run_test(const std::vector<std::string>& inputs, const CommonOpts& opts,
             int permutations) {
  const auto samples = load_groups(inputs);
  const auto gram = mmvd::build_gram(
      samples, mmvd::KernelSpec{mmvd::KernelFamily::Gaussian, opts.gamma});
  const auto weights = resolve_weights(opts.weights, gram.sizes());

  mmvd::PermutationPlan plan;
  plan.n_permutations = permutations;
  plan.master_seed = opts.seed;
  plan.threads = resolve_threads(opts.threads);
  const auto result = mmvd::permutation_test(gram, weights, plan);

  json doc;
  doc["statistic"] = result.observed.value;
  doc["pair_mvd_sq"] = matrix_to_json(result.observed.pair_mvd_sq);
  doc["p_value"] = result.p_value;
  doc["B"] = plan.n_permutations;
  doc["seed"] = plan.master_seed;
  doc["n_sizes"] = result.sizes;
  doc["gamma"] = opts.gamma;
  doc["alpha"] = opts.alpha;
  doc["reject"] = result.p_value <= opts.alpha;
  emit(doc, opts.out);
  return 0;
}

int run_simulate(int model, int n, int replications, int permutations,
                 const std::string& exp_param, bool emit_data,
                 const std::string& format, const CommonOpts& opts) {
  mmvd::ModelSpec spec;
  if (model < 1 || model > 3)
    throw std::invalid_argument("model must be 1, 2 or 3");
  spec.model = static_cast<mmvd::ModelId>(model);
  spec.group_sizes = {n, n, n};
  spec.seed = opts.seed;
  spec.exp_param =
      exp_param == "rate" ? mmvd::ExpParam::Rate : mmvd::ExpParam::Mean;

  if (emit_data) {
    const auto samples = mmvd::generate(spec);
    const std::string prefix = opts.out.empty() ? "group" : opts.out;
    for (std::size_t g = 0; g < samples.size(); ++g) {
      const std::string path = prefix + std::to_string(g + 1) + ".csv";
      mmvd::write_sample_csv(path, samples[g]);
      std::cout << path << "\n";
    }
    return 0;
  }

  mmvd::PermutationPlan plan;
  plan.n_permutations = permutations;
  plan.threads = resolve_threads(opts.threads);
  const auto report =
      mmvd::monte_carlo(spec, replications, plan, opts.alpha, opts.gamma);

  if (format == "csv") {
    std::ostringstream csv;
    csv << "model,n,mmvd,gmmd\n"
        << model << "," << n << "," << report.rejection_rate << ","
        << report.rejection_rate_gmmd << "\n";
    if (opts.out.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream out(opts.out);
      if (!out) throw std::invalid_argument(opts.out + ": cannot open");
      out << csv.str();
    }
    return 0;
  }

  json doc;
  doc["model"] = model;
  doc["n"] = n;
  doc["replications"] = report.replications;
  doc["alpha"] = report.alpha;
  doc["B"] = plan.n_permutations;
  doc["seed"] = spec.seed;
  doc["rejection_rate"] = report.rejection_rate;
  doc["per_method"] = {{"MMVD", report.rejection_rate},
                       {"GMMD", report.rejection_rate_gmmd}};
  doc["wall_time_seconds"] = report.wall_time_seconds;
  emit(doc, opts.out);
  return 0;
}

int run_nulldist(const std::vector<std::string>& inputs,
                 const std::string& quantiles_arg, int n_draws,
                 const std::string& spectrum_csv, const CommonOpts& opts) {
  const auto samples = load_groups(inputs);
  const auto gram = mmvd::build_gram(
      samples, mmvd::KernelSpec{mmvd::KernelFamily::Gaussian, opts.gamma});
  const auto weights = resolve_weights(opts.weights, gram.sizes());

  const auto spectrum = mmvd::truncate_spectrum(mmvd::estimate_spectrum(gram));
  const auto sample =
      mmvd::sample_null(spectrum, gram.k(), n_draws, opts.seed);

  std::vector<double> quantiles;
  std::stringstream ss(quantiles_arg);
  std::string field;
  while (std::getline(ss, field, ',')) quantiles.push_back(std::stod(field));

  json doc;
  doc["eigenvalues"] = spectrum.eigenvalues;
  doc["truncation"] = sample.truncation;
  json qs = json::object();
  for (double q : quantiles) {
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("quantiles must lie in (0,1)");
    qs[std::to_string(q)] = mmvd::critical_value(sample, 1.0 - q);
  }
  doc["quantiles"] = qs;

  const auto decision =
      mmvd::spectral_test(gram, weights, opts.alpha, n_draws, opts.seed);
  doc["scaled_statistic"] = decision.scaled_statistic;
  doc["critical_value"] = decision.critical;
  doc["alpha"] = opts.alpha;
  doc["reject"] = decision.reject;

  if (!spectrum_csv.empty()) {
    std::ofstream out(spectrum_csv);
    if (!out) throw std::invalid_argument(spectrum_csv + ": cannot open");
    out.precision(17);
    for (double v : spectrum.eigenvalues) out << v << "\n";
  }
  emit(doc, opts.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel-based homogeneity testing for functional data"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::vector<std::string> inputs;
  int permutations_test = 999;
  int permutations_sim = 199;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--kernel-gamma", opts.gamma,
                    "Gaussian kernel multiplier (default 0.5)");
    cmd->add_option("--weights", opts.weights,
                    "'proportional' or comma-separated list summing to 1");
    cmd->add_option("--alpha", opts.alpha, "significance level");
    cmd->add_option("--seed", opts.seed, "master RNG seed");
    cmd->add_option("--threads", opts.threads,
                    "worker threads (0 = auto; env MMVD_THREADS)");
    cmd->add_option("--out", opts.out, "output file (default stdout)");
  };

  auto* test_cmd =
      app.add_subcommand("test", "permutation homogeneity test on CSV groups");
  test_cmd->add_option("inputs", inputs, "group CSV files")->required();
  test_cmd->add_option("--permutations", permutations_test,
                       "number of permutations B");
  add_common(test_cmd);

  auto* sim_cmd =
      app.add_subcommand("simulate", "Monte Carlo size/power experiment");
  int model = 1, n = 100, replications = 200;
  std::string exp_param = "mean", format = "json";
  bool emit_data = false;
  sim_cmd->add_option("--model", model, "model id: 1, 2 or 3");
  sim_cmd->add_option("--n", n, "per-group sample size");
  sim_cmd->add_option("--replications", replications, "Monte Carlo reps");
  sim_cmd->add_option("--permutations", permutations_sim,
                      "permutations per replication");
  sim_cmd->add_option("--exp-param", exp_param,
                      "'mean' or 'rate' reading of Exp(t)")
      ->check(CLI::IsMember({"mean", "rate"}));
  sim_cmd->add_flag("--emit-data", emit_data,
                    "write one generated dataset as CSVs and exit");
  sim_cmd->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_common(sim_cmd);

  auto* null_cmd = app.add_subcommand(
      "nulldist", "spectral estimate of the asymptotic null law");
  std::string quantiles = "0.95";
  std::string spectrum_csv;
  int n_draws = 100000;
  null_cmd->add_option("inputs", inputs, "group CSV files")->required();
  null_cmd->add_option("--quantiles", quantiles,
                       "comma-separated quantile levels");
  null_cmd->add_option("--draws", n_draws, "Monte Carlo draws from the law");
  null_cmd->add_option("--spectrum-csv", spectrum_csv,
                       "also dump eigenvalues, one per line");
  add_common(null_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (test_cmd->parsed()) return run_test(inputs, opts, permutations_test);
    if (sim_cmd->parsed())
      return run_simulate(model, n, replications, permutations_sim, exp_param,
                          emit_data, format, opts);
    return run_nulldist(inputs, quantiles, n_draws, spectrum_csv, opts);
  } catch (const mmvd::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
