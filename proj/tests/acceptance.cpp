// Acceptance suite: end-to-end checks of the statistic, the permutation
// calibration against the published size/power table, the limiting-law
// sampler, and the invariant battery. Prints one PASS/FAIL line per
// criterion; exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "mmvd/nulldist.hpp"
#include "mmvd/permtest.hpp"
#include "mmvd/rng.hpp"
#include "mmvd/simgen.hpp"
#include "mmvd/statistic.hpp"

using namespace mmvd;

namespace {

int failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Eigen::MatrixXd random_rows(Eigen::Index n, Eigen::Index d, unsigned seed) {
  std::mt19937 eng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = dist(eng);
  return m;
}

GramBlocks linear_gram(const std::vector<Eigen::MatrixXd>& groups,
                       const Eigen::VectorXd& quad_weights) {
  std::vector<Eigen::Index> sizes;
  Eigen::Index n = 0;
  for (const auto& g : groups) {
    sizes.push_back(g.rows());
    n += g.rows();
  }
  Eigen::MatrixXd pooled(n, groups.front().cols());
  Eigen::Index row = 0;
  for (const auto& g : groups) {
    pooled.middleRows(row, g.rows()) = g;
    row += g.rows();
  }
  Eigen::MatrixXd full =
      pooled * quad_weights.asDiagonal() * pooled.transpose();
  full = ((full + full.transpose()) / 2.0).eval();
  return GramBlocks(std::move(sizes), std::move(full));
}

// Covariance in the weighted inner product: map through W^(1/2) first.
Eigen::MatrixXd weighted_covariance(const Eigen::MatrixXd& rows,
                                    const Eigen::VectorXd& quad_weights) {
  Eigen::MatrixXd phi =
      rows * quad_weights.array().sqrt().matrix().asDiagonal();
  Eigen::MatrixXd centered = phi.rowwise() - phi.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(rows.rows());
}

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const Grid grid = make_equispaced_grid(21);
  const Eigen::VectorXd w = grid.quad_weights();
  const std::vector<Eigen::MatrixXd> groups{
      random_rows(5, 21, 101), random_rows(7, 21, 102), random_rows(6, 21, 103)};
  const auto gram = linear_gram(groups, w);
  const auto weights = GroupWeights::proportional(gram.sizes());
  const double value = mmvd_statistic(gram, weights).value;

  double oracle = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      if (l == j) continue;
      oracle += weights.pi()[static_cast<std::size_t>(l)] *
                (weighted_covariance(groups[static_cast<std::size_t>(j)], w) -
                 weighted_covariance(groups[static_cast<std::size_t>(l)], w))
                    .squaredNorm();
    }
  const double rel = std::abs(value - oracle) / std::abs(oracle);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(1, "linear-kernel covariance oracle", rel <= 1e-8 && secs < 1.0,
         "rel err " + fmt(rel) + ", " + fmt(secs) + " s");
}

MonteCarloReport run_model(ModelId model, int n, std::uint64_t seed) {
  ModelSpec spec;
  spec.model = model;
  spec.group_sizes = {n, n, n};
  spec.seed = seed;
  PermutationPlan plan;
  plan.n_permutations = 199;
  return monte_carlo(spec, 200, plan, 0.05);
}

void criterion_2() {
  const auto r = run_model(ModelId::Model1, 100, 20260824);
  report(2, "Model 1 empirical size, n=100",
         r.rejection_rate >= 0.01 && r.rejection_rate <= 0.09,
         "size " + fmt(r.rejection_rate) + " in [0.01, 0.09], " +
             fmt(r.wall_time_seconds) + " s");
}

void criterion_3() {
  const auto r50 = run_model(ModelId::Model2, 50, 31);
  const auto r100 = run_model(ModelId::Model2, 100, 32);
  report(3, "Model 2 power, n=50 and n=100",
         r50.rejection_rate >= 0.95 && r100.rejection_rate >= 0.99,
         "power(50) " + fmt(r50.rejection_rate) + " >= 0.95, power(100) " +
             fmt(r100.rejection_rate) + " >= 0.99");
}

void criteria_4_and_5() {
  const auto r25 = run_model(ModelId::Model3, 25, 41);
  const auto r100 = run_model(ModelId::Model3, 100, 42);
  report(4, "Model 3 power, n=25 and n=100",
         r25.rejection_rate >= 0.90 && r100.rejection_rate >= 0.99,
         "power(25) " + fmt(r25.rejection_rate) + " >= 0.90, power(100) " +
             fmt(r100.rejection_rate) + " >= 0.99");

  const bool gmmd_band = r25.rejection_rate_gmmd >= 0.85 &&
                         r25.rejection_rate_gmmd <= 1.0;
  const bool ordering =
      r25.rejection_rate >= r25.rejection_rate_gmmd - 0.05 &&
      r100.rejection_rate >= r100.rejection_rate_gmmd - 0.05;
  report(5, "GMMD baseline band and MMVD ordering", gmmd_band && ordering,
         "gmmd(25) " + fmt(r25.rejection_rate_gmmd) + ", gmmd(100) " +
             fmt(r100.rejection_rate_gmmd));
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

void criterion_6() {
  // k=2, equal rho, single unit eigenvalue reduces to 4 chi2_1.
  NullSpectrum s{{1.0}, {0.5, 0.5}};
  const int n = 100000;
  const auto sample = sample_null(s, 2, n, 61);

  std::vector<double> analytic(static_cast<std::size_t>(n));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    auto eng = make_engine(62, static_cast<std::uint64_t>(i));
    const double z = normal(eng);
    analytic[static_cast<std::size_t>(i)] = 4.0 * z * z;
  }
  const double ks = two_sample_ks(sample.draws, analytic);
  report(6, "k=2 reduction to 4*chi2_1", ks < 0.02, "KS " + fmt(ks));
}

void criterion_7() {
  bool ok = true;
  std::string detail;

  // Nonnegativity over 1000 random inputs.
  std::mt19937 eng(71);
  std::uniform_int_distribution<int> size_d(2, 5);
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const std::vector<Eigen::MatrixXd> groups{
        random_rows(size_d(eng), 4, 5000 + static_cast<unsigned>(trial)),
        random_rows(size_d(eng), 4, 6000 + static_cast<unsigned>(trial)),
        random_rows(size_d(eng), 4, 7000 + static_cast<unsigned>(trial))};
    const auto gram =
        linear_gram(groups, Eigen::VectorXd::Constant(4, 0.25));
    if (mmvd_statistic(gram, GroupWeights::proportional(gram.sizes())).value <
        0.0) {
      ok = false;
      detail = "negative statistic at trial " + std::to_string(trial);
    }
  }

  const Grid grid = make_equispaced_grid(21);
  ModelSpec spec;
  spec.model = ModelId::Model2;
  spec.group_sizes = {12, 15, 13};
  spec.seed = 72;
  const auto samples = generate(spec);
  const auto gram = build_gram(samples, KernelSpec{});
  const auto weights = GroupWeights::proportional(gram.sizes());
  const auto stat = mmvd_statistic(gram, weights);

  // Within-group permutation invariance.
  {
    Eigen::MatrixXd shuffled = samples[0].curves();
    shuffled.row(0).swap(shuffled.row(11));
    shuffled.row(3).swap(shuffled.row(7));
    const auto gram2 = build_gram(
        {FunctionalSample(samples[0].grid(), shuffled), samples[1],
         samples[2]},
        KernelSpec{});
    const double v2 = mmvd_statistic(gram2, weights).value;
    if (std::abs(v2 - stat.value) > 1e-12 * std::max(1.0, stat.value)) {
      ok = false;
      detail = "permutation invariance violated";
    }
  }

  // Pairwise vs collected form.
  {
    double collected = 0.0;
    const auto& pi = weights.pi();
    for (int j = 0; j < 3; ++j) {
      collected += (1.0 + 1.0 * pi[static_cast<std::size_t>(j)]) *
                   stat.hs_norms[static_cast<std::size_t>(j)];
      for (int l = 0; l < 3; ++l)
        if (l != j)
          collected -=
              2.0 * pi[static_cast<std::size_t>(l)] * stat.hs_inners(j, l);
    }
    if (std::abs(collected - stat.value) >
        1e-10 * std::max(1.0, std::abs(stat.value))) {
      ok = false;
      detail = "pairwise vs collected form disagree";
    }
  }

  // Duplication invariance.
  {
    std::vector<FunctionalSample> doubled;
    for (const auto& s : samples) {
      Eigen::MatrixXd twice(2 * s.size(), s.curves().cols());
      twice << s.curves(), s.curves();
      doubled.emplace_back(s.grid(), std::move(twice));
    }
    const auto gram2 = build_gram(doubled, KernelSpec{});
    const auto stat2 = mmvd_statistic(gram2, weights);
    if (std::abs(stat2.value - stat.value) >
        1e-10 * std::max(1.0, stat.value)) {
      ok = false;
      detail = "duplication invariance violated";
    }
  }

  // p-value determinism across worker counts.
  {
    std::vector<double> pvals;
    std::vector<std::vector<double>> reps;
    for (int threads : {1, 2, 8}) {
      PermutationPlan plan;
      plan.n_permutations = 99;
      plan.master_seed = 73;
      plan.threads = threads;
      const auto result = permutation_test(gram, weights, plan);
      pvals.push_back(result.p_value);
      reps.push_back(result.replicate_values);
    }
    if (pvals[1] != pvals[0] || pvals[2] != pvals[0] || reps[1] != reps[0] ||
        reps[2] != reps[0]) {
      ok = false;
      detail = "p-value depends on thread count";
    }
  }

  report(7, "invariant suite", ok, ok ? "all invariants hold" : detail);
}

void criterion_8() {
  int rejections = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    ModelSpec spec;
    spec.model = ModelId::Model1;
    spec.group_sizes = {100, 100, 100};
    spec.seed = mix_seed(81, static_cast<std::uint64_t>(rep));
    const auto samples = generate(spec);
    const auto gram = build_gram(samples, KernelSpec{});
    const auto decision =
        spectral_test(gram, GroupWeights::proportional(gram.sizes()), 0.05,
                      2000, mix_seed(spec.seed, 1));
    if (decision.reject) ++rejections;
  }
  const double size = static_cast<double>(rejections) / reps;
  report(8, "spectral calibration size (best-effort)",
         size >= 0.01 && size <= 0.12, "size " + fmt(size) + " in [0.01, 0.12]");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_and_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
