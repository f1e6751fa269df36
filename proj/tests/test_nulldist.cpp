#include <cmath>
#include <doctest.h>
#include <numeric>
#include <random>

#include "mmvd/nulldist.hpp"
#include "mmvd/statistic.hpp"

using namespace mmvd;

namespace {

GramBlocks gram_from(const Eigen::MatrixXd& full,
                     std::vector<Eigen::Index> sizes) {
  return GramBlocks(std::move(sizes), full);
}

// Direct dense construction of (1/n) H (M .* M) H with M = H Lambda H.
Eigen::VectorXd spectrum_oracle(const Eigen::MatrixXd& lambda) {
  const Eigen::Index n = lambda.rows();
  const Eigen::MatrixXd h =
      Eigen::MatrixXd::Identity(n, n) -
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd m = h * lambda * h;
  const Eigen::MatrixXd w = m.cwiseProduct(m);
  const Eigen::MatrixXd target = h * w * h / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(target,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

}  // namespace

TEST_CASE("degenerate Gram gives an all-zero spectrum") {
  const auto gram = gram_from(Eigen::MatrixXd::Ones(5, 5), {2, 3});
  const auto spectrum = estimate_spectrum(gram);
  for (double v : spectrum.eigenvalues) CHECK(v == 0.0);
  CHECK(spectrum.rho == std::vector<double>{0.4, 0.6});
}

TEST_CASE("hand-built Gram matches the dense oracle") {
  Eigen::MatrixXd lam(3, 3);
  lam << 1.0, 0.8, 0.3,
         0.8, 1.0, 0.5,
         0.3, 0.5, 1.0;
  const auto spectrum = estimate_spectrum(gram_from(lam, {2, 1}));
  const Eigen::VectorXd oracle = spectrum_oracle(lam);
  REQUIRE(spectrum.eigenvalues.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(spectrum.eigenvalues[static_cast<std::size_t>(i)] ==
          doctest::Approx(std::max(oracle[i], 0.0)).epsilon(1e-10));
}

TEST_CASE("eigenvalue sum equals the trace") {
  std::mt19937 eng(5);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd base(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) base(i, j) = d(eng);
  Eigen::MatrixXd lam = base * base.transpose();
  lam = ((lam + lam.transpose()) / 2.0).eval();

  const auto spectrum = estimate_spectrum(gram_from(lam, {3, 3}));
  const double sum = std::accumulate(spectrum.eigenvalues.begin(),
                                     spectrum.eigenvalues.end(), 0.0);
  const Eigen::VectorXd oracle = spectrum_oracle(lam);
  CHECK(sum == doctest::Approx(oracle.sum()).epsilon(1e-10));
}

TEST_CASE("kernel scaling multiplies eigenvalues by c^2") {
  Eigen::MatrixXd lam(4, 4);
  lam << 1.0, 0.5, 0.2, 0.1,
         0.5, 1.0, 0.4, 0.3,
         0.2, 0.4, 1.0, 0.6,
         0.1, 0.3, 0.6, 1.0;
  const double c = 2.5;
  const auto base = estimate_spectrum(gram_from(lam, {2, 2}));
  const auto scaled = estimate_spectrum(gram_from((c * lam).eval(), {2, 2}));
  for (std::size_t i = 0; i < base.eigenvalues.size(); ++i)
    CHECK(scaled.eigenvalues[i] ==
          doctest::Approx(c * c * base.eigenvalues[i]).epsilon(1e-10));
}

TEST_CASE("spectrum is invariant under pooled permutation") {
  Eigen::MatrixXd lam(5, 5);
  std::mt19937 eng(9);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd base(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) base(i, j) = d(eng);
  lam = base * base.transpose();
  lam = ((lam + lam.transpose()) / 2.0).eval();

  const auto s1 = estimate_spectrum(gram_from(lam, {2, 3}));
  std::vector<int> p{3, 0, 4, 1, 2};
  Eigen::MatrixXd permuted(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      permuted(i, j) = lam(p[static_cast<std::size_t>(i)],
                           p[static_cast<std::size_t>(j)]);
  const auto s2 = estimate_spectrum(gram_from(permuted, {2, 3}));
  for (std::size_t i = 0; i < s1.eigenvalues.size(); ++i)
    CHECK(std::abs(s1.eigenvalues[i] - s2.eigenvalues[i]) < 1e-8);
}

TEST_CASE("truncation keeps the requested trace fraction") {
  NullSpectrum s{{10.0, 5.0, 1.0, 0.001, 0.0001}, {0.5, 0.5}};
  const auto t = truncate_spectrum(s, 0.999);
  CHECK(t.eigenvalues.size() == 3);
  const auto all = truncate_spectrum(s, 1.0);
  CHECK(all.eigenvalues.size() == 5);
}

TEST_CASE("sample_null degenerate and validation") {
  NullSpectrum zero{{0.0, 0.0}, {0.5, 0.5}};
  const auto sample = sample_null(zero, 2, 100, 1);
  for (double v : sample.draws) CHECK(v == 0.0);

  NullSpectrum empty{{}, {0.5, 0.5}};
  CHECK_THROWS_AS(sample_null(empty, 2, 10, 1), std::invalid_argument);
  NullSpectrum s{{1.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(sample_null(s, 3, 10, 1), std::invalid_argument);
}

TEST_CASE("k=2 draws are nonnegative and k=3 mean matches expectation") {
  NullSpectrum s2{{1.0}, {0.5, 0.5}};
  const auto sample2 = sample_null(s2, 2, 20000, 42);
  for (double v : sample2.draws) CHECK(v >= 0.0);

  // k=3, equal rho, single unit eigenvalue: mean = (k-2)k + sum 1/rho
  // = 3 + 9 = 12; var of each draw is finite, check within 3 SE.
  NullSpectrum s3{{1.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  const int n = 100000;
  const auto sample3 = sample_null(s3, 3, n, 7);
  const double mean =
      std::accumulate(sample3.draws.begin(), sample3.draws.end(), 0.0) /
      static_cast<double>(n);
  double var = 0.0;
  for (double v : sample3.draws) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  const double se = std::sqrt(var / static_cast<double>(n));
  CHECK(std::abs(mean - 12.0) < 3.0 * se);
}

TEST_CASE("determinism of sample_null") {
  NullSpectrum s{{2.0, 1.0}, {0.4, 0.6}};
  const auto a = sample_null(s, 2, 500, 99);
  const auto b = sample_null(s, 2, 500, 99);
  CHECK(a.draws == b.draws);
  const auto c = sample_null(s, 2, 500, 100);
  CHECK(a.draws != c.draws);
}

TEST_CASE("critical_value rank arithmetic") {
  NullSample sample;
  sample.draws.resize(100);
  std::iota(sample.draws.begin(), sample.draws.end(), 1.0);  // 1..100
  CHECK(critical_value(sample, 0.05) == 95.0);
  CHECK(critical_value(sample, 0.5) == 50.0);

  NullSample constant;
  constant.draws.assign(200, 3.25);
  CHECK(critical_value(constant, 0.05) == 3.25);
  CHECK(critical_value(constant, 0.9) == 3.25);

  CHECK_THROWS_AS(critical_value(sample, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(critical_value(sample, 1.0), std::invalid_argument);
}

TEST_CASE("4 chi2_1 quantile recovered from the k=2 sampler") {
  NullSpectrum s{{1.0}, {0.5, 0.5}};
  const auto sample = sample_null(s, 2, 100000, 31);
  // 0.95 quantile of 4 chi2_1 is 4 * 3.8415 = 15.366.
  CHECK(critical_value(sample, 0.05) ==
        doctest::Approx(15.366).epsilon(0.02));
}

TEST_CASE("n < 3 rejected") {
  CHECK_THROWS_AS(estimate_spectrum(gram_from(Eigen::MatrixXd::Ones(2, 2),
                                              {1, 1})),
                  std::invalid_argument);
}
