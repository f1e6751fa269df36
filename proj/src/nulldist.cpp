#include "mmvd/nulldist.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mmvd/rng.hpp"
#include "mmvd/statistic.hpp"

namespace mmvd {

NullSpectrum estimate_spectrum(const GramBlocks& gram) {
  const Eigen::Index n = gram.n();
  if (n < 3) throw std::invalid_argument("need at least 3 pooled curves");
  const double nd = static_cast<double>(n);

  // M = H Lambda H, pooled double-centering.
  Eigen::MatrixXd m = gram.full();
  const Eigen::VectorXd row_means = m.rowwise().mean();
  const double grand = row_means.mean();
  m.colwise() -= row_means;
  m.rowwise() -= row_means.transpose();
  m.array() += grand;

  // W = M .* M, then (1/n) H W H.
  Eigen::MatrixXd w = m.cwiseProduct(m);
  const Eigen::VectorXd w_row_means = w.rowwise().mean();
  const double w_grand = w_row_means.mean();
  w.colwise() -= w_row_means;
  w.rowwise() -= w_row_means.transpose();
  w.array() += w_grand;
  w /= nd;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      w, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = solver.eigenvalues();

  const double top = ev.size() > 0 ? ev[ev.size() - 1] : 0.0;
  std::vector<double> eigenvalues;
  eigenvalues.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = ev.size(); i-- > 0;) {
    double v = ev[i];
    if (v < -1e-8 * std::max(top, 1.0))
      throw std::invalid_argument(
          "spectral estimate has a substantially negative eigenvalue");
    eigenvalues.push_back(v < 0.0 ? 0.0 : v);
  }
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<double>());

  std::vector<double> rho;
  rho.reserve(gram.sizes().size());
  for (auto s : gram.sizes()) rho.push_back(static_cast<double>(s) / nd);
  return NullSpectrum{std::move(eigenvalues), std::move(rho)};
}

NullSpectrum truncate_spectrum(const NullSpectrum& spectrum,
                               double trace_fraction) {
  if (!(trace_fraction > 0.0 && trace_fraction <= 1.0))
    throw std::invalid_argument("trace_fraction must be in (0,1]");
  const double total = std::accumulate(spectrum.eigenvalues.begin(),
                                       spectrum.eigenvalues.end(), 0.0);
  std::vector<double> kept;
  double acc = 0.0;
  for (double v : spectrum.eigenvalues) {
    kept.push_back(v);
    acc += v;
    if (total > 0.0 && acc >= trace_fraction * total) break;
  }
  if (kept.empty()) kept.push_back(0.0);
  return NullSpectrum{std::move(kept), spectrum.rho};
}

NullSample sample_null(const NullSpectrum& spectrum, int k, int n_draws,
                       std::uint64_t seed) {
  if (spectrum.eigenvalues.empty())
    throw std::invalid_argument("spectrum must contain at least one term");
  if (k != static_cast<int>(spectrum.rho.size()))
    throw std::invalid_argument("k does not match rho length");
  if (n_draws < 1) throw std::invalid_argument("n_draws must be >= 1");

  const auto& lambda = spectrum.eigenvalues;
  const auto& rho = spectrum.rho;
  std::vector<double> sqrt_rho(rho.size());
  std::transform(rho.begin(), rho.end(), sqrt_rho.begin(),
                 [](double r) { return std::sqrt(r); });

  NullSample out;
  out.draws.resize(static_cast<std::size_t>(n_draws));
  out.truncation = static_cast<int>(lambda.size());
  out.seed = seed;

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(static_cast<std::size_t>(k));
  for (int d = 0; d < n_draws; ++d) {
    auto eng = make_engine(seed, static_cast<std::uint64_t>(d));
    double total = 0.0;
    for (double lp : lambda) {
      double z = 0.0;          // Z_p = sum_j Y_jp^2
      double weighted = 0.0;   // sum_j sqrt(rho_j) Y_jp
      double quad = 0.0;       // sum_j Y_jp^2 / rho_j
      for (int j = 0; j < k; ++j) {
        const double v = normal(eng);
        y[static_cast<std::size_t>(j)] = v;
        z += v * v;
        weighted += sqrt_rho[static_cast<std::size_t>(j)] * v;
        quad += v * v / rho[static_cast<std::size_t>(j)];
      }
      // Cross sum: -2 sum_j sum_{l!=j} sqrt(rho_l/rho_j) Y_jp Y_lp
      //          = -2 sum_j (Y_jp / sqrt(rho_j)) (weighted - sqrt(rho_j) Y_jp)
      double cross = 0.0;
      for (int j = 0; j < k; ++j) {
        const double v = y[static_cast<std::size_t>(j)];
        cross += v / sqrt_rho[static_cast<std::size_t>(j)] *
                 (weighted - sqrt_rho[static_cast<std::size_t>(j)] * v);
      }
      total += lp * ((k - 2) * z + quad - 2.0 * cross);
    }
    out.draws[static_cast<std::size_t>(d)] = total;
  }
  return out;
}

double critical_value(const NullSample& sample, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0,1)");
  const std::size_t n = sample.draws.size();
  if (n == 0) throw std::invalid_argument("empty null sample");
  std::vector<double> sorted = sample.draws;
  std::sort(sorted.begin(), sorted.end());
  // Smallest draw with rank >= ceil((1-alpha) * n), 1-based ranks.
  std::size_t rank = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return sorted[rank - 1];
}

SpectralDecision spectral_test(const GramBlocks& gram,
                               const GroupWeights& weights, double alpha,
                               int n_draws, std::uint64_t seed) {
  const NullSpectrum spectrum = truncate_spectrum(estimate_spectrum(gram));
  const NullSample sample =
      sample_null(spectrum, gram.k(), n_draws, seed);
  const double crit = critical_value(sample, alpha);
  const double scaled =
      static_cast<double>(gram.n()) * mmvd_statistic(gram, weights).value;
  return SpectralDecision{scaled, crit, scaled > crit};
}

}  // namespace mmvd
