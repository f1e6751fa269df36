#include "mmvd/statistic.hpp"

#include <cassert>
#include <cmath>

#include "mmvd/errors.hpp"

namespace mmvd {

Eigen::MatrixXd centered_block(const Eigen::MatrixXd& block) {
  const Eigen::Index rows = block.rows(), cols = block.cols();
  if (rows < 1 || cols < 1) throw std::invalid_argument("empty block");
  const Eigen::VectorXd row_means = block.rowwise().mean();
  const Eigen::RowVectorXd col_means = block.colwise().mean();
  const double grand = row_means.mean();
  Eigen::MatrixXd out = block;
  out.colwise() -= row_means;
  out.rowwise() -= col_means;
  out.array() += grand;
  return out;
}

namespace {

// Frobenius norm squared of the double-centered block. Entries are
// centered before squaring, so near-constant blocks come out near zero
// instead of as a difference of large sums.
double centered_frob_sq(const Eigen::Ref<const Eigen::MatrixXd>& block) {
  const Eigen::Index rows = block.rows(), cols = block.cols();
  const Eigen::VectorXd row_means = block.rowwise().mean();
  const Eigen::RowVectorXd col_means = block.colwise().mean();
  const double grand = row_means.mean();
  double acc = 0.0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double cm = col_means[c] - grand;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double v = block(r, c) - row_means[r] - cm;
      acc += v * v;
    }
  }
  return acc;
}

}  // namespace

double hs_norm_sq(const Eigen::Ref<const Eigen::MatrixXd>& block_jj,
                  Eigen::Index n_j) {
  if (block_jj.rows() != block_jj.cols())
    throw std::invalid_argument("diagonal block must be square");
  if (block_jj.rows() != n_j)
    throw std::invalid_argument("block size does not match n_j");
  const double n = static_cast<double>(n_j);
  return centered_frob_sq(block_jj) / (n * n);
}

double hs_inner(const Eigen::Ref<const Eigen::MatrixXd>& block_jl,
                Eigen::Index n_j, Eigen::Index n_l) {
  if (block_jl.rows() != n_j || block_jl.cols() != n_l)
    throw std::invalid_argument("block dimensions do not match group sizes");
  return centered_frob_sq(block_jl) /
         (static_cast<double>(n_j) * static_cast<double>(n_l));
}

TestStatistic mmvd_statistic(const GramBlocks& gram,
                             const GroupWeights& weights) {
  const int k = gram.k();
  if (weights.k() != k)
    throw std::invalid_argument("weight count does not match group count");
  const auto& pi = weights.pi();
  const auto& sizes = gram.sizes();

  std::vector<double> norms(static_cast<std::size_t>(k));
  Eigen::MatrixXd inners = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    norms[static_cast<std::size_t>(j)] =
        hs_norm_sq(gram.block(j, j), sizes[static_cast<std::size_t>(j)]);
    inners(j, j) = norms[static_cast<std::size_t>(j)];
    for (int l = j + 1; l < k; ++l) {
      const double v = hs_inner(gram.block(j, l),
                                sizes[static_cast<std::size_t>(j)],
                                sizes[static_cast<std::size_t>(l)]);
      inners(j, l) = v;
      inners(l, j) = v;
    }
  }

  Eigen::MatrixXd pair = Eigen::MatrixXd::Zero(k, k);
  double value = 0.0;
  for (int j = 0; j < k; ++j) {
    for (int l = 0; l < k; ++l) {
      if (l == j) continue;
      double d = norms[static_cast<std::size_t>(j)] +
                 norms[static_cast<std::size_t>(l)] - 2.0 * inners(j, l);
      const double scale =
          std::max(1.0, norms[static_cast<std::size_t>(j)] +
                            norms[static_cast<std::size_t>(l)]);
      if (d < 0.0) {
        if (d < -1e-12 * scale)
          throw internal_error("pairwise HS distance came out negative");
        d = 0.0;
      }
      pair(j, l) = d;
      value += pi[static_cast<std::size_t>(l)] * d;
    }
  }

#ifndef NDEBUG
  // Cross-check against the collected form
  // sum_j (1 + (k-2) pi_j) ||V_j||^2 - 2 sum_{j != l} pi_l <V_j, V_l>.
  double collected = 0.0;
  for (int j = 0; j < k; ++j) {
    collected += (1.0 + (k - 2) * pi[static_cast<std::size_t>(j)]) *
                 norms[static_cast<std::size_t>(j)];
    for (int l = 0; l < k; ++l)
      if (l != j) collected -= 2.0 * pi[static_cast<std::size_t>(l)] * inners(j, l);
  }
  assert(std::abs(collected - value) <= 1e-10 * std::max(1.0, std::abs(value)));
#endif

  return TestStatistic{value, std::move(pair), weights, std::move(norms),
                       std::move(inners)};
}

double gmmd_statistic(const GramBlocks& gram, const GroupWeights& weights) {
  const int k = gram.k();
  if (weights.k() != k)
    throw std::invalid_argument("weight count does not match group count");
  const auto& pi = weights.pi();

  std::vector<double> diag_means(static_cast<std::size_t>(k));
  Eigen::MatrixXd cross_means(k, k);
  for (int j = 0; j < k; ++j) {
    for (int l = j; l < k; ++l) {
      const double m = gram.block(j, l).mean();
      cross_means(j, l) = m;
      cross_means(l, j) = m;
    }
    diag_means[static_cast<std::size_t>(j)] = cross_means(j, j);
  }

  double value = 0.0;
  for (int j = 0; j < k; ++j) {
    for (int l = 0; l < k; ++l) {
      if (l == j) continue;
      double d = diag_means[static_cast<std::size_t>(j)] +
                 diag_means[static_cast<std::size_t>(l)] -
                 2.0 * cross_means(j, l);
      if (d < 0.0) d = 0.0;
      value += pi[static_cast<std::size_t>(l)] * d;
    }
  }
  return value < 0.0 ? 0.0 : value;
}

}  // namespace mmvd
