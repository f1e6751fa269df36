#include "mmvd/kernel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmvd {

double eval_kernel(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, const Grid& grid) {
  if (spec.gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
  return std::exp(-spec.gamma * l2_sq_dist(x, y, grid));
}

GramBlocks::GramBlocks(std::vector<Eigen::Index> sizes, Eigen::MatrixXd full)
    : sizes_(std::move(sizes)), full_(std::move(full)) {
  if (sizes_.size() < 2) throw std::invalid_argument("need at least 2 groups");
  offsets_.resize(sizes_.size());
  Eigen::Index off = 0;
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    offsets_[j] = off;
    off += sizes_[j];
  }
  if (off != full_.rows() || full_.rows() != full_.cols())
    throw std::invalid_argument("gram dimensions do not match group sizes");
}

GramBlocks build_gram(const std::vector<FunctionalSample>& samples,
                      const KernelSpec& spec) {
  if (samples.size() < 2) throw std::invalid_argument("need at least 2 groups");
  const Grid& grid = samples.front().grid();
  std::vector<Eigen::Index> sizes;
  Eigen::Index n = 0;
  for (const auto& s : samples) {
    if (!(s.grid() == grid))
      throw std::invalid_argument("all groups must share one grid");
    sizes.push_back(s.size());
    n += s.size();
  }

  // Pooled curve matrix, group by group.
  Eigen::MatrixXd pooled(n, static_cast<Eigen::Index>(grid.size()));
  Eigen::Index row = 0;
  for (const auto& s : samples) {
    pooled.middleRows(row, s.size()) = s.curves();
    row += s.size();
  }

  // Upper triangle only, mirrored. The per-pair distance is evaluated the
  // same way l2_sq_dist does it, so entries are symmetric in the curve pair
  // down to the last bit.
  const Eigen::VectorXd& w = grid.quad_weights();
  const Eigen::Index d = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = 1.0;
    for (Eigen::Index r = i + 1; r < n; ++r) {
      double d2 = 0.0;
      for (Eigen::Index t = 0; t < d; ++t) {
        const double diff = pooled(i, t) - pooled(r, t);
        d2 += w[t] * (diff * diff);
      }
      const double v = std::exp(-spec.gamma * d2);
      gram(i, r) = v;
      gram(r, i) = v;
    }
  }
  return GramBlocks(std::move(sizes), std::move(gram));
}

GroupWeights::GroupWeights(std::vector<double> pi) : pi_(std::move(pi)) {
  if (pi_.size() < 2) throw std::invalid_argument("need at least 2 weights");
  double sum = 0.0;
  for (double p : pi_) {
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("weights must lie in (0,1)");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1");
}

GroupWeights GroupWeights::proportional(
    const std::vector<Eigen::Index>& sizes) {
  const double n = static_cast<double>(
      std::accumulate(sizes.begin(), sizes.end(), Eigen::Index{0}));
  std::vector<double> pi;
  pi.reserve(sizes.size());
  for (auto s : sizes) pi.push_back(static_cast<double>(s) / n);
  return GroupWeights(std::move(pi));
}

}  // namespace mmvd
