#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mmvd/fda.hpp"

namespace mmvd {

enum class KernelFamily { Gaussian };

/// Kernel on L2 curves. Only the Gaussian family ships:
/// K(x,y) = exp(-gamma * ||x - y||^2), bounded by 1.
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double gamma = 0.5;
};

double eval_kernel(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, const Grid& grid);

/// Pooled n x n kernel matrix, partitioned into k x k group blocks.
class GramBlocks {
 public:
  GramBlocks(std::vector<Eigen::Index> sizes, Eigen::MatrixXd full);

  const std::vector<Eigen::Index>& sizes() const { return sizes_; }
  const Eigen::MatrixXd& full() const { return full_; }
  Eigen::Index n() const { return full_.rows(); }
  int k() const { return static_cast<int>(sizes_.size()); }
  Eigen::Index offset(int group) const { return offsets_[static_cast<std::size_t>(group)]; }

  /// View of block (j, l), dimensions n_j x n_l.
  Eigen::Block<const Eigen::MatrixXd> block(int j, int l) const {
    return full_.block(offsets_[static_cast<std::size_t>(j)],
                       offsets_[static_cast<std::size_t>(l)],
                       sizes_[static_cast<std::size_t>(j)],
                       sizes_[static_cast<std::size_t>(l)]);
  }

 private:
  std::vector<Eigen::Index> sizes_;
  std::vector<Eigen::Index> offsets_;
  Eigen::MatrixXd full_;
};

/// Evaluates the kernel over the pooled sample; the upper triangle is
/// computed and mirrored, so the result is bitwise symmetric.
GramBlocks build_gram(const std::vector<FunctionalSample>& samples,
                      const KernelSpec& spec);

/// Group weights pi summing to 1.
class GroupWeights {
 public:
  explicit GroupWeights(std::vector<double> pi);
  static GroupWeights proportional(const std::vector<Eigen::Index>& sizes);

  const std::vector<double>& pi() const { return pi_; }
  int k() const { return static_cast<int>(pi_.size()); }

 private:
  std::vector<double> pi_;
};

}  // namespace mmvd
