#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mmvd/kernel.hpp"

namespace mmvd {

/// Observed value of the pooled k-group covariance-discrepancy statistic,
/// together with its building blocks.
struct TestStatistic {
  double value = 0.0;
  Eigen::MatrixXd pair_mvd_sq;  // (j,l) -> squared HS distance of V_j, V_l
  GroupWeights weights;
  std::vector<double> hs_norms;   // ||V_j||^2
  Eigen::MatrixXd hs_inners;      // <V_j, V_l>
};

/// Double-centers a Gram block: Q_j * B * Q_l with Q = I - (1/n) 11^T.
/// Row means, column means and the grand mean are removed.
Eigen::MatrixXd centered_block(const Eigen::MatrixXd& block);

/// ||V_j||^2 = ||Q B Q||_F^2 / n_j^2 for the diagonal block B of group j.
double hs_norm_sq(const Eigen::Ref<const Eigen::MatrixXd>& block_jj,
                  Eigen::Index n_j);

/// <V_j, V_l> = ||Q_j B Q_l||_F^2 / (n_j n_l) for the cross block B.
double hs_inner(const Eigen::Ref<const Eigen::MatrixXd>& block_jl,
                Eigen::Index n_j, Eigen::Index n_l);

/// The weighted sum over ordered pairs (j,l), l != j, of
/// pi_l * ||V_j - V_l||^2, computed through centered-block traces.
TestStatistic mmvd_statistic(const GramBlocks& gram,
                             const GroupWeights& weights);

/// Mean-embedding baseline: weighted sum of pi_l * ||m_j - m_l||^2,
/// with ||m_j - m_l||^2 from block means of the Gram matrix.
double gmmd_statistic(const GramBlocks& gram, const GroupWeights& weights);

}  // namespace mmvd
