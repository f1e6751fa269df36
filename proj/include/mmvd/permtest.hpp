#pragma once

#include <cstdint>
#include <vector>

#include "mmvd/statistic.hpp"

namespace mmvd {

enum class StatisticKind { MMVD, GMMD };

struct PermutationPlan {
  int n_permutations = 999;
  std::uint64_t master_seed = 0;
  StatisticKind statistic = StatisticKind::MMVD;
  int threads = 0;  // 0 -> hardware concurrency
};

struct TestResult {
  TestStatistic observed;
  double p_value = 1.0;
  std::vector<double> replicate_values;
  PermutationPlan plan;
  std::vector<Eigen::Index> sizes;
};

/// Permutation calibration: B random relabelings of the pooled sample,
/// each recomputed by permuting rows/columns of the precomputed Gram
/// matrix. p-value is (1 + #{replicate >= observed}) / (B + 1).
///
/// Replicate b draws its permutation from a stream derived from
/// (master_seed, b), so the result is identical for any thread count.
TestResult permutation_test(const GramBlocks& gram, const GroupWeights& weights,
                            const PermutationPlan& plan);

namespace detail {

/// One pass shared by both statistics: permutation p-values for MMVD and
/// GMMD over the same relabelings. Used by the Monte Carlo harness.
struct PairedPValues {
  double mmvd;
  double gmmd;
};
PairedPValues permutation_pvalues_both(const GramBlocks& gram,
                                       const GroupWeights& weights,
                                       int n_permutations,
                                       std::uint64_t master_seed, int threads);

/// Gram matrix with rows/columns gathered through the permutation.
Eigen::MatrixXd permute_gram(const Eigen::MatrixXd& full,
                             const std::vector<std::uint32_t>& perm);

}  // namespace detail

}  // namespace mmvd
