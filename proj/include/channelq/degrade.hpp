#pragma once

#include <cstddef>
#include <vector>

#include "channelq/channel.hpp"

namespace channelq {

/// One merge. `first` and `second` are letter ids: the smallest original
/// output index in each merged group. The merged group keeps id `first`.
struct MergeStep {
  std::size_t first = 0;
  std::size_t second = 0;
  double delta_i = 0.0;
  std::size_t size_before = 0;
};

struct DegradeResult {
  Channel channel;
  IntermediateChannel intermediate;  // deterministic map W letters -> channel letters
  double delta_i = 0.0;
  std::vector<MergeStep> step_log;
};

struct GreedyMergeOptions {
  /// For binary input, only consider pairs adjacent in posterior order.
  /// Checked against the all-pairs search in the test suite.
  bool binary_adjacent_fast_path = true;
};

/// Repeatedly merges the pair of output letters with the smallest loss in
/// mutual information until at most `target_l` letters remain. Ties go to
/// the lexicographically smallest pair of letter ids.
DegradeResult greedy_merge(const Channel& ch, std::size_t target_l,
                           GreedyMergeOptions options = {});

/// Optimal degrading of a binary-input channel: exact dynamic program over
/// contiguous blocks of letters sorted by posterior.
DegradeResult optimal_degrade_binary(const Channel& ch, std::size_t target_l);

/// Tolerance used to pre-merge letters with identical posteriors before the
/// binary dynamic program.
inline constexpr double kDegradeDuplicateTol = 1e-9;

/// groups[i][theta] is the output letter y_i^(theta); for all i, theta, x:
/// W(y_i^(0) | x) = W(y_i^(theta) | x + theta mod |X|).
struct CycloPartition {
  std::vector<std::vector<std::size_t>> groups;
};

CycloPartition detect_cyclo_symmetry(const Channel& ch);

/// Greedy-merge restricted to merging whole cyclo-symmetric groups, which
/// keeps the output cyclo-symmetric. `target_l` must be a multiple of |X|.
DegradeResult greedy_merge_cyclo(const Channel& ch, std::size_t target_l);

}  // namespace channelq
