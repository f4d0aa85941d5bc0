#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "channelq/channel.hpp"

namespace channelq {

struct SplitStep {
  std::size_t letter = 0;  // source letter index of the removed letter
  double delta_i = 0.0;
  std::size_t size_before = 0;
};

struct UpgradeResult {
  Channel channel;
  /// Masses and posteriors of the upgraded letters, in channel letter order.
  JointView view;
  /// forward: Phi(y|z), rows z. reverse: Phi_{z|y}, rows y.
  IntermediateChannel intermediate;
  double delta_i = 0.0;
  /// Source letters whose posteriors became the upgraded letters (sorted by
  /// posterior). Filled by every binary upgrader.
  std::vector<std::size_t> chosen_subset;
  std::vector<SplitStep> step_log;
};

struct PhiSolution {
  IntermediateChannel intermediate;
  JointView view;
  double delta_i = 0.0;
};

/// Best intermediate channel for upgrading W to the letters `subset` (source
/// letter indices, any order). Each source letter is split between its two
/// neighbors in `subset`. The subset must contain both extreme posteriors.
PhiSolution optimal_phi_binary(const JointView& view, std::span<const std::size_t> subset);

/// Optimal upgrading of a binary-input channel to at most `target_l` letters.
UpgradeResult optimal_upgrade_binary(const Channel& ch, std::size_t target_l);

/// Repeatedly removes the interior letter whose mass moves to its two
/// posterior neighbors with the smallest gain in mutual information.
UpgradeResult greedy_split(const Channel& ch, std::size_t target_l);

/// Greedy-split for symmetric channels; conjugate letters are split together
/// so that the output stays symmetric.
UpgradeResult greedy_split_symmetric(const Channel& ch, std::size_t target_l);

/// Sets of W letters nearest (Euclidean, posterior space) to each Q letter.
struct VoronoiAssignment {
  std::vector<std::vector<std::size_t>> sets;
  Matrix centers;  // weighted posterior center per Q letter; zero row when empty
};

VoronoiAssignment voronoi_assignment(const JointView& w, const JointView& q);

/// Lower estimate of I(Q) - I(W) for Q upgraded from W.
double upgrade_lower_bound(const Channel& w, const Channel& q);

/// Checks the reconstruction, mass and forward composition invariants.
bool verify_upgraded(const Channel& w, const UpgradeResult& result, double tol);

/// Distinct posteriors of a binary view: for each value, the first letter in
/// (posterior, index) order. Letters only share a value when their posteriors
/// are bit-equal; anything else is split, which keeps the result an upgrade.
std::vector<std::size_t> upgrade_representatives(const JointView& view);

}  // namespace channelq
