#pragma once

#include <cstddef>
#include <vector>

#include "channelq/channel.hpp"
#include "channelq/degrade.hpp"

namespace channelq::detail {

/// Renumbers arbitrary block labels so that blocks are ordered by their
/// smallest member.
std::vector<std::size_t> renumber_by_smallest(const std::vector<std::size_t>& labels);

/// Builds the merge log that realizes a partition by folding each block's
/// members, in index order, into its smallest member.
std::vector<MergeStep> block_merge_log(const JointView& view, const std::vector<std::size_t>& map);

/// Composes the deterministic map with `ch` and totals the step log.
DegradeResult assemble_degrade(const Channel& ch, const std::vector<std::size_t>& labels,
                               std::vector<MergeStep> steps);

}  // namespace channelq::detail
