#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "channelq/channel.hpp"

namespace channelq {

/// W-(y1 y2 | u1) = sum_u2 1/2 W(y1 | u1 xor u2) W(y2 | u2).
Channel polar_transform_minus(const Channel& ch);

/// W+(y1 y2 u1 | u2) = 1/2 W(y1 | u1 xor u2) W(y2 | u2).
Channel polar_transform_plus(const Channel& ch);

enum class PolarDegrader { Greedy, OptimalBinary };
enum class PolarUpgrader { GreedySplit, Optimal };

std::string_view to_string(PolarDegrader d);
std::string_view to_string(PolarUpgrader u);
PolarDegrader parse_degrader(std::string_view name);
PolarUpgrader parse_upgrader(std::string_view name);

struct PolarOptions {
  std::size_t depth = 0;
  std::size_t target_l = 64;
  PolarDegrader degrader = PolarDegrader::Greedy;
  PolarUpgrader upgrader = PolarUpgrader::GreedySplit;
  /// 0 reads CHANNELQ_THREADS (default 1).
  std::size_t threads = 0;
};

struct PolarEntry {
  std::string index;  // one character per transform, '0' for minus, '1' for plus
  double lower_i = 0.0;
  double upper_i = 0.0;
};

struct PolarReport {
  std::size_t depth = 0;
  std::size_t target_l = 0;
  std::string degrader;
  std::string upgrader;
  double input_mi = 0.0;
  std::vector<PolarEntry> entries;  // ordered by index
};

/// Tracks a degraded and an upgraded chain per synthetic channel, quantizing
/// both to at most L letters after every transform.
PolarReport polar_construct(const Channel& ch, const PolarOptions& options);

/// Thread count from CHANNELQ_THREADS, at least 1.
std::size_t configured_threads();

}  // namespace channelq
