#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "channelq/channel.hpp"
#include "channelq/degrade.hpp"

namespace channelq {

struct BruteDegrade {
  double delta_i = 0.0;
  std::vector<std::size_t> partition;  // block label per output letter, restricted growth form
};

/// Exhaustive search over all partitions of the output alphabet into at most
/// `target_l` blocks. Limited to 10 output letters.
BruteDegrade brute_degrade(const Channel& ch, std::size_t target_l);

struct BruteUpgrade {
  double delta_i = 0.0;
  std::vector<std::size_t> subset;  // source letters, sorted by posterior
};

/// Exhaustive search over subsets of distinct posteriors that contain both
/// extremes, each scored with optimal_phi_binary. Limited to 14 output letters.
/// Only searches the subset class; it does not certify that class.
BruteUpgrade brute_upgrade_binary(const Channel& ch, std::size_t target_l);

inline constexpr std::size_t kBruteDegradeMaxLetters = 10;
inline constexpr std::size_t kBruteUpgradeMaxLetters = 14;

/// Counter-based uniform stream: the k-th draw is splitmix64(seed + k * golden).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double next_unit();
  /// Exp(1) draw.
  double next_exponential();
  /// Uniform integer in [0, n).
  std::size_t next_index(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

struct RandomSpec {
  std::size_t input_size = 2;
  std::size_t output_size = 8;
  std::uint64_t seed = 0;
  double mass_floor = 1e-4;
  /// When false the input distribution is random as well.
  bool uniform_input = false;
};

/// Random channel with every output mass at least `mass_floor`.
///
/// Random input: each output letter draws a mass weight Exp(1) and a posterior
/// Dirichlet(1,...,1); the input distribution is the implied marginal.
/// Uniform input: each row W(.|x) is Dirichlet(1,...,1).
/// In both cases masses below the floor are lifted by mixing with the uniform
/// output distribution.
Channel random_channel(const RandomSpec& spec);

/// Random cyclo-symmetric channel with uniform input and `groups` groups of
/// |X| letters each. Letters are shuffled.
Channel random_cyclo_channel(std::size_t input_size, std::size_t groups, std::uint64_t seed);

/// Random symmetric binary channel with uniform input: `pairs` conjugate pairs
/// plus, optionally, one self-conjugate letter at posterior 1/2.
Channel random_symmetric_binary(std::size_t pairs, bool with_middle, std::uint64_t seed);

/// True iff composing W with the result's map reproduces its channel within tol.
bool verify_degraded(const Channel& w, const DegradeResult& result, double tol);

}  // namespace channelq
