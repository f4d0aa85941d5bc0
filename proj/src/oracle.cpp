#include "channelq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <bit>
#include <numeric>

#include "channelq/error.hpp"
#include "channelq/functionals.hpp"
#include "channelq/upgrade.hpp"

namespace channelq {

namespace {

class PartitionSearch {
 public:
  PartitionSearch(const JointView& view, std::size_t max_blocks)
      : view_(view),
        max_blocks_(max_blocks),
        labels_(view.size(), 0) {}

  BruteDegrade run() {
    base_ = 0.0;
    for (std::size_t y = 0; y < view_.size(); ++y) base_ += view_.masses[y] * entropy_h(view_.posterior(y));
    recurse(0, 0);
    return best_;
  }

 private:
  void recurse(std::size_t y, std::size_t blocks) {
    if (y == view_.size()) {
      score(blocks);
      return;
    }
    const std::size_t limit = std::min(blocks + 1, max_blocks_);
    for (std::size_t b = 0; b < limit; ++b) {
      labels_[y] = b;
      recurse(y + 1, std::max(blocks, b + 1));
    }
  }

  void score(std::size_t blocks) {
    // Recompute block sums from scratch so rounding does not depend on the
    // enumeration path.
    std::vector<double> mass(blocks, 0.0);
    Matrix joint(blocks, view_.input_size());
    for (std::size_t y = 0; y < view_.size(); ++y) {
      mass[labels_[y]] += view_.masses[y];
      for (std::size_t x = 0; x < view_.input_size(); ++x) {
        joint(labels_[y], x) += view_.masses[y] * view_.posteriors(y, x);
      }
    }
    double merged = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      for (std::size_t x = 0; x < view_.input_size(); ++x) {
        merged += mass[b] * eta(std::min(joint(b, x) / mass[b], 1.0));
      }
    }
    const double delta = std::max(merged - base_, 0.0);
    if (best_.partition.empty() || delta < best_.delta_i) {
      best_.delta_i = delta;
      best_.partition = labels_;
    }
  }

  const JointView& view_;
  std::size_t max_blocks_;
  std::vector<std::size_t> labels_;
  double base_ = 0.0;
  BruteDegrade best_;
};

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> dirichlet(UniformStream& s, std::size_t n) {
  std::vector<double> v(n);
  double total = 0.0;
  for (double& e : v) total += (e = s.next_exponential());
  for (double& e : v) e /= total;
  return v;
}

}  // namespace

BruteDegrade brute_degrade(const Channel& ch, std::size_t target_l) {
  if (ch.output_size() > kBruteDegradeMaxLetters) {
    throw Error(Errc::TooLarge, "brute_degrade is limited to " +
                                    std::to_string(kBruteDegradeMaxLetters) + " output letters");
  }
  if (target_l < 1) throw Error(Errc::BadTargetSize, "L must be at least 1");
  const JointView view = joint_view(ch);
  return PartitionSearch(view, target_l).run();
}

BruteUpgrade brute_upgrade_binary(const Channel& ch, std::size_t target_l) {
  if (ch.input_size() != 2) throw Error(Errc::NotBinaryInput, "brute_upgrade_binary needs |X| = 2");
  if (ch.output_size() > kBruteUpgradeMaxLetters) {
    throw Error(Errc::TooLarge, "brute_upgrade_binary is limited to " +
                                    std::to_string(kBruteUpgradeMaxLetters) + " output letters");
  }
  if (target_l < 2) throw Error(Errc::BadTargetSize, "L must be at least 2");
  const JointView view = joint_view(ch);
  const std::vector<std::size_t> reps = upgrade_representatives(view);
  if (reps.size() <= 2) return {optimal_phi_binary(view, reps).delta_i, reps};

  const std::size_t interior = reps.size() - 2;
  BruteUpgrade best;
  bool found = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << interior); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) + 2 > target_l) continue;
    std::vector<std::size_t> subset{reps.front()};
    for (std::size_t k = 0; k < interior; ++k) {
      if (mask >> k & 1U) subset.push_back(reps[k + 1]);
    }
    subset.push_back(reps.back());
    const double delta = optimal_phi_binary(view, subset).delta_i;
    if (!found || delta < best.delta_i) {
      best = {delta, std::move(subset)};
      found = true;
    }
  }
  return best;
}

std::uint64_t UniformStream::next_u64() {
  ++counter_;
  return splitmix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double UniformStream::next_unit() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double UniformStream::next_exponential() { return -std::log(next_unit()); }

std::size_t UniformStream::next_index(std::size_t n) {
  return static_cast<std::size_t>(next_unit() * static_cast<double>(n)) % n;
}

Channel random_channel(const RandomSpec& spec) {
  const std::size_t nx = spec.input_size;
  const std::size_t ny = spec.output_size;
  if (nx < 2 || ny < nx) {
    throw Error(Errc::DomainError, "random_channel needs 2 <= input_size <= output_size");
  }
  const double uniform = 1.0 / static_cast<double>(ny);
  if (spec.mass_floor > uniform) {
    throw Error(Errc::InfeasibleFloor, "mass floor exceeds 1/output_size");
  }
  UniformStream s(spec.seed);
  Matrix w(nx, ny);
  std::vector<double> dist(nx);

  if (spec.uniform_input) {
    std::fill(dist.begin(), dist.end(), 1.0 / static_cast<double>(nx));
    for (std::size_t x = 0; x < nx; ++x) {
      const std::vector<double> row = dirichlet(s, ny);
      std::copy(row.begin(), row.end(), w.row(x).begin());
    }
    double min_mass = 1.0;
    for (std::size_t y = 0; y < ny; ++y) {
      double m = 0.0;
      for (std::size_t x = 0; x < nx; ++x) m += w(x, y) / static_cast<double>(nx);
      min_mass = std::min(min_mass, m);
    }
    if (min_mass < spec.mass_floor) {
      const double t = (spec.mass_floor - min_mass) / (uniform - min_mass);
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) w(x, y) = (1.0 - t) * w(x, y) + t * uniform;
      }
    }
  } else {
    std::vector<double> mass = dirichlet(s, ny);
    Matrix post(ny, nx);
    for (std::size_t y = 0; y < ny; ++y) {
      const std::vector<double> p = dirichlet(s, nx);
      std::copy(p.begin(), p.end(), post.row(y).begin());
    }
    const double min_mass = *std::min_element(mass.begin(), mass.end());
    if (min_mass < spec.mass_floor) {
      const double t = (spec.mass_floor - min_mass) / (uniform - min_mass);
      for (double& m : mass) m = (1.0 - t) * m + t * uniform;
    }
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t x = 0; x < nx; ++x) dist[x] += mass[y] * post(y, x);
    }
    for (std::size_t x = 0; x < nx; ++x) {
      double total = 0.0;
      for (std::size_t y = 0; y < ny; ++y) total += (w(x, y) = mass[y] * post(y, x) / dist[x]);
      for (std::size_t y = 0; y < ny; ++y) w(x, y) /= total;
    }
    const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
    for (double& p : dist) p /= total;
  }
  return build_channel(w, dist).channel;
}

Channel random_cyclo_channel(std::size_t input_size, std::size_t groups, std::uint64_t seed) {
  const std::size_t nx = input_size;
  if (nx < 2 || groups < 1) throw Error(Errc::DomainError, "random_cyclo_channel needs |X| >= 2, groups >= 1");
  UniformStream s(seed);
  Matrix base(groups, nx);
  double total = 0.0;
  for (std::size_t i = 0; i < groups; ++i) {
    for (std::size_t x = 0; x < nx; ++x) total += (base(i, x) = s.next_exponential());
  }
  const std::size_t ny = groups * nx;
  std::vector<std::size_t> perm(ny);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = ny; k > 1; --k) std::swap(perm[k - 1], perm[s.next_index(k)]);

  Matrix w(nx, ny);
  for (std::size_t i = 0; i < groups; ++i) {
    for (std::size_t theta = 0; theta < nx; ++theta) {
      const std::size_t y = perm[i * nx + theta];
      for (std::size_t x = 0; x < nx; ++x) w(x, y) = base(i, (x + nx - theta) % nx) / total;
    }
  }
  const std::vector<double> dist(nx, 1.0 / static_cast<double>(nx));
  return build_channel(w, dist).channel;
}

Channel random_symmetric_binary(std::size_t pairs, bool with_middle, std::uint64_t seed) {
  if (pairs < 1) throw Error(Errc::DomainError, "random_symmetric_binary needs at least one pair");
  UniformStream s(seed);
  const std::size_t ny = 2 * pairs + (with_middle ? 1 : 0);
  Matrix w(2, ny);
  double total = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const double a = s.next_exponential();
    const double b = s.next_exponential();
    w(0, 2 * k) = a;
    w(1, 2 * k) = b;
    w(0, 2 * k + 1) = b;
    w(1, 2 * k + 1) = a;
    total += a + b;
  }
  if (with_middle) {
    const double c = s.next_exponential();
    w(0, ny - 1) = c;
    w(1, ny - 1) = c;
    total += c;
  }
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < ny; ++y) w(x, y) /= total;
  }
  const std::vector<double> dist{0.5, 0.5};
  return build_channel(w, dist).channel;
}

bool verify_degraded(const Channel& w, const DegradeResult& result, double tol) {
  if (result.intermediate.kind != IntermediateChannel::Kind::DeterministicMap) return false;
  if (result.intermediate.source_size() != w.output_size()) return false;
  Channel q;
  try {
    q = apply_intermediate(w, result.intermediate);
  } catch (const Error&) {
    return false;
  }
  if (q.output_size() != result.channel.output_size() || q.input_size() != result.channel.input_size()) {
    return false;
  }
  for (std::size_t x = 0; x < q.input_size(); ++x) {
    for (std::size_t z = 0; z < q.output_size(); ++z) {
      if (std::abs(q.prob(x, z) - result.channel.prob(x, z)) > tol) return false;
    }
  }
  return true;
}

}  // namespace channelq
