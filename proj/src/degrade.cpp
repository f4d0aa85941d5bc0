#include "channelq/degrade.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

#include "channelq/error.hpp"
#include "channelq/functionals.hpp"
#include "degrade_internal.hpp"

namespace channelq {

namespace detail {

std::vector<std::size_t> renumber_by_smallest(const std::vector<std::size_t>& labels) {
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  const std::size_t n = labels.size();
  const std::size_t max_label = n == 0 ? 0 : *std::max_element(labels.begin(), labels.end());
  std::vector<std::size_t> target(max_label + 1, unset);
  std::vector<std::size_t> map(n);
  std::size_t next = 0;
  for (std::size_t y = 0; y < n; ++y) {
    if (target[labels[y]] == unset) target[labels[y]] = next++;
    map[y] = target[labels[y]];
  }
  return map;
}

std::vector<MergeStep> block_merge_log(const JointView& view, const std::vector<std::size_t>& map) {
  const std::size_t n = map.size();
  const std::size_t blocks = n == 0 ? 0 : *std::max_element(map.begin(), map.end()) + 1;
  std::vector<std::vector<std::size_t>> members(blocks);
  for (std::size_t y = 0; y < n; ++y) members[map[y]].push_back(y);

  std::vector<MergeStep> steps;
  std::size_t size = n;
  std::vector<double> acc(view.input_size());
  for (const auto& block : members) {
    double mass = view.masses[block.front()];
    auto first = view.posterior(block.front());
    acc.assign(first.begin(), first.end());
    for (std::size_t k = 1; k < block.size(); ++k) {
      const std::size_t y = block[k];
      const double delta = merge_delta_i(mass, acc, view.masses[y], view.posterior(y));
      steps.push_back({block.front(), y, delta, size--});
      const double merged = mass + view.masses[y];
      for (std::size_t x = 0; x < acc.size(); ++x) {
        acc[x] = (mass * acc[x] + view.masses[y] * view.posteriors(y, x)) / merged;
      }
      mass = merged;
    }
  }
  return steps;
}

DegradeResult assemble_degrade(const Channel& ch, const std::vector<std::size_t>& labels,
                               std::vector<MergeStep> steps) {
  std::vector<std::size_t> map = renumber_by_smallest(labels);
  const std::size_t targets = map.empty() ? 0 : *std::max_element(map.begin(), map.end()) + 1;
  DegradeResult result;
  result.intermediate = IntermediateChannel::deterministic(std::move(map), targets);
  result.channel = apply_intermediate(ch, result.intermediate);
  result.delta_i = 0.0;
  for (const MergeStep& s : steps) result.delta_i += s.delta_i;
  result.step_log = std::move(steps);
  return result;
}

}  // namespace detail

namespace {

struct Candidate {
  double delta;
  std::size_t i;
  std::size_t j;
  unsigned vi;
  unsigned vj;
};

// Orders a max-heap so that the top is the smallest (delta, i, j).
struct LaterCandidate {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.delta != b.delta) return a.delta > b.delta;
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  }
};

using CandidateQueue = std::priority_queue<Candidate, std::vector<Candidate>, LaterCandidate>;

class MergeState {
 public:
  explicit MergeState(const JointView& view)
      : mass_(view.masses),
        post_(view.posteriors),
        version_(view.size(), 0),
        alive_(view.size(), true),
        parent_(view.size()) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  bool alive(std::size_t id) const { return alive_[id]; }
  bool current(const Candidate& c) const {
    return alive_[c.i] && alive_[c.j] && version_[c.i] == c.vi && version_[c.j] == c.vj;
  }

  Candidate candidate(std::size_t a, std::size_t b) const {
    const std::size_t i = std::min(a, b);
    const std::size_t j = std::max(a, b);
    return {merge_delta_i(mass_[i], post_.row(i), mass_[j], post_.row(j)), i, j, version_[i],
            version_[j]};
  }

  /// Merges j into i (i < j).
  void merge(std::size_t i, std::size_t j) {
    const double merged = mass_[i] + mass_[j];
    for (std::size_t x = 0; x < post_.cols(); ++x) {
      post_(i, x) = std::min((mass_[i] * post_(i, x) + mass_[j] * post_(j, x)) / merged, 1.0);
    }
    mass_[i] = merged;
    ++version_[i];
    alive_[j] = false;
    parent_[j] = i;
  }

  std::vector<std::size_t> roots() {
    std::vector<std::size_t> out(parent_.size());
    for (std::size_t y = 0; y < parent_.size(); ++y) {
      std::size_t r = y;
      while (parent_[r] != r) r = parent_[r];
      out[y] = r;
    }
    return out;
  }

 private:
  std::vector<double> mass_;
  Matrix post_;
  std::vector<unsigned> version_;
  std::vector<bool> alive_;
  std::vector<std::size_t> parent_;
};

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::vector<MergeStep> merge_all_pairs(MergeState& state, std::size_t n, std::size_t target_l) {
  CandidateQueue queue;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) queue.push(state.candidate(i, j));
  }
  std::vector<MergeStep> steps;
  std::size_t size = n;
  while (size > target_l && !queue.empty()) {
    const Candidate c = queue.top();
    queue.pop();
    if (!state.current(c)) continue;
    state.merge(c.i, c.j);
    steps.push_back({c.i, c.j, c.delta, size--});
    for (std::size_t k = 0; k < n; ++k) {
      if (k != c.i && state.alive(k)) queue.push(state.candidate(k, c.i));
    }
  }
  return steps;
}

std::vector<MergeStep> merge_adjacent(MergeState& state, const JointView& view,
                                      std::size_t target_l) {
  const std::size_t n = view.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = view.posteriors(a, 0);
    const double pb = view.posteriors(b, 0);
    return pa < pb || (pa == pb && a < b);
  });
  std::vector<std::size_t> left(n, kNone), right(n, kNone);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    right[order[k]] = order[k + 1];
    left[order[k + 1]] = order[k];
  }

  CandidateQueue queue;
  for (std::size_t k = 0; k + 1 < n; ++k) queue.push(state.candidate(order[k], order[k + 1]));

  std::vector<MergeStep> steps;
  std::size_t size = n;
  while (size > target_l && !queue.empty()) {
    const Candidate c = queue.top();
    queue.pop();
    if (!state.current(c)) continue;
    // c.i and c.j are adjacent; find which one sits on the left.
    const std::size_t lo = right[c.i] == c.j ? c.i : c.j;
    const std::size_t hi = lo == c.i ? c.j : c.i;
    const std::size_t outer_left = left[lo];
    const std::size_t outer_right = right[hi];
    state.merge(c.i, c.j);
    steps.push_back({c.i, c.j, c.delta, size--});

    const std::size_t keep = c.i;
    left[keep] = outer_left;
    right[keep] = outer_right;
    if (outer_left != kNone) {
      right[outer_left] = keep;
      queue.push(state.candidate(outer_left, keep));
    }
    if (outer_right != kNone) {
      left[outer_right] = keep;
      queue.push(state.candidate(keep, outer_right));
    }
  }
  return steps;
}

}  // namespace

DegradeResult greedy_merge(const Channel& ch, std::size_t target_l, GreedyMergeOptions options) {
  if (target_l < 1) throw Error(Errc::BadTargetSize, "L must be at least 1");
  const JointView view = joint_view(ch);
  const std::size_t n = view.size();
  MergeState state(view);
  std::vector<MergeStep> steps;
  if (n > target_l) {
    steps = options.binary_adjacent_fast_path && ch.input_size() == 2
                ? merge_adjacent(state, view, target_l)
                : merge_all_pairs(state, n, target_l);
  }
  return detail::assemble_degrade(ch, state.roots(), std::move(steps));
}

DegradeResult optimal_degrade_binary(const Channel& ch, std::size_t target_l) {
  if (ch.input_size() != 2) throw Error(Errc::NotBinaryInput, "optimal degrading needs |X| = 2");
  if (target_l < 1) throw Error(Errc::BadTargetSize, "L must be at least 1");

  const JointView view = joint_view(ch);
  const std::vector<std::size_t> dup = duplicate_letter_map(ch, kDegradeDuplicateTol);
  const std::size_t groups = dup.empty() ? 0 : *std::max_element(dup.begin(), dup.end()) + 1;

  // Collapse duplicate groups.
  std::vector<double> gmass(groups, 0.0), g0(groups, 0.0), g1(groups, 0.0), gh(groups, 0.0);
  for (std::size_t y = 0; y < view.size(); ++y) {
    const std::size_t g = dup[y];
    gmass[g] += view.masses[y];
    g0[g] += view.masses[y] * view.posteriors(y, 0);
    g1[g] += view.masses[y] * view.posteriors(y, 1);
  }
  for (std::size_t g = 0; g < groups; ++g) {
    gh[g] = gmass[g] * (eta(std::min(g0[g] / gmass[g], 1.0)) + eta(std::min(g1[g] / gmass[g], 1.0)));
  }

  std::vector<std::size_t> order(groups);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = g0[a] / gmass[a];
    const double pb = g0[b] / gmass[b];
    return pa < pb || (pa == pb && a < b);
  });

  std::vector<std::size_t> block_of_group(groups, 0);
  if (groups > target_l) {
    // Prefix sums over the sorted groups.
    std::vector<double> pm(groups + 1, 0.0), p0(groups + 1, 0.0), p1(groups + 1, 0.0),
        ph(groups + 1, 0.0);
    for (std::size_t k = 0; k < groups; ++k) {
      const std::size_t g = order[k];
      pm[k + 1] = pm[k] + gmass[g];
      p0[k + 1] = p0[k] + g0[g];
      p1[k + 1] = p1[k] + g1[g];
      ph[k + 1] = ph[k] + gh[g];
    }
    // Loss of merging sorted groups a..b (inclusive) into one letter.
    auto block_cost = [&](std::size_t a, std::size_t b) {
      const double m = pm[b + 1] - pm[a];
      const double q0 = std::clamp((p0[b + 1] - p0[a]) / m, 0.0, 1.0);
      const double q1 = std::clamp((p1[b + 1] - p1[a]) / m, 0.0, 1.0);
      return m * (eta(q0) + eta(q1)) - (ph[b + 1] - ph[a]);
    };

    const std::size_t blocks = target_l;
    const double inf = std::numeric_limits<double>::infinity();
    // cost[k][j]: best loss covering sorted groups 0..j with k+1 blocks.
    std::vector<std::vector<double>> cost(blocks, std::vector<double>(groups, inf));
    std::vector<std::vector<std::size_t>> cut(blocks, std::vector<std::size_t>(groups, kNone));
    for (std::size_t j = 0; j < groups; ++j) cost[0][j] = block_cost(0, j);
    for (std::size_t k = 1; k < blocks; ++k) {
      for (std::size_t j = k; j < groups; ++j) {
        for (std::size_t i = k - 1; i < j; ++i) {
          const double v = cost[k - 1][i] + block_cost(i + 1, j);
          if (v < cost[k][j]) {
            cost[k][j] = v;
            cut[k][j] = i;
          }
        }
      }
    }
    std::size_t best_k = 0;
    for (std::size_t k = 1; k < blocks; ++k) {
      if (cost[k][groups - 1] < cost[best_k][groups - 1]) best_k = k;
    }
    std::size_t end = groups - 1;
    for (std::size_t k = best_k + 1; k-- > 0;) {
      const std::size_t start = k == 0 ? 0 : cut[k][end] + 1;
      for (std::size_t s = start; s <= end; ++s) block_of_group[order[s]] = k;
      if (k > 0) end = cut[k][end];
    }
  } else {
    std::iota(block_of_group.begin(), block_of_group.end(), std::size_t{0});
  }

  std::vector<std::size_t> labels(view.size());
  for (std::size_t y = 0; y < view.size(); ++y) labels[y] = block_of_group[dup[y]];
  const std::vector<std::size_t> map = detail::renumber_by_smallest(labels);
  return detail::assemble_degrade(ch, map, detail::block_merge_log(view, map));
}

}  // namespace channelq
