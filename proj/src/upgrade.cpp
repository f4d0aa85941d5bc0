#include "channelq/upgrade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

#include "channelq/error.hpp"
#include "channelq/functionals.hpp"

namespace channelq {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> sorted_letters(const JointView& view) {
  std::vector<std::size_t> order(view.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = view.posteriors(a, 0);
    const double pb = view.posteriors(b, 0);
    return pa < pb || (pa == pb && a < b);
  });
  return order;
}

void require_binary(const JointView& view) {
  if (view.input_size() != 2) throw Error(Errc::NotBinaryInput, "upgrading needs |X| = 2");
}

// Representatives plus the total mass of each duplicate group.
struct Groups {
  std::vector<std::size_t> reps;
  std::vector<double> mass;
};

Groups duplicate_groups(const JointView& view) {
  Groups g;
  for (std::size_t y : sorted_letters(view)) {
    if (g.reps.empty() || view.posteriors(y, 0) != view.posteriors(g.reps.back(), 0)) {
      g.reps.push_back(y);
      g.mass.push_back(0.0);
    }
    g.mass.back() += view.masses[y];
  }
  return g;
}

UpgradeResult finish(const JointView& view, std::span<const double> input_dist,
                     std::vector<std::size_t> subset) {
  PhiSolution sol = optimal_phi_binary(view, subset);
  UpgradeResult r;
  r.channel = channel_from_view(sol.view, input_dist);
  r.view = std::move(sol.view);
  r.intermediate = std::move(sol.intermediate);
  r.delta_i = sol.delta_i;
  std::sort(subset.begin(), subset.end(), [&](std::size_t a, std::size_t b) {
    const double pa = view.posteriors(a, 0);
    const double pb = view.posteriors(b, 0);
    return pa < pb || (pa == pb && a < b);
  });
  r.chosen_subset = std::move(subset);
  return r;
}

}  // namespace

std::vector<std::size_t> upgrade_representatives(const JointView& view) {
  return duplicate_groups(view).reps;
}

PhiSolution optimal_phi_binary(const JointView& view, std::span<const std::size_t> subset) {
  require_binary(view);
  const std::size_t ny = view.size();
  std::vector<std::size_t> z(subset.begin(), subset.end());
  for (std::size_t s : z) {
    if (s >= ny) throw Error(Errc::IndexError, "subset letter " + std::to_string(s) + " out of range");
  }
  std::sort(z.begin(), z.end(), [&](std::size_t a, std::size_t b) {
    const double pa = view.posteriors(a, 0);
    const double pb = view.posteriors(b, 0);
    return pa < pb || (pa == pb && a < b);
  });
  for (std::size_t k = 1; k < z.size(); ++k) {
    if (z[k] == z[k - 1]) throw Error(Errc::DomainError, "subset repeats a letter");
    if (view.posteriors(z[k], 0) == view.posteriors(z[k - 1], 0)) {
      throw Error(Errc::DomainError, "subset posteriors are not distinct");
    }
  }
  if (z.empty()) throw Error(Errc::MissingExtremes, "empty subset");

  double lo = 1.0, hi = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    lo = std::min(lo, view.posteriors(y, 0));
    hi = std::max(hi, view.posteriors(y, 0));
  }
  std::vector<double> zeta(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) zeta[k] = view.posteriors(z[k], 0);
  if (zeta.front() != lo || zeta.back() != hi) {
    throw Error(Errc::MissingExtremes, "subset must contain both extreme posteriors");
  }

  const std::size_t nz = z.size();
  Matrix reverse(ny, nz);
  std::vector<double> mz(nz, 0.0);
  double delta = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    const double y0 = view.posteriors(y, 0);
    // First z strictly above y0.
    const std::size_t right =
        static_cast<std::size_t>(std::upper_bound(zeta.begin(), zeta.end(), y0) - zeta.begin());
    const std::size_t left = right == 0 ? 0 : right - 1;
    // Letters on a chosen posterior map to it; everything else is split.
    std::size_t hit = kNone;
    if (y0 == zeta[left]) hit = left;
    if (hit != kNone) {
      reverse(y, hit) = 1.0;
      mz[hit] += view.masses[y];
      continue;
    }
    const SplitCost c =
        split_cost(view.masses[y], view.posterior(y), view.posterior(z[left]), view.posterior(z[right]));
    reverse(y, left) = c.phi;
    reverse(y, right) = 1.0 - c.phi;
    mz[left] += c.phi * view.masses[y];
    mz[right] += (1.0 - c.phi) * view.masses[y];
    delta += c.delta_i;
  }

  PhiSolution sol;
  Matrix forward(nz, ny);
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t k = 0; k < nz; ++k) {
      if (reverse(y, k) > 0.0) forward(k, y) = reverse(y, k) * view.masses[y] / mz[k];
    }
  }
  sol.intermediate = IntermediateChannel::stochastic(std::move(forward), std::move(reverse));
  sol.view.masses = std::move(mz);
  sol.view.posteriors = Matrix(nz, 2);
  for (std::size_t k = 0; k < nz; ++k) {
    sol.view.posteriors(k, 0) = view.posteriors(z[k], 0);
    sol.view.posteriors(k, 1) = view.posteriors(z[k], 1);
  }
  sol.delta_i = delta;
  return sol;
}

UpgradeResult optimal_upgrade_binary(const Channel& ch, std::size_t target_l) {
  if (ch.input_size() != 2) throw Error(Errc::NotBinaryInput, "upgrading needs |X| = 2");
  if (target_l < 2) throw Error(Errc::BadTargetSize, "L must be at least 2");
  const JointView view = joint_view(ch);
  const Groups g = duplicate_groups(view);
  const std::size_t n = g.reps.size();
  if (n <= target_l) return finish(view, ch.input_dist(), g.reps);

  std::vector<double> zeta(n), h(n);
  std::vector<double> sm(n + 1, 0.0), smz(n + 1, 0.0), smh(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    zeta[k] = view.posteriors(g.reps[k], 0);
    h[k] = entropy_h(view.posterior(g.reps[k]));
    sm[k + 1] = sm[k] + g.mass[k];
    smz[k + 1] = smz[k] + g.mass[k] * zeta[k];
    smh[k + 1] = smh[k] + g.mass[k] * h[k];
  }
  // Gain of splitting every group strictly between i and j onto i and j.
  auto segment = [&](std::size_t i, std::size_t j) {
    if (j == i + 1) return 0.0;
    const double m = sm[j] - sm[i + 1];
    const double mz = smz[j] - smz[i + 1];
    const double mh = smh[j] - smh[i + 1];
    const double mi = (h[i] * (zeta[j] * m - mz) + h[j] * (mz - zeta[i] * m)) / (zeta[j] - zeta[i]);
    return mh - mi;
  };

  const double inf = std::numeric_limits<double>::infinity();
  // f[k][j]: best gain with k + 1 chosen groups, the last one being j.
  std::vector<std::vector<double>> f(target_l, std::vector<double>(n, inf));
  std::vector<std::vector<std::size_t>> prev(target_l, std::vector<std::size_t>(n, kNone));
  f[0][0] = 0.0;
  for (std::size_t k = 1; k < target_l; ++k) {
    for (std::size_t j = k; j < n; ++j) {
      for (std::size_t i = k - 1; i < j; ++i) {
        if (f[k - 1][i] == inf) continue;
        const double v = f[k - 1][i] + segment(i, j);
        if (v < f[k][j]) {
          f[k][j] = v;
          prev[k][j] = i;
        }
      }
    }
  }
  std::size_t best = 1;
  for (std::size_t k = 2; k < target_l; ++k) {
    if (f[k][n - 1] < f[best][n - 1]) best = k;
  }
  std::vector<std::size_t> subset;
  for (std::size_t k = best, j = n - 1;; --k) {
    subset.push_back(g.reps[j]);
    if (k == 0) break;
    j = prev[k][j];
  }
  std::reverse(subset.begin(), subset.end());
  return finish(view, ch.input_dist(), std::move(subset));
}

UpgradeResult greedy_split(const Channel& ch, std::size_t target_l) {
  if (ch.input_size() != 2) throw Error(Errc::NotBinaryInput, "upgrading needs |X| = 2");
  if (target_l < 2) throw Error(Errc::BadTargetSize, "L must be at least 2");
  const JointView view = joint_view(ch);
  Groups g = duplicate_groups(view);
  const std::size_t n = g.reps.size();

  std::vector<std::size_t> left(n), right(n);
  for (std::size_t k = 0; k < n; ++k) {
    left[k] = k == 0 ? kNone : k - 1;
    right[k] = k + 1 == n ? kNone : k + 1;
  }
  std::vector<unsigned> version(n, 0);
  std::vector<bool> alive(n, true);

  using Entry = std::tuple<double, std::size_t, std::size_t, unsigned>;  // delta, letter, pos, version
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  auto cost = [&](std::size_t k) {
    return split_cost(g.mass[k], view.posterior(g.reps[k]), view.posterior(g.reps[left[k]]),
                      view.posterior(g.reps[right[k]]));
  };
  auto push = [&](std::size_t k) {
    if (left[k] == kNone || right[k] == kNone) return;
    queue.emplace(cost(k).delta_i, g.reps[k], k, version[k]);
  };
  for (std::size_t k = 0; k < n; ++k) push(k);

  std::vector<SplitStep> steps;
  std::size_t size = n;
  while (size > target_l && !queue.empty()) {
    const auto [delta, letter, k, ver] = queue.top();
    queue.pop();
    if (!alive[k] || version[k] != ver) continue;
    const SplitCost c = cost(k);
    const std::size_t l = left[k];
    const std::size_t r = right[k];
    g.mass[l] += c.phi * g.mass[k];
    g.mass[r] += (1.0 - c.phi) * g.mass[k];
    alive[k] = false;
    right[l] = r;
    left[r] = l;
    ++version[l];
    ++version[r];
    steps.push_back({letter, delta, size--});
    push(l);
    push(r);
  }

  std::vector<std::size_t> subset;
  for (std::size_t k = 0; k < n; ++k) {
    if (alive[k]) subset.push_back(g.reps[k]);
  }
  UpgradeResult r = finish(view, ch.input_dist(), std::move(subset));
  r.delta_i = 0.0;
  for (const SplitStep& s : steps) r.delta_i += s.delta_i;
  r.step_log = std::move(steps);
  return r;
}

UpgradeResult greedy_split_symmetric(const Channel& ch, std::size_t target_l) {
  if (ch.input_size() != 2) throw Error(Errc::NotBinaryInput, "upgrading needs |X| = 2");
  if (target_l < 2) throw Error(Errc::BadTargetSize, "L must be at least 2");
  if (!ch.has_uniform_input(kValidationTol)) {
    throw Error(Errc::NotSymmetric, "symmetric greedy-split needs a uniform input distribution");
  }
  const JointView view = joint_view(ch);
  Groups g = duplicate_groups(view);
  const std::size_t n = g.reps.size();
  std::vector<double> zeta(n);
  for (std::size_t k = 0; k < n; ++k) zeta[k] = view.posteriors(g.reps[k], 0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = n - 1 - k;
    if (std::abs(zeta[k] + zeta[m] - 1.0) > kValidationTol ||
        std::abs(g.mass[k] - g.mass[m]) > kValidationTol) {
      throw Error(Errc::NotSymmetric, "letter " + std::to_string(g.reps[k]) + " has no conjugate");
    }
  }
  const auto is_middle = [&](std::size_t k) { return zeta[k] == 0.5; };

  std::vector<std::size_t> left(n), right(n);
  for (std::size_t k = 0; k < n; ++k) {
    left[k] = k == 0 ? kNone : k - 1;
    right[k] = k + 1 == n ? kNone : k + 1;
  }
  std::vector<bool> alive(n, true);

  struct Move {
    std::size_t letter;
    SplitCost cost;
  };
  // Simulates splitting the letters in `ks` one after another; returns the
  // per-letter costs without changing state.
  auto simulate = [&](std::vector<std::size_t> ks, bool apply) {
    std::vector<double> mass = g.mass;
    std::vector<std::size_t> lft = left, rgt = right;
    std::vector<Move> moves;
    for (std::size_t k : ks) {
      const std::size_t l = lft[k], r = rgt[k];
      const SplitCost c = split_cost(mass[k], view.posterior(g.reps[k]), view.posterior(g.reps[l]),
                                     view.posterior(g.reps[r]));
      mass[l] += c.phi * mass[k];
      mass[r] += (1.0 - c.phi) * mass[k];
      rgt[l] = r;
      lft[r] = l;
      moves.push_back({k, c});
    }
    if (apply) {
      g.mass = std::move(mass);
      left = std::move(lft);
      right = std::move(rgt);
      for (std::size_t k : ks) alive[k] = false;
    }
    return moves;
  };

  std::vector<SplitStep> steps;
  std::size_t size = n;
  while (size > target_l) {
    // Candidate key: (gain per removed letter, letter index, position).
    using Key = std::tuple<double, std::size_t, std::size_t>;
    std::vector<Key> keys;
    std::vector<Key> innermost;
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || left[k] == kNone || right[k] == kNone) continue;
      if (is_middle(k)) {
        keys.emplace_back(simulate({k}, false)[0].cost.delta_i, g.reps[k], k);
        continue;
      }
      if (zeta[k] >= 0.5) continue;
      const std::size_t mirror = n - 1 - k;
      auto moves = simulate({k, mirror}, false);
      const Key key{(moves[0].cost.delta_i + moves[1].cost.delta_i) / 2.0, g.reps[k], k};
      if (zeta[right[k]] <= 0.5) {
        keys.push_back(key);
      } else if (right[k] == mirror) {
        innermost.push_back(key);
      }
    }
    if (keys.empty()) keys = std::move(innermost);
    if (keys.empty()) break;
    const auto [gain, letter, k] = *std::min_element(keys.begin(), keys.end());
    (void)gain;
    (void)letter;
    std::vector<std::size_t> ks{k};
    if (!is_middle(k)) ks.push_back(n - 1 - k);
    for (const Move& m : simulate(ks, true)) steps.push_back({g.reps[m.letter], m.cost.delta_i, size--});
  }

  std::vector<std::size_t> subset;
  for (std::size_t k = 0; k < n; ++k) {
    if (alive[k]) subset.push_back(g.reps[k]);
  }
  UpgradeResult r = finish(view, ch.input_dist(), std::move(subset));
  r.delta_i = 0.0;
  for (const SplitStep& s : steps) r.delta_i += s.delta_i;
  r.step_log = std::move(steps);
  return r;
}

VoronoiAssignment voronoi_assignment(const JointView& w, const JointView& q) {
  if (w.input_size() != q.input_size()) {
    throw Error(Errc::DimensionMismatch, "posterior lengths differ");
  }
  const std::size_t nx = w.input_size();
  VoronoiAssignment va;
  va.sets.resize(q.size());
  va.centers = Matrix(q.size(), nx);
  std::vector<double> weight(q.size(), 0.0);
  for (std::size_t y = 0; y < w.size(); ++y) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < q.size(); ++z) {
      double d = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        const double t = w.posteriors(y, x) - q.posteriors(z, x);
        d += t * t;
      }
      if (d < best_d) {
        best_d = d;
        best = z;
      }
    }
    va.sets[best].push_back(y);
    weight[best] += w.masses[y];
    for (std::size_t x = 0; x < nx; ++x) va.centers(best, x) += w.masses[y] * w.posteriors(y, x);
  }
  for (std::size_t z = 0; z < q.size(); ++z) {
    if (weight[z] == 0.0) continue;
    for (std::size_t x = 0; x < nx; ++x) va.centers(z, x) /= weight[z];
  }
  return va;
}

double upgrade_lower_bound(const Channel& w, const Channel& q) {
  if (w.input_size() != q.input_size()) {
    throw Error(Errc::DimensionMismatch, "channels have different input alphabets");
  }
  for (std::size_t x = 0; x < w.input_size(); ++x) {
    if (std::abs(w.input_dist()[x] - q.input_dist()[x]) > kValidationTol) {
      throw Error(Errc::DimensionMismatch, "channels have different input distributions");
    }
  }
  const JointView wv = joint_view(w);
  const VoronoiAssignment va = voronoi_assignment(wv, joint_view(q));
  double total = 0.0;
  for (std::size_t z = 0; z < va.sets.size(); ++z) {
    for (std::size_t y : va.sets[z]) {
      double d = 0.0;
      for (std::size_t x = 0; x < wv.input_size(); ++x) {
        const double t = wv.posteriors(y, x) - va.centers(z, x);
        d += t * t;
      }
      total += wv.masses[y] * d;
    }
  }
  return 0.5 * total;
}

bool verify_upgraded(const Channel& w, const UpgradeResult& result, double tol) {
  const IntermediateChannel& phi = result.intermediate;
  if (phi.kind != IntermediateChannel::Kind::Stochastic) return false;
  const JointView wv = joint_view(w);
  const JointView& qv = result.view;
  const std::size_t ny = wv.size();
  const std::size_t nz = qv.size();
  const std::size_t nx = wv.input_size();
  if (phi.reverse.rows() != ny || phi.reverse.cols() != nz || phi.forward.rows() != nz ||
      phi.forward.cols() != ny || result.channel.output_size() != nz ||
      result.channel.input_size() != w.input_size()) {
    return false;
  }
  for (std::size_t y = 0; y < ny; ++y) {
    double sum = 0.0;
    std::vector<double> rebuilt(nx, 0.0);
    for (std::size_t z = 0; z < nz; ++z) {
      const double p = phi.reverse(y, z);
      if (p < 0.0) return false;
      sum += p;
      for (std::size_t x = 0; x < nx; ++x) rebuilt[x] += p * qv.posteriors(z, x);
    }
    if (std::abs(sum - 1.0) > tol) return false;
    for (std::size_t x = 0; x < nx; ++x) {
      if (std::abs(rebuilt[x] - wv.posteriors(y, x)) > tol) return false;
    }
  }
  for (std::size_t z = 0; z < nz; ++z) {
    double mass = 0.0;
    double row = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      mass += phi.reverse(y, z) * wv.masses[y];
      row += phi.forward(z, y);
    }
    if (std::abs(mass - qv.masses[z]) > tol || std::abs(row - 1.0) > tol) return false;
  }
  const Channel back = apply_intermediate(result.channel, phi);
  if (back.output_size() != w.output_size()) return false;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      if (std::abs(back.prob(x, y) - w.prob(x, y)) > tol) return false;
    }
  }
  return true;
}

}  // namespace channelq
