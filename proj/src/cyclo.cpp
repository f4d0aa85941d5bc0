#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "channelq/degrade.hpp"
#include "channelq/error.hpp"
#include "channelq/functionals.hpp"
#include "degrade_internal.hpp"

namespace channelq {

namespace {

constexpr double kCycloTol = 1e-9;

// True when column v equals column u shifted by theta: W(v|x+theta) = W(u|x).
bool is_shift(const Channel& ch, std::size_t u, std::size_t v, std::size_t theta) {
  const std::size_t nx = ch.input_size();
  for (std::size_t x = 0; x < nx; ++x) {
    if (std::abs(ch.prob((x + theta) % nx, v) - ch.prob(x, u)) > kCycloTol) return false;
  }
  return true;
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

struct Letter {
  double mass = 0.0;
  std::vector<double> post;
  std::size_t id = 0;  // smallest original member
};

}  // namespace

CycloPartition detect_cyclo_symmetry(const Channel& ch) {
  if (!ch.has_uniform_input(kValidationTol)) {
    throw Error(Errc::NonUniformInput, "cyclo-symmetry needs a uniform input distribution");
  }
  const std::size_t nx = ch.input_size();
  const std::size_t ny = ch.output_size();
  if (ny % nx != 0) {
    throw Error(Errc::NotCycloSymmetric,
                "output size " + std::to_string(ny) + " is not a multiple of " + std::to_string(nx));
  }
  std::vector<bool> used(ny, false);
  CycloPartition part;
  for (std::size_t u = 0; u < ny; ++u) {
    if (used[u]) continue;
    used[u] = true;
    std::vector<std::size_t> group{u};
    for (std::size_t theta = 1; theta < nx; ++theta) {
      std::size_t found = ny;
      for (std::size_t v = 0; v < ny; ++v) {
        if (!used[v] && is_shift(ch, u, v, theta)) {
          found = v;
          break;
        }
      }
      if (found == ny) {
        throw Error(Errc::NotCycloSymmetric, "no shift partner for letter " + std::to_string(u) +
                                                 " at shift " + std::to_string(theta));
      }
      used[found] = true;
      group.push_back(found);
    }
    part.groups.push_back(std::move(group));
  }
  return part;
}

DegradeResult greedy_merge_cyclo(const Channel& ch, std::size_t target_l) {
  const std::size_t nx = ch.input_size();
  if (target_l == 0 || target_l % nx != 0) {
    throw Error(Errc::BadTargetSize, "L must be a positive multiple of |X|");
  }
  const CycloPartition part = detect_cyclo_symmetry(ch);
  const JointView view = joint_view(ch);
  const std::size_t ny = view.size();

  // groups[g][theta] holds the current merged letter y_g^(theta).
  std::vector<std::vector<Letter>> groups;
  std::vector<std::size_t> label(ny);
  for (const auto& members : part.groups) {
    std::vector<Letter> g;
    for (std::size_t y : members) {
      auto p = view.posterior(y);
      g.push_back({view.masses[y], {p.begin(), p.end()}, y});
      label[y] = y;
    }
    groups.push_back(std::move(g));
  }

  std::vector<MergeStep> steps;
  std::size_t size = ny;
  while (groups.size() * nx > target_l) {
    // Candidate (delta, i, j, s): merge y_i^(theta) with y_j^(theta + s).
    using Key = std::tuple<double, std::size_t, std::size_t, std::size_t>;
    const double inf = std::numeric_limits<double>::infinity();
    Key aligned{inf, 0, 0, 0};
    Key any{inf, 0, 0, 0};
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const Letter& a = groups[i][0];
      const std::size_t amax = argmax(a.post);
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        for (std::size_t s = 0; s < nx; ++s) {
          const Letter& b = groups[j][s];
          const Key k{merge_delta_i(a.mass, a.post, b.mass, b.post), i, j, s};
          any = std::min(any, k);
          if (argmax(b.post) == amax) aligned = std::min(aligned, k);
        }
      }
    }
    const Key best = std::get<0>(aligned) < inf ? aligned : any;
    const auto [delta, i, j, s] = best;
    (void)delta;

    for (std::size_t theta = 0; theta < nx; ++theta) {
      Letter& a = groups[i][theta];
      const Letter& b = groups[j][(theta + s) % nx];
      const double d = merge_delta_i(a.mass, a.post, b.mass, b.post);
      const std::size_t first = std::min(a.id, b.id);
      const std::size_t second = std::max(a.id, b.id);
      steps.push_back({first, second, d, size--});
      const double merged = a.mass + b.mass;
      for (std::size_t x = 0; x < nx; ++x) {
        a.post[x] = std::min((a.mass * a.post[x] + b.mass * b.post[x]) / merged, 1.0);
      }
      a.mass = merged;
      for (std::size_t y = 0; y < ny; ++y) {
        if (label[y] == a.id || label[y] == b.id) label[y] = first;
      }
      a.id = first;
    }
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return detail::assemble_degrade(ch, label, std::move(steps));
}

}  // namespace channelq
