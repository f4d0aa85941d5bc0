#include "channelq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "channelq/error.hpp"
#include "channelq/functionals.hpp"

namespace channelq {

namespace {

std::string join_labels(const std::vector<std::string>& labels,
                        const std::vector<std::size_t>& members) {
  std::string out;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (k) out += '+';
    out += labels[members[k]];
  }
  return out;
}

}  // namespace

BuiltChannel build_channel(const Matrix& transition, std::span<const double> input_dist,
                           std::vector<std::string> labels) {
  const std::size_t nx = transition.rows();
  const std::size_t ny = transition.cols();
  if (input_dist.size() != nx) {
    throw Error(Errc::DimensionMismatch, "input_dist has " + std::to_string(input_dist.size()) +
                                             " entries but transition has " + std::to_string(nx) +
                                             " rows");
  }
  if (nx < 2) throw Error(Errc::DimensionMismatch, "input alphabet needs at least 2 letters");
  if (ny < 1) throw Error(Errc::DimensionMismatch, "output alphabet is empty");
  if (!labels.empty() && labels.size() != ny) {
    throw Error(Errc::DimensionMismatch, "labels has " + std::to_string(labels.size()) +
                                             " entries but there are " + std::to_string(ny) +
                                             " output letters");
  }

  double dist_sum = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const double p = input_dist[x];
    if (!std::isfinite(p) || p <= 0.0) {
      throw Error(Errc::BadInputDist, "entry " + std::to_string(x) + " is not positive");
    }
    dist_sum += p;
  }
  if (std::abs(dist_sum - 1.0) > kValidationTol) {
    throw Error(Errc::BadInputDist, "entries sum to " + std::to_string(dist_sum));
  }

  for (std::size_t x = 0; x < nx; ++x) {
    double row_sum = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = transition(x, y);
      if (!std::isfinite(w)) {
        throw Error(Errc::DomainError, "row " + std::to_string(x) + " has a non-finite entry");
      }
      if (w < 0.0) {
        throw Error(Errc::NegativeEntry,
                    "row " + std::to_string(x) + ", column " + std::to_string(y) + " is negative");
      }
      row_sum += w;
    }
    if (std::abs(row_sum - 1.0) > kValidationTol) {
      throw Error(Errc::NonStochasticRow,
                  "row " + std::to_string(x) + " sums to " + std::to_string(row_sum));
    }
  }

  BuiltChannel built;
  for (std::size_t y = 0; y < ny; ++y) {
    bool any = false;
    for (std::size_t x = 0; x < nx && !any; ++x) any = transition(x, y) > 0.0;
    if (any) built.kept.push_back(y);
  }

  Channel& ch = built.channel;
  ch.transition_ = Matrix(nx, built.kept.size());
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t k = 0; k < built.kept.size(); ++k) ch.transition_(x, k) = transition(x, built.kept[k]);
  }
  ch.input_dist_.assign(input_dist.begin(), input_dist.end());
  if (!labels.empty()) {
    for (std::size_t y : built.kept) ch.labels_.push_back(std::move(labels[y]));
  }
  return built;
}

BuiltChannel build_channel(const std::vector<std::vector<double>>& rows,
                           std::span<const double> input_dist, std::vector<std::string> labels) {
  const std::size_t ny = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), ny);
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (rows[x].size() != ny) {
      throw Error(Errc::DimensionMismatch, "row " + std::to_string(x) + " has " +
                                               std::to_string(rows[x].size()) + " entries, expected " +
                                               std::to_string(ny));
    }
    std::copy(rows[x].begin(), rows[x].end(), m.row(x).begin());
  }
  return build_channel(m, input_dist, std::move(labels));
}

double Channel::output_mass(std::size_t y) const {
  double m = 0.0;
  for (std::size_t x = 0; x < input_size(); ++x) m += input_dist_[x] * transition_(x, y);
  return m;
}

bool Channel::has_uniform_input(double tol) const {
  const double u = 1.0 / static_cast<double>(input_size());
  return std::all_of(input_dist_.begin(), input_dist_.end(),
                     [&](double p) { return std::abs(p - u) <= tol; });
}

JointView joint_view(const Channel& ch) {
  const std::size_t nx = ch.input_size();
  const std::size_t ny = ch.output_size();
  JointView view;
  view.masses.resize(ny);
  view.posteriors = Matrix(ny, nx);
  for (std::size_t y = 0; y < ny; ++y) {
    double mass = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      const double joint = ch.input_dist()[x] * ch.prob(x, y);
      view.posteriors(y, x) = joint;
      mass += joint;
    }
    view.masses[y] = mass;
    for (std::size_t x = 0; x < nx; ++x) view.posteriors(y, x) /= mass;
  }
  return view;
}

Channel channel_from_view(const JointView& view, std::span<const double> input_dist,
                          std::vector<std::string> labels) {
  const std::size_t nx = view.input_size();
  if (input_dist.size() != nx) {
    throw Error(Errc::DimensionMismatch, "input distribution does not match posterior length");
  }
  Matrix w(nx, view.size());
  for (std::size_t y = 0; y < view.size(); ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      w(x, y) = view.masses[y] * view.posteriors(y, x) / input_dist[x];
    }
  }
  return build_channel(w, input_dist, std::move(labels)).channel;
}

double mutual_information(const Channel& ch) {
  double input_entropy = 0.0;
  for (double p : ch.input_dist()) input_entropy += eta(p);
  const JointView view = joint_view(ch);
  double conditional = 0.0;
  for (std::size_t y = 0; y < view.size(); ++y) {
    conditional += view.masses[y] * entropy_h(view.posterior(y));
  }
  return std::max(0.0, input_entropy - conditional);
}

std::vector<std::size_t> duplicate_letter_map(const Channel& ch, double tol) {
  const JointView view = joint_view(ch);
  const std::size_t ny = view.size();
  std::vector<std::size_t> order(ny);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = view.posteriors(a, 0);
    const double pb = view.posteriors(b, 0);
    return pa < pb || (pa == pb && a < b);
  });

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> leader(ny, unset);
  for (std::size_t k = 0; k < ny; ++k) {
    const std::size_t a = order[k];
    if (leader[a] != unset) continue;
    leader[a] = a;
    for (std::size_t l = k + 1; l < ny; ++l) {
      const std::size_t b = order[l];
      if (view.posteriors(b, 0) - view.posteriors(a, 0) > tol) break;
      if (leader[b] != unset) continue;
      double dist = 0.0;
      for (std::size_t x = 0; x < view.input_size(); ++x) {
        dist = std::max(dist, std::abs(view.posteriors(a, x) - view.posteriors(b, x)));
      }
      if (dist <= tol) leader[b] = a;
    }
  }

  // Renumber groups by their smallest member.
  std::vector<std::size_t> smallest(ny, unset);
  for (std::size_t y = 0; y < ny; ++y) {
    if (smallest[leader[y]] == unset) smallest[leader[y]] = y;
  }
  std::vector<std::size_t> group_of_smallest(ny, unset);
  std::size_t next = 0;
  std::vector<std::size_t> map(ny);
  for (std::size_t y = 0; y < ny; ++y) {
    const std::size_t s = smallest[leader[y]];
    if (group_of_smallest[s] == unset) group_of_smallest[s] = next++;
    map[y] = group_of_smallest[s];
  }
  return map;
}

Channel merge_duplicate_letters(const Channel& ch, double tol) {
  std::vector<std::size_t> map = duplicate_letter_map(ch, tol);
  const std::size_t groups = map.empty() ? 0 : *std::max_element(map.begin(), map.end()) + 1;
  if (groups == ch.output_size()) return ch;
  return apply_intermediate(ch, IntermediateChannel::deterministic(std::move(map), groups));
}

IntermediateChannel IntermediateChannel::deterministic(std::vector<std::size_t> map,
                                                       std::size_t targets) {
  for (std::size_t t : map) {
    if (t >= targets) throw Error(Errc::IndexError, "map target out of range");
  }
  IntermediateChannel phi;
  phi.kind = Kind::DeterministicMap;
  phi.map = std::move(map);
  phi.targets = targets;
  return phi;
}

IntermediateChannel IntermediateChannel::stochastic(Matrix forward, Matrix reverse) {
  if (!reverse.empty() &&
      (reverse.rows() != forward.cols() || reverse.cols() != forward.rows())) {
    throw Error(Errc::DimensionMismatch, "reverse channel shape does not match forward channel");
  }
  IntermediateChannel phi;
  phi.kind = Kind::Stochastic;
  phi.forward = std::move(forward);
  phi.reverse = std::move(reverse);
  return phi;
}

std::size_t IntermediateChannel::source_size() const noexcept {
  return kind == Kind::DeterministicMap ? map.size() : forward.rows();
}

std::size_t IntermediateChannel::target_size() const noexcept {
  return kind == Kind::DeterministicMap ? targets : forward.cols();
}

Matrix IntermediateChannel::dense() const {
  if (kind == Kind::Stochastic) return forward;
  Matrix m(map.size(), targets);
  for (std::size_t s = 0; s < map.size(); ++s) m(s, map[s]) = 1.0;
  return m;
}

Channel apply_intermediate(const Channel& ch, const IntermediateChannel& phi) {
  if (phi.source_size() != ch.output_size()) {
    throw Error(Errc::DimensionMismatch,
                "intermediate channel expects " + std::to_string(phi.source_size()) +
                    " source letters, channel has " + std::to_string(ch.output_size()));
  }
  const std::size_t nx = ch.input_size();
  const std::size_t nz = phi.target_size();
  Matrix q(nx, nz);
  std::vector<std::string> labels;

  if (phi.kind == IntermediateChannel::Kind::DeterministicMap) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ch.output_size(); ++y) q(x, phi.map[y]) += ch.prob(x, y);
    }
    if (!ch.labels().empty()) {
      std::vector<std::vector<std::size_t>> members(nz);
      for (std::size_t y = 0; y < phi.map.size(); ++y) members[phi.map[y]].push_back(y);
      for (const auto& m : members) labels.push_back(join_labels(ch.labels(), m));
    }
  } else {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ch.output_size(); ++y) {
        const double w = ch.prob(x, y);
        if (w == 0.0) continue;
        const auto row = phi.forward.row(y);
        for (std::size_t z = 0; z < nz; ++z) q(x, z) += w * row[z];
      }
    }
  }
  return build_channel(q, ch.input_dist(), std::move(labels)).channel;
}

}  // namespace channelq
