#include "channelq/functionals.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "channelq/error.hpp"

namespace channelq {

Distance::Distance(double value) : value_(value) {
  if (!(value >= 0.0)) throw Error(Errc::DomainError, "distance must be non-negative");
  if (std::isinf(value)) infinite_ = true;
}

double Distance::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

std::partial_ordering operator<=>(const Distance& a, const Distance& b) {
  if (a.infinite_ || b.infinite_) {
    return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
  }
  return a.value_ <=> b.value_;
}

bool operator==(const Distance& a, const Distance& b) {
  return (a <=> b) == std::partial_ordering::equivalent;
}

Distance min(const Distance& a, const Distance& b) { return b < a ? b : a; }
Distance max(const Distance& a, const Distance& b) { return a < b ? b : a; }

double eta(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(Errc::DomainError, "eta argument " + std::to_string(p) + " outside [0,1]");
  }
  return p > 0.0 ? -p * std::log(p) : 0.0;
}

double entropy_h(std::span<const double> posterior) {
  double h = 0.0;
  for (double p : posterior) {
    if (p < 0.0) throw Error(Errc::DomainError, "negative posterior entry");
    // Posteriors produced by division can overshoot 1 by an ulp.
    h += eta(std::min(p, 1.0));
  }
  return h;
}

double binary_entropy(double p) { return eta(p) + eta(1.0 - p); }

double binary_kl(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::DomainError, "binary_kl: p outside [0,1]");
  if (!(q > 0.0 && q < 1.0)) throw Error(Errc::DomainError, "binary_kl: q outside (0,1)");
  double d = 0.0;
  if (p > 0.0) d += p * std::log(p / q);
  if (p < 1.0) d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return std::max(d, 0.0);
}

double d1(double a, double z) { return std::abs(z - a); }

Distance d2(double a, double z) {
  if (a > 0.0 && z > 0.0) return Distance((z - a) * (z - a) / std::min(a, z));
  return Distance::infinity();
}

Distance d_scalar(double a, double z) { return min(Distance(d1(a, z)), d2(a, z)); }

Distance d_vector(std::span<const double> alpha, std::span<const double> beta) {
  if (alpha.size() != beta.size()) {
    throw Error(Errc::DimensionMismatch, "d_vector: vectors differ in length");
  }
  Distance d;
  for (std::size_t x = 0; x < alpha.size(); ++x) d = max(d, d_scalar(alpha[x], beta[x]));
  return d;
}

double merge_delta_i(double mass_a, std::span<const double> alpha, double mass_b,
                     std::span<const double> beta) {
  if (alpha.size() != beta.size()) {
    throw Error(Errc::DimensionMismatch, "merge_delta_i: posteriors differ in length");
  }
  if (std::equal(alpha.begin(), alpha.end(), beta.begin())) return 0.0;
  // Weighted divergence of each posterior from the merged one; avoids the
  // cancellation of the entropy-difference form.
  const double mass = mass_a + mass_b;
  double delta = 0.0;
  for (std::size_t x = 0; x < alpha.size(); ++x) {
    const double a = mass_a * alpha[x];
    const double b = mass_b * beta[x];
    const double gamma = std::min((a + b) / mass, 1.0);
    const double ta = a > 0.0 ? a * std::log(alpha[x] / gamma) : 0.0;
    const double tb = b > 0.0 ? b * std::log(beta[x] / gamma) : 0.0;
    delta += ta + tb;
  }
  return std::max(delta, 0.0);
}

double merge_delta_i(const JointView& view, std::size_t i, std::size_t j) {
  if (i >= view.size() || j >= view.size()) {
    throw Error(Errc::IndexError, "merge_delta_i: letter index out of range");
  }
  if (i == j) throw Error(Errc::IndexError, "merge_delta_i: cannot merge a letter with itself");
  return merge_delta_i(view.masses[i], view.posterior(i), view.masses[j], view.posterior(j));
}

namespace {

double euclid(std::span<const double> a, std::span<const double> b) {
  // hypot keeps tiny gaps near the boundary from underflowing to zero.
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

SplitCost split_cost(double mass, std::span<const double> y, std::span<const double> left,
                     std::span<const double> right) {
  if (y.size() != 2 || left.size() != 2 || right.size() != 2) {
    throw Error(Errc::NotBinaryInput, "split cost needs binary posteriors");
  }
  const double span = euclid(right, left);
  if (span == 0.0) throw Error(Errc::DegenerateNeighbors, "neighbors share a posterior");
  const double phi = std::clamp(euclid(right, y) / span, 0.0, 1.0);
#ifndef NDEBUG
  const double gap = right[0] - left[0];
  const double scalar = (right[0] - y[0]) / gap;
  assert(std::abs(phi - scalar) <= 1e-12 + 8 * std::numeric_limits<double>::epsilon() / std::abs(gap));
#endif
  const double delta =
      mass * entropy_h(y) - (mass * phi * entropy_h(left) + mass * (1.0 - phi) * entropy_h(right));
  return {std::max(delta, 0.0), phi};
}

double split_delta_i(const JointView& view, std::size_t letter) {
  if (view.input_size() != 2) throw Error(Errc::NotBinaryInput, "split_delta_i needs |X| = 2");
  if (letter >= view.size()) throw Error(Errc::IndexError, "split_delta_i: letter out of range");
  std::vector<std::size_t> order(view.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = view.posteriors(a, 0);
    const double pb = view.posteriors(b, 0);
    return pa < pb || (pa == pb && a < b);
  });
  const auto pos = static_cast<std::size_t>(std::find(order.begin(), order.end(), letter) - order.begin());
  if (pos == 0 || pos + 1 == order.size()) {
    throw Error(Errc::BoundaryLetter, "letter " + std::to_string(letter) + " has no neighbor on one side");
  }
  return split_cost(view.masses[letter], view.posterior(letter), view.posterior(order[pos - 1]),
                    view.posterior(order[pos + 1]))
      .delta_i;
}

double iy_curve(double y0, double zeta1, double zeta2) {
  if (!(0.0 < zeta1 && zeta1 < y0 && y0 < zeta2 && zeta2 < 1.0)) {
    throw Error(Errc::DomainError, "iy_curve needs 0 < zeta1 < y0 < zeta2 < 1");
  }
  const double phi = (zeta2 - y0) / (zeta2 - zeta1);
  return phi * binary_entropy(zeta1) + (1.0 - phi) * binary_entropy(zeta2);
}

double q_ratio(double zeta1, double zeta2, double zeta) {
  if (!(0.0 <= zeta1 && zeta1 < zeta && zeta < zeta2 && zeta2 <= 1.0)) {
    throw Error(Errc::DomainError, "q_ratio needs 0 <= zeta1 < zeta < zeta2 <= 1");
  }
  const double num = binary_kl(zeta2, zeta) * (zeta - zeta1) * (zeta - zeta1);
  const double den = binary_kl(zeta1, zeta) * (zeta2 - zeta) * (zeta2 - zeta);
  return num / den;
}

}  // namespace channelq
