#pragma once

#include <compare>
#include <cstddef>
#include <span>

#include "channelq/channel.hpp"

namespace channelq {

/// Non-negative extended real. Infinity is an explicit state so that min/max
/// over distances stay total.
class Distance {
 public:
  constexpr Distance() = default;
  explicit Distance(double value);

  static constexpr Distance infinity() {
    Distance d;
    d.infinite_ = true;
    return d;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; +inf as a double when infinite.
  double value() const noexcept;

  friend std::partial_ordering operator<=>(const Distance& a, const Distance& b);
  friend bool operator==(const Distance& a, const Distance& b);

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

Distance min(const Distance& a, const Distance& b);
Distance max(const Distance& a, const Distance& b);

/// eta(p) = -p ln p, eta(0) = 0.
double eta(double p);

/// h(y) = sum_x eta(y_x).
double entropy_h(std::span<const double> posterior);

/// Entropy of the binary posterior [p, 1 - p].
double binary_entropy(double p);

/// Binary KL divergence d(p||q) in nats.
double binary_kl(double p, double q);

double d1(double a, double z);
Distance d2(double a, double z);
Distance d_scalar(double a, double z);
Distance d_vector(std::span<const double> alpha, std::span<const double> beta);

/// Exact I(W) - I(Q) when two letters with masses `mass_a`, `mass_b` and
/// posteriors `alpha`, `beta` are merged. Symmetric in its two letters.
double merge_delta_i(double mass_a, std::span<const double> alpha, double mass_b,
                     std::span<const double> beta);
double merge_delta_i(const JointView& view, std::size_t i, std::size_t j);

struct SplitCost {
  double delta_i;
  double phi;  // share of the letter's mass sent to its left neighbor
};

/// Mutual-information gain when a binary letter with mass `mass` and
/// posterior `y` is split between the posteriors `left` and `right`.
SplitCost split_cost(double mass, std::span<const double> y, std::span<const double> left,
                     std::span<const double> right);

/// As above, with neighbors taken from the posterior order of `view`.
double split_delta_i(const JointView& view, std::size_t letter);

/// phi h(z1) + (1 - phi) h(z2) with phi = (zeta2 - y0) / (zeta2 - zeta1).
double iy_curve(double y0, double zeta1, double zeta2);

/// d(zeta2||zeta) (zeta - zeta1)^2 / (d(zeta1||zeta) (zeta2 - zeta)^2).
double q_ratio(double zeta1, double zeta2, double zeta);

}  // namespace channelq
