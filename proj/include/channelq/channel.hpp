#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "channelq/matrix.hpp"

namespace channelq {

/// Tolerance used when validating probability vectors.
inline constexpr double kValidationTol = 1e-9;

class Channel;

struct BuiltChannel;

/// Validates a transition matrix (one row per input letter) and input
/// distribution. Output letters whose marginal mass is exactly zero are
/// dropped; `kept` maps each remaining letter to its original column.
BuiltChannel build_channel(const Matrix& transition, std::span<const double> input_dist,
                           std::vector<std::string> labels = {});
BuiltChannel build_channel(const std::vector<std::vector<double>>& rows,
                           std::span<const double> input_dist,
                           std::vector<std::string> labels = {});

/// A discrete memoryless channel W(y|x) together with a fixed input
/// distribution. Non-empty channels are only produced by build_channel; a
/// default-constructed Channel has no letters.
class Channel {
 public:
  Channel() = default;

  std::size_t input_size() const noexcept { return transition_.rows(); }
  std::size_t output_size() const noexcept { return transition_.cols(); }

  std::span<const double> input_dist() const noexcept { return input_dist_; }
  const Matrix& transition() const noexcept { return transition_; }
  double prob(std::size_t x, std::size_t y) const { return transition_(x, y); }

  /// Marginal output mass pi(y).
  double output_mass(std::size_t y) const;

  /// Empty when the channel carries no labels.
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool has_uniform_input(double tol = kValidationTol) const;

 private:
  friend BuiltChannel build_channel(const Matrix&, std::span<const double>,
                                    std::vector<std::string>);

  Matrix transition_;
  std::vector<double> input_dist_;
  std::vector<std::string> labels_;
};

struct BuiltChannel {
  Channel channel;
  std::vector<std::size_t> kept;
};

/// Output masses and per-letter posterior vectors (y_x = P(X=x | Y=y)).
struct JointView {
  std::vector<double> masses;
  Matrix posteriors;  // rows: output letters, cols: input letters

  std::size_t size() const noexcept { return masses.size(); }
  std::size_t input_size() const noexcept { return posteriors.cols(); }
  std::span<const double> posterior(std::size_t y) const { return posteriors.row(y); }
};

JointView joint_view(const Channel& ch);

/// Inverts Bayes' rule: W(y|x) = pi_y y_x / pi(x).
Channel channel_from_view(const JointView& view, std::span<const double> input_dist,
                          std::vector<std::string> labels = {});

/// I(X;Y) in nats.
double mutual_information(const Channel& ch);

/// Maps each output letter to a duplicate group. Letters are scanned in order
/// of their first posterior coordinate (ties by index); two letters share a
/// group when their posteriors differ by at most `tol` in max-norm. Groups are
/// numbered by their smallest member index.
std::vector<std::size_t> duplicate_letter_map(const Channel& ch, double tol);

Channel merge_duplicate_letters(const Channel& ch, double tol);

/// A channel Phi applied after another channel.
///
/// Degrading intermediates are deterministic maps and only store `map`
/// (source letter -> target letter). Upgrading intermediates are stochastic:
/// `forward` holds Phi(y|z) with rows indexed by the source z, and `reverse`
/// holds the posterior channel Phi_{z|y} with rows indexed by y.
struct IntermediateChannel {
  enum class Kind { DeterministicMap, Stochastic };

  Kind kind = Kind::DeterministicMap;
  std::vector<std::size_t> map;
  std::size_t targets = 0;
  Matrix forward;
  Matrix reverse;

  static IntermediateChannel deterministic(std::vector<std::size_t> map, std::size_t targets);
  static IntermediateChannel stochastic(Matrix forward, Matrix reverse);

  std::size_t source_size() const noexcept;
  std::size_t target_size() const noexcept;

  /// Phi(target|source) as a dense matrix, rows indexed by source letters.
  Matrix dense() const;
};

/// Q(z|x) = sum_y W(y|x) Phi(z|y).
Channel apply_intermediate(const Channel& ch, const IntermediateChannel& phi);

}  // namespace channelq
