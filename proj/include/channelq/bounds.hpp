#pragma once

#include <cstddef>
#include <optional>

namespace channelq {

/// ln Gamma(1 + (n - 1) / 2) evaluated exactly at the (half-)integer point.
double log_gamma_half_shift(std::size_t input_size);

/// Constant of the greedy-merge degrading bound DI <= nu * L^(-2/(|X|-1)).
double nu(std::size_t input_size);

/// Per-merge constant, mu = 2 nu / (|X| - 1).
double mu(std::size_t input_size);

/// Constant of the upgrading-cost lower bound UC >= kappa * L^(-2/(|X|-1)).
double kappa(std::size_t input_size);

/// Sphere-packing radius guaranteeing a close pair among |Y| letters.
double r_critical(std::size_t input_size, std::size_t alphabet_size);

/// nu * L^(-2/(|X|-1)).
double degrade_envelope(std::size_t input_size, std::size_t target_l);

/// mu * m^(-(|X|+1)/(|X|-1)): bound on the best single merge at size m.
double merge_step_envelope(std::size_t input_size, std::size_t size);

/// 2 nu(2) L^-2, binary upgrading.
double upgrade_envelope(std::size_t target_l);

/// 2 mu(2) m^-3: bound on the best single split at size m.
double split_step_envelope(std::size_t size);

/// kappa * L^(-2/(|X|-1)).
double upgrade_lower_envelope(std::size_t input_size, std::size_t target_l);

struct BoundReport {
  std::size_t input_size = 0;
  std::optional<std::size_t> alphabet_size;
  std::size_t target_l = 0;
  double nu = 0.0;
  double mu = 0.0;
  double kappa = 0.0;
  std::optional<double> r_critical;
  double degrade_envelope = 0.0;
  std::optional<double> upgrade_envelope;
  double upgrade_lower_envelope = 0.0;
};

/// r_critical is filled only when the alphabet size is given and exceeds
/// 2|X|; upgrade_envelope only for binary input.
BoundReport bound_report(std::size_t input_size, std::size_t target_l,
                         std::optional<std::size_t> alphabet_size = std::nullopt);

}  // namespace channelq
