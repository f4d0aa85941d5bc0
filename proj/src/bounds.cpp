#include "channelq/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "channelq/error.hpp"

namespace channelq {

namespace {

void require_input_size(std::size_t input_size) {
  if (input_size < 2) {
    throw Error(Errc::DomainError, "input alphabet size must be at least 2, got " +
                                       std::to_string(input_size));
  }
}

void require_positive(std::size_t value, const char* name) {
  if (value == 0) throw Error(Errc::DomainError, std::string(name) + " must be positive");
}

// ln n!
double log_factorial(std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 2; k <= n; ++k) s += std::log(static_cast<double>(k));
  return s;
}

// (sqrt(1 + 1/(2(|X|-1))) - 1)^-2, written to avoid cancellation.
double packing_factor(std::size_t input_size) {
  const double t = 1.0 / (2.0 * static_cast<double>(input_size - 1));
  const double s = t / (std::sqrt(1.0 + t) + 1.0);
  return 1.0 / (s * s);
}

// (2|X| / Gamma(1 + (|X|-1)/2))^(2/(|X|-1))
double volume_factor(std::size_t input_size) {
  const double k = static_cast<double>(input_size - 1);
  return std::exp(2.0 / k * (std::log(2.0 * static_cast<double>(input_size)) -
                             log_gamma_half_shift(input_size)));
}

}  // namespace

double log_gamma_half_shift(std::size_t input_size) {
  require_input_size(input_size);
  // 1 + (n-1)/2 = (n+1)/2.
  if (input_size % 2 == 1) {
    // Gamma(m) = (m-1)! with m = (n+1)/2.
    return log_factorial((input_size + 1) / 2 - 1);
  }
  // Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!) with m = n/2.
  const std::size_t m = input_size / 2;
  return log_factorial(2 * m) + 0.5 * std::log(std::numbers::pi) -
         static_cast<double>(m) * std::log(4.0) - log_factorial(m);
}

double nu(std::size_t input_size) {
  require_input_size(input_size);
  const double n = static_cast<double>(input_size);
  return std::numbers::pi * n * (n - 1.0) / 2.0 * packing_factor(input_size) *
         volume_factor(input_size);
}

double mu(std::size_t input_size) {
  return 2.0 / static_cast<double>(input_size - 1) * nu(input_size);
}

double kappa(std::size_t input_size) {
  require_input_size(input_size);
  const double n = static_cast<double>(input_size);
  const double ratio_log = log_gamma_half_shift(input_size) - log_factorial(input_size - 1);
  return (n - 1.0) / (2.0 * std::numbers::pi * (n + 1.0)) * std::exp(2.0 / (n - 1.0) * ratio_log);
}

double r_critical(std::size_t input_size, std::size_t alphabet_size) {
  require_input_size(input_size);
  if (alphabet_size <= 2 * input_size) {
    throw Error(Errc::DomainError, "r_critical needs |Y| > 2|X|");
  }
  const double k = static_cast<double>(input_size - 1);
  return std::numbers::pi / 4.0 * packing_factor(input_size) * volume_factor(input_size) *
         std::pow(static_cast<double>(alphabet_size), -2.0 / k);
}

double degrade_envelope(std::size_t input_size, std::size_t target_l) {
  require_positive(target_l, "L");
  const double k = static_cast<double>(input_size - 1);
  return nu(input_size) * std::pow(static_cast<double>(target_l), -2.0 / k);
}

double merge_step_envelope(std::size_t input_size, std::size_t size) {
  require_positive(size, "alphabet size");
  const double n = static_cast<double>(input_size);
  return mu(input_size) * std::pow(static_cast<double>(size), -(n + 1.0) / (n - 1.0));
}

double upgrade_envelope(std::size_t target_l) {
  require_positive(target_l, "L");
  const double l = static_cast<double>(target_l);
  return 2.0 * nu(2) / (l * l);
}

double split_step_envelope(std::size_t size) {
  require_positive(size, "alphabet size");
  const double m = static_cast<double>(size);
  return 2.0 * mu(2) / (m * m * m);
}

double upgrade_lower_envelope(std::size_t input_size, std::size_t target_l) {
  require_positive(target_l, "L");
  const double k = static_cast<double>(input_size - 1);
  return kappa(input_size) * std::pow(static_cast<double>(target_l), -2.0 / k);
}

BoundReport bound_report(std::size_t input_size, std::size_t target_l,
                         std::optional<std::size_t> alphabet_size) {
  require_input_size(input_size);
  require_positive(target_l, "L");
  BoundReport r;
  r.input_size = input_size;
  r.alphabet_size = alphabet_size;
  r.target_l = target_l;
  r.nu = nu(input_size);
  r.mu = mu(input_size);
  r.kappa = kappa(input_size);
  if (alphabet_size && *alphabet_size > 2 * input_size) {
    r.r_critical = r_critical(input_size, *alphabet_size);
  }
  r.degrade_envelope = degrade_envelope(input_size, target_l);
  if (input_size == 2) r.upgrade_envelope = upgrade_envelope(target_l);
  r.upgrade_lower_envelope = upgrade_lower_envelope(input_size, target_l);
  return r;
}

}  // namespace channelq
