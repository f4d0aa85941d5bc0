#include "channelq/polar.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

#include "channelq/degrade.hpp"
#include "channelq/error.hpp"
#include "channelq/upgrade.hpp"

namespace channelq {

namespace {

// Merging letters is a degrading step, so the upgraded chain only merges
// exact duplicates.
constexpr double kLowerCanonicalTol = 1e-12;
constexpr double kUpperCanonicalTol = 0.0;

void require_binary_uniform(const Channel& ch) {
  if (ch.input_size() != 2) throw Error(Errc::NotBinaryInput, "polar transforms need |X| = 2");
  if (!ch.has_uniform_input(kValidationTol)) {
    throw Error(Errc::NonUniformInput, "polar transforms need a uniform input distribution");
  }
}

const std::vector<double> kUniform2{0.5, 0.5};

Channel quantize_down(const Channel& ch, const PolarOptions& o) {
  const Channel canon = merge_duplicate_letters(ch, kLowerCanonicalTol);
  if (canon.output_size() <= o.target_l) return canon;
  if (o.degrader == PolarDegrader::OptimalBinary) return optimal_degrade_binary(canon, o.target_l).channel;
  return greedy_merge(canon, o.target_l, {.binary_adjacent_fast_path = true}).channel;
}

Channel quantize_up(const Channel& ch, const PolarOptions& o) {
  const Channel canon = merge_duplicate_letters(ch, kUpperCanonicalTol);
  if (canon.output_size() <= o.target_l) return canon;
  if (o.upgrader == PolarUpgrader::Optimal) return optimal_upgrade_binary(canon, o.target_l).channel;
  return greedy_split(canon, o.target_l).channel;
}

struct Chains {
  Channel lower;
  Channel upper;
};

}  // namespace

Channel polar_transform_minus(const Channel& ch) {
  require_binary_uniform(ch);
  const std::size_t ny = ch.output_size();
  Matrix w(2, ny * ny);
  for (std::size_t u1 = 0; u1 < 2; ++u1) {
    for (std::size_t y1 = 0; y1 < ny; ++y1) {
      for (std::size_t y2 = 0; y2 < ny; ++y2) {
        double p = 0.0;
        for (std::size_t u2 = 0; u2 < 2; ++u2) p += 0.5 * ch.prob(u1 ^ u2, y1) * ch.prob(u2, y2);
        w(u1, y1 * ny + y2) = p;
      }
    }
  }
  return build_channel(w, kUniform2).channel;
}

Channel polar_transform_plus(const Channel& ch) {
  require_binary_uniform(ch);
  const std::size_t ny = ch.output_size();
  Matrix w(2, 2 * ny * ny);
  for (std::size_t u2 = 0; u2 < 2; ++u2) {
    for (std::size_t y1 = 0; y1 < ny; ++y1) {
      for (std::size_t y2 = 0; y2 < ny; ++y2) {
        for (std::size_t u1 = 0; u1 < 2; ++u1) {
          w(u2, (y1 * ny + y2) * 2 + u1) = 0.5 * ch.prob(u1 ^ u2, y1) * ch.prob(u2, y2);
        }
      }
    }
  }
  return build_channel(w, kUniform2).channel;
}

std::string_view to_string(PolarDegrader d) {
  return d == PolarDegrader::Greedy ? "greedy" : "optimal-binary";
}

std::string_view to_string(PolarUpgrader u) {
  return u == PolarUpgrader::GreedySplit ? "greedy" : "optimal";
}

PolarDegrader parse_degrader(std::string_view name) {
  if (name == "greedy") return PolarDegrader::Greedy;
  if (name == "optimal-binary" || name == "optimal") return PolarDegrader::OptimalBinary;
  throw Error(Errc::DomainError, "unknown degrader '" + std::string(name) + "'");
}

PolarUpgrader parse_upgrader(std::string_view name) {
  if (name == "greedy" || name == "greedy-split") return PolarUpgrader::GreedySplit;
  if (name == "optimal") return PolarUpgrader::Optimal;
  throw Error(Errc::DomainError, "unknown upgrader '" + std::string(name) + "'");
}

std::size_t configured_threads() {
  const char* env = std::getenv("CHANNELQ_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const unsigned long n = std::strtoul(env, &end, 10);
  if (end == env || n == 0) return 1;
  return static_cast<std::size_t>(n);
}

PolarReport polar_construct(const Channel& ch, const PolarOptions& options) {
  require_binary_uniform(ch);
  if (options.target_l < 2) throw Error(Errc::BadTargetSize, "L must be at least 2");
  const std::size_t threads = options.threads == 0 ? configured_threads() : options.threads;

  std::vector<Chains> level{{ch, ch}};
  for (std::size_t d = 0; d < options.depth; ++d) {
    std::vector<Chains> next(level.size() * 2);
    auto work = [&](std::size_t k) {
      const Chains& c = level[k];
      next[2 * k] = {quantize_down(polar_transform_minus(c.lower), options),
                     quantize_up(polar_transform_minus(c.upper), options)};
      next[2 * k + 1] = {quantize_down(polar_transform_plus(c.lower), options),
                         quantize_up(polar_transform_plus(c.upper), options)};
    };
    const std::size_t workers = std::min(threads, level.size());
    if (workers <= 1) {
      for (std::size_t k = 0; k < level.size(); ++k) work(k);
    } else {
      std::atomic<std::size_t> cursor{0};
      std::exception_ptr failure;
      std::atomic<bool> failed{false};
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
          for (std::size_t k; (k = cursor.fetch_add(1)) < level.size();) {
            try {
              work(k);
            } catch (...) {
              if (!failed.exchange(true)) failure = std::current_exception();
            }
          }
        });
      }
      for (auto& th : pool) th.join();
      if (failure) std::rethrow_exception(failure);
    }
    level = std::move(next);
  }

  PolarReport report;
  report.depth = options.depth;
  report.target_l = options.target_l;
  report.degrader = to_string(options.degrader);
  report.upgrader = to_string(options.upgrader);
  report.input_mi = mutual_information(ch);
  for (std::size_t k = 0; k < level.size(); ++k) {
    std::string index(options.depth, '0');
    for (std::size_t b = 0; b < options.depth; ++b) {
      if (k >> (options.depth - 1 - b) & 1U) index[b] = '1';
    }
    report.entries.push_back(
        {std::move(index), mutual_information(level[k].lower), mutual_information(level[k].upper)});
  }
  return report;
}

}  // namespace channelq
