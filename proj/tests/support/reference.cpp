#include "support/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ref {

double direct_mi(const channelq::Channel& ch) {
  const std::size_t nx = ch.input_size();
  const std::size_t ny = ch.output_size();
  double total = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    double py = 0.0;
    for (std::size_t x = 0; x < nx; ++x) py += ch.input_dist()[x] * ch.prob(x, y);
    for (std::size_t x = 0; x < nx; ++x) {
      const double w = ch.prob(x, y);
      if (w > 0.0) total += ch.input_dist()[x] * w * std::log(w / py);
    }
  }
  return total;
}

channelq::Channel example_channel() {
  const std::vector<std::vector<double>> rows{{0.0, 1.0 / 6, 1.0 / 3, 0.5}, {0.5, 1.0 / 3, 1.0 / 6, 0.0}};
  const std::vector<double> dist{0.5, 0.5};
  return channelq::build_channel(rows, dist, {"a", "b", "c", "d"}).channel;
}

channelq::Channel bec(double eps) {
  const std::vector<std::vector<double>> rows{{1 - eps, eps, 0.0}, {0.0, eps, 1 - eps}};
  const std::vector<double> dist{0.5, 0.5};
  return channelq::build_channel(rows, dist).channel;
}

channelq::Channel bsc(double p) {
  const std::vector<std::vector<double>> rows{{1 - p, p}, {p, 1 - p}};
  const std::vector<double> dist{0.5, 0.5};
  return channelq::build_channel(rows, dist).channel;
}

double max_abs_diff(const channelq::Channel& a, const channelq::Channel& b) {
  if (a.input_size() != b.input_size() || a.output_size() != b.output_size()) {
    return std::numeric_limits<double>::infinity();
  }
  double d = 0.0;
  for (std::size_t x = 0; x < a.input_size(); ++x) {
    for (std::size_t y = 0; y < a.output_size(); ++y) d = std::max(d, std::abs(a.prob(x, y) - b.prob(x, y)));
  }
  return d;
}

std::vector<double> sorted_posteriors(const channelq::Channel& ch) {
  const channelq::JointView v = channelq::joint_view(ch);
  std::vector<double> out;
  for (std::size_t y = 0; y < v.size(); ++y) out.push_back(v.posteriors(y, 0));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ref
