#include "qkdbound/repeater.hpp"

#include <cmath>

#include "qkdbound/parallel.hpp"

namespace qkdbound {

double swapped_visibility(double v, int repeaters, RepeaterExponent exponent) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("swapped_visibility: v must lie in [0,1]");
  if (repeaters < 0)
    throw std::invalid_argument("swapped_visibility: repeaters must be >= 0");
  if (repeaters == 0) return v;
  const int power =
      exponent == RepeaterExponent::Repeaters ? 2 * repeaters : repeaters + 1;
  return std::pow(v, power);
}

MaxRepeatersResult max_repeaters(double v, double leak,
                                 ThresholdConvention convention) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("max_repeaters: v must lie in [0,1]");
  MaxRepeatersResult result;
  if (v == 0.0) {
    result.no_key = true;
    return result;
  }
  const double threshold =
      zero_key_threshold(2, 2, LeakageModel::uniform(leak), convention);
  if (v == 1.0) {
    result.n_max = 1000000000;  // sentinel: no decay at this precision
    result.unbounded = true;
    return result;
  }
  if (v <= threshold) {
    result.no_key = true;
    return result;
  }
  // Closed form n_max <= log2(threshold) / (2 log2 v), then adjust against
  // the strict security predicate so exact ties count as insecure.
  const double ratio = std::log2(threshold) / (2.0 * std::log2(v));
  if (ratio >= 1e9) {
    result.n_max = 1000000000;
    result.unbounded = true;
    return result;
  }
  int n = static_cast<int>(std::floor(ratio));
  if (n < 0) n = 0;
  auto secure = [&](int count) {
    return swapped_visibility(v, count) > threshold;
  };
  while (n > 0 && !secure(n)) --n;
  while (secure(n + 1)) ++n;
  result.n_max = n;
  return result;
}

std::vector<RepeaterRatePoint> repeater_rate_curve(
    double v, double leak, int n_min, int n_max, const SettingsSpace& space,
    RepeaterExponent exponent, ThresholdConvention convention) {
  if (n_min < 0 || n_max < n_min)
    throw std::invalid_argument("repeater_rate_curve: bad repeater range");
  const LeakageModel model = LeakageModel::uniform(leak);
  std::vector<RepeaterRatePoint> out(n_max - n_min + 1);
  parallel_for(out.size(), [&](std::size_t i) {
    const int n = n_min + static_cast<int>(i);
    const double effective = swapped_visibility(v, n, exponent);
    out[i] = RepeaterRatePoint{
        n, effective,
        maximize_over_settings(2, 2, effective, model, space, convention)};
  });
  return out;
}

}  // namespace qkdbound
