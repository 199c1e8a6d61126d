#pragma once

#include "qkdbound/optimize.hpp"

namespace qkdbound {

/// Exponent convention for visibility decay along a swap chain: Repeaters
/// uses v^(2n) as printed; Links uses the n-repeaters-means-n+1-links
/// convention v^(n+1). Both give v for n = 0 (direct link).
enum class RepeaterExponent { Repeaters, Links };

/// End-to-end visibility after n entanglement swaps on per-link visibility v.
double swapped_visibility(double v, int repeaters,
                          RepeaterExponent exponent = RepeaterExponent::Repeaters);

struct MaxRepeatersResult {
  int n_max = 0;
  bool unbounded = false;  // v = 1: no decay at this precision
  bool no_key = false;     // even the direct link is below threshold
};

/// Largest n with swapped_visibility(v, n) strictly above the uniform-model
/// zero-key threshold; ties at exact equality count as insecure.
MaxRepeatersResult max_repeaters(double v, double leak,
                                 ThresholdConvention convention);

struct RepeaterRatePoint {
  int repeaters = 0;
  double visibility = 0.0;  // effective end-to-end visibility
  KeyRateBound bound;
};

/// Key-rate bound as a function of the number of repeaters, uniform leakage.
std::vector<RepeaterRatePoint> repeater_rate_curve(
    double v, double leak, int n_min, int n_max, const SettingsSpace& space,
    RepeaterExponent exponent = RepeaterExponent::Repeaters,
    ThresholdConvention convention = ThresholdConvention::AsDerived);

}  // namespace qkdbound
