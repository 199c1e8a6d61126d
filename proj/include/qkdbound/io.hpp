#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qkdbound/repeater.hpp"

namespace qkdbound {

/// Locale-independent fixed formatting with 9 digits after the decimal
/// point; the numeric format of every CSV field.
std::string format_fixed9(double value);

std::string convention_name(ThresholdConvention convention);
std::string model_name(const LeakageModel& model);

/// Header: v,rate_bits,objective_bits,p_question,settings_descriptor,
/// gamma_feasible,convention
std::string rate_curve_csv(const std::vector<KeyRateBound>& rows);

/// Header: n,rate_bits
std::string repeater_curve_csv(const std::vector<RepeaterRatePoint>& rows);

/// Splits CSV text into rows of fields (no quoting; fields must not contain
/// commas).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

struct SvgSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Standalone SVG with one polyline per series, linear axes and tick labels
/// at 5 divisions. Deterministic: identical input gives identical bytes.
std::string render_svg(const std::vector<SvgSeries>& series,
                       const std::string& x_label, const std::string& y_label);

void write_file(const std::string& path, const std::string& content);

}  // namespace qkdbound
