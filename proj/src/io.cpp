#include "qkdbound/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qkdbound {

std::string format_fixed9(double value) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 9);
  if (res.ec != std::errc())
    throw std::runtime_error("format_fixed9: formatting failed");
  return std::string(buf, res.ptr);
}

namespace {

// Shorter fixed formatting for axis tick labels.
std::string format_tick(double value) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 4);
  if (res.ec != std::errc())
    throw std::runtime_error("format_tick: formatting failed");
  return std::string(buf, res.ptr);
}

}  // namespace

std::string convention_name(ThresholdConvention convention) {
  return convention == ThresholdConvention::AsStated ? "as_stated"
                                                     : "as_derived";
}

std::string model_name(const LeakageModel& model) {
  return model.kind == LeakageKind::Uniform ? "uniform" : "junk";
}

std::string rate_curve_csv(const std::vector<KeyRateBound>& rows) {
  std::string out =
      "v,rate_bits,objective_bits,p_question,settings_descriptor,"
      "gamma_feasible,convention\n";
  for (const KeyRateBound& row : rows) {
    out += format_fixed9(row.visibility);
    out += ',';
    out += format_fixed9(row.rate);
    out += ',';
    out += format_fixed9(row.objective);
    out += ',';
    out += format_fixed9(row.p_question);
    out += ',';
    out += row.settings;
    out += ',';
    out += row.gamma_feasible ? "true" : "false";
    out += ',';
    out += convention_name(row.convention);
    out += '\n';
  }
  return out;
}

std::string repeater_curve_csv(const std::vector<RepeaterRatePoint>& rows) {
  std::string out = "n,rate_bits\n";
  for (const RepeaterRatePoint& row : rows) {
    out += std::to_string(row.repeaters);
    out += ',';
    out += format_fixed9(row.bound.rate);
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  for (char c : text) {
    if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
    } else {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

std::string render_svg(const std::vector<SvgSeries>& series,
                       const std::string& x_label,
                       const std::string& y_label) {
  if (series.empty())
    throw std::invalid_argument("render_svg: empty table");
  for (const SvgSeries& s : series)
    if (s.points.empty())
      throw std::invalid_argument("render_svg: empty series");

  double x_min = series[0].points[0].first, x_max = x_min;
  double y_min = series[0].points[0].second, y_max = y_min;
  for (const SvgSeries& s : series)
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (x_max - x_min <= 0.0) x_max = x_min + 1.0;
  if (y_max - y_min <= 0.0) y_max = y_min + 1.0;

  const double width = 640.0, height = 480.0;
  const double left = 70.0, right = 20.0, top = 20.0, bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto sx = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto sy = [&](double y) {
    return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"480\" viewBox=\"0 0 640 480\">\n";
  out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  // axes
  out += "<line x1=\"" + format_tick(left) + "\" y1=\"" + format_tick(top) +
         "\" x2=\"" + format_tick(left) + "\" y2=\"" +
         format_tick(top + plot_h) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + format_tick(left) + "\" y1=\"" +
         format_tick(top + plot_h) + "\" x2=\"" + format_tick(left + plot_w) +
         "\" y2=\"" + format_tick(top + plot_h) + "\" stroke=\"black\"/>\n";
  // ticks at 5 divisions per axis
  for (int i = 0; i <= 5; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 5.0;
    const double fy = y_min + (y_max - y_min) * i / 5.0;
    const double px = sx(fx), py = sy(fy);
    out += "<line x1=\"" + format_tick(px) + "\" y1=\"" +
           format_tick(top + plot_h) + "\" x2=\"" + format_tick(px) +
           "\" y2=\"" + format_tick(top + plot_h + 5.0) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + format_tick(px) + "\" y=\"" +
           format_tick(top + plot_h + 18.0) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + format_tick(fx) +
           "</text>\n";
    out += "<line x1=\"" + format_tick(left - 5.0) + "\" y1=\"" +
           format_tick(py) + "\" x2=\"" + format_tick(left) + "\" y2=\"" +
           format_tick(py) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + format_tick(left - 8.0) + "\" y=\"" +
           format_tick(py + 4.0) +
           "\" font-size=\"11\" text-anchor=\"end\">" + format_tick(fy) +
           "</text>\n";
  }
  out += "<text x=\"" + format_tick(left + plot_w / 2.0) + "\" y=\"" +
         format_tick(height - 10.0) +
         "\" font-size=\"13\" text-anchor=\"middle\">" + x_label +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + format_tick(top + plot_h / 2.0) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "16 " +
         format_tick(top + plot_h / 2.0) + ")\">" + y_label + "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    out += "<polyline fill=\"none\" stroke=\"";
    out += palette[s % 6];
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].points.size(); ++i) {
      if (i) out += ' ';
      out += format_tick(sx(series[s].points[i].first));
      out += ',';
      out += format_tick(sy(series[s].points[i].second));
    }
    out += "\"><title>" + series[s].name + "</title></polyline>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot open output path '" + path + "'");
  file << content;
  if (!file)
    throw std::runtime_error("failed writing output path '" + path + "'");
}

}  // namespace qkdbound
