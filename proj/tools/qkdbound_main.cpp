// Command-line front end: computes zero-key thresholds, key-rate curves,
// repeater scalability bounds, gamma tables and Monte Carlo validation runs
// for convex-combination attacks on isotropic-state QKD with classical
// leakage. JSON for scalar results, CSV for curves, SVG on request.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qkdbound/io.hpp"
#include "qkdbound/montecarlo.hpp"

using json = nlohmann::ordered_json;
using namespace qkdbound;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LeakageModel make_model(const std::string& name, double leak) {
  if (name == "uniform") return LeakageModel::uniform(leak);
  if (name == "junk") return LeakageModel::junk_only(leak);
  throw UsageError("model must be 'uniform' or 'junk'");
}

ThresholdConvention make_convention(const std::string& name) {
  if (name == "as_derived") return ThresholdConvention::AsDerived;
  if (name == "as_stated") return ThresholdConvention::AsStated;
  throw UsageError("convention must be 'as_derived' or 'as_stated'");
}

json threshold_json(int d, int n, double leak, const std::string& model_name) {
  const LeakageModel model = make_model(model_name, leak);
  json out;
  out["d"] = d;
  out["N"] = n;
  out["L"] = leak;
  out["model"] = model_name;
  out["separability_threshold"] = separability_threshold(d, n);
  out["zero_key_threshold"] = {
      {"as_stated",
       zero_key_threshold(d, n, model, ThresholdConvention::AsStated)},
      {"as_derived",
       zero_key_threshold(d, n, model, ThresholdConvention::AsDerived)}};
  return out;
}

void emit(const json& payload, const std::string& out_path) {
  const std::string text = payload.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

json vector_json(const RealVector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// Expands `--config <path>` into ordinary flags before CLI11 sees the
// command line: each `key=value` line becomes `--key value` unless the flag
// was already given, so flags override file values.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream file(path);
  if (!file) throw UsageError("config file '" + path + "' is not readable");
  std::string line;
  while (std::getline(file, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line '" + line + "' is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError("config line '" + line + "' lacks a key");
    const std::string flag = "--" + key;
    const bool given =
        std::any_of(args.begin(), args.end(), [&](const std::string& a) {
          return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    if (!given) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

SettingsSpace make_space(const std::string& family,
                         const std::vector<std::string>& candidates,
                         std::optional<double> theta1, int d, int parties) {
  if (!candidates.empty()) {
    std::vector<std::vector<ProjectiveMeasurement>> list;
    for (const std::string& c : candidates)
      list.push_back(parse_party_measurements(c, d, parties));
    return SettingsSpace::user_list(std::move(list));
  }
  if (family == "computational") return SettingsSpace::computational();
  if (family == "bloch-grid") return SettingsSpace::bloch_grid();
  if (family == "fig3") return SettingsSpace::fig3_family(theta1);
  throw UsageError(
      "settings must be 'computational', 'bloch-grid' or 'fig3' (or use "
      "--candidate)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Upper bounds on secret-key rates of entanglement-based QKD under "
      "convex-combination attacks with classical leakage"};
  app.require_subcommand(1);

  // threshold ------------------------------------------------------------
  auto* threshold_cmd =
      app.add_subcommand("threshold", "Zero-key visibility thresholds, both "
                                      "conventions, as JSON");
  int t_d = 2, t_n = 2;
  double t_leak = 0.0;
  std::string t_model = "uniform", t_out;
  threshold_cmd->add_option("--d", t_d, "Local dimension")->check(CLI::Range(2, 16));
  threshold_cmd->add_option("--N", t_n, "Number of parties")->check(CLI::Range(2, 8));
  threshold_cmd->add_option("--L", t_leak, "Leakage probability")
      ->check(CLI::Range(0.0, 1.0));
  threshold_cmd->add_option("--model", t_model, "uniform|junk")->capture_default_str();
  threshold_cmd->add_option("--out", t_out, "Write JSON here instead of stdout");
  std::string t_config;
  threshold_cmd->add_option("--config", t_config,
                            "key=value config file; flags override");

  // gamma-check ----------------------------------------------------------
  auto* gamma_cmd = app.add_subcommand(
      "gamma-check",
      "Closed-form mixing parameters, feasibility and thresholds as JSON");
  int g_d = 2, g_n = 2;
  double g_v = 0.5, g_leak = 0.1;
  std::string g_model = "uniform", g_settings, g_out;
  gamma_cmd->add_option("--d", g_d)->check(CLI::Range(2, 16));
  gamma_cmd->add_option("--N", g_n)->check(CLI::Range(2, 8));
  gamma_cmd->add_option("--v", g_v, "Visibility")->check(CLI::Range(0.0, 1.0));
  gamma_cmd->add_option("--L", g_leak)->check(CLI::Range(0.0, 1.0));
  gamma_cmd->add_option("--model", g_model, "uniform|junk")->capture_default_str();
  gamma_cmd->add_option("--settings", g_settings,
                        "Per-party '|'-separated measurement descriptors "
                        "(default: all zbasis)");
  gamma_cmd->add_option("--out", g_out);
  std::string g_config;
  gamma_cmd->add_option("--config", g_config,
                        "key=value config file; flags override");

  // rate-curve -----------------------------------------------------------
  auto* curve_cmd = app.add_subcommand(
      "rate-curve", "Key-rate upper-bound curve over a visibility grid (CSV)");
  int c_d = 2, c_n = 2, c_steps = 50;
  double c_leak = 0.1, c_vmin = 0.0, c_vmax = 1.0;
  std::string c_model = "uniform", c_settings = "computational";
  std::string c_convention = "as_derived", c_out, c_svg;
  std::vector<std::string> c_candidates;
  std::optional<double> c_theta1;
  curve_cmd->add_option("--d", c_d)->check(CLI::Range(2, 16));
  curve_cmd->add_option("--N", c_n)->check(CLI::Range(2, 8));
  curve_cmd->add_option("--L", c_leak)->check(CLI::Range(0.0, 1.0));
  curve_cmd->add_option("--model", c_model, "uniform|junk")->capture_default_str();
  curve_cmd->add_option("--v-min", c_vmin)->check(CLI::Range(0.0, 1.0));
  curve_cmd->add_option("--v-max", c_vmax)->check(CLI::Range(0.0, 1.0));
  curve_cmd->add_option("--steps", c_steps, "Grid points")->check(CLI::Range(1, 100000));
  curve_cmd->add_option("--settings", c_settings,
                        "computational|bloch-grid|fig3")
      ->capture_default_str();
  curve_cmd->add_option("--candidate", c_candidates,
                        "Explicit per-party settings; repeatable");
  double c_theta1_value = 0.0;
  auto* theta1_opt = curve_cmd->add_option(
      "--theta1", c_theta1_value, "fig3: fixed X-Z angle of party N-1");
  curve_cmd->add_option("--convention", c_convention, "as_derived|as_stated")
      ->capture_default_str();
  curve_cmd->add_option("--out", c_out, "Write CSV here instead of stdout");
  curve_cmd->add_option("--svg", c_svg, "Also render the curve as SVG");
  std::string c_config;
  curve_cmd->add_option("--config", c_config,
                        "key=value config file; flags override");

  // repeater -------------------------------------------------------------
  auto* repeater_cmd = app.add_subcommand(
      "repeater",
      "Maximum repeater count (JSON, both conventions) and (n, rate) CSV");
  double r_v = 0.95, r_leak = 0.1;
  int r_nmin = 0, r_nmax = -1;
  std::string r_exponent = "repeaters", r_settings = "computational";
  std::string r_convention = "as_derived", r_out, r_csv = "repeater_rate.csv",
              r_svg;
  repeater_cmd->add_option("--v", r_v, "Per-link visibility")
      ->check(CLI::Range(0.0, 1.0));
  repeater_cmd->add_option("--L", r_leak)->check(CLI::Range(0.0, 1.0));
  repeater_cmd->add_option("--n-min", r_nmin)->check(CLI::Range(0, 1000000));
  repeater_cmd->add_option("--n-max", r_nmax,
                           "Last repeater count in the CSV (default: derived "
                           "n_max + 2)");
  repeater_cmd->add_option("--exponent", r_exponent,
                           "repeaters (v^(2n)) | links (v^(n+1))");
  repeater_cmd->add_option("--settings", r_settings,
                           "computational|bloch-grid|fig3");
  repeater_cmd->add_option("--convention", r_convention, "as_derived|as_stated")
      ->capture_default_str();
  repeater_cmd->add_option("--out", r_out, "Write JSON here instead of stdout");
  repeater_cmd->add_option("--csv", r_csv, "Path of the (n, rate) CSV");
  repeater_cmd->add_option("--svg", r_svg, "Also render the curve as SVG");
  std::string r_config;
  repeater_cmd->add_option("--config", r_config,
                           "key=value config file; flags override");

  // simulate -------------------------------------------------------------
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Round-by-round Monte Carlo of the flagged attack (JSON)");
  int s_d = 2, s_n = 2;
  double s_v = 0.5, s_leak = 0.1;
  std::uint64_t s_rounds = 1000000, s_seed = 1;
  std::string s_model = "uniform", s_settings, s_gamma = "closed";
  std::string s_gamma_values, s_out;
  simulate_cmd->add_option("--d", s_d)->check(CLI::Range(2, 16));
  simulate_cmd->add_option("--N", s_n)->check(CLI::Range(2, 8));
  simulate_cmd->add_option("--v", s_v)->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--L", s_leak)->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--model", s_model, "uniform|junk")->capture_default_str();
  simulate_cmd->add_option("--settings", s_settings,
                           "Per-party '|'-separated descriptors (default: all "
                           "zbasis)");
  simulate_cmd->add_option("--gamma", s_gamma, "zero|one|closed")
      ->capture_default_str();
  simulate_cmd->add_option("--gamma-values", s_gamma_values,
                           "Explicit comma-separated gamma table");
  simulate_cmd->add_option("--rounds", s_rounds)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  simulate_cmd->add_option("--seed", s_seed);
  simulate_cmd->add_option("--out", s_out);
  std::string s_config;
  simulate_cmd->add_option("--config", s_config,
                           "key=value config file; flags override");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*threshold_cmd) {
      emit(threshold_json(t_d, t_n, t_leak, t_model), t_out);
      return 0;
    }

    if (*gamma_cmd) {
      const LeakageModel model = make_model(g_model, g_leak);
      if (g_v < separability_threshold(g_d, g_n))
        throw UsageError(
            "v below the separability threshold: state is separable, no "
            "attack to check");
      if (g_settings.empty())
        g_settings = settings_descriptor(std::vector<ProjectiveMeasurement>(
            g_n, computational_basis(g_d)));
      const auto measurements =
          parse_party_measurements(g_settings, g_d, g_n);
      const JointDistribution p_ent =
          born_distribution(ghz_projector(g_d, g_n), measurements);
      const JointDistribution p_sep =
          born_distribution(sep_isotropic(g_d, g_n), measurements);
      const double q_v = mixing_weight_qv(g_d, g_n, g_v);
      const ClosedFormGamma closed =
          closed_form_gamma(p_ent, p_sep, q_v, model);
      json out;
      out["d"] = g_d;
      out["N"] = g_n;
      out["v"] = g_v;
      out["L"] = g_leak;
      out["model"] = g_model;
      out["settings"] = g_settings;
      out["q_v"] = q_v;
      out["separability_threshold"] = separability_threshold(g_d, g_n);
      out["zero_key_threshold"] = {
          {"as_stated",
           zero_key_threshold(g_d, g_n, model, ThresholdConvention::AsStated)},
          {"as_derived",
           zero_key_threshold(g_d, g_n, model,
                              ThresholdConvention::AsDerived)}};
      out["gamma"] = vector_json(closed.gamma);
      out["feasible"] = closed.feasible;
      emit(out, g_out);
      return 0;
    }

    if (*curve_cmd) {
      if (c_vmax < c_vmin) throw UsageError("--v-max must be >= --v-min");
      if (*theta1_opt) c_theta1 = c_theta1_value;
      const LeakageModel model = make_model(c_model, c_leak);
      const ThresholdConvention convention = make_convention(c_convention);
      const SettingsSpace space =
          make_space(c_settings, c_candidates, c_theta1, c_d, c_n);
      std::vector<double> grid;
      for (int i = 0; i < c_steps; ++i)
        grid.push_back(c_steps == 1 ? c_vmin
                                    : c_vmin + (c_vmax - c_vmin) * i /
                                                   (c_steps - 1));
      const auto rows = rate_curve(c_d, c_n, model, grid, space, convention);
      const std::string csv = rate_curve_csv(rows);
      if (c_out.empty())
        std::cout << csv;
      else
        write_file(c_out, csv);
      if (!c_svg.empty()) {
        SvgSeries series;
        series.name = model_name(model) + " L=" + format_fixed9(c_leak);
        for (const KeyRateBound& row : rows)
          series.points.emplace_back(row.visibility, row.rate);
        write_file(c_svg, render_svg({series}, "visibility", "rate [bits/round]"));
      }
      return 0;
    }

    if (*repeater_cmd) {
      const ThresholdConvention convention = make_convention(r_convention);
      const RepeaterExponent exponent = [&] {
        if (r_exponent == "repeaters") return RepeaterExponent::Repeaters;
        if (r_exponent == "links") return RepeaterExponent::Links;
        throw UsageError("exponent must be 'repeaters' or 'links'");
      }();
      const SettingsSpace space = make_space(r_settings, {}, std::nullopt, 2, 2);
      const MaxRepeatersResult derived =
          max_repeaters(r_v, r_leak, ThresholdConvention::AsDerived);
      const MaxRepeatersResult stated =
          max_repeaters(r_v, r_leak, ThresholdConvention::AsStated);
      if (r_nmax < 0) {
        r_nmax = derived.unbounded ? 10 : derived.n_max + 2;
        if (derived.no_key) r_nmax = 2;
      }
      if (r_nmax < r_nmin) throw UsageError("--n-max must be >= --n-min");
      const auto curve = repeater_rate_curve(r_v, r_leak, r_nmin, r_nmax,
                                             space, exponent, convention);
      write_file(r_csv, repeater_curve_csv(curve));
      if (!r_svg.empty()) {
        SvgSeries series;
        series.name = "v=" + format_fixed9(r_v);
        for (const RepeaterRatePoint& point : curve)
          series.points.emplace_back(point.repeaters, point.bound.rate);
        write_file(r_svg,
                   render_svg({series}, "repeaters", "rate [bits/round]"));
      }
      json out;
      out["v"] = r_v;
      out["L"] = r_leak;
      out["exponent"] = r_exponent;
      out["info_measure"] = "total_correlation";
      out["n_max_derived"] = derived.n_max;
      out["n_max_stated"] = stated.n_max;
      out["diagnostics"] = {
          {"conventions_diverge", derived.n_max != stated.n_max},
          {"unbounded_at_this_precision", derived.unbounded},
          {"no_key", derived.no_key},
          {"threshold_as_derived",
           zero_key_threshold(2, 2, LeakageModel::uniform(r_leak),
                              ThresholdConvention::AsDerived)},
          {"threshold_as_stated",
           zero_key_threshold(2, 2, LeakageModel::uniform(r_leak),
                              ThresholdConvention::AsStated)}};
      out["csv"] = r_csv;
      emit(out, r_out);
      return 0;
    }

    if (*simulate_cmd) {
      const LeakageModel model = make_model(s_model, s_leak);
      if (s_v < separability_threshold(s_d, s_n))
        throw UsageError("v below the separability threshold");
      if (s_settings.empty())
        s_settings = settings_descriptor(std::vector<ProjectiveMeasurement>(
            s_n, computational_basis(s_d)));
      const auto measurements =
          parse_party_measurements(s_settings, s_d, s_n);
      const JointDistribution p_ent =
          born_distribution(ghz_projector(s_d, s_n), measurements);
      const JointDistribution p_sep =
          born_distribution(sep_isotropic(s_d, s_n), measurements);
      const double q_v = mixing_weight_qv(s_d, s_n, s_v);
      const Eigen::Index size = p_ent.size();
      MixingParameters gamma;
      if (!s_gamma_values.empty()) {
        RealVector values(size);
        std::stringstream stream(s_gamma_values);
        std::string item;
        Eigen::Index i = 0;
        while (std::getline(stream, item, ','))
          values(i++) = std::stod(item);
        if (i != size) throw UsageError("--gamma-values needs d^N entries");
        gamma = MixingParameters(values);
      } else if (s_gamma == "zero") {
        gamma = MixingParameters::constant(size, 0.0);
      } else if (s_gamma == "one") {
        gamma = MixingParameters::constant(size, 1.0);
      } else if (s_gamma == "closed") {
        const ClosedFormGamma closed =
            closed_form_gamma(p_ent, p_sep, q_v, model);
        gamma = MixingParameters(closed.gamma.cwiseMin(1.0).cwiseMax(0.0));
      } else {
        throw UsageError("--gamma must be zero, one or closed");
      }
      const SimulationReport report = simulate_rounds(
          s_d, s_n, s_v, model, gamma, measurements, s_rounds, s_seed);
      json out;
      out["d"] = s_d;
      out["N"] = s_n;
      out["v"] = s_v;
      out["L"] = s_leak;
      out["model"] = s_model;
      out["settings"] = s_settings;
      out["rounds"] = report.rounds;
      out["seed"] = report.seed;
      out["q_v"] = report.q_v;
      out["gamma"] = vector_json(report.gamma);
      out["empirical"] = {
          {"mass_sep_flag", report.mass_sep_flag},
          {"mass_leaked", report.mass_leaked},
          {"mass_question", report.mass_question},
          {"leaked_fraction", report.leaked_fraction},
          {"joint_sep_flag", vector_json(report.joint_sep_flag)},
          {"joint_leaked", vector_json(report.joint_leaked)},
          {"joint_question", vector_json(report.joint_question)},
          {"conditional_question", vector_json(report.conditional_question)}};
      out["analytic"] = {
          {"joint_sep_flag", vector_json(report.analytic.sep_flag)},
          {"joint_leaked", vector_json(report.analytic.leaked)},
          {"joint_question", vector_json(report.analytic.question)}};
      out["max_joint_deviation"] = report.max_joint_deviation;
      out["info_measure"] = "total_correlation";
      out["analytic_objective"] =
          weighted_objective(gamma, p_ent, p_sep, q_v, model);
      if (report.mass_question > 0.0)
        out["empirical_objective"] = empirical_objective(report);
      else
        out["empirical_objective"] = nullptr;
      emit(out, s_out);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
