#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qkdbound/cc_attack.hpp"

namespace qkdbound {

/// Upper bound on the secret-key rate at one visibility, together with the
/// optimizing measurement settings and Eve's minimizing mixing parameters.
struct KeyRateBound {
  double rate = 0.0;        // bits/round, after the 1/(N-1) prefactor
  double visibility = 0.0;
  int local_dim = 0;
  int parties = 0;
  LeakageModel model;
  std::string settings;     // descriptor of the maximizing measurements
  MixingParameters gamma_star;
  double objective = 0.0;   // p(?) * total correlation of the '?'-conditional
  double p_question = 0.0;
  bool gamma_feasible = false;
  bool converged = true;
  ThresholdConvention convention = ThresholdConvention::AsDerived;
};

/// Eve's objective J(gamma) = p(e=?) * total_correlation(p(.|e=?)); zero when
/// the '?' class has no mass.
double weighted_objective(const MixingParameters& gamma,
                          const JointDistribution& p_ent,
                          const JointDistribution& p_sep, double q_v,
                          const LeakageModel& model);

struct GammaMinimum {
  MixingParameters gamma;
  double objective = 0.0;
  bool converged = true;
};

/// Minimizes J over gamma in [0,1]^(d^N) by multi-start projected coordinate
/// descent. Outcome tuples with identical (p_ent, p_sep) values share one
/// gamma variable; starts are gamma=0, gamma=1, the clamped closed form and
/// five seeded random points.
GammaMinimum minimize_over_gamma(const JointDistribution& p_ent,
                                 const JointDistribution& p_sep, double q_v,
                                 const LeakageModel& model,
                                 double tolerance = 1e-10);

/// Honest-party settings to maximize over.
struct SettingsSpace {
  enum class Kind { Computational, BlochGrid, Fig3Family, UserList };

  Kind kind = Kind::Computational;
  double theta_step = 0.0;
  double phi_step = 0.0;
  std::optional<double> second_party_theta;  // Fig3Family override
  std::vector<std::vector<ProjectiveMeasurement>> candidates;  // UserList

  static SettingsSpace computational();
  /// All parties measure in one shared Bloch basis (theta, phi); qubits only.
  static SettingsSpace bloch_grid();
  /// Parties 1..N-1 in the Z basis (the next-to-last party optionally at a
  /// fixed X-Z angle), last party swept over X-Z angles; qubits only.
  static SettingsSpace fig3_family(
      std::optional<double> second_party_theta = std::nullopt);
  static SettingsSpace user_list(
      std::vector<std::vector<ProjectiveMeasurement>> candidates);
};

/// rate = max over settings of (1/(N-1)) * min over gamma of J, clamped at 0.
/// Visibilities at or below the separability threshold short-circuit to rate
/// zero without constructing the attack.
KeyRateBound maximize_over_settings(
    int d, int parties, double visibility, const LeakageModel& model,
    const SettingsSpace& space,
    ThresholdConvention convention = ThresholdConvention::AsDerived);

/// One KeyRateBound per grid visibility; grid points evaluate independently.
std::vector<KeyRateBound> rate_curve(
    int d, int parties, const LeakageModel& model,
    const std::vector<double>& v_grid, const SettingsSpace& space,
    ThresholdConvention convention = ThresholdConvention::AsDerived);

/// Argmin of a unimodal function on [lo, hi] by golden-section search.
double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double x_tol);

}  // namespace qkdbound
