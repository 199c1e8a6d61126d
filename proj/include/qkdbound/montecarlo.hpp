#pragma once

#include <cstdint>

#include "qkdbound/cc_attack.hpp"
#include "qkdbound/rng.hpp"

namespace qkdbound {

/// Empirical tables from a round-by-round simulation of the flagged attack,
/// alongside the analytic reference they are validated against.
struct SimulationReport {
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  int local_dim = 0;
  int parties = 0;
  double visibility = 0.0;
  double q_v = 0.0;
  LeakageModel model;
  RealVector gamma;

  // Empirical joint tables p_hat(a, e), counts normalized by rounds.
  RealVector joint_sep_flag;
  RealVector joint_leaked;
  RealVector joint_question;
  double mass_sep_flag = 0.0;
  double mass_leaked = 0.0;
  double mass_question = 0.0;
  RealVector conditional_question;  // p_hat(a | ?), zeros when the class is empty
  double leaked_fraction = 0.0;     // rounds whose outcome physically leaked

  EveJointDistribution analytic;
  double max_joint_deviation = 0.0;  // over all (a, e) cells
};

/// Samples `rounds` protocol rounds: component (separable with probability
/// q_v, entangled otherwise), outcome from that component's Born
/// distribution, a leakage event per the model, and gamma-reassignment of
/// leaked separable rounds to class '?'. Identical (parameters, seed) give a
/// bit-identical report; rounds may be processed in parallel chunks.
SimulationReport simulate_rounds(
    int d, int parties, double visibility, const LeakageModel& model,
    const MixingParameters& gamma,
    const std::vector<ProjectiveMeasurement>& settings, std::uint64_t rounds,
    std::uint64_t seed);

/// Plug-in estimate p_hat(?) * total_correlation(p_hat(.|?)).
double empirical_objective(const SimulationReport& report);

}  // namespace qkdbound
