#pragma once

#include "qkdbound/distribution.hpp"

namespace qkdbound {

enum class LeakageKind { Uniform, JunkOnly };

/// Classical side-channel model: each measurement outcome reaches the
/// adversary with probability leak_probability. Uniform leaks in every round;
/// JunkOnly leaks only in rounds where the separable component was sent.
struct LeakageModel {
  LeakageKind kind = LeakageKind::Uniform;
  double leak_probability = 0.0;

  LeakageModel() = default;
  LeakageModel(LeakageKind k, double leak);

  static LeakageModel uniform(double leak) {
    return LeakageModel(LeakageKind::Uniform, leak);
  }
  static LeakageModel junk_only(double leak) {
    return LeakageModel(LeakageKind::JunkOnly, leak);
  }
};

/// The printed zero-key threshold formula (AsStated) differs from the one
/// obtained by propagating the feasibility bound on the decomposition weight
/// (AsDerived) under uniform leakage; both are exposed side by side.
enum class ThresholdConvention { AsStated, AsDerived };

/// Eve's side-information label for a round: the separable-component flag,
/// a leaked outcome tuple, or the unknown class '?'.
enum class EveClassKind { SepFlag, Leaked, Question };

/// Per-outcome-tuple mixing weights gamma in [0,1]: the fraction of leaked
/// separable rounds with that outcome which Eve reassigns to class '?'.
struct MixingParameters {
  RealVector gamma;

  MixingParameters() = default;
  explicit MixingParameters(RealVector g);

  static MixingParameters constant(Eigen::Index size, double value) {
    return MixingParameters(RealVector::Constant(size, value));
  }
};

/// Joint table p(outcome tuple, Eve class) for a fixed input tuple.
/// leaked(a) is the mass of class Leaked(a); off-tuple leaked classes carry
/// no mass because all parties leak in the same rounds.
struct EveJointDistribution {
  int local_dim = 0;
  int parties = 0;
  RealVector sep_flag;
  RealVector leaked;
  RealVector question;
  double q_v = 0.0;
  LeakageModel model;

  RealVector outcome_marginal() const { return sep_flag + leaked + question; }
  double total() const {
    return sep_flag.sum() + leaked.sum() + question.sum();
  }
  double class_mass(EveClassKind kind) const {
    switch (kind) {
      case EveClassKind::SepFlag:
        return sep_flag.sum();
      case EveClassKind::Leaked:
        return leaked.sum();
      case EveClassKind::Question:
        return question.sum();
    }
    return 0.0;
  }
};

/// Largest visibility at which the isotropic state is fully separable,
/// 1 / (1 + d^(N-1)).
double separability_threshold(int d, int parties);

/// Weight of the separable component in the convex decomposition of the
/// isotropic state, (1 + d^(N-1)) (1 - v) / d^(N-1). Requires v at or above
/// the separability threshold (below it the state is separable outright).
double mixing_weight_qv(int d, int parties, double visibility);

/// Visibility below which the attack forces the key-rate bound to zero for
/// any projective measurements.
double zero_key_threshold(int d, int parties, const LeakageModel& model,
                          ThresholdConvention convention);

/// Flagged joint distribution of outcomes and Eve classes after gamma-mixing.
EveJointDistribution eve_joint_distribution(const JointDistribution& p_ent,
                                            const JointDistribution& p_sep,
                                            double q_v,
                                            const LeakageModel& model,
                                            const MixingParameters& gamma);

struct QuestionConditional {
  double probability = 0.0;        // p(e = ?)
  JointDistribution conditional;   // p(a | e = ?)
};

/// Bayes conditional of the outcome tuple given Eve's class '?'.
QuestionConditional question_conditional(const EveJointDistribution& ejd);

struct ClosedFormGamma {
  RealVector gamma;   // raw values; entries may exceed 1
  bool feasible = false;
};

/// The mixing weights that make the '?'-conditional distribution flat:
/// gamma_a = c (1-q_v)(max_a' p_ent(a') - p_ent(a)) / (q_v L p_sep(a)), with
/// c = 1-L under uniform leakage and c = 1 under junk-only leakage.
/// feasible reports whether every entry is <= 1 (entries are never negative).
ClosedFormGamma closed_form_gamma(const JointDistribution& p_ent,
                                  const JointDistribution& p_sep, double q_v,
                                  const LeakageModel& model);

}  // namespace qkdbound
