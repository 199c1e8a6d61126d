#include "qkdbound/cc_attack.hpp"

#include <cmath>

namespace qkdbound {

namespace {
constexpr double kFeasibleSlack = 1e-12;
constexpr double kFlatTol = 1e-12;

void check_pair(const JointDistribution& p_ent, const JointDistribution& p_sep) {
  if (p_ent.local_dim != p_sep.local_dim || p_ent.parties != p_sep.parties)
    throw std::invalid_argument("cc attack: entangled/separable table mismatch");
}
}  // namespace

LeakageModel::LeakageModel(LeakageKind k, double leak)
    : kind(k), leak_probability(leak) {
  if (!(leak >= 0.0 && leak <= 1.0))
    throw std::invalid_argument("LeakageModel: leak probability must lie in [0,1]");
}

MixingParameters::MixingParameters(RealVector g) : gamma(std::move(g)) {
  for (Eigen::Index i = 0; i < gamma.size(); ++i)
    if (!(gamma(i) >= 0.0 && gamma(i) <= 1.0))
      throw std::invalid_argument("MixingParameters: entries must lie in [0,1]");
}

double separability_threshold(int d, int parties) {
  if (d < 2 || parties < 2)
    throw std::invalid_argument("separability_threshold: need d >= 2, N >= 2");
  return 1.0 / (1.0 + static_cast<double>(pow_int(d, parties - 1)));
}

double mixing_weight_qv(int d, int parties, double visibility) {
  const double boundary = separability_threshold(d, parties);
  if (!(visibility >= boundary - 1e-15 && visibility <= 1.0 + 1e-15))
    throw std::invalid_argument(
        "mixing_weight_qv: visibility must lie in [separability threshold, 1]");
  const double k = static_cast<double>(pow_int(d, parties - 1));
  const double qv = (1.0 + k) * (1.0 - visibility) / k;
  return std::min(1.0, std::max(0.0, qv));
}

double zero_key_threshold(int d, int parties, const LeakageModel& model,
                          ThresholdConvention convention) {
  if (d < 2 || parties < 2)
    throw std::invalid_argument("zero_key_threshold: need d >= 2, N >= 2");
  const double k = static_cast<double>(pow_int(d, parties - 1));
  const double leak = model.leak_probability;
  if (model.kind == LeakageKind::Uniform) {
    const double denom = (1.0 + k) * (1.0 - leak) + leak;
    if (convention == ThresholdConvention::AsStated)
      return 1.0 / (1.0 + k) + k * leak / denom;
    return 1.0 / denom;
  }
  // Junk-only leakage: the printed formula and the derived one agree.
  if (convention == ThresholdConvention::AsStated)
    return 1.0 / (1.0 + k) + k * leak / ((1.0 + k) * (leak + 1.0 + k));
  return (1.0 + leak) / (1.0 + k + leak);
}

EveJointDistribution eve_joint_distribution(const JointDistribution& p_ent,
                                            const JointDistribution& p_sep,
                                            double q_v,
                                            const LeakageModel& model,
                                            const MixingParameters& gamma) {
  check_pair(p_ent, p_sep);
  if (!(q_v >= 0.0 && q_v <= 1.0))
    throw std::invalid_argument("eve_joint_distribution: q_v must lie in [0,1]");
  const Eigen::Index size = p_ent.size();
  if (gamma.gamma.size() != size)
    throw std::invalid_argument("eve_joint_distribution: gamma size mismatch");

  const double leak = model.leak_probability;
  EveJointDistribution out;
  out.local_dim = p_ent.local_dim;
  out.parties = p_ent.parties;
  out.q_v = q_v;
  out.model = model;
  out.sep_flag = q_v * (1.0 - leak) * p_sep.probabilities;
  if (model.kind == LeakageKind::Uniform) {
    out.leaked = q_v * leak *
                     (RealVector::Ones(size) - gamma.gamma)
                         .cwiseProduct(p_sep.probabilities) +
                 (1.0 - q_v) * leak * p_ent.probabilities;
    out.question =
        q_v * leak * gamma.gamma.cwiseProduct(p_sep.probabilities) +
        (1.0 - q_v) * (1.0 - leak) * p_ent.probabilities;
  } else {
    out.leaked = q_v * leak *
                 (RealVector::Ones(size) - gamma.gamma)
                     .cwiseProduct(p_sep.probabilities);
    out.question =
        q_v * leak * gamma.gamma.cwiseProduct(p_sep.probabilities) +
        (1.0 - q_v) * p_ent.probabilities;
  }
  if (std::abs(out.total() - 1.0) > 1e-9)
    throw std::runtime_error("eve_joint_distribution: table does not sum to 1");
  return out;
}

QuestionConditional question_conditional(const EveJointDistribution& ejd) {
  const double mass = ejd.question.sum();
  if (mass <= 0.0)
    throw std::domain_error("question_conditional: class '?' has zero mass");
  return QuestionConditional{
      mass,
      JointDistribution(ejd.local_dim, ejd.parties, ejd.question / mass)};
}

ClosedFormGamma closed_form_gamma(const JointDistribution& p_ent,
                                  const JointDistribution& p_sep, double q_v,
                                  const LeakageModel& model) {
  check_pair(p_ent, p_sep);
  const Eigen::Index size = p_ent.size();
  const double leak = model.leak_probability;
  const double p_max = p_ent.probabilities.maxCoeff();

  ClosedFormGamma out;
  out.gamma = RealVector::Zero(size);
  if (q_v * leak == 0.0) {
    // No leaked separable mass to reassign: flattening works only if the
    // entangled distribution is already flat.
    out.feasible = (p_max - p_ent.probabilities.minCoeff()) <= kFlatTol;
    return out;
  }
  const double factor = (model.kind == LeakageKind::Uniform)
                            ? (1.0 - leak) * (1.0 - q_v)
                            : (1.0 - q_v);
  out.feasible = true;
  for (Eigen::Index a = 0; a < size; ++a) {
    if (p_sep.probabilities(a) <= 0.0)
      throw std::invalid_argument(
          "closed_form_gamma: separable distribution must be strictly positive");
    out.gamma(a) = factor * (p_max - p_ent.probabilities(a)) /
                   (q_v * leak * p_sep.probabilities(a));
    if (out.gamma(a) > 1.0 + kFeasibleSlack) out.feasible = false;
  }
  return out;
}

}  // namespace qkdbound
