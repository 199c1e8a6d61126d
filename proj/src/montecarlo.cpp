#include "qkdbound/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "qkdbound/parallel.hpp"
#include "qkdbound/quantum.hpp"

namespace qkdbound {

namespace {

struct Tally {
  std::vector<std::uint64_t> sep_flag;
  std::vector<std::uint64_t> leaked;
  std::vector<std::uint64_t> question;
  std::uint64_t leak_events = 0;

  explicit Tally(std::size_t size)
      : sep_flag(size, 0), leaked(size, 0), question(size, 0) {}

  void merge(const Tally& other) {
    for (std::size_t i = 0; i < sep_flag.size(); ++i) {
      sep_flag[i] += other.sep_flag[i];
      leaked[i] += other.leaked[i];
      question[i] += other.question[i];
    }
    leak_events += other.leak_events;
  }
};

int sample_index(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
  return static_cast<int>(std::min(idx, cdf.size() - 1));
}

std::vector<double> cumulative(const RealVector& p) {
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  return cdf;
}

}  // namespace

SimulationReport simulate_rounds(
    int d, int parties, double visibility, const LeakageModel& model,
    const MixingParameters& gamma,
    const std::vector<ProjectiveMeasurement>& settings, std::uint64_t rounds,
    std::uint64_t seed) {
  if (rounds < 1)
    throw std::invalid_argument("simulate_rounds: need at least one round");
  const double q_v = mixing_weight_qv(d, parties, visibility);
  const JointDistribution p_ent =
      born_distribution(ghz_projector(d, parties), settings);
  const JointDistribution p_sep =
      born_distribution(sep_isotropic(d, parties), settings);
  const Eigen::Index size = p_ent.size();
  if (gamma.gamma.size() != size)
    throw std::invalid_argument("simulate_rounds: gamma size mismatch");

  const std::vector<double> cdf_sep = cumulative(p_sep.probabilities);
  const std::vector<double> cdf_ent = cumulative(p_ent.probabilities);
  const double leak_probability = model.leak_probability;
  const bool uniform = model.kind == LeakageKind::Uniform;
  const CounterRng rng(seed);

  const int workers = std::max(1, thread_budget());
  std::vector<Tally> tallies(workers, Tally(static_cast<std::size_t>(size)));
  const std::uint64_t chunk = (rounds + workers - 1) / workers;
  parallel_for(static_cast<std::size_t>(workers), [&](std::size_t w) {
    Tally& tally = tallies[w];
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(rounds, begin + chunk);
    for (std::uint64_t r = begin; r < end; ++r) {
      const bool separable = rng.uniform(r, 0) < q_v;
      const int outcome =
          sample_index(separable ? cdf_sep : cdf_ent, rng.uniform(r, 1));
      const bool leaked =
          (uniform || separable) && rng.uniform(r, 2) < leak_probability;
      if (leaked) ++tally.leak_events;
      if (separable) {
        if (!leaked) {
          ++tally.sep_flag[outcome];
        } else if (rng.uniform(r, 3) < gamma.gamma(outcome)) {
          ++tally.question[outcome];
        } else {
          ++tally.leaked[outcome];
        }
      } else {
        if (leaked)
          ++tally.leaked[outcome];
        else
          ++tally.question[outcome];
      }
    }
  });
  Tally total(static_cast<std::size_t>(size));
  for (const Tally& t : tallies) total.merge(t);

  SimulationReport report;
  report.rounds = rounds;
  report.seed = seed;
  report.local_dim = d;
  report.parties = parties;
  report.visibility = visibility;
  report.q_v = q_v;
  report.model = model;
  report.gamma = gamma.gamma;

  const double norm = static_cast<double>(rounds);
  report.joint_sep_flag = RealVector::Zero(size);
  report.joint_leaked = RealVector::Zero(size);
  report.joint_question = RealVector::Zero(size);
  std::uint64_t question_count = 0;
  for (Eigen::Index a = 0; a < size; ++a) {
    report.joint_sep_flag(a) = total.sep_flag[a] / norm;
    report.joint_leaked(a) = total.leaked[a] / norm;
    report.joint_question(a) = total.question[a] / norm;
    question_count += total.question[a];
  }
  report.mass_sep_flag = report.joint_sep_flag.sum();
  report.mass_leaked = report.joint_leaked.sum();
  report.mass_question = report.joint_question.sum();
  report.conditional_question = RealVector::Zero(size);
  if (question_count > 0)
    for (Eigen::Index a = 0; a < size; ++a)
      report.conditional_question(a) =
          total.question[a] / static_cast<double>(question_count);
  report.leaked_fraction = total.leak_events / norm;

  report.analytic = eve_joint_distribution(p_ent, p_sep, q_v, model, gamma);
  double deviation = 0.0;
  for (Eigen::Index a = 0; a < size; ++a) {
    deviation = std::max(
        deviation, std::abs(report.joint_sep_flag(a) - report.analytic.sep_flag(a)));
    deviation = std::max(
        deviation, std::abs(report.joint_leaked(a) - report.analytic.leaked(a)));
    deviation = std::max(
        deviation,
        std::abs(report.joint_question(a) - report.analytic.question(a)));
  }
  report.max_joint_deviation = deviation;
  return report;
}

double empirical_objective(const SimulationReport& report) {
  if (report.mass_question <= 0.0)
    throw std::domain_error("empirical_objective: class '?' is empty");
  const JointDistribution conditional(report.local_dim, report.parties,
                                      report.conditional_question);
  return report.mass_question * total_correlation(conditional);
}

}  // namespace qkdbound
