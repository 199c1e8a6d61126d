#include "qkdbound/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "qkdbound/parallel.hpp"
#include "qkdbound/rng.hpp"

namespace qkdbound {

namespace {

constexpr double kProbFloor = 1e-14;
constexpr double kCoordinateTol = 3e-10;
constexpr int kMaxSweeps = 10000;
constexpr int kRandomStarts = 5;
constexpr std::uint64_t kStartSeed = 0x51D5EEDull;

// Fast evaluation of J(gamma) = p(?) * total correlation of the
// '?'-conditional, without constructing intermediate distribution objects:
//   J = (N-1) p log2 p - sum_i sum_x m_i(x) log2 m_i(x) + sum_a w_a log2 w_a
// where w_a = q_v L gamma_a p_sep(a) + c p_ent(a), p = sum w, and m_i are
// the party marginals of w.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const JointDistribution& p_ent,
                     const JointDistribution& p_sep, double q_v,
                     const LeakageModel& model)
      : local_dim_(p_ent.local_dim),
        parties_(p_ent.parties),
        p_ent_(p_ent.probabilities),
        p_sep_(p_sep.probabilities),
        leaked_sep_(q_v * model.leak_probability),
        ent_coeff_(model.kind == LeakageKind::Uniform
                       ? (1.0 - q_v) * (1.0 - model.leak_probability)
                       : (1.0 - q_v)) {
    const Eigen::Index size = p_ent_.size();
    digits_.resize(size * parties_);
    for (Eigen::Index a = 0; a < size; ++a) {
      Eigen::Index rest = a;
      for (int p = parties_ - 1; p >= 0; --p) {
        digits_[a * parties_ + p] = static_cast<int>(rest % local_dim_);
        rest /= local_dim_;
      }
    }
  }

  double operator()(const RealVector& gamma) const {
    const Eigen::Index size = p_ent_.size();
    double total = 0.0;
    double joint_term = 0.0;
    thread_local std::vector<double> marg;
    marg.assign(static_cast<std::size_t>(parties_) * local_dim_, 0.0);
    for (Eigen::Index a = 0; a < size; ++a) {
      const double wa = leaked_sep_ * gamma(a) * p_sep_(a) + ent_coeff_ * p_ent_(a);
      total += wa;
      for (int p = 0; p < parties_; ++p)
        marg[p * local_dim_ + digits_[a * parties_ + p]] += wa;
      if (wa > kProbFloor) joint_term += wa * std::log2(wa);
    }
    if (total <= kProbFloor) return 0.0;
    double marginal_term = 0.0;
    for (double m : marg)
      if (m > kProbFloor) marginal_term += m * std::log2(m);
    return (parties_ - 1) * total * std::log2(total) - marginal_term +
           joint_term;
  }

  double question_mass(const RealVector& gamma) const {
    double total = 0.0;
    for (Eigen::Index a = 0; a < p_ent_.size(); ++a)
      total += leaked_sep_ * gamma(a) * p_sep_(a) + ent_coeff_ * p_ent_(a);
    return total;
  }

 private:
  int local_dim_;
  int parties_;
  RealVector p_ent_;
  RealVector p_sep_;
  double leaked_sep_;
  double ent_coeff_;
  std::vector<int> digits_;
};

// Outcome tuples with identical (p_ent, p_sep) share one gamma variable.
std::vector<std::vector<int>> symmetry_groups(const RealVector& p_ent,
                                              const RealVector& p_sep) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<int>> keyed;
  for (Eigen::Index a = 0; a < p_ent.size(); ++a) {
    const auto key = std::make_pair(std::llround(p_ent(a) * 1e12),
                                    std::llround(p_sep(a) * 1e12));
    keyed[key].push_back(static_cast<int>(a));
  }
  std::vector<std::vector<int>> groups;
  groups.reserve(keyed.size());
  for (auto& [key, members] : keyed) groups.push_back(std::move(members));
  return groups;
}

void expand_groups(const std::vector<std::vector<int>>& groups,
                   const RealVector& group_gamma, RealVector& full) {
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (int a : groups[g]) full(a) = group_gamma(static_cast<int>(g));
}

}  // namespace

double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double x_tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int guard = 200;
  while (b - a > x_tol && guard-- > 0) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  double best_x = 0.5 * (a + b);
  double best_f = f(best_x);
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  return best_x;
}

double weighted_objective(const MixingParameters& gamma,
                          const JointDistribution& p_ent,
                          const JointDistribution& p_sep, double q_v,
                          const LeakageModel& model) {
  if (p_ent.local_dim != p_sep.local_dim || p_ent.parties != p_sep.parties)
    throw std::invalid_argument("weighted_objective: table mismatch");
  if (gamma.gamma.size() != p_ent.size())
    throw std::invalid_argument("weighted_objective: gamma size mismatch");
  return ObjectiveEvaluator(p_ent, p_sep, q_v, model)(gamma.gamma);
}

GammaMinimum minimize_over_gamma(const JointDistribution& p_ent,
                                 const JointDistribution& p_sep, double q_v,
                                 const LeakageModel& model, double tolerance) {
  if (!(q_v >= 0.0 && q_v <= 1.0))
    throw std::invalid_argument("minimize_over_gamma: q_v must lie in [0,1]");
  const Eigen::Index size = p_ent.size();
  const ObjectiveEvaluator evaluate(p_ent, p_sep, q_v, model);

  GammaMinimum result;
  result.gamma = MixingParameters::constant(size, 0.0);
  result.objective = evaluate(result.gamma.gamma);
  result.converged = true;
  // gamma only enters through q_v * L; when that vanishes there is nothing
  // to optimize.
  if (q_v == 0.0 || q_v * model.leak_probability == 0.0) return result;

  const auto groups = symmetry_groups(p_ent.probabilities, p_sep.probabilities);
  const int group_count = static_cast<int>(groups.size());

  std::vector<RealVector> starts;
  const ClosedFormGamma closed = closed_form_gamma(p_ent, p_sep, q_v, model);
  RealVector closed_start(group_count);
  for (int g = 0; g < group_count; ++g)
    closed_start(g) = std::clamp(closed.gamma(groups[g].front()), 0.0, 1.0);
  starts.push_back(closed_start);
  starts.push_back(RealVector::Zero(group_count));
  starts.push_back(RealVector::Ones(group_count));
  const CounterRng rng(kStartSeed);
  for (int s = 0; s < kRandomStarts; ++s) {
    RealVector r(group_count);
    for (int g = 0; g < group_count; ++g) r(g) = rng.uniform(s, g);
    starts.push_back(r);
  }

  double best_objective = std::numeric_limits<double>::infinity();
  RealVector best_gamma = RealVector::Zero(size);
  bool best_converged = false;

  RealVector full(size);
  for (const RealVector& start : starts) {
    RealVector current = start;
    expand_groups(groups, current, full);
    double objective = evaluate(full);
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      const double before = objective;
      for (int g = 0; g < group_count; ++g) {
        auto coord = [&](double x) {
          for (int a : groups[g]) full(a) = x;
          return evaluate(full);
        };
        const double x_best = golden_section_min(coord, 0.0, 1.0, kCoordinateTol);
        const double f_best = coord(x_best);
        if (f_best < objective) {
          current(g) = x_best;
          objective = f_best;
        }
        for (int a : groups[g]) full(a) = current(g);
      }
      if (before - objective < tolerance) {
        converged = true;
        break;
      }
    }
    if (objective < best_objective) {
      best_objective = objective;
      expand_groups(groups, current, full);
      best_gamma = full;
      best_converged = converged;
    }
    if (best_objective <= 1e-15) break;  // exact flattening found
  }

  result.gamma = MixingParameters(best_gamma);
  result.objective = best_objective;
  result.converged = best_converged;
  return result;
}

SettingsSpace SettingsSpace::computational() {
  SettingsSpace s;
  s.kind = Kind::Computational;
  return s;
}

SettingsSpace SettingsSpace::bloch_grid() {
  SettingsSpace s;
  s.kind = Kind::BlochGrid;
  s.theta_step = std::numbers::pi / 60.0;
  s.phi_step = std::numbers::pi / 30.0;
  return s;
}

SettingsSpace SettingsSpace::fig3_family(std::optional<double> second_theta) {
  SettingsSpace s;
  s.kind = Kind::Fig3Family;
  s.theta_step = std::numbers::pi / 60.0;
  s.second_party_theta = second_theta;
  return s;
}

SettingsSpace SettingsSpace::user_list(
    std::vector<std::vector<ProjectiveMeasurement>> candidates) {
  SettingsSpace s;
  s.kind = Kind::UserList;
  s.candidates = std::move(candidates);
  return s;
}

namespace {

struct CandidateResult {
  double objective = -std::numeric_limits<double>::infinity();
  std::vector<ProjectiveMeasurement> measurements;
  GammaMinimum minimum;
};

CandidateResult evaluate_candidate(
    const QuantumState& ghz, const QuantumState& sep, double q_v,
    const LeakageModel& model,
    std::vector<ProjectiveMeasurement> measurements) {
  CandidateResult r;
  const JointDistribution p_ent = born_distribution(ghz, measurements);
  const JointDistribution p_sep = born_distribution(sep, measurements);
  r.minimum = minimize_over_gamma(p_ent, p_sep, q_v, model);
  r.objective = r.minimum.objective;
  r.measurements = std::move(measurements);
  return r;
}

}  // namespace

KeyRateBound maximize_over_settings(int d, int parties, double visibility,
                                    const LeakageModel& model,
                                    const SettingsSpace& space,
                                    ThresholdConvention convention) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument(
        "maximize_over_settings: visibility must lie in [0,1]");
  if (space.kind == SettingsSpace::Kind::UserList && space.candidates.empty())
    throw std::invalid_argument("maximize_over_settings: empty settings space");
  if ((space.kind == SettingsSpace::Kind::BlochGrid ||
       space.kind == SettingsSpace::Kind::Fig3Family) &&
      d != 2)
    throw std::invalid_argument(
        "maximize_over_settings: angle-family settings need d = 2");

  KeyRateBound bound;
  bound.visibility = visibility;
  bound.local_dim = d;
  bound.parties = parties;
  bound.model = model;
  bound.convention = convention;

  if (visibility <= separability_threshold(d, parties)) {
    bound.settings = "none";
    bound.gamma_star =
        MixingParameters::constant(pow_int(d, parties), 0.0);
    bound.gamma_feasible = true;
    return bound;
  }

  const QuantumState ghz = ghz_projector(d, parties);
  const QuantumState sep = sep_isotropic(d, parties);
  const double q_v = mixing_weight_qv(d, parties, visibility);

  CandidateResult best;
  auto consider = [&](std::vector<ProjectiveMeasurement> measurements) {
    CandidateResult r =
        evaluate_candidate(ghz, sep, q_v, model, std::move(measurements));
    if (r.objective > best.objective) best = std::move(r);
  };

  const double pi = std::numbers::pi;
  switch (space.kind) {
    case SettingsSpace::Kind::Computational: {
      consider(std::vector<ProjectiveMeasurement>(
          parties, computational_basis(d)));
      break;
    }
    case SettingsSpace::Kind::BlochGrid: {
      const int theta_points =
          static_cast<int>(std::lround(pi / space.theta_step));
      const int phi_points =
          static_cast<int>(std::lround(2.0 * pi / space.phi_step));
      double best_theta = 0.0, best_phi = 0.0;
      for (int ti = 0; ti <= theta_points; ++ti)
        for (int pj = 0; pj < phi_points; ++pj) {
          const double theta = ti * space.theta_step;
          const double phi = pj * space.phi_step;
          const double before = best.objective;
          consider(std::vector<ProjectiveMeasurement>(
              parties, qubit_bloch_measurement(theta, phi)));
          if (best.objective > before) {
            best_theta = theta;
            best_phi = phi;
          }
        }
      // Golden-section refinement around the best grid cell, one angle at a
      // time.
      auto at_angles = [&](double theta, double phi) {
        return evaluate_candidate(
            ghz, sep, q_v, model,
            std::vector<ProjectiveMeasurement>(
                parties, qubit_bloch_measurement(theta, phi)));
      };
      const double theta_ref = golden_section_min(
          [&](double theta) { return -at_angles(theta, best_phi).objective; },
          std::max(0.0, best_theta - space.theta_step),
          std::min(pi, best_theta + space.theta_step), 1e-7);
      CandidateResult refined = at_angles(theta_ref, best_phi);
      if (refined.objective > best.objective) {
        best = std::move(refined);
        best_theta = theta_ref;
      }
      const double phi_ref = golden_section_min(
          [&](double phi) { return -at_angles(best_theta, phi).objective; },
          best_phi - space.phi_step, best_phi + space.phi_step, 1e-7);
      refined = at_angles(best_theta, phi_ref);
      if (refined.objective > best.objective) best = std::move(refined);
      break;
    }
    case SettingsSpace::Kind::Fig3Family: {
      std::vector<ProjectiveMeasurement> fixed(
          parties - 1, computational_basis(2));
      if (space.second_party_theta && parties >= 2)
        fixed[parties - 2] = xz_plane_measurement(*space.second_party_theta);
      auto with_last = [&](double theta) {
        std::vector<ProjectiveMeasurement> all = fixed;
        all.push_back(xz_plane_measurement(theta));
        return all;
      };
      const int theta_points =
          static_cast<int>(std::lround(pi / space.theta_step));
      double best_theta = 0.0;
      for (int ti = 0; ti <= theta_points; ++ti) {
        const double theta = ti * space.theta_step;
        const double before = best.objective;
        consider(with_last(theta));
        if (best.objective > before) best_theta = theta;
      }
      const double theta_ref = golden_section_min(
          [&](double theta) {
            return -evaluate_candidate(ghz, sep, q_v, model, with_last(theta))
                        .objective;
          },
          std::max(0.0, best_theta - space.theta_step),
          std::min(pi, best_theta + space.theta_step), 1e-7);
      CandidateResult refined =
          evaluate_candidate(ghz, sep, q_v, model, with_last(theta_ref));
      if (refined.objective > best.objective) best = std::move(refined);
      break;
    }
    case SettingsSpace::Kind::UserList: {
      for (const auto& candidate : space.candidates) {
        if (static_cast<int>(candidate.size()) != parties)
          throw std::invalid_argument(
              "maximize_over_settings: candidate party count mismatch");
        consider(candidate);
      }
      break;
    }
  }

  const JointDistribution p_ent = born_distribution(ghz, best.measurements);
  const JointDistribution p_sep = born_distribution(sep, best.measurements);
  bound.rate = std::max(0.0, best.objective / (parties - 1));
  bound.settings = settings_descriptor(best.measurements);
  bound.gamma_star = best.minimum.gamma;
  bound.objective = best.objective;
  bound.converged = best.minimum.converged;
  bound.p_question = ObjectiveEvaluator(p_ent, p_sep, q_v, model)
                         .question_mass(best.minimum.gamma.gamma);
  bound.gamma_feasible = closed_form_gamma(p_ent, p_sep, q_v, model).feasible;
  return bound;
}

std::vector<KeyRateBound> rate_curve(int d, int parties,
                                     const LeakageModel& model,
                                     const std::vector<double>& v_grid,
                                     const SettingsSpace& space,
                                     ThresholdConvention convention) {
  for (double v : v_grid)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("rate_curve: grid visibility outside [0,1]");
  std::vector<KeyRateBound> out(v_grid.size());
  parallel_for(v_grid.size(), [&](std::size_t i) {
    out[i] =
        maximize_over_settings(d, parties, v_grid[i], model, space, convention);
  });
  return out;
}

}  // namespace qkdbound
