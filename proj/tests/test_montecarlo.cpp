#include <doctest.h>

#include <cmath>

#include "qkdbound/montecarlo.hpp"
#include "qkdbound/optimize.hpp"
#include "qkdbound/quantum.hpp"

using namespace qkdbound;

namespace {

constexpr std::uint64_t kRounds = 1000000;

std::vector<ProjectiveMeasurement> z_pair() {
  return {computational_basis(2), computational_basis(2)};
}

// Upper critical value of chi-squared via the Wilson-Hilferty cube
// approximation; z = 3.0902323 is the 0.999 normal quantile.
double chi2_critical(int df, double z = 3.090232306167813) {
  const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

double chi2_statistic(const SimulationReport& report, int& df) {
  const double n = static_cast<double>(report.rounds);
  double stat = 0.0;
  int cells = 0;
  auto add = [&](double observed, double expected) {
    if (expected * n < 1e-9) {
      CHECK(observed == 0.0);  // zero-probability cells stay empty
      return;
    }
    const double diff = n * (observed - expected);
    stat += diff * diff / (n * expected);
    ++cells;
  };
  for (Eigen::Index a = 0; a < report.joint_sep_flag.size(); ++a) {
    add(report.joint_sep_flag(a), report.analytic.sep_flag(a));
    add(report.joint_leaked(a), report.analytic.leaked(a));
    add(report.joint_question(a), report.analytic.question(a));
  }
  df = cells - 1;
  return stat;
}

}  // namespace

TEST_CASE("simulation is deterministic under a fixed seed") {
  MixingParameters gamma = MixingParameters::constant(4, 0.3);
  SimulationReport a = simulate_rounds(2, 2, 0.6, LeakageModel::uniform(0.1),
                                       gamma, z_pair(), 200000, 42);
  SimulationReport b = simulate_rounds(2, 2, 0.6, LeakageModel::uniform(0.1),
                                       gamma, z_pair(), 200000, 42);
  CHECK(a.joint_sep_flag == b.joint_sep_flag);
  CHECK(a.joint_leaked == b.joint_leaked);
  CHECK(a.joint_question == b.joint_question);
  CHECK(a.leaked_fraction == b.leaked_fraction);
  SimulationReport c = simulate_rounds(2, 2, 0.6, LeakageModel::uniform(0.1),
                                       gamma, z_pair(), 200000, 43);
  CHECK(a.joint_sep_flag != c.joint_sep_flag);
}

TEST_CASE("class masses are normalized counts") {
  SimulationReport report = simulate_rounds(
      2, 2, 0.5, LeakageModel::junk_only(0.2),
      MixingParameters::constant(4, 0.5), z_pair(), 100000, 7);
  CHECK(report.mass_sep_flag + report.mass_leaked + report.mass_question ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("uniform leakage leaks the stated fraction") {
  const double leak = 0.1;
  for (double v : {0.5, 0.9}) {
    SimulationReport report = simulate_rounds(
        2, 2, v, LeakageModel::uniform(leak),
        MixingParameters::constant(4, 0.0), z_pair(), kRounds, 11);
    const double sigma = std::sqrt(leak * (1.0 - leak) / kRounds);
    CHECK(std::abs(report.leaked_fraction - leak) < 3.0 * sigma);
  }
}

TEST_CASE("junk-only leakage leaks 3L(1-v)/2") {
  const double leak = 0.2, v = 0.6;
  SimulationReport report = simulate_rounds(
      2, 2, v, LeakageModel::junk_only(leak),
      MixingParameters::constant(4, 0.0), z_pair(), kRounds, 12);
  const double expected = 3.0 * leak * (1.0 - v) / 2.0;
  const double sigma = std::sqrt(expected * (1.0 - expected) / kRounds);
  CHECK(std::abs(report.leaked_fraction - expected) < 3.0 * sigma);
  // with gamma = 0 the leaked-class mass equals the leak fraction
  CHECK(report.mass_leaked == doctest::Approx(report.leaked_fraction));
}

TEST_CASE("empirical tables track the analytic construction") {
  const double v = 0.55, leak = 0.15;
  const double q = mixing_weight_qv(2, 2, v);
  const JointDistribution p_ent =
      born_distribution(ghz_projector(2, 2), z_pair());
  const JointDistribution p_sep =
      born_distribution(sep_isotropic(2, 2), z_pair());
  ClosedFormGamma closed =
      closed_form_gamma(p_ent, p_sep, q, LeakageModel::uniform(leak));
  MixingParameters gamma(closed.gamma.cwiseMin(1.0).cwiseMax(0.0));
  SimulationReport report = simulate_rounds(
      2, 2, v, LeakageModel::uniform(leak), gamma, z_pair(), kRounds, 99);
  CHECK(report.max_joint_deviation < 5e-3);
}

TEST_CASE("chi-squared goodness of fit across seeds") {
  MixingParameters gamma = MixingParameters::constant(4, 0.25);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimulationReport report = simulate_rounds(
        2, 2, 0.5, LeakageModel::uniform(0.1), gamma, z_pair(), kRounds, seed);
    int df = 0;
    const double stat = chi2_statistic(report, df);
    CHECK(stat < chi2_critical(df));
  }
}

TEST_CASE("empirical objective anchors") {
  SUBCASE("ideal state, no leakage") {
    SimulationReport report = simulate_rounds(
        2, 2, 1.0, LeakageModel::uniform(0.0),
        MixingParameters::constant(4, 0.0), z_pair(), kRounds, 5);
    CHECK(std::abs(empirical_objective(report) - 1.0) < 0.01);
  }

  SUBCASE("feasible equalizing gamma") {
    const double v = 0.34, leak = 0.1;
    const JointDistribution p_ent =
        born_distribution(ghz_projector(2, 2), z_pair());
    const JointDistribution p_sep =
        born_distribution(sep_isotropic(2, 2), z_pair());
    ClosedFormGamma closed = closed_form_gamma(
        p_ent, p_sep, mixing_weight_qv(2, 2, v), LeakageModel::uniform(leak));
    REQUIRE(closed.feasible);
    SimulationReport report = simulate_rounds(
        2, 2, v, LeakageModel::uniform(leak), MixingParameters(closed.gamma),
        z_pair(), kRounds, 6);
    CHECK(empirical_objective(report) <= 0.01);
  }

  SUBCASE("random parameter sets agree with the analytic objective") {
    const CounterRng rng(4242);
    const JointDistribution p_ent =
        born_distribution(ghz_projector(2, 2), z_pair());
    const JointDistribution p_sep =
        born_distribution(sep_isotropic(2, 2), z_pair());
    for (int trial = 0; trial < 10; ++trial) {
      const double v = 0.35 + 0.65 * rng.uniform(trial, 0);
      const double leak = 0.05 + 0.25 * rng.uniform(trial, 1);
      const LeakageModel model = trial % 2 == 0
                                     ? LeakageModel::uniform(leak)
                                     : LeakageModel::junk_only(leak);
      RealVector g(4);
      for (int a = 0; a < 4; ++a) g(a) = rng.uniform(trial, 2 + a);
      MixingParameters gamma(g);
      const double analytic = weighted_objective(
          gamma, p_ent, p_sep, mixing_weight_qv(2, 2, v), model);
      SimulationReport report =
          simulate_rounds(2, 2, v, model, gamma, z_pair(), kRounds,
                          1000 + static_cast<std::uint64_t>(trial));
      CHECK(std::abs(empirical_objective(report) - analytic) <= 0.01);
    }
  }
}

TEST_CASE("simulation input validation") {
  MixingParameters gamma = MixingParameters::constant(4, 0.0);
  CHECK_THROWS_AS(simulate_rounds(2, 2, 0.5, LeakageModel::uniform(0.1), gamma,
                                  z_pair(), 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_rounds(2, 2, 0.1, LeakageModel::uniform(0.1), gamma,
                                  z_pair(), 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      simulate_rounds(2, 2, 0.5, LeakageModel::uniform(0.1),
                      MixingParameters::constant(3, 0.0), z_pair(), 100, 1),
      std::invalid_argument);
}
