#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qkdbound/distribution.hpp"

using namespace qkdbound;

namespace {

// Independent entropy implementation (natural log) used to cross-check the
// frozen values.
double entropy_reference(std::initializer_list<double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 1e-14) h -= p * std::log(p);
  return h / std::log(2.0);
}

std::vector<ProjectiveMeasurement> z_pair() {
  return {computational_basis(2), computational_basis(2)};
}

}  // namespace

TEST_CASE("born distribution of the Bell state under Z x Z") {
  JointDistribution p = born_distribution(ghz_projector(2, 2), z_pair());
  CHECK(p.probabilities(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.probabilities(1) == doctest::Approx(0.0));
  CHECK(p.probabilities(2) == doctest::Approx(0.0));
  CHECK(p.probabilities(3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("born distribution of the maximally mixed state is uniform") {
  JointDistribution p = born_distribution(
      isotropic_state(2, 2, 0.0),
      {qubit_bloch_measurement(0.7, 1.3), qubit_bloch_measurement(2.1, 0.4)});
  for (Eigen::Index a = 0; a < 4; ++a)
    CHECK(p.probabilities(a) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("born distribution of the separable isotropic state under Z x Z") {
  JointDistribution p = born_distribution(sep_isotropic(2, 2), z_pair());
  CHECK(p.probabilities(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(p.probabilities(1) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(p.probabilities(2) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(p.probabilities(3) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("born distribution rejects mismatched measurements") {
  CHECK_THROWS_AS(
      born_distribution(ghz_projector(2, 2), {computational_basis(2)}),
      std::invalid_argument);
  CHECK_THROWS_AS(born_distribution(ghz_projector(2, 2),
                                    {computational_basis(3),
                                     computational_basis(3)}),
                  std::invalid_argument);
}

TEST_CASE("shannon entropy anchors") {
  RealVector uniform = RealVector::Constant(4, 0.25);
  CHECK(shannon_entropy(uniform) == doctest::Approx(2.0).epsilon(1e-12));

  RealVector deterministic = RealVector::Zero(4);
  deterministic(2) = 1.0;
  CHECK(shannon_entropy(deterministic) == doctest::Approx(0.0));

  RealVector thirds(4);
  thirds << 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0;
  CHECK(shannon_entropy(thirds) ==
        doctest::Approx(1.9182958340544896).epsilon(1e-12));
  CHECK(shannon_entropy(thirds) ==
        doctest::Approx(
            entropy_reference({1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0}))
            .epsilon(1e-12));
}

TEST_CASE("total correlation anchors") {
  // product distribution
  RealVector prod(4);
  prod << 0.21, 0.09, 0.49, 0.21;  // (0.3, 0.7) x (0.7, 0.3)
  CHECK(std::abs(total_correlation(JointDistribution(2, 2, prod))) < 1e-12);

  JointDistribution bell = born_distribution(ghz_projector(2, 2), z_pair());
  CHECK(total_correlation(bell) == doctest::Approx(1.0).epsilon(1e-12));

  JointDistribution ghz3 = born_distribution(
      ghz_projector(2, 3),
      {computational_basis(2), computational_basis(2), computational_basis(2)});
  CHECK(total_correlation(ghz3) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("total correlation is non-negative for sampled distributions") {
  for (double v : {0.0, 0.3, 0.6, 1.0})
    for (double theta : {0.0, 0.5, 1.1, 2.4}) {
      JointDistribution p = born_distribution(
          isotropic_state(2, 2, v),
          {xz_plane_measurement(theta), qubit_bloch_measurement(1.0, 0.8)});
      CHECK(total_correlation(p) >= -1e-9);
    }
}

TEST_CASE("total correlation grows with visibility under fixed measurements") {
  std::vector<ProjectiveMeasurement> pair{
      xz_plane_measurement(0.3), qubit_bloch_measurement(1.2, 0.5)};
  double previous = -1.0;
  for (int i = 0; i <= 10; ++i) {
    const double v = i / 10.0;
    const double tc =
        total_correlation(born_distribution(isotropic_state(2, 2, v), pair));
    CHECK(tc >= previous - 1e-9);
    previous = tc;
  }
}

TEST_CASE("joint distribution validation") {
  RealVector negative(4);
  negative << 0.6, 0.5, -0.1, 0.0;
  CHECK_THROWS_AS(JointDistribution(2, 2, negative), std::invalid_argument);

  RealVector short_table(3);
  short_table << 0.5, 0.25, 0.25;
  CHECK_THROWS_AS(JointDistribution(2, 2, short_table), std::invalid_argument);

  // entries within the clamp floor are zeroed
  RealVector noisy(4);
  noisy << 0.5, -1e-13, 0.25, 0.25;
  JointDistribution p(2, 2, noisy);
  CHECK(p.probabilities(1) == 0.0);
}

TEST_CASE("born family is no-signalling across inputs") {
  MeasurementSet set(
      2, {{computational_basis(2), xz_plane_measurement(std::numbers::pi / 2)},
          {computational_basis(2), xz_plane_measurement(1.1)}});
  CHECK(max_no_signalling_violation(isotropic_state(2, 2, 0.7), set) < 1e-9);

  MeasurementSet three(
      2, {{computational_basis(2), xz_plane_measurement(0.6)},
          {computational_basis(2)},
          {xz_plane_measurement(2.0), qubit_bloch_measurement(0.9, 2.5)}});
  CHECK(max_no_signalling_violation(isotropic_state(2, 3, 0.5), three) < 1e-9);
}
