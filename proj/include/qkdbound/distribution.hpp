#pragma once

#include <vector>

#include "qkdbound/measurement.hpp"
#include "qkdbound/quantum.hpp"

namespace qkdbound {

/// Joint outcome distribution over d^N outcome tuples for one fixed input
/// tuple, indexed by the composite index a1*d^(N-1) + a2*d^(N-2) + ... + aN.
struct JointDistribution {
  int local_dim = 0;
  int parties = 0;
  RealVector probabilities;
  std::vector<int> inputs;  // metadata: which input tuple, may be empty

  JointDistribution(int d, int n, RealVector p, std::vector<int> in = {});

  Eigen::Index size() const { return probabilities.size(); }

  /// Outcome of `party` (0-based) encoded in a composite index.
  int digit(Eigen::Index index, int party) const;
};

/// p(a1..aN) = Tr((P_{a1} x ... x P_{aN}) rho) for one measurement per party.
JointDistribution born_distribution(
    const QuantumState& state,
    const std::vector<ProjectiveMeasurement>& measurements,
    std::vector<int> inputs = {});

/// -sum p log2 p, with entries below 1e-14 treated as exactly zero.
double shannon_entropy(const RealVector& p);

RealVector marginal(const JointDistribution& dist, int party);

/// sum_i H(A_i) - H(A_1..A_N); equals the mutual information for N = 2.
double total_correlation(const JointDistribution& dist);

/// Largest deviation between subset marginals computed under different inputs
/// of the complementary parties, over all Born distributions of the set.
double max_no_signalling_violation(const QuantumState& state,
                                   const MeasurementSet& set);

}  // namespace qkdbound
