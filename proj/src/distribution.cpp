#include "qkdbound/distribution.hpp"

#include <cmath>

namespace qkdbound {

namespace {
constexpr double kEntryFloor = -1e-12;
constexpr double kNormTol = 1e-9;
constexpr double kImagTol = 1e-10;
constexpr double kZeroProb = 1e-14;
}  // namespace

JointDistribution::JointDistribution(int d, int n, RealVector p,
                                     std::vector<int> in)
    : local_dim(d), parties(n), probabilities(std::move(p)),
      inputs(std::move(in)) {
  if (d < 2 || n < 2)
    throw std::invalid_argument("JointDistribution: need d >= 2, N >= 2");
  if (probabilities.size() != pow_int(d, n))
    throw std::invalid_argument("JointDistribution: table size must be d^N");
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    if (probabilities(i) < kEntryFloor)
      throw std::invalid_argument("JointDistribution: negative probability");
    if (probabilities(i) < 0.0) probabilities(i) = 0.0;
  }
  if (std::abs(probabilities.sum() - 1.0) > kNormTol)
    throw std::invalid_argument("JointDistribution: probabilities must sum to 1");
}

int JointDistribution::digit(Eigen::Index index, int party) const {
  const std::int64_t stride = pow_int(local_dim, parties - 1 - party);
  return static_cast<int>((index / stride) % local_dim);
}

JointDistribution born_distribution(
    const QuantumState& state,
    const std::vector<ProjectiveMeasurement>& measurements,
    std::vector<int> inputs) {
  const int n = state.parties;
  const int d = state.local_dim;
  if (static_cast<int>(measurements.size()) != n)
    throw std::invalid_argument("born_distribution: one measurement per party");
  for (const auto& m : measurements)
    if (m.local_dim() != d)
      throw std::invalid_argument("born_distribution: local dimension mismatch");

  const std::int64_t size = pow_int(d, n);
  RealVector probs(size);
  for (std::int64_t a = 0; a < size; ++a) {
    ComplexMatrix op = measurements[0].outcomes[(a / pow_int(d, n - 1)) % d];
    for (int party = 1; party < n; ++party) {
      const int outcome =
          static_cast<int>((a / pow_int(d, n - 1 - party)) % d);
      op = tensor_product(op, measurements[party].outcomes[outcome]);
    }
    const Complex value = trace_of_product(op, state.matrix);
    if (std::abs(value.imag()) > kImagTol)
      throw std::runtime_error("born_distribution: non-real probability");
    probs(a) = value.real();
  }
  return JointDistribution(d, n, std::move(probs), std::move(inputs));
}

double shannon_entropy(const RealVector& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > kZeroProb) h -= p(i) * std::log2(p(i));
  return h;
}

RealVector marginal(const JointDistribution& dist, int party) {
  if (party < 0 || party >= dist.parties)
    throw std::invalid_argument("marginal: party out of range");
  RealVector out = RealVector::Zero(dist.local_dim);
  for (Eigen::Index a = 0; a < dist.size(); ++a)
    out(dist.digit(a, party)) += dist.probabilities(a);
  return out;
}

double total_correlation(const JointDistribution& dist) {
  double sum_marginals = 0.0;
  for (int party = 0; party < dist.parties; ++party)
    sum_marginals += shannon_entropy(marginal(dist, party));
  return sum_marginals - shannon_entropy(dist.probabilities);
}

double max_no_signalling_violation(const QuantumState& state,
                                   const MeasurementSet& set) {
  const int n = set.parties();
  const int d = set.local_dim;
  if (state.parties != n || state.local_dim != d)
    throw std::invalid_argument("no_signalling: state/measurement mismatch");

  // All input tuples and their Born distributions.
  std::vector<std::vector<int>> tuples;
  std::vector<JointDistribution> dists;
  std::vector<int> tuple(n, 0);
  for (;;) {
    std::vector<ProjectiveMeasurement> chosen;
    for (int i = 0; i < n; ++i)
      chosen.push_back(set.per_party[i][tuple[i]]);
    tuples.push_back(tuple);
    dists.push_back(born_distribution(state, chosen, tuple));
    int pos = n - 1;
    while (pos >= 0 && ++tuple[pos] == set.inputs(pos)) tuple[pos--] = 0;
    if (pos < 0) break;
  }

  // Marginal of a party subset, as a table over d^|subset|.
  auto subset_marginal = [&](const JointDistribution& dist,
                             const std::vector<int>& parties_in) {
    RealVector out = RealVector::Zero(pow_int(d, parties_in.size()));
    for (Eigen::Index a = 0; a < dist.size(); ++a) {
      std::int64_t key = 0;
      for (int p : parties_in) key = key * d + dist.digit(a, p);
      out(key) += dist.probabilities(a);
    }
    return out;
  };

  double worst = 0.0;
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    std::vector<int> parties_in;
    for (int p = 0; p < n; ++p)
      if (mask & (1 << p)) parties_in.push_back(p);
    // Tuples agreeing on the subset inputs must give the same marginal.
    for (std::size_t i = 0; i < tuples.size(); ++i)
      for (std::size_t j = i + 1; j < tuples.size(); ++j) {
        bool same = true;
        for (int p : parties_in)
          if (tuples[i][p] != tuples[j][p]) same = false;
        if (!same) continue;
        const double dev = (subset_marginal(dists[i], parties_in) -
                            subset_marginal(dists[j], parties_in))
                               .cwiseAbs()
                               .maxCoeff();
        worst = std::max(worst, dev);
      }
  }
  return worst;
}

}  // namespace qkdbound
