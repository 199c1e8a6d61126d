#pragma once

#include <string>
#include <vector>

#include "qkdbound/linalg.hpp"

namespace qkdbound {

inline constexpr double kMeasurementTol = 1e-9;

/// A complete d-outcome rank-1 projective measurement on C^d.
struct ProjectiveMeasurement {
  std::vector<ComplexMatrix> outcomes;
  std::string label;

  ProjectiveMeasurement(std::vector<ComplexMatrix> projectors,
                        std::string descriptor);

  int local_dim() const { return static_cast<int>(outcomes.size()); }
};

/// Projectors onto cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> and its
/// orthogonal complement.
ProjectiveMeasurement qubit_bloch_measurement(double theta, double phi);

/// qubit_bloch_measurement(theta, 0): the X-Z plane family.
ProjectiveMeasurement xz_plane_measurement(double theta);

/// { |i><i| } for i = 0..d-1.
ProjectiveMeasurement computational_basis(int d);

/// Measurement whose outcome states are the columns of a d x d unitary.
ProjectiveMeasurement basis_from_unitary(const ComplexMatrix& unitary);

/// Parses "zbasis", "xz:<theta>", "bloch:<theta>,<phi>" or
/// "unitary:<d*d entries, row-major, re+imj format>"; separators within a
/// descriptor may be ',' or ';'.
ProjectiveMeasurement parse_measurement(const std::string& descriptor, int d);

/// Parses a '|'-separated list of per-party descriptors.
std::vector<ProjectiveMeasurement> parse_party_measurements(
    const std::string& descriptor, int d, int parties);

std::string settings_descriptor(const std::vector<ProjectiveMeasurement>& ms);

Complex parse_complex(const std::string& text);

/// Per-party measurement choices: per_party[i][x] is the measurement party i
/// performs on input x.
struct MeasurementSet {
  int local_dim = 0;
  std::vector<std::vector<ProjectiveMeasurement>> per_party;

  MeasurementSet(int d, std::vector<std::vector<ProjectiveMeasurement>> m);

  int parties() const { return static_cast<int>(per_party.size()); }
  int inputs(int party) const {
    return static_cast<int>(per_party.at(party).size());
  }
};

}  // namespace qkdbound
