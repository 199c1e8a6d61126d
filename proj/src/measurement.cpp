#include "qkdbound/measurement.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qkdbound {

namespace {

void validate_projectors(const std::vector<ComplexMatrix>& outcomes) {
  if (outcomes.empty())
    throw std::invalid_argument("measurement: no outcomes");
  const Eigen::Index d = outcomes.front().rows();
  if (static_cast<Eigen::Index>(outcomes.size()) != d)
    throw std::invalid_argument(
        "measurement: need exactly d outcomes on local dimension d");
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const ComplexMatrix& p = outcomes[i];
    if (p.rows() != d || p.cols() != d)
      throw std::invalid_argument("measurement: projector dimension mismatch");
    if (!is_hermitian(p, kMeasurementTol))
      throw std::invalid_argument("measurement: projector not Hermitian");
    if ((p * p - p).cwiseAbs().maxCoeff() > kMeasurementTol)
      throw std::invalid_argument("measurement: projector not idempotent");
    for (std::size_t j = 0; j < i; ++j)
      if ((p * outcomes[j]).cwiseAbs().maxCoeff() > kMeasurementTol)
        throw std::invalid_argument("measurement: projectors not orthogonal");
    sum += p;
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() >
      kMeasurementTol)
    throw std::invalid_argument("measurement: projectors do not sum to I");
}

std::string format_angle(double x) {
  std::ostringstream os;
  os.precision(9);
  os << x;
  return os.str();
}

std::vector<std::string> split(const std::string& text, char a, char b) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == a || c == b) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

}  // namespace

ProjectiveMeasurement::ProjectiveMeasurement(
    std::vector<ComplexMatrix> projectors, std::string descriptor)
    : outcomes(std::move(projectors)), label(std::move(descriptor)) {
  validate_projectors(outcomes);
}

ProjectiveMeasurement qubit_bloch_measurement(double theta, double phi) {
  ComplexVector up(2), down(2);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const Complex phase = std::polar(1.0, phi);
  up << c, phase * s;
  down << s, -phase * c;
  return ProjectiveMeasurement(
      {up * up.adjoint(), down * down.adjoint()},
      "bloch:" + format_angle(theta) + ";" + format_angle(phi));
}

ProjectiveMeasurement xz_plane_measurement(double theta) {
  ProjectiveMeasurement m = qubit_bloch_measurement(theta, 0.0);
  m.label = "xz:" + format_angle(theta);
  return m;
}

ProjectiveMeasurement computational_basis(int d) {
  if (d < 2) throw std::invalid_argument("computational_basis: d must be >= 2");
  std::vector<ComplexMatrix> outcomes;
  outcomes.reserve(d);
  for (int i = 0; i < d; ++i) {
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    p(i, i) = 1.0;
    outcomes.push_back(std::move(p));
  }
  return ProjectiveMeasurement(std::move(outcomes), "zbasis");
}

ProjectiveMeasurement basis_from_unitary(const ComplexMatrix& unitary) {
  const Eigen::Index d = unitary.rows();
  if (d < 2 || unitary.cols() != d)
    throw std::invalid_argument("basis_from_unitary: need a square d>=2 matrix");
  if ((unitary.adjoint() * unitary - ComplexMatrix::Identity(d, d))
          .cwiseAbs()
          .maxCoeff() > kMeasurementTol)
    throw std::invalid_argument("basis_from_unitary: matrix is not unitary");
  std::vector<ComplexMatrix> outcomes;
  outcomes.reserve(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    ComplexVector col = unitary.col(i);
    outcomes.push_back(col * col.adjoint());
  }
  return ProjectiveMeasurement(std::move(outcomes), "unitary");
}

Complex parse_complex(const std::string& text) {
  // Accepts "a+bj", "a-bj", "a", "bj" with optional signs.
  if (text.empty()) throw std::invalid_argument("parse_complex: empty entry");
  const char* s = text.c_str();
  char* end = nullptr;
  double first = std::strtod(s, &end);
  if (end == s) {
    // Allow a bare "j" / "+j" / "-j".
    if (text == "j" || text == "+j") return Complex(0.0, 1.0);
    if (text == "-j") return Complex(0.0, -1.0);
    throw std::invalid_argument("parse_complex: bad entry '" + text + "'");
  }
  if (*end == '\0') return Complex(first, 0.0);
  if (*end == 'j' && *(end + 1) == '\0') return Complex(0.0, first);
  const char* rest = end;
  char* end2 = nullptr;
  double second = std::strtod(rest, &end2);
  if (end2 == rest || *end2 != 'j' || *(end2 + 1) != '\0')
    throw std::invalid_argument("parse_complex: bad entry '" + text + "'");
  return Complex(first, second);
}

ProjectiveMeasurement parse_measurement(const std::string& descriptor, int d) {
  if (descriptor == "zbasis") return computational_basis(d);
  const auto colon = descriptor.find(':');
  const std::string kind = descriptor.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  if (kind == "xz") {
    if (d != 2)
      throw std::invalid_argument("settings: xz measurements need d = 2");
    return xz_plane_measurement(std::stod(args));
  }
  if (kind == "bloch") {
    if (d != 2)
      throw std::invalid_argument("settings: bloch measurements need d = 2");
    auto parts = split(args, ',', ';');
    if (parts.size() != 2)
      throw std::invalid_argument("settings: bloch needs theta and phi");
    return qubit_bloch_measurement(std::stod(parts[0]), std::stod(parts[1]));
  }
  if (kind == "unitary") {
    auto parts = split(args, ',', ';');
    if (static_cast<int>(parts.size()) != d * d)
      throw std::invalid_argument("settings: unitary needs d*d entries");
    ComplexMatrix u(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) u(r, c) = parse_complex(parts[r * d + c]);
    return basis_from_unitary(u);
  }
  throw std::invalid_argument("settings: unknown descriptor '" + descriptor +
                              "'");
}

std::vector<ProjectiveMeasurement> parse_party_measurements(
    const std::string& descriptor, int d, int parties) {
  auto parts = split(descriptor, '|', '|');
  if (static_cast<int>(parts.size()) != parties)
    throw std::invalid_argument(
        "settings: expected one '|'-separated descriptor per party");
  std::vector<ProjectiveMeasurement> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(parse_measurement(p, d));
  return out;
}

std::string settings_descriptor(const std::vector<ProjectiveMeasurement>& ms) {
  std::string out;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) out += "|";
    out += ms[i].label;
  }
  return out;
}

MeasurementSet::MeasurementSet(
    int d, std::vector<std::vector<ProjectiveMeasurement>> m)
    : local_dim(d), per_party(std::move(m)) {
  if (d < 2) throw std::invalid_argument("MeasurementSet: d must be >= 2");
  if (per_party.size() < 2)
    throw std::invalid_argument("MeasurementSet: need at least 2 parties");
  for (const auto& inputs : per_party) {
    if (inputs.empty())
      throw std::invalid_argument("MeasurementSet: party without inputs");
    for (const auto& meas : inputs)
      if (meas.local_dim() != d)
        throw std::invalid_argument("MeasurementSet: local dimension mismatch");
  }
}

}  // namespace qkdbound
