#include "aqec/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aqec {

PauliVec::PauliVec(double pi, double px, double py, double pz)
    : p_i(pi), p_x(px), p_y(py), p_z(pz) {
  if (pi < 0 || px < 0 || py < 0 || pz < 0)
    throw std::invalid_argument("PauliVec: negative probability");
  if (std::abs(pi + px + py + pz - 1.0) > 1e-12)
    throw std::invalid_argument("PauliVec: probabilities must sum to 1");
}

NoiseSpec NoiseSpec::pauli_iid(const PauliVec& v) {
  NoiseSpec s;
  s.kind = NoiseKind::PauliIID;
  s.p_i = v.p_i; s.p_x = v.p_x; s.p_y = v.p_y; s.p_z = v.p_z;
  return s;
}

namespace {
void check_unit(double p, const char* what) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument(std::string(what) + ": strength must be in [0,1]");
}
}  // namespace

NoiseSpec NoiseSpec::depolarizing(double p) {
  check_unit(p, "depolarizing");
  NoiseSpec s;
  s.kind = NoiseKind::Depolarizing;
  s.p = p;
  return s;
}

NoiseSpec NoiseSpec::erasure_iid(double p) {
  check_unit(p, "erasure-iid");
  NoiseSpec s;
  s.kind = NoiseKind::ErasureIID;
  s.p = p;
  return s;
}

NoiseSpec NoiseSpec::erasure_fixed_t(size_t t) {
  NoiseSpec s;
  s.kind = NoiseKind::ErasureFixedT;
  s.t = t;
  return s;
}

NoiseSpec NoiseSpec::amplitude_damping(double p) {
  check_unit(p, "amplitude-damping");
  NoiseSpec s;
  s.kind = NoiseKind::AmplitudeDamping;
  s.p = p;
  return s;
}

NoiseSpec NoiseSpec::zz_coupling(double p) {
  check_unit(p, "zz-coupling");
  NoiseSpec s;
  s.kind = NoiseKind::ZZCoupling;
  s.p = p;
  return s;
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("noise: expected '<kind>:<params>'");
  std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  if (kind == "pauli") {
    std::istringstream in(rest);
    double v[4];
    char comma;
    if (!(in >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3]))
      throw std::invalid_argument("noise: pauli expects four probabilities");
    return pauli_iid(PauliVec(v[0], v[1], v[2], v[3]));
  }
  if (kind == "erasure-t") return erasure_fixed_t(std::stoul(rest));
  double p = std::stod(rest);
  if (kind == "depolarizing") return depolarizing(p);
  if (kind == "erasure-iid") return erasure_iid(p);
  if (kind == "amp") return amplitude_damping(p);
  if (kind == "zz") return zz_coupling(p);
  throw std::invalid_argument("noise: unknown kind '" + kind + "'");
}

PauliVec NoiseSpec::pauli_vec() const {
  if (kind == NoiseKind::PauliIID) return PauliVec(p_i, p_x, p_y, p_z);
  if (kind == NoiseKind::Depolarizing) return to_pauli_vec_depolarizing(p);
  throw std::invalid_argument("NoiseSpec::pauli_vec: not a Pauli-type noise");
}

std::string NoiseSpec::describe() const {
  std::ostringstream out;
  switch (kind) {
    case NoiseKind::PauliIID:
      out << "pauli:" << p_i << "," << p_x << "," << p_y << "," << p_z;
      break;
    case NoiseKind::Depolarizing: out << "depolarizing:" << p; break;
    case NoiseKind::ErasureIID: out << "erasure-iid:" << p; break;
    case NoiseKind::ErasureFixedT: out << "erasure-t:" << t; break;
    case NoiseKind::AmplitudeDamping: out << "amp:" << p; break;
    case NoiseKind::ZZCoupling: out << "zz:" << p; break;
  }
  return out.str();
}

PauliVec to_pauli_vec_depolarizing(double p) {
  check_unit(p, "depolarizing");
  return PauliVec(1 - 3 * p / 4, p / 4, p / 4, p / 4);
}

std::vector<size_t> sample_erasure_pattern(const NoiseSpec& noise, size_t n, Rng& rng) {
  std::vector<size_t> pattern;
  if (noise.kind == NoiseKind::ErasureIID) {
    for (size_t i = 0; i < n; ++i)
      if (rng_unit(rng) < noise.p) pattern.push_back(i);
    return pattern;
  }
  if (noise.kind == NoiseKind::ErasureFixedT) {
    if (noise.t > n)
      throw std::invalid_argument("sample_erasure_pattern: t exceeds register size");
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (size_t i = 0; i < noise.t; ++i) {
      size_t j = i + rng_below(rng, n - i);
      std::swap(idx[i], idx[j]);
    }
    pattern.assign(idx.begin(), idx.begin() + noise.t);
    std::sort(pattern.begin(), pattern.end());
    return pattern;
  }
  throw std::invalid_argument("sample_erasure_pattern: unsupported for sampling");
}

}  // namespace aqec
