#pragma once

#include <string>
#include <vector>

#include "aqec/rng.hpp"

namespace aqec {

// Probabilities of a single-qubit Pauli channel; normalized at construction.
struct PauliVec {
  double p_i, p_x, p_y, p_z;

  PauliVec(double pi, double px, double py, double pz);
};

enum class NoiseKind { PauliIID, Depolarizing, ErasureIID, ErasureFixedT, AmplitudeDamping, ZZCoupling };

struct NoiseSpec {
  NoiseKind kind;
  double p = 0.0;               // strength for everything but PauliIID/fixed-t
  size_t t = 0;                 // ErasureFixedT only
  double p_i = 1, p_x = 0, p_y = 0, p_z = 0;  // PauliIID only

  static NoiseSpec pauli_iid(const PauliVec& v);
  static NoiseSpec depolarizing(double p);
  static NoiseSpec erasure_iid(double p);
  static NoiseSpec erasure_fixed_t(size_t t);
  static NoiseSpec amplitude_damping(double p);
  static NoiseSpec zz_coupling(double p);

  // "erasure-iid:0.1", "depolarizing:0.2", "pauli:a,b,c,d", "erasure-t:12",
  // "amp:0.1", "zz:0.25"
  static NoiseSpec parse(const std::string& text);

  PauliVec pauli_vec() const;   // PauliIID or Depolarizing only
  bool is_erasure() const {
    return kind == NoiseKind::ErasureIID || kind == NoiseKind::ErasureFixedT;
  }
  std::string describe() const;
};

PauliVec to_pauli_vec_depolarizing(double p);

// Erasure pattern over [0, n). ErasureIID includes each index independently
// with probability p; ErasureFixedT draws a uniform t-subset via partial
// Fisher-Yates. Other noise kinds have no sampler.
std::vector<size_t> sample_erasure_pattern(const NoiseSpec& noise, size_t n, Rng& rng);

}  // namespace aqec
