#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aqec/analytics.hpp"
#include "aqec/ensembles.hpp"
#include "aqec/noise.hpp"
#include "aqec/stabilizer.hpp"

namespace aqec {

// Encoded EPR state: k reference qubits in [0, k) maximally entangled with
// the logical slots, ancillas |0>, all layers applied to the physical half.
struct EncodedState {
  StabilizerState state;
  size_t k = 0;
  size_t n = 0;

  EncodedState() : state(0) {}
  std::vector<size_t> ref_indices() const;
  // I(R:T) in bits for a pattern of physical indices in [0, n); the
  // per-pattern fidelity is F_T = 2^(-I/2).
  size_t pattern_mutual_info(const std::vector<size_t>& pattern) const;
  // g(T) = I(R:T) / 2.
  double pattern_damage(const std::vector<size_t>& pattern) const;
};

EncodedState encode_epr_state(const CircuitSpec& spec, Rng& rng);

struct ChoiEstimate {
  double epsilon_hat = 0;
  double ci_low = 0, ci_high = 0;
  double mean_f2 = 1;        // inner mean of 4^{-g}
  double failure_prob = 0;   // fraction of patterns with g > 0
  size_t n_patterns = 0;
  bool exact_enumeration = false;
};

// Estimates F^2 = E_T[4^{-g(T)}] for one encoded circuit and returns
// epsilon = sqrt(1 - F^2) with a delta-method CI. Fixed-t patterns are
// enumerated exactly when C(n, t) <= 10^4, sampled otherwise.
ChoiEstimate erasure_choi_error(const EncodedState& st, const NoiseSpec& noise,
                                size_t n_patterns, Rng& rng);

struct SimOptions {
  size_t n_circuits = 100;
  size_t n_patterns = 200;
  size_t workers = 1;
  uint64_t seed = 1;
  bool pauli_twirl = false;
};

struct SimReport {
  std::string family;
  size_t n = 0, k = 0;
  double epsilon = 0;
  std::string noise;
  size_t n_circuits = 0, n_patterns_per_circuit = 0;
  uint64_t seed = 0;
  size_t workers = 0;
  double mean_choi_error = 0;
  double ci_low = 0, ci_high = 0;
  double mean_failure_prob = 0;
  double wall_time_s = 0;
  std::vector<double> per_circuit_epsilon;
  std::optional<BoundReport> bound;

  std::string to_json(bool include_per_circuit = false) const;
};

// Outer Monte Carlo over circuit draws (mean of per-circuit epsilon, matching
// the expected Choi error of the ensemble) with a bootstrap CI over circuits.
// Per-circuit RNG streams split deterministically from the seed, so results
// do not depend on the worker count.
SimReport estimate_ensemble_choi(const EnsembleParams& params, const NoiseSpec& noise,
                                 const SimOptions& opts);

// Same estimator driven by an explicit circuit spec.
SimReport estimate_spec_choi(const CircuitSpec& spec, const NoiseSpec& noise,
                             const SimOptions& opts, const std::string& family_label);

}  // namespace aqec
