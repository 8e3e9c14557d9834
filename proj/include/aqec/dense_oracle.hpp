#pragma once

#include <complex>
#include <span>
#include <vector>

#include "aqec/ensembles.hpp"
#include "aqec/noise.hpp"

namespace aqec {

// Dense statevector on a handful of qubits; qubit i is bit i of the index.
class DenseState {
 public:
  explicit DenseState(size_t n);

  size_t num_qubits() const { return n_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

  void apply_gate(Gate g, std::span<const size_t> support);
  void apply_gate(Gate g, size_t a) { size_t s[1] = {a}; apply_gate(g, s); }
  void apply_gate(Gate g, size_t a, size_t b) { size_t s[2] = {a, b}; apply_gate(g, s); }
  // Applies a Clifford element through its gate decomposition.
  void apply_clifford(const CliffordElement& c, std::span<const size_t> support);

 private:
  size_t n_;
  std::vector<std::complex<double>> amp_;
};

// Resolves FreshUniform gates from `rng` (same draw order as the tableau
// path) and applies the EPR preparation plus all layers densely over
// k reference + n physical qubits.
DenseState dense_encode_epr(const CircuitSpec& spec, Rng& rng);

struct PatternFidelity {
  double f_opt;        // optimal-recovery channel fidelity F_Choi
  double f_transpose;  // transpose-channel recovery fidelity
};

// Exact fidelity for one erasure pattern (physical indices into [0, n)) of an
// encoded state; recovery optimized over all channels. The two-sided
// transpose-channel bound is asserted as a self-check.
PatternFidelity dense_erasure_pattern_fidelity(const DenseState& encoded, size_t k,
                                               std::span<const size_t> erased);

// Exact Choi error of the resolved circuit under the noise model. Flagged
// erasure averages F_T^2 over patterns; Pauli, damping and ZZ noise go
// through the unflagged channel. Throws when the instance exceeds the cap.
double dense_oracle_choi(const CircuitSpec& spec, const NoiseSpec& noise, Rng& rng,
                         size_t max_n = 5);

}  // namespace aqec
