#pragma once

#include <span>
#include <utility>
#include <vector>

#include "aqec/pauli.hpp"
#include "aqec/rng.hpp"

namespace aqec {

enum class Gate { H, S, Sdg, X, Y, Z, CNOT, CZ, SWAP };

const char* gate_name(Gate g);
Gate gate_from_name(std::string_view name);
size_t gate_arity(Gate g);

// m-qubit Clifford element, stored by the images of X_j and Z_j under
// conjugation. Phases are tracked exactly, global phase dropped.
struct CliffordElement {
  size_t m = 0;
  std::vector<PauliString> x_images;
  std::vector<PauliString> z_images;

  static CliffordElement identity(size_t m);
  static const CliffordElement& for_gate(Gate g);
  // Single-qubit Pauli as an element (conjugation flips signs only).
  static CliffordElement single_pauli(char p);

  // Symplectic + Hermiticity validation of the image set.
  bool is_valid() const;

  // this := g applied after this (images conjugated by g at `support`,
  // indices into [0, m)).
  void then_gate(Gate g, std::span<const size_t> support);

  bool operator==(const CliffordElement& o) const {
    return m == o.m && x_images == o.x_images && z_images == o.z_images;
  }
};

// Conjugates the support-restricted part of `p` through element `c` placed at
// `support` (distinct qubit indices into p's register).
void conjugate_through(PauliString& p, const CliffordElement& c,
                       std::span<const size_t> support);

// Draws uniformly from the m-qubit Clifford group modulo global phase:
// a uniformly random symplectic basis built pair by pair, plus uniform signs.
CliffordElement sample_uniform_clifford(size_t m, Rng& rng);

// Gate decomposition over {H, S, Sdg, X, Z, CNOT, CZ, SWAP}; applying the
// returned sequence to the identity element reproduces `c` exactly.
std::vector<std::pair<Gate, std::vector<size_t>>> clifford_to_gates(const CliffordElement& c);

// Pure stabilizer state on n qubits as a destabilizer/stabilizer tableau.
class StabilizerState {
 public:
  explicit StabilizerState(size_t n);  // |0...0>

  size_t num_qubits() const { return n_; }

  void apply_gate(Gate g, std::span<const size_t> support);
  void apply_gate(Gate g, size_t a) { size_t s[1] = {a}; apply_gate(g, s); }
  void apply_gate(Gate g, size_t a, size_t b) { size_t s[2] = {a, b}; apply_gate(g, s); }
  void apply_clifford(const CliffordElement& c, std::span<const size_t> support);

  const PauliString& stabilizer(size_t i) const { return stab_[i]; }
  const PauliString& destabilizer(size_t i) const { return destab_[i]; }

  // Von Neumann entropy of the reduced state on A, in bits:
  // rank_GF2 of the stabilizer generators restricted to A, minus |A|.
  size_t subsystem_entropy(std::span<const size_t> a) const;

  // One generator per line, stabilizers then destabilizers on request.
  std::string dump(bool include_destabilizers = false) const;

  // Commutation/anticommutation/rank invariants of the tableau.
  bool check_invariants() const;

 private:
  void check_support(std::span<const size_t> support, size_t arity) const;

  size_t n_;
  std::vector<PauliString> destab_, stab_;
};

// Mutual information I(R:T) = S(R) + S(T) - S(R u T) in bits for a pure
// state over the union of `ref` and the rest; a non-negative integer for
// every stabilizer state (violations signal tableau corruption).
size_t ref_env_mutual_info(const StabilizerState& st, std::span<const size_t> ref,
                           std::span<const size_t> erased);

// Damage count g = I(R:T) / 2. Half-integer values are legitimate (one
// classically correlated bit, e.g. a repetition-encoded pair with one leg
// erased); zero iff erasing T is perfectly correctable.
double damage_count(const StabilizerState& st, std::span<const size_t> ref,
                    std::span<const size_t> erased);

}  // namespace aqec
