#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aqec/stabilizer.hpp"

namespace aqec {

enum class Boundary { Periodic, Open };
enum class Family { Brickwork, DoubleLayer, BlockEncoding, FullClifford };

const char* family_name(Family f);
Family family_from_name(std::string_view name);

// One gate slot: either a marker to sample a fresh uniform Clifford per run,
// or a fixed element.
struct GateSlot {
  std::vector<size_t> support;
  bool fresh = true;
  CliffordElement fixed;
};

using Layer = std::vector<GateSlot>;

struct CircuitSpec {
  size_t n_qubits = 0;
  Boundary boundary = Boundary::Open;
  std::vector<Layer> layers;
  std::vector<size_t> logical_slots;
  uint64_t seed = 0;

  size_t k() const { return logical_slots.size(); }
  size_t depth() const { return layers.size(); }
  // Throws std::invalid_argument when layer supports overlap or indices are bad.
  void validate() const;

  std::string to_json() const;
  static CircuitSpec from_json(const std::string& text);
};

struct EnsembleParams {
  size_t n = 0;
  size_t k = 0;
  double epsilon = 1.0;
  Family family = Family::DoubleLayer;
  size_t xi_override = 0;  // 0: derive xi from epsilon
};

// xi = ceil(log2(n / epsilon)), at least 1.
size_t double_layer_xi(size_t n, double epsilon);

// d = ceil(log2(n/eps) + log2(n)/log2(1/2eta) + log2(e-1)/log2(1/2eta) + 1)
// with eta = q/(q^2+1), q = 2^(n/k).
size_t brickwork_depth(size_t n, size_t k, double epsilon);

// Region partition used by the double-layer builder: an even number of
// regions of size xi, with the final region absorbing any remainder.
std::vector<std::pair<size_t, size_t>> double_layer_regions(size_t n, size_t xi);

// k slots spread as evenly as possible over `bins` buckets (cumulative
// rounding, so counts differ by at most one).
std::vector<size_t> spread_counts(size_t k, size_t bins);

CircuitSpec build_brickwork(const EnsembleParams& params, Rng& rng);
CircuitSpec build_double_layer(const EnsembleParams& params, Rng& rng);
CircuitSpec build_block_encoding(const EnsembleParams& params, size_t block_regions = 4);
CircuitSpec build_full_clifford(const EnsembleParams& params);
CircuitSpec build_ensemble(const EnsembleParams& params, Rng& rng);

// Prepends one layer of uniformly random fixed Pauli gates on the logical
// slots (identity included), sampled now from `rng`.
CircuitSpec pauli_twirl_wrap(const CircuitSpec& spec, Rng& rng);

}  // namespace aqec
