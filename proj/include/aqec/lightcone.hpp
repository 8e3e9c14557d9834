#pragma once

#include <vector>

#include "aqec/ensembles.hpp"
#include "aqec/gf2.hpp"

namespace aqec {

// Layered circuit layout: per layer, a set of pairwise disjoint gate supports.
struct LayoutGraph {
  size_t n = 0;
  std::vector<std::vector<std::vector<size_t>>> layers;
  std::vector<size_t> logical;

  static LayoutGraph from_spec(const CircuitSpec& spec);
  void validate() const;
};

struct LightCones {
  std::vector<BitVec> forward;   // per logical qubit, cones after all layers
  std::vector<BitVec> backward;  // per physical qubit, cones back to layer 0
  size_t m_bound = 0;            // max size over both families
};

// Forward cones of the logical qubits and backward cones of every qubit,
// grown layer by layer; untouched qubits stay inside their cone so the
// forward/backward duality holds exactly.
LightCones light_cones(const LayoutGraph& layout);

// Greedy subset of logical qubits with pairwise disjoint forward cones,
// lowest-index first; at least ceil(k / M^2) members.
std::vector<size_t> disjoint_logical_set(const LayoutGraph& layout,
                                         const LightCones& cones);

// Smallest depth d satisfying
//   (2d)^D log2(1/p) + 2D log2(2d) >= log2(3 / (8 eps^2)) + log2 k.
// Requires eps < 0.1 and p in (0,1).
size_t depth_lower_bound_ddim(size_t dims, double p, double eps, size_t k);
// All-to-all variant: 2^d log2(1/p) + 2d >= same right-hand side.
size_t depth_lower_bound_all_to_all(double p, double eps, size_t k);

// sqrt(3 |J| / 8 * p^M) clipped to [0, 1].
double choi_floor(const LayoutGraph& layout, double p);

}  // namespace aqec
