#include "aqec/lightcone.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace aqec {

LayoutGraph LayoutGraph::from_spec(const CircuitSpec& spec) {
  LayoutGraph g;
  g.n = spec.n_qubits;
  g.logical = spec.logical_slots;
  for (const auto& layer : spec.layers) {
    std::vector<std::vector<size_t>> supports;
    for (const auto& gate : layer) supports.push_back(gate.support);
    g.layers.push_back(std::move(supports));
  }
  g.validate();
  return g;
}

void LayoutGraph::validate() const {
  for (const auto& layer : layers) {
    std::set<size_t> seen;
    for (const auto& support : layer)
      for (size_t q : support) {
        if (q >= n) throw std::invalid_argument("LayoutGraph: index out of range");
        if (!seen.insert(q).second)
          throw std::invalid_argument("LayoutGraph: overlapping supports");
      }
  }
  for (size_t q : logical)
    if (q >= n) throw std::invalid_argument("LayoutGraph: logical index out of range");
}

namespace {

void grow(std::vector<BitVec>& cones, const std::vector<std::vector<size_t>>& layer) {
  for (auto& cone : cones) {
    BitVec next = cone;
    for (const auto& support : layer) {
      bool touches = false;
      for (size_t q : support)
        if (cone.get(q)) { touches = true; break; }
      if (touches)
        for (size_t q : support) next.set(q, true);
    }
    cone = std::move(next);
  }
}

}  // namespace

LightCones light_cones(const LayoutGraph& layout) {
  layout.validate();
  LightCones out;
  out.forward.reserve(layout.logical.size());
  for (size_t q : layout.logical) {
    BitVec cone(layout.n);
    cone.set(q, true);
    out.forward.push_back(std::move(cone));
  }
  for (const auto& layer : layout.layers) grow(out.forward, layer);

  out.backward.reserve(layout.n);
  for (size_t q = 0; q < layout.n; ++q) {
    BitVec cone(layout.n);
    cone.set(q, true);
    out.backward.push_back(std::move(cone));
  }
  for (auto it = layout.layers.rbegin(); it != layout.layers.rend(); ++it)
    grow(out.backward, *it);

  out.m_bound = 1;
  for (const auto& cone : out.forward) out.m_bound = std::max(out.m_bound, cone.popcount());
  for (const auto& cone : out.backward) out.m_bound = std::max(out.m_bound, cone.popcount());
  return out;
}

std::vector<size_t> disjoint_logical_set(const LayoutGraph& layout,
                                         const LightCones& cones) {
  std::vector<size_t> chosen;
  BitVec used(layout.n);
  for (size_t i = 0; i < layout.logical.size(); ++i) {
    BitVec overlap = cones.forward[i];
    overlap.and_with(used);
    if (overlap.any()) continue;
    chosen.push_back(layout.logical[i]);
    used.xor_with(cones.forward[i]);
  }
  size_t k = layout.logical.size();
  size_t m = cones.m_bound;
  size_t floor_size = k == 0 ? 0 : (k + m * m - 1) / (m * m);
  if (chosen.size() < floor_size)
    throw internal_error("disjoint_logical_set: lemma bound violated");
  return chosen;
}

namespace {

size_t solve_min_depth(double rhs, double log2_inv_p, bool all_to_all, size_t dims) {
  auto lhs = [&](size_t d) {
    double dd = double(d);
    if (all_to_all) return std::exp2(dd) * log2_inv_p + 2.0 * dd;
    return std::pow(2.0 * dd, double(dims)) * log2_inv_p +
           2.0 * double(dims) * std::log2(2.0 * dd);
  };
  size_t hi = 1;
  while (lhs(hi) < rhs) {
    hi *= 2;
    if (hi > (size_t(1) << 40))
      throw std::invalid_argument("depth_lower_bound: inequality unsatisfiable");
  }
  size_t lo = 1;
  while (lo < hi) {
    size_t mid = lo + (hi - lo) / 2;
    if (lhs(mid) >= rhs) hi = mid; else lo = mid + 1;
  }
  return lo;
}

double bound_rhs(double p, double eps, size_t k) {
  if (!(eps > 0) || eps >= 0.1)
    throw std::invalid_argument("depth_lower_bound: requires Choi error below 0.1");
  if (!(p > 0) || p >= 1)
    throw std::invalid_argument("depth_lower_bound: p must lie in (0,1)");
  if (k == 0) throw std::invalid_argument("depth_lower_bound: k must be positive");
  return std::log2(3.0 / (8.0 * eps * eps)) + std::log2(double(k));
}

}  // namespace

size_t depth_lower_bound_ddim(size_t dims, double p, double eps, size_t k) {
  if (dims == 0) throw std::invalid_argument("depth_lower_bound: dims must be positive");
  return solve_min_depth(bound_rhs(p, eps, k), std::log2(1.0 / p), false, dims);
}

size_t depth_lower_bound_all_to_all(double p, double eps, size_t k) {
  return solve_min_depth(bound_rhs(p, eps, k), std::log2(1.0 / p), true, 0);
}

double choi_floor(const LayoutGraph& layout, double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("choi_floor: p must lie in [0,1]");
  if (p == 0) return 0.0;
  LightCones cones = light_cones(layout);
  auto j = disjoint_logical_set(layout, cones);
  if (j.empty()) return 0.0;
  double log2_val = 0.5 * (std::log2(3.0 * double(j.size()) / 8.0) +
                           double(cones.m_bound) * std::log2(p));
  return std::min(1.0, std::exp2(log2_val));
}

}  // namespace aqec
