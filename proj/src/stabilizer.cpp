#include "aqec/stabilizer.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace aqec {

const char* gate_name(Gate g) {
  switch (g) {
    case Gate::H: return "H";
    case Gate::S: return "S";
    case Gate::Sdg: return "SDG";
    case Gate::X: return "X";
    case Gate::Y: return "Y";
    case Gate::Z: return "Z";
    case Gate::CNOT: return "CNOT";
    case Gate::CZ: return "CZ";
    case Gate::SWAP: return "SWAP";
  }
  throw std::invalid_argument("gate_name: unknown gate");
}

Gate gate_from_name(std::string_view name) {
  if (name == "H") return Gate::H;
  if (name == "S") return Gate::S;
  if (name == "SDG") return Gate::Sdg;
  if (name == "X") return Gate::X;
  if (name == "Y") return Gate::Y;
  if (name == "Z") return Gate::Z;
  if (name == "CNOT") return Gate::CNOT;
  if (name == "CZ") return Gate::CZ;
  if (name == "SWAP") return Gate::SWAP;
  throw std::invalid_argument("gate_from_name: unknown gate");
}

size_t gate_arity(Gate g) {
  switch (g) {
    case Gate::CNOT: case Gate::CZ: case Gate::SWAP: return 2;
    default: return 1;
  }
}

CliffordElement CliffordElement::identity(size_t m) {
  CliffordElement c;
  c.m = m;
  c.x_images.reserve(m);
  c.z_images.reserve(m);
  for (size_t j = 0; j < m; ++j) {
    PauliString x(m), z(m);
    x.set_x(j, true);
    z.set_z(j, true);
    c.x_images.push_back(std::move(x));
    c.z_images.push_back(std::move(z));
  }
  return c;
}

namespace {

CliffordElement make_element(size_t m, std::initializer_list<const char*> x_imgs,
                             std::initializer_list<const char*> z_imgs) {
  CliffordElement c;
  c.m = m;
  for (const char* s : x_imgs) c.x_images.push_back(PauliString::from_label(s));
  for (const char* s : z_imgs) c.z_images.push_back(PauliString::from_label(s));
  return c;
}

}  // namespace

const CliffordElement& CliffordElement::for_gate(Gate g) {
  static const CliffordElement h = make_element(1, {"+Z"}, {"+X"});
  static const CliffordElement s = make_element(1, {"+Y"}, {"+Z"});
  static const CliffordElement sdg = make_element(1, {"-Y"}, {"+Z"});
  static const CliffordElement x = make_element(1, {"+X"}, {"-Z"});
  static const CliffordElement y = make_element(1, {"-X"}, {"-Z"});
  static const CliffordElement z = make_element(1, {"-X"}, {"+Z"});
  static const CliffordElement cnot =
      make_element(2, {"+XX", "+IX"}, {"+ZI", "+ZZ"});
  static const CliffordElement cz =
      make_element(2, {"+XZ", "+ZX"}, {"+ZI", "+IZ"});
  static const CliffordElement swap =
      make_element(2, {"+IX", "+XI"}, {"+IZ", "+ZI"});
  switch (g) {
    case Gate::H: return h;
    case Gate::S: return s;
    case Gate::Sdg: return sdg;
    case Gate::X: return x;
    case Gate::Y: return y;
    case Gate::Z: return z;
    case Gate::CNOT: return cnot;
    case Gate::CZ: return cz;
    case Gate::SWAP: return swap;
  }
  throw std::invalid_argument("CliffordElement::for_gate: unknown gate");
}

CliffordElement CliffordElement::single_pauli(char p) {
  switch (p) {
    case 'I': return identity(1);
    case 'X': return for_gate(Gate::X);
    case 'Y': return for_gate(Gate::Y);
    case 'Z': return for_gate(Gate::Z);
  }
  throw std::invalid_argument("CliffordElement::single_pauli: bad label");
}

bool CliffordElement::is_valid() const {
  if (x_images.size() != m || z_images.size() != m) return false;
  for (size_t i = 0; i < m; ++i) {
    if (x_images[i].num_qubits() != m || z_images[i].num_qubits() != m) return false;
    if (!x_images[i].is_hermitian() || !z_images[i].is_hermitian()) return false;
  }
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      if (!x_images[i].commutes(x_images[j])) return false;
      if (!z_images[i].commutes(z_images[j])) return false;
      bool anti = !x_images[i].commutes(z_images[j]);
      if (anti != (i == j)) return false;
    }
  }
  return true;
}

void conjugate_through(PauliString& p, const CliffordElement& c,
                       std::span<const size_t> support) {
  const size_t m = c.m;
  PauliString acc(m);
  for (size_t j = 0; j < m; ++j) {
    if (p.x(support[j])) acc.mul(c.x_images[j]);
    if (p.z(support[j])) acc.mul(c.z_images[j]);
  }
  for (size_t j = 0; j < m; ++j) {
    p.set_x(support[j], acc.x(j));
    p.set_z(support[j], acc.z(j));
  }
  p.mul_phase_exp(acc.phase_exp());
}

void CliffordElement::then_gate(Gate g, std::span<const size_t> support) {
  const CliffordElement& e = for_gate(g);
  for (auto& img : x_images) conjugate_through(img, e, support);
  for (auto& img : z_images) conjugate_through(img, e, support);
}

namespace {

// Symplectic product as bit; 1 means anticommuting.
inline int symp(const PauliString& a, const PauliString& b) {
  return static_cast<int>((BitVec::and_popcount(a.x_bits(), b.z_bits()) +
                           BitVec::and_popcount(a.z_bits(), b.x_bits())) & 1);
}

inline void xor_bits(PauliString& dst, const PauliString& src) {
  dst.x_bits().xor_with(src.x_bits());
  dst.z_bits().xor_with(src.z_bits());
}

}  // namespace

CliffordElement sample_uniform_clifford(size_t m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("sample_uniform_clifford: m must be >= 1");
  // Basis of the symplectic complement of the pairs fixed so far.
  std::vector<PauliString> basis;
  basis.reserve(2 * m);
  for (size_t j = 0; j < m; ++j) {
    PauliString v(m);
    v.set_x(j, true);
    basis.push_back(std::move(v));
  }
  for (size_t j = 0; j < m; ++j) {
    PauliString v(m);
    v.set_z(j, true);
    basis.push_back(std::move(v));
  }

  CliffordElement c;
  c.m = m;
  c.x_images.reserve(m);
  c.z_images.reserve(m);

  for (size_t step = 0; step < m; ++step) {
    size_t dim = basis.size();
    // alpha: uniformly random nonzero combination of the basis.
    std::vector<uint8_t> coef(dim);
    bool nonzero = false;
    while (!nonzero) {
      for (size_t i = 0; i < dim; ++i) {
        coef[i] = static_cast<uint8_t>(rng_bool(rng));
        nonzero |= coef[i] != 0;
      }
    }
    PauliString alpha(m);
    for (size_t i = 0; i < dim; ++i)
      if (coef[i]) xor_bits(alpha, basis[i]);

    // beta: uniform over combinations with <alpha, beta> = 1 (affine subspace,
    // sampled directly through a pivot coordinate).
    std::vector<uint8_t> f(dim);
    size_t pivot = dim;
    for (size_t i = 0; i < dim; ++i) {
      f[i] = static_cast<uint8_t>(symp(alpha, basis[i]));
      if (pivot == dim && f[i]) pivot = i;
    }
    if (pivot == dim)
      throw internal_error("sample_uniform_clifford: degenerate symplectic form");
    std::vector<uint8_t> d(dim);
    int acc = 0;
    for (size_t i = 0; i < dim; ++i) {
      if (i == pivot) continue;
      d[i] = static_cast<uint8_t>(rng_bool(rng));
      acc ^= d[i] & f[i];
    }
    d[pivot] = static_cast<uint8_t>(1 ^ acc);
    PauliString beta(m);
    for (size_t i = 0; i < dim; ++i)
      if (d[i]) xor_bits(beta, basis[i]);

    // Shrink the basis to the symplectic complement of {alpha, beta}.
    size_t p1 = dim;
    for (size_t i = 0; i < dim; ++i)
      if (symp(alpha, basis[i])) { p1 = i; break; }
    for (size_t i = 0; i < dim; ++i)
      if (i != p1 && symp(alpha, basis[i])) xor_bits(basis[i], basis[p1]);
    size_t p2 = dim;
    for (size_t i = 0; i < dim; ++i)
      if (i != p1 && symp(beta, basis[i])) { p2 = i; break; }
    if (p2 == dim)
      throw internal_error("sample_uniform_clifford: no second pivot");
    for (size_t i = 0; i < dim; ++i)
      if (i != p1 && i != p2 && symp(beta, basis[i])) xor_bits(basis[i], basis[p2]);
    std::vector<PauliString> next;
    next.reserve(dim - 2);
    for (size_t i = 0; i < dim; ++i)
      if (i != p1 && i != p2) next.push_back(std::move(basis[i]));
    basis = std::move(next);

    // Hermitian phase plus a uniform sign bit.
    auto finish = [&](PauliString v) {
      size_t num_y = BitVec::and_popcount(v.x_bits(), v.z_bits());
      v.set_phase_exp(static_cast<uint8_t>((num_y + (rng_bool(rng) ? 2 : 0)) & 3));
      return v;
    };
    c.x_images.push_back(finish(std::move(alpha)));
    c.z_images.push_back(finish(std::move(beta)));
  }
  return c;
}

std::vector<std::pair<Gate, std::vector<size_t>>> clifford_to_gates(const CliffordElement& c) {
  CliffordElement e = c;
  std::vector<std::pair<Gate, std::vector<size_t>>> ops;
  const size_t m = c.m;
  auto apply = [&](Gate g, std::initializer_list<size_t> qs) {
    std::vector<size_t> v(qs);
    e.then_gate(g, v);
    ops.emplace_back(g, std::move(v));
  };

  for (size_t j = 0; j < m; ++j) {
    // Reduce the Z_j image to +Z_j.
    {
      const auto& b = e.z_images[j];
      bool has_x = false;
      for (size_t q = j; q < m; ++q) has_x |= b.x(q);
      if (has_x) {
        if (!e.z_images[j].x(j)) {
          for (size_t q = j + 1; q < m; ++q)
            if (e.z_images[j].x(q)) { apply(Gate::SWAP, {j, q}); break; }
        }
        for (size_t q = j + 1; q < m; ++q)
          if (e.z_images[j].x(q)) apply(Gate::CNOT, {j, q});
        for (size_t q = j + 1; q < m; ++q)
          if (e.z_images[j].z(q)) apply(Gate::CZ, {j, q});
        if (e.z_images[j].z(j)) apply(Gate::S, {j});
        apply(Gate::H, {j});
      } else {
        if (!e.z_images[j].z(j)) {
          for (size_t q = j + 1; q < m; ++q)
            if (e.z_images[j].z(q)) { apply(Gate::SWAP, {j, q}); break; }
        }
        for (size_t q = j + 1; q < m; ++q)
          if (e.z_images[j].z(q)) apply(Gate::CNOT, {q, j});
      }
      if (e.z_images[j].sign() < 0) apply(Gate::X, {j});
    }
    // Reduce the X_j image to +X_j with gates that stabilize Z_j.
    {
      if (!e.x_images[j].x(j))
        throw internal_error("clifford_to_gates: X image fails to anticommute");
      for (size_t q = j + 1; q < m; ++q)
        if (e.x_images[j].x(q)) apply(Gate::CNOT, {j, q});
      for (size_t q = j + 1; q < m; ++q)
        if (e.x_images[j].z(q)) apply(Gate::CZ, {j, q});
      if (e.x_images[j].z(j)) apply(Gate::S, {j});
      if (e.x_images[j].sign() < 0) apply(Gate::Z, {j});
    }
  }
  if (!(e == CliffordElement::identity(m)))
    throw internal_error("clifford_to_gates: reduction did not reach identity");

  // ops turn c into the identity, so c equals the reversed inverses.
  std::vector<std::pair<Gate, std::vector<size_t>>> circuit;
  circuit.reserve(ops.size());
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    Gate g = it->first;
    if (g == Gate::S) g = Gate::Sdg;
    else if (g == Gate::Sdg) g = Gate::S;
    circuit.emplace_back(g, it->second);
  }
  return circuit;
}

StabilizerState::StabilizerState(size_t n) : n_(n) {
  destab_.reserve(n);
  stab_.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    PauliString d(n), s(n);
    d.set_x(i, true);
    s.set_z(i, true);
    destab_.push_back(std::move(d));
    stab_.push_back(std::move(s));
  }
}

void StabilizerState::check_support(std::span<const size_t> support, size_t arity) const {
  if (support.size() != arity)
    throw std::invalid_argument("stabilizer: support size mismatch");
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] >= n_)
      throw std::invalid_argument("stabilizer: support index out of range");
    for (size_t j = i + 1; j < support.size(); ++j)
      if (support[i] == support[j])
        throw std::invalid_argument("stabilizer: support indices must be distinct");
  }
}

void StabilizerState::apply_gate(Gate g, std::span<const size_t> support) {
  check_support(support, gate_arity(g));
  const CliffordElement& e = CliffordElement::for_gate(g);
  for (auto& row : destab_) conjugate_through(row, e, support);
  for (auto& row : stab_) conjugate_through(row, e, support);
}

void StabilizerState::apply_clifford(const CliffordElement& c,
                                     std::span<const size_t> support) {
  check_support(support, c.m);
  for (auto& row : destab_) conjugate_through(row, c, support);
  for (auto& row : stab_) {
    conjugate_through(row, c, support);
    if (!row.is_hermitian())
      throw internal_error("apply_clifford: non-Hermitian stabilizer row");
  }
}

size_t StabilizerState::subsystem_entropy(std::span<const size_t> a) const {
  BitMatrix g(n_, 2 * a.size());
  for (size_t i = 0; i < n_; ++i) {
    for (size_t col = 0; col < a.size(); ++col) {
      if (a[col] >= n_)
        throw std::invalid_argument("subsystem_entropy: index out of range");
      g.set(i, 2 * col, stab_[i].x(a[col]));
      g.set(i, 2 * col + 1, stab_[i].z(a[col]));
    }
  }
  return g.rank() - a.size();
}

std::string StabilizerState::dump(bool include_destabilizers) const {
  std::string out;
  for (const auto& s : stab_) {
    out += s.label();
    out += '\n';
  }
  if (include_destabilizers) {
    out += "---\n";
    for (const auto& d : destab_) {
      out += d.label();
      out += '\n';
    }
  }
  return out;
}

bool StabilizerState::check_invariants() const {
  for (size_t i = 0; i < n_; ++i) {
    if (!stab_[i].is_hermitian() || !destab_[i].is_hermitian()) return false;
    for (size_t j = 0; j < n_; ++j) {
      if (!stab_[i].commutes(stab_[j])) return false;
      if (!destab_[i].commutes(destab_[j])) return false;
      bool anti = !destab_[i].commutes(stab_[j]);
      if (anti != (i == j)) return false;
    }
  }
  BitMatrix full(2 * n_, 2 * n_);
  for (size_t i = 0; i < n_; ++i) {
    for (size_t q = 0; q < n_; ++q) {
      full.set(i, 2 * q, stab_[i].x(q));
      full.set(i, 2 * q + 1, stab_[i].z(q));
      full.set(n_ + i, 2 * q, destab_[i].x(q));
      full.set(n_ + i, 2 * q + 1, destab_[i].z(q));
    }
  }
  return full.rank() == 2 * n_;
}

size_t ref_env_mutual_info(const StabilizerState& st, std::span<const size_t> ref,
                           std::span<const size_t> erased) {
  std::vector<size_t> both(ref.begin(), ref.end());
  both.insert(both.end(), erased.begin(), erased.end());
  size_t s_r = st.subsystem_entropy(ref);
  size_t s_t = st.subsystem_entropy(erased);
  size_t s_rt = st.subsystem_entropy(both);
  if (s_r + s_t < s_rt)
    throw internal_error("ref_env_mutual_info: negative mutual information");
  return s_r + s_t - s_rt;
}

double damage_count(const StabilizerState& st, std::span<const size_t> ref,
                    std::span<const size_t> erased) {
  return 0.5 * double(ref_env_mutual_info(st, ref, erased));
}

}  // namespace aqec
