#pragma once

// Minimal dense statevector simulator used as the independent oracle for the
// tableau implementation. Qubit i is bit i of the amplitude index. Kept free
// of any library code on purpose.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using Cplx = std::complex<double>;

class StateVec {
 public:
  explicit StateVec(size_t n) : n_(n), amp_(size_t(1) << n, Cplx(0, 0)) {
    amp_[0] = Cplx(1, 0);
  }

  size_t num_qubits() const { return n_; }
  const std::vector<Cplx>& amps() const { return amp_; }

  void h(size_t a) {
    size_t bit = size_t(1) << a;
    const double s = 0.70710678118654752440;
    for (size_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) continue;
      Cplx a0 = amp_[i], a1 = amp_[i | bit];
      amp_[i] = (a0 + a1) * s;
      amp_[i | bit] = (a0 - a1) * s;
    }
  }
  void s(size_t a) {
    size_t bit = size_t(1) << a;
    for (size_t i = 0; i < amp_.size(); ++i)
      if (i & bit) amp_[i] *= Cplx(0, 1);
  }
  void sdg(size_t a) {
    size_t bit = size_t(1) << a;
    for (size_t i = 0; i < amp_.size(); ++i)
      if (i & bit) amp_[i] *= Cplx(0, -1);
  }
  void x(size_t a) {
    size_t bit = size_t(1) << a;
    for (size_t i = 0; i < amp_.size(); ++i)
      if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
  }
  void y(size_t a) {
    size_t bit = size_t(1) << a;
    for (size_t i = 0; i < amp_.size(); ++i) {
      if (i & bit) continue;
      Cplx a0 = amp_[i], a1 = amp_[i | bit];
      amp_[i] = Cplx(0, -1) * a1;
      amp_[i | bit] = Cplx(0, 1) * a0;
    }
  }
  void z(size_t a) {
    size_t bit = size_t(1) << a;
    for (size_t i = 0; i < amp_.size(); ++i)
      if (i & bit) amp_[i] = -amp_[i];
  }
  void cnot(size_t c, size_t t) {
    size_t bc = size_t(1) << c, bt = size_t(1) << t;
    for (size_t i = 0; i < amp_.size(); ++i)
      if ((i & bc) && !(i & bt)) std::swap(amp_[i], amp_[i | bt]);
  }
  void cz(size_t a, size_t b) {
    size_t ba = size_t(1) << a, bb = size_t(1) << b;
    for (size_t i = 0; i < amp_.size(); ++i)
      if ((i & ba) && (i & bb)) amp_[i] = -amp_[i];
  }
  void swap_q(size_t a, size_t b) {
    size_t ba = size_t(1) << a, bb = size_t(1) << b;
    for (size_t i = 0; i < amp_.size(); ++i)
      if ((i & ba) && !(i & bb)) std::swap(amp_[i], amp_[(i & ~ba) | bb]);
  }

  // Applies the n-qubit Pauli given by per-qubit letters plus sign, in the
  // convention i^phase X^x Z^z per site.
  void pauli(const std::string& label) {
    size_t off = 0;
    double re = 1;
    if (label[0] == '+' || label[0] == '-') {
      re = label[0] == '-' ? -1 : 1;
      off = 1;
    }
    for (auto& a : amp_) a *= re;
    for (size_t q = 0; q + off < label.size(); ++q) {
      switch (label[q + off]) {
        case 'I': break;
        case 'X': x(q); break;
        case 'Y': y(q); break;
        case 'Z': z(q); break;
        default: throw std::invalid_argument("bad pauli label");
      }
    }
  }

  // <this|other>
  Cplx inner(const StateVec& o) const {
    Cplx acc(0, 0);
    for (size_t i = 0; i < amp_.size(); ++i) acc += std::conj(amp_[i]) * o.amp_[i];
    return acc;
  }

  // True when the two states agree up to a global phase.
  bool equal_up_to_phase(const StateVec& o, double tol = 1e-9) const {
    Cplx ov = inner(o);
    return std::abs(std::abs(ov) - 1.0) < tol;
  }

  // Entropy (bits, base 2) of the reduced state on the given qubits, via the
  // spectrum of the reduced density matrix computed by Jacobi iteration on a
  // small Hermitian matrix.
  double subsystem_entropy(const std::vector<size_t>& sub) const;

 private:
  size_t n_;
  std::vector<Cplx> amp_;
};

// Dense reduced density matrix on `sub` (row-major, dimension 2^|sub|).
inline std::vector<Cplx> reduced_density(const StateVec& st, const std::vector<size_t>& sub) {
  size_t ns = sub.size();
  size_t dim = size_t(1) << ns;
  size_t n = st.num_qubits();
  std::vector<size_t> rest;
  for (size_t q = 0; q < n; ++q) {
    bool in = false;
    for (size_t s : sub) in |= s == q;
    if (!in) rest.push_back(q);
  }
  auto assemble = [&](size_t s_bits, size_t r_bits) {
    size_t idx = 0;
    for (size_t b = 0; b < ns; ++b)
      if ((s_bits >> b) & 1) idx |= size_t(1) << sub[b];
    for (size_t b = 0; b < rest.size(); ++b)
      if ((r_bits >> b) & 1) idx |= size_t(1) << rest[b];
    return idx;
  };
  std::vector<Cplx> rho(dim * dim, Cplx(0, 0));
  size_t rest_dim = size_t(1) << rest.size();
  const auto& amp = st.amps();
  for (size_t r = 0; r < rest_dim; ++r)
    for (size_t i = 0; i < dim; ++i) {
      Cplx ai = amp[assemble(i, r)];
      if (ai == Cplx(0, 0)) continue;
      for (size_t j = 0; j < dim; ++j)
        rho[i * dim + j] += ai * std::conj(amp[assemble(j, r)]);
    }
  return rho;
}

// Eigenvalues of a small Hermitian matrix by cyclic Jacobi rotations.
inline std::vector<double> hermitian_eigenvalues(std::vector<Cplx> a, size_t dim) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (size_t p = 0; p < dim; ++p)
      for (size_t q = p + 1; q < dim; ++q) off += std::norm(a[p * dim + q]);
    if (off < 1e-24) break;
    for (size_t p = 0; p < dim; ++p) {
      for (size_t q = p + 1; q < dim; ++q) {
        Cplx apq = a[p * dim + q];
        if (std::abs(apq) < 1e-18) continue;
        double app = a[p * dim + p].real(), aqq = a[q * dim + q].real();
        // Unitary 2x2 diagonalization of [[app, apq], [conj(apq), aqq]].
        double phi = std::arg(apq);
        double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
        Cplx c = std::cos(theta);
        Cplx sph = std::polar(std::sin(theta), phi);
        for (size_t r = 0; r < dim; ++r) {
          Cplx arp = a[r * dim + p], arq = a[r * dim + q];
          a[r * dim + p] = arp * c + arq * std::conj(sph);
          a[r * dim + q] = -arp * sph + arq * c;
        }
        for (size_t r = 0; r < dim; ++r) {
          Cplx apr = a[p * dim + r], aqr = a[q * dim + r];
          a[p * dim + r] = apr * c + aqr * sph;
          a[q * dim + r] = -apr * std::conj(sph) + aqr * c;
        }
      }
    }
  }
  std::vector<double> evals(dim);
  for (size_t i = 0; i < dim; ++i) evals[i] = a[i * dim + i].real();
  return evals;
}

inline double StateVec::subsystem_entropy(const std::vector<size_t>& sub) const {
  size_t dim = size_t(1) << sub.size();
  auto rho = reduced_density(*this, sub);
  auto evals = hermitian_eigenvalues(std::move(rho), dim);
  double h = 0;
  for (double lam : evals)
    if (lam > 1e-12) h -= lam * std::log2(lam);
  return h;
}

}  // namespace oracle
