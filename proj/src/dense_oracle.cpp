#include "aqec/dense_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace aqec {

namespace {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr Cplx kI{0.0, 1.0};

}  // namespace

DenseState::DenseState(size_t n) : n_(n), amp_(size_t(1) << n, Cplx(0, 0)) {
  amp_[0] = Cplx(1, 0);
}

void DenseState::apply_gate(Gate g, std::span<const size_t> support) {
  if (support.size() != gate_arity(g))
    throw std::invalid_argument("DenseState::apply_gate: support size mismatch");
  size_t dim = amp_.size();
  if (gate_arity(g) == 1) {
    size_t bit = size_t(1) << support[0];
    for (size_t i = 0; i < dim; ++i) {
      if (i & bit) continue;
      Cplx& a0 = amp_[i];
      Cplx& a1 = amp_[i | bit];
      switch (g) {
        case Gate::H: {
          Cplx t0 = (a0 + a1) * M_SQRT1_2, t1 = (a0 - a1) * M_SQRT1_2;
          a0 = t0; a1 = t1;
          break;
        }
        case Gate::S: a1 *= kI; break;
        case Gate::Sdg: a1 *= -kI; break;
        case Gate::X: std::swap(a0, a1); break;
        case Gate::Y: { Cplx t = a0; a0 = -kI * a1; a1 = kI * t; break; }
        case Gate::Z: a1 = -a1; break;
        default: throw std::invalid_argument("DenseState::apply_gate: bad arity");
      }
    }
    return;
  }
  size_t ba = size_t(1) << support[0], bb = size_t(1) << support[1];
  for (size_t i = 0; i < dim; ++i) {
    switch (g) {
      case Gate::CNOT:
        if ((i & ba) && !(i & bb)) std::swap(amp_[i], amp_[i | bb]);
        break;
      case Gate::CZ:
        if ((i & ba) && (i & bb)) amp_[i] = -amp_[i];
        break;
      case Gate::SWAP:
        if ((i & ba) && !(i & bb)) std::swap(amp_[i], amp_[(i & ~ba) | bb]);
        break;
      default: throw std::invalid_argument("DenseState::apply_gate: bad arity");
    }
  }
}

void DenseState::apply_clifford(const CliffordElement& c, std::span<const size_t> support) {
  if (support.size() != c.m)
    throw std::invalid_argument("DenseState::apply_clifford: support size mismatch");
  for (const auto& [g, qs] : clifford_to_gates(c)) {
    std::vector<size_t> mapped;
    mapped.reserve(qs.size());
    for (size_t q : qs) mapped.push_back(support[q]);
    apply_gate(g, mapped);
  }
}

DenseState dense_encode_epr(const CircuitSpec& spec, Rng& rng) {
  spec.validate();
  size_t k = spec.k(), n = spec.n_qubits;
  DenseState st(k + n);
  for (size_t j = 0; j < k; ++j) {
    st.apply_gate(Gate::H, j);
    st.apply_gate(Gate::CNOT, j, k + spec.logical_slots[j]);
  }
  for (const auto& layer : spec.layers) {
    for (const auto& gate : layer) {
      std::vector<size_t> support;
      support.reserve(gate.support.size());
      for (size_t q : gate.support) support.push_back(k + q);
      if (gate.fresh) {
        CliffordElement c = sample_uniform_clifford(gate.support.size(), rng);
        st.apply_clifford(c, support);
      } else {
        st.apply_clifford(gate.fixed, support);
      }
    }
  }
  return st;
}

namespace {

// Quadratic form M on (l, s) index pairs such that the channel fidelity of a
// recovery with Kraus set {K_a} equals sum_a vec(K_a)^dag M vec(K_a).
Mat fidelity_form(const Mat& sigma, size_t d_logical, size_t d_keep) {
  size_t dim = d_logical * d_keep;
  Mat m(dim, dim);
  for (size_t l = 0; l < d_logical; ++l)
    for (size_t s = 0; s < d_keep; ++s)
      for (size_t lp = 0; lp < d_logical; ++lp)
        for (size_t sp = 0; sp < d_keep; ++sp)
          m(l * d_keep + s, lp * d_keep + sp) =
              sigma(sp * d_logical + lp, s * d_logical + l) / double(d_logical);
  return m;
}

struct SdpResult {
  double f2_opt;
  double f2_transpose;
};

// Maximizes the channel fidelity over CPTP recoveries by monotone seesaw
// ascent on a Stinespring isometry, starting from the transpose-channel
// (Petz) recovery. sigma lives on keep (x) ref with ref dimension d_logical.
SdpResult optimize_recovery(const Mat& sigma, size_t d_logical, size_t d_keep) {
  Mat m = fidelity_form(sigma, d_logical, d_keep);

  // Kraus operators of the forward channel from the eigendecomposition of
  // sigma (its Choi state up to the 1/d_logical factor).
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
  std::vector<Mat> kraus;
  for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) {
    double lam = es.eigenvalues()(a);
    if (lam < 1e-14) continue;
    Mat ka(d_keep, d_logical);
    for (size_t s = 0; s < d_keep; ++s)
      for (size_t l = 0; l < d_logical; ++l)
        ka(s, l) = std::sqrt(lam * double(d_logical)) *
                   es.eigenvectors()(s * d_logical + l, a);
    kraus.push_back(std::move(ka));
  }

  // Pseudo-inverse square root of the keep marginal.
  Mat sigma_keep = Mat::Zero(d_keep, d_keep);
  for (size_t s = 0; s < d_keep; ++s)
    for (size_t sp = 0; sp < d_keep; ++sp)
      for (size_t r = 0; r < d_logical; ++r)
        sigma_keep(s, sp) += sigma(s * d_logical + r, sp * d_logical + r);
  Eigen::SelfAdjointEigenSolver<Mat> ek(sigma_keep);
  Mat pinv_sqrt = Mat::Zero(d_keep, d_keep);
  for (Eigen::Index a = 0; a < ek.eigenvalues().size(); ++a) {
    double lam = ek.eigenvalues()(a);
    if (lam < 1e-12) continue;
    pinv_sqrt += ek.eigenvectors().col(a) * ek.eigenvectors().col(a).adjoint() /
                 std::sqrt(lam);
  }

  // Transpose-channel recovery and its fidelity.
  std::vector<Mat> petz;
  double f2_petz = 0;
  for (const Mat& ka : kraus) {
    Mat ra = ka.adjoint() * pinv_sqrt / std::sqrt(double(d_logical));
    Vec v(d_logical * d_keep);
    for (size_t l = 0; l < d_logical; ++l)
      for (size_t s = 0; s < d_keep; ++s)
        v(l * d_keep + s) = ra(l, s);
    f2_petz += std::real(v.dot(m * v));
    petz.push_back(std::move(ra));
  }

  // Seesaw: V has rows (e, l) and columns s; the gradient applies M to each
  // environment slice, and the polar part of the gradient is the next V.
  size_t d_env = d_logical * d_keep;
  size_t rows = d_env * d_logical;
  auto objective = [&](const Mat& v) {
    double f2 = 0;
    for (size_t e = 0; e < d_env; ++e) {
      Vec ke(d_logical * d_keep);
      for (size_t l = 0; l < d_logical; ++l)
        for (size_t s = 0; s < d_keep; ++s)
          ke(l * d_keep + s) = v(e * d_logical + l, s);
      f2 += std::real(ke.dot(m * ke));
    }
    return f2;
  };
  auto ascend = [&](Mat v) {
    double f2 = objective(v);
    for (int it = 0; it < 2000; ++it) {
      Mat g = Mat::Zero(rows, d_keep);
      for (size_t e = 0; e < d_env; ++e) {
        Vec ke(d_logical * d_keep);
        for (size_t l = 0; l < d_logical; ++l)
          for (size_t s = 0; s < d_keep; ++s)
            ke(l * d_keep + s) = v(e * d_logical + l, s);
        Vec gk = m * ke;
        for (size_t l = 0; l < d_logical; ++l)
          for (size_t s = 0; s < d_keep; ++s)
            g(e * d_logical + l, s) = gk(l * d_keep + s);
      }
      Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
      v = svd.matrixU() * svd.matrixV().adjoint();
      double next = objective(v);
      if (next - f2 < 1e-13) { f2 = next; break; }
      f2 = next;
    }
    return f2;
  };

  Mat v0 = Mat::Zero(rows, d_keep);
  for (size_t a = 0; a < petz.size() && a < d_env; ++a)
    for (size_t l = 0; l < d_logical; ++l)
      for (size_t s = 0; s < d_keep; ++s)
        v0(a * d_logical + l, s) = petz[a](l, s);
  {
    // Re-orthonormalize the Petz start so it is a valid isometry.
    Eigen::JacobiSVD<Mat> svd(v0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    v0 = svd.matrixU() * svd.matrixV().adjoint();
  }
  double best = ascend(v0);

  Rng restart_rng = make_rng(0x9c0ffee5u);
  for (int r = 0; r < 2; ++r) {
    Mat vr(rows, d_keep);
    for (Eigen::Index i = 0; i < vr.rows(); ++i)
      for (Eigen::Index j = 0; j < vr.cols(); ++j)
        vr(i, j) = Cplx(rng_unit(restart_rng) - 0.5, rng_unit(restart_rng) - 0.5);
    Eigen::JacobiSVD<Mat> svd(vr, Eigen::ComputeThinU | Eigen::ComputeThinV);
    vr = svd.matrixU() * svd.matrixV().adjoint();
    best = std::max(best, ascend(vr));
  }

  SdpResult out;
  out.f2_opt = std::min(1.0, best);
  out.f2_transpose = std::min(1.0, f2_petz);
  return out;
}

void check_sandwich(double f_opt, double f_transpose) {
  double tol = 1e-9;
  if (!(1 - f_transpose >= 1 - f_opt - tol))
    throw internal_error("dense oracle: transpose channel beat the optimum");
  if (!(1 - f_opt >= 0.5 * (1 - f_transpose) - tol))
    throw internal_error("dense oracle: two-sided recovery bound violated");
}

}  // namespace

PatternFidelity dense_erasure_pattern_fidelity(const DenseState& encoded, size_t k,
                                               std::span<const size_t> erased) {
  size_t total = encoded.num_qubits();
  size_t n = total - k;
  size_t d_logical = size_t(1) << k;

  std::vector<int> role(n, 0);  // 0 = kept, 1 = erased
  for (size_t q : erased) {
    if (q >= n) throw std::invalid_argument("pattern index out of range");
    role[q] = 1;
  }
  std::vector<size_t> keep_idx, erase_idx;
  for (size_t q = 0; q < n; ++q) (role[q] ? erase_idx : keep_idx).push_back(q);
  size_t d_keep = size_t(1) << keep_idx.size();
  size_t d_erase = size_t(1) << erase_idx.size();

  auto full_index = [&](size_t s, size_t y, size_t r) {
    size_t idx = r;  // reference qubits occupy bits [0, k)
    for (size_t b = 0; b < keep_idx.size(); ++b)
      if ((s >> b) & 1) idx |= size_t(1) << (k + keep_idx[b]);
    for (size_t b = 0; b < erase_idx.size(); ++b)
      if ((y >> b) & 1) idx |= size_t(1) << (k + erase_idx[b]);
    return idx;
  };

  const auto& amp = encoded.amplitudes();
  Mat sigma = Mat::Zero(d_keep * d_logical, d_keep * d_logical);
  for (size_t y = 0; y < d_erase; ++y)
    for (size_t s = 0; s < d_keep; ++s)
      for (size_t r = 0; r < d_logical; ++r) {
        Cplx a = amp[full_index(s, y, r)];
        if (a == Cplx(0, 0)) continue;
        for (size_t sp = 0; sp < d_keep; ++sp)
          for (size_t rp = 0; rp < d_logical; ++rp)
            sigma(s * d_logical + r, sp * d_logical + rp) +=
                a * std::conj(amp[full_index(sp, y, rp)]);
      }

  SdpResult res = optimize_recovery(sigma, d_logical, d_keep);
  PatternFidelity out{std::sqrt(res.f2_opt), std::sqrt(res.f2_transpose)};
  check_sandwich(out.f_opt, out.f_transpose);
  return out;
}

namespace {

// Applies a single- or two-qubit Kraus channel on a density matrix over
// k + n qubits (qubit indices are absolute).
void apply_kraus(Mat& rho, const std::vector<Mat>& kraus,
                 const std::vector<size_t>& qubits) {
  size_t dim = rho.rows();
  size_t span_dim = size_t(1) << qubits.size();
  Mat out = Mat::Zero(dim, dim);
  std::vector<size_t> bit(qubits.size());
  for (size_t i = 0; i < qubits.size(); ++i) bit[i] = size_t(1) << qubits[i];
  auto insert_bits = [&](size_t base, size_t sub) {
    size_t idx = base;
    for (size_t i = 0; i < qubits.size(); ++i)
      if ((sub >> i) & 1) idx |= bit[i];
    return idx;
  };
  size_t mask = 0;
  for (size_t b : bit) mask |= b;
  for (const Mat& kmat : kraus) {
    for (size_t rb = 0; rb < dim; ++rb) {
      if (rb & mask) continue;
      for (size_t cb = 0; cb < dim; ++cb) {
        if (cb & mask) continue;
        for (size_t i = 0; i < span_dim; ++i)
          for (size_t j = 0; j < span_dim; ++j) {
            Cplx acc(0, 0);
            for (size_t a = 0; a < span_dim; ++a)
              for (size_t b = 0; b < span_dim; ++b)
                acc += kmat(i, a) * rho(insert_bits(rb, a), insert_bits(cb, b)) *
                       std::conj(kmat(j, b));
            out(insert_bits(rb, i), insert_bits(cb, j)) += acc;
          }
      }
    }
  }
  rho = std::move(out);
}

}  // namespace

double dense_oracle_choi(const CircuitSpec& spec, const NoiseSpec& noise, Rng& rng,
                         size_t max_n) {
  size_t n = spec.n_qubits, k = spec.k();
  if (n > max_n || k + n > 10)
    throw std::invalid_argument("dense_oracle_choi: size cap exceeded");
  DenseState st = dense_encode_epr(spec, rng);
  size_t d_logical = size_t(1) << k;

  if (noise.is_erasure()) {
    double f2 = 0;
    double weight_sum = 0;
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
      size_t t = size_t(__builtin_popcountll(mask));
      double w;
      if (noise.kind == NoiseKind::ErasureFixedT) {
        if (t != noise.t) continue;
        w = 1.0;
      } else {
        w = std::pow(noise.p, double(t)) * std::pow(1 - noise.p, double(n - t));
      }
      std::vector<size_t> pattern;
      for (size_t q = 0; q < n; ++q)
        if ((mask >> q) & 1) pattern.push_back(q);
      PatternFidelity pf = dense_erasure_pattern_fidelity(st, k, pattern);
      f2 += w * pf.f_opt * pf.f_opt;
      weight_sum += w;
    }
    if (noise.kind == NoiseKind::ErasureFixedT && noise.t > n)
      throw std::invalid_argument("dense_oracle_choi: t exceeds n");
    f2 /= weight_sum;
    return std::sqrt(std::max(0.0, 1.0 - f2));
  }

  // Unflagged noise: build the noisy joint density on (S, R) and optimize the
  // recovery on the full physical register.
  size_t dim = size_t(1) << (k + n);
  const auto& amp = st.amplitudes();
  Mat rho(dim, dim);
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = 0; j < dim; ++j)
      rho(i, j) = amp[i] * std::conj(amp[j]);

  Mat id2 = Mat::Identity(2, 2);
  Mat px(2, 2), py(2, 2), pz(2, 2);
  px << 0, 1, 1, 0;
  py << 0, -kI, kI, 0;
  pz << 1, 0, 0, -1;
  switch (noise.kind) {
    case NoiseKind::PauliIID:
    case NoiseKind::Depolarizing: {
      PauliVec v = noise.pauli_vec();
      std::vector<Mat> kr = {std::sqrt(v.p_i) * id2, std::sqrt(v.p_x) * px,
                             std::sqrt(v.p_y) * py, std::sqrt(v.p_z) * pz};
      for (size_t q = 0; q < n; ++q) apply_kraus(rho, kr, {k + q});
      break;
    }
    case NoiseKind::AmplitudeDamping: {
      Mat k0(2, 2), k1(2, 2);
      k0 << 1, 0, 0, std::sqrt(1 - noise.p);
      k1 << 0, std::sqrt(noise.p), 0, 0;
      std::vector<Mat> kr = {k0, k1};
      for (size_t q = 0; q < n; ++q) apply_kraus(rho, kr, {k + q});
      break;
    }
    case NoiseKind::ZZCoupling: {
      Mat zz = Mat::Zero(4, 4);
      zz(0, 0) = 1; zz(1, 1) = -1; zz(2, 2) = -1; zz(3, 3) = 1;
      std::vector<Mat> kr = {std::sqrt(1 - noise.p) * Mat::Identity(4, 4),
                             std::sqrt(noise.p) * zz};
      for (size_t q = 0; q + 1 < n; ++q) apply_kraus(rho, kr, {k + q, k + q + 1});
      break;
    }
    default:
      throw std::invalid_argument("dense_oracle_choi: unsupported noise");
  }

  // Reorder rho into (keep (x) ref) index convention: here keep = all of S.
  size_t d_keep = size_t(1) << n;
  Mat sigma(d_keep * d_logical, d_keep * d_logical);
  for (size_t s = 0; s < d_keep; ++s)
    for (size_t r = 0; r < d_logical; ++r)
      for (size_t sp = 0; sp < d_keep; ++sp)
        for (size_t rp = 0; rp < d_logical; ++rp)
          sigma(s * d_logical + r, sp * d_logical + rp) =
              rho((s << k) | r, (sp << k) | rp);
  SdpResult res = optimize_recovery(sigma, d_logical, d_keep);
  check_sandwich(std::sqrt(res.f2_opt), std::sqrt(res.f2_transpose));
  return std::sqrt(std::max(0.0, 1.0 - res.f2_opt));
}

}  // namespace aqec
