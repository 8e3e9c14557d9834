#include "aqec/domainwall.hpp"

#include <cmath>
#include <stdexcept>

namespace aqec {

double haar_second_moment(double tr_o1_id, double tr_o1_swap, double tr_o2_id,
                          double tr_o2_swap, size_t n, double q) {
  if (q < 2) throw std::invalid_argument("haar_second_moment: q must be >= 2");
  double qn = std::pow(q, double(n));
  return (tr_o1_id * tr_o2_id + tr_o1_swap * tr_o2_swap -
          (tr_o1_id * tr_o2_swap + tr_o1_swap * tr_o2_id) / qn) /
         (qn * qn - 1.0);
}

namespace {

template <typename T>
T markov_engine(size_t n_sites, const T& q,
                const std::vector<std::pair<size_t, size_t>>& gates,
                const std::vector<std::pair<T, T>>& o1,
                const std::vector<std::pair<T, T>>& o2) {
  if (n_sites == 0 || n_sites > 12)
    throw std::invalid_argument("markov_second_moment: sites must lie in [1, 12]");
  if (o1.size() != n_sites || o2.size() != n_sites)
    throw std::invalid_argument("markov_second_moment: trace list size mismatch");
  for (auto [a, b] : gates)
    if (a >= n_sites || b >= n_sites || a == b)
      throw std::invalid_argument("markov_second_moment: bad gate support");

  size_t dim = size_t(1) << n_sites;
  // Initial weights: the single-qudit expansion c_gamma with
  // g_I = I - F/q and g_F = F - I/q per site, over (q^2 - 1)^n.
  std::vector<T> w(dim);
  T norm = 1;
  for (size_t j = 0; j < n_sites; ++j) norm *= q * q - 1;
  for (size_t cfg = 0; cfg < dim; ++cfg) {
    T val = 1;
    for (size_t j = 0; j < n_sites; ++j) {
      if ((cfg >> j) & 1)
        val *= o1[j].second - o1[j].first / q;
      else
        val *= o1[j].first - o1[j].second / q;
    }
    w[cfg] = val / norm;
  }

  T eta = q / (q * q + 1);
  std::vector<T> next(dim);
  for (auto [a, b] : gates) {
    size_t ba = size_t(1) << a, bb = size_t(1) << b;
    for (size_t cfg = 0; cfg < dim; ++cfg) next[cfg] = 0;
    for (size_t cfg = 0; cfg < dim; ++cfg) {
      bool sa = (cfg & ba) != 0, sb = (cfg & bb) != 0;
      if (sa == sb) {
        next[cfg] += w[cfg];
      } else {
        T hop = eta * w[cfg];
        next[cfg & ~(ba | bb)] += hop;
        next[cfg | ba | bb] += hop;
      }
    }
    w.swap(next);
  }

  T out = 0;
  for (size_t cfg = 0; cfg < dim; ++cfg) {
    T tr2 = 1;
    for (size_t j = 0; j < n_sites; ++j)
      tr2 *= ((cfg >> j) & 1) ? o2[j].second : o2[j].first;
    out += w[cfg] * tr2;
  }
  return out;
}

}  // namespace

double markov_second_moment_exact(size_t n_sites, double q,
                                  const std::vector<std::pair<size_t, size_t>>& gates,
                                  const std::vector<SiteTraces>& o1,
                                  const std::vector<SiteTraces>& o2) {
  std::vector<std::pair<double, double>> a, b;
  for (const auto& s : o1) a.emplace_back(s.tr_id, s.tr_swap);
  for (const auto& s : o2) b.emplace_back(s.tr_id, s.tr_swap);
  return markov_engine<double>(n_sites, q, gates, a, b);
}

mpq_class markov_second_moment_exact_q(size_t n_sites, const mpq_class& q,
                                       const std::vector<std::pair<size_t, size_t>>& gates,
                                       const std::vector<SiteTracesQ>& o1,
                                       const std::vector<SiteTracesQ>& o2) {
  std::vector<std::pair<mpq_class, mpq_class>> a, b;
  for (const auto& s : o1) a.emplace_back(s.tr_id, s.tr_swap);
  for (const auto& s : o2) b.emplace_back(s.tr_id, s.tr_swap);
  return markov_engine<mpq_class>(n_sites, q, gates, a, b);
}

std::vector<std::pair<size_t, size_t>> two_qudit_gate_list(const CircuitSpec& spec,
                                                           size_t site_width) {
  if (site_width == 0 || spec.n_qubits % site_width != 0)
    throw std::invalid_argument("two_qudit_gate_list: width must divide n");
  std::vector<std::pair<size_t, size_t>> gates;
  for (const auto& layer : spec.layers) {
    for (const auto& gate : layer) {
      if (gate.support.size() != 2 * site_width)
        throw std::invalid_argument("two_qudit_gate_list: gate is not two-qudit");
      size_t a = gate.support.front() / site_width;
      size_t b = gate.support[site_width] / site_width;
      for (size_t i = 0; i < site_width; ++i) {
        if (gate.support[i] != a * site_width + i ||
            gate.support[site_width + i] != b * site_width + i)
          throw std::invalid_argument("two_qudit_gate_list: support not qudit-aligned");
      }
      gates.emplace_back(a, b);
    }
  }
  return gates;
}

std::pair<double, double> biased_walk_absorption(size_t m, size_t n, double q) {
  if (m > n) throw std::invalid_argument("biased_walk_absorption: need m <= n");
  double denom = 1.0 - std::pow(q, -2.0 * double(n));
  double qm = std::pow(q, -2.0 * (double(n) - double(m)));
  double to_id = (1.0 - qm) / denom;
  double to_swap = (qm - std::pow(q, -2.0 * double(n))) / denom;
  return {to_id, to_swap};
}

namespace {

mpq_class pow2q(long e) {
  mpq_class v;
  if (e >= 0) {
    mpz_class num = 1;
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), e);
    v = num;
  } else {
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), -e);
    v = mpq_class(1) / mpq_class(den);
  }
  return v;
}

struct BlockChain {
  size_t regions;
  size_t big_n;
  std::vector<mpq_class> a, b;  // per first-layer block
  std::vector<mpq_class> u, v;  // per region
  mpq_class eta;
};

BlockChain block_chain_setup(size_t n, size_t k, size_t xi,
                             const std::vector<size_t>& erased_per_region) {
  if (xi == 0 || n % xi != 0)
    throw std::invalid_argument("block_erasure_transfer: xi must divide n");
  size_t regions = n / xi;
  if (regions < 2 || regions % 2 != 0)
    throw std::invalid_argument("block_erasure_transfer: need an even region count >= 2");
  if (erased_per_region.size() != regions)
    throw std::invalid_argument("block_erasure_transfer: pattern length mismatch");
  for (size_t nf : erased_per_region)
    if (nf > xi)
      throw std::invalid_argument("block_erasure_transfer: erased count exceeds region");

  BlockChain c;
  c.regions = regions;
  c.big_n = regions / 2;
  auto lambda = spread_counts(k, regions);

  mpq_class ds = pow2q(long(xi));  // region dimension 2^xi
  c.eta = ds / (ds * ds + 1);
  for (size_t i = 0; i < c.big_n; ++i) {
    // Block coefficients from the two purities of the encoded block state:
    //   a = (tr rho_R^2 - 1/D) / (D^2 - 1),  b = (1 - (tr rho_R^2)/D) / (D^2 - 1)
    // with D = 2^(2 xi) the block dimension and tr rho_R^2 = 2^-kappa for
    // kappa logical slots inside the block.
    size_t kappa = lambda[2 * i] + lambda[2 * i + 1];
    mpq_class ref_purity = pow2q(-long(kappa));
    mpq_class big_d = ds * ds;
    mpq_class denom = big_d * big_d - 1;
    c.a.push_back((ref_purity - 1 / big_d) / denom);
    c.b.push_back((1 - ref_purity / big_d) / denom);
  }
  for (size_t r = 0; r < regions; ++r) {
    c.u.push_back(pow2q(long(xi - erased_per_region[r])));
    c.v.push_back(pow2q(long(erased_per_region[r])));
  }
  return c;
}

}  // namespace

mpq_class block_erasure_transfer(size_t n, size_t k, size_t xi,
                                 const std::vector<size_t>& erased_per_region) {
  BlockChain c = block_chain_setup(n, k, xi, erased_per_region);
  // vec starts at first-layer block 0 (regions 0, 1); each step couples to the
  // next block through the twirled erasure boundary of regions (2j+1, 2j+2).
  mpq_class vi = c.a[0] * c.u[0], vf = c.b[0] * c.v[0];
  for (size_t j = 0; j + 1 < c.big_n; ++j) {
    mpq_class up = c.u[2 * j + 1] * c.u[2 * j + 2];
    mpq_class vp = c.v[2 * j + 1] * c.v[2 * j + 2];
    mpq_class hop = c.eta * (up + vp);
    mpq_class ni = up * vi + hop * vf;
    mpq_class nf = hop * vi + vp * vf;
    vi = c.a[j + 1] * ni;
    vf = c.b[j + 1] * nf;
  }
  mpq_class out = pow2q(long(n)) * (c.u[c.regions - 1] * vi + c.v[c.regions - 1] * vf);
  out.canonicalize();
  return out;
}

double block_erasure_transfer_d(size_t n, size_t k, size_t xi,
                                const std::vector<size_t>& erased_per_region) {
  return block_erasure_transfer(n, k, xi, erased_per_region).get_d();
}

mpq_class block_transfer_diag_term(size_t n, size_t k, size_t xi,
                                   const std::vector<size_t>& erased_per_region) {
  BlockChain c = block_chain_setup(n, k, xi, erased_per_region);
  mpq_class vi = c.a[0] * c.u[0], vf = c.b[0] * c.v[0];
  for (size_t j = 0; j + 1 < c.big_n; ++j) {
    mpq_class up = c.u[2 * j + 1] * c.u[2 * j + 2];
    mpq_class vp = c.v[2 * j + 1] * c.v[2 * j + 2];
    vi = c.a[j + 1] * up * vi;
    vf = c.b[j + 1] * vp * vf;
  }
  mpq_class out = pow2q(long(n)) * (c.u[c.regions - 1] * vi + c.v[c.regions - 1] * vf);
  out.canonicalize();
  return out;
}

namespace {

mpz_class binom(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpq_class qpow(const mpq_class& x, unsigned e) {
  mpq_class r = 1;
  for (unsigned i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

bool coef_domination_check(const mpq_class& a, const mpq_class& b, unsigned m,
                           unsigned n) {
  if (a <= 0 || b <= 0)
    throw std::invalid_argument("coef_domination_check: a, b must be positive");
  mpq_class c = (a * int(m) + b * int(n)) / int(m + n);
  for (unsigned t = 0; t <= m + n; ++t) {
    mpq_class lhs = 0;
    unsigned lo = t > n ? t - n : 0;
    unsigned hi = std::min(m, t);
    for (unsigned j = lo; j <= hi; ++j)
      lhs += mpq_class(binom(m, j)) * qpow(a, j) * mpq_class(binom(n, t - j)) *
             qpow(b, t - j);
    mpq_class rhs = mpq_class(binom(m + n, t)) * qpow(c, t);
    if (lhs > rhs) return false;
  }
  return true;
}

bool hypergeom_bound_check(unsigned n, unsigned t, unsigned m) {
  if (t > n || m > n)
    throw std::invalid_argument("hypergeom_bound_check: need t, m <= n");
  mpq_class expectation = 0;
  unsigned lo = (m + t > n) ? m + t - n : 0;
  unsigned hi = std::min(m, t);
  mpz_class total = binom(n, m);
  for (unsigned x = lo; x <= hi; ++x) {
    mpq_class p = mpq_class(binom(t, x) * binom(n - t, m - x)) / mpq_class(total);
    expectation += qpow(mpq_class(4), x) * p;
  }
  mpq_class rhs = qpow(mpq_class(int(n) + 3 * int(t), int(n)), m);
  return expectation <= rhs;
}

}  // namespace aqec
