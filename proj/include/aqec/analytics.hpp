#pragma once

#include <limits>
#include <string>
#include <vector>

#include "aqec/ensembles.hpp"
#include "aqec/noise.hpp"

namespace aqec {

enum class Regime { NonSmooth, Smooth };

// Base-2 binary entropy with the 0 log 0 = 0 convention.
double binary_entropy(double x);
// Shannon entropy of the Pauli vector, base 2.
double h_of_p(const PauliVec& v);
// 2 log2(sqrt(p_I) + sqrt(p_X) + sqrt(p_Y) + sqrt(p_Z)).
double f_of_p(const PauliVec& v);
// Binary relative entropy D(a || b) in bits.
double binary_relative_entropy(double a, double b);
// log2(2^a + 2^b) without under/overflow.
double log2_sum_exp2(double a, double b);

// Achievable encoding rate for the given noise. Family and k_over_n matter
// only for ZZ coupling, whose non-smooth constant differs between the
// double-layer and brickwork ensembles.
double achievable_rate(const NoiseSpec& noise, Regime regime,
                       Family family = Family::DoubleLayer,
                       double k_over_n = std::numeric_limits<double>::quiet_NaN());

struct BoundOptions {
  double delta = 0.0;        // smoothing parameter for the smooth regime
  bool zz_exact_xi = false;  // keep the finite-size (1 + 1/xi) ZZ factor
};

struct BoundReport {
  std::string family;
  std::string noise;
  std::string regime;
  size_t n = 0, k = 0;
  double epsilon = 0;
  double delta = 0;
  bool has_t = false;
  size_t t = 0;
  double value = 0;
  double log2_value = 0;
  bool vacuous = false;  // bound >= 1 carries no information
  std::string formula_id;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

// Expected-Choi-error upper bound for the random encoding ensembles,
// evaluated in log space. Erasure strength may be i.i.d. or fixed-t.
BoundReport choi_upper_bound(Family family, const NoiseSpec& noise, Regime regime,
                             size_t n, size_t k, double epsilon,
                             const BoundOptions& opts = {});

// Fully random Clifford (random stabilizer code) baseline.
BoundReport clifford_baseline(const NoiseSpec& noise, Regime regime, size_t n,
                              size_t k, const BoundOptions& opts = {});

struct BlockLowerBound {
  double term_poly;   // n * (eps/n)^(8 D(tau||p))
  double term_const;  // (1 - (1 - 1/m)^m) / sqrt(2), m = n / (4 xi)
  double relative_entropy;
  double m;
};

// Choi-error lower bound for the separate block encoding; both asymptotic
// terms are reported separately, nothing is silently absorbed.
BlockLowerBound block_lower_bound(size_t n, size_t k, double epsilon, double p);

// Power of n in the block lower bound's polynomial term under the rule
// eps = n^-beta at rate r = k/n: 1 - 8 (1 + beta) D((1-r)/2 || p).
double block_poly_exponent(double beta, double r, double p);
// Power of n in the double-layer upper bound under the same rule:
// (r - beta (1 - r)) / 4, log factors dropped.
double double_layer_decay_exponent(double beta, double r);

// Brickwork: prescribed layer count. DoubleLayer/BlockEncoding: the block
// parameter xi (the realized gate depth is proportional to xi).
size_t depth_formula(Family family, size_t n, size_t k, double epsilon);

// F_ave from F_Choi over k logical qubits.
double f_ave_from_choi(double f_choi, size_t k);

// Right-hand side of the double-layer decoupling bound for per-region
// conditional collision entropies (lists of length 2N). +inf entries denote
// noiseless regions.
double decoupling_rhs_double_layer(const std::vector<double>& h2_s_given_e,
                                   const std::vector<double>& h2_s_given_r,
                                   size_t xi);
// Brickwork variant for per-qudit entropies (length = qudit count), local
// dimension q, with the (eps/sites)^log2(1/(2 eta rho_m)) closure term.
double decoupling_rhs_brickwork(const std::vector<double>& h2_s_given_e,
                                const std::vector<double>& h2_s_given_r,
                                double q, double epsilon);

// Rate-curve table: columns p, pauli_nonsmooth, pauli_hashing,
// erasure_nonsmooth, erasure_capacity, amp_nonsmooth, amp_smooth,
// zz_nonsmooth; all clipped at zero. CSV with a header row, %.12g, LF.
std::string emit_rate_curves(const std::vector<double>& p_grid);

}  // namespace aqec
