#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "aqec/ensembles.hpp"

namespace aqec {

// Per-site boundary operator traces against identity / swap insertions.
struct SiteTraces {
  double tr_id;
  double tr_swap;
};
struct SiteTracesQ {
  mpq_class tr_id;
  mpq_class tr_swap;
};

// Closed-form global second moment from the Haar twirl identity; the inputs
// are the full traces tr(O (x) I^n), tr(O (x) F^n) of the two boundary
// operators and q is the local dimension.
double haar_second_moment(double tr_o1_id, double tr_o1_swap, double tr_o2_id,
                          double tr_o2_swap, size_t n, double q);

// Exact second moment tr(O2 Phi^2(O1)) for a sequence of two-qudit gates by
// propagating the full 2^n configuration weight vector, including the
// single-qudit pre-expansion coefficients. Verification path, n <= 12.
double markov_second_moment_exact(size_t n_sites, double q,
                                  const std::vector<std::pair<size_t, size_t>>& gates,
                                  const std::vector<SiteTraces>& o1,
                                  const std::vector<SiteTraces>& o2);
mpq_class markov_second_moment_exact_q(size_t n_sites, const mpq_class& q,
                                       const std::vector<std::pair<size_t, size_t>>& gates,
                                       const std::vector<SiteTracesQ>& o1,
                                       const std::vector<SiteTracesQ>& o2);

// Extracts the flattened two-qudit gate list of a brickwork CircuitSpec whose
// gates all touch exactly two of the given qudit-aligned sites.
std::vector<std::pair<size_t, size_t>> two_qudit_gate_list(const CircuitSpec& spec,
                                                           size_t site_width);

// Absorption probabilities (to I^n, to F^n) of the biased configuration walk
// started from a configuration with m swaps.
std::pair<double, double> biased_walk_absorption(size_t m, size_t n, double q);

// Exact tr E_U [N-hat(U phi U^dag)]^2 for the double-layer ensemble and a
// fixed erasure pattern, given per-region erased counts (regions of size xi,
// logical slots distributed as the builder does). Arbitrary-precision
// rationals throughout.
mpq_class block_erasure_transfer(size_t n, size_t k, size_t xi,
                                 const std::vector<size_t>& erased_per_region);
double block_erasure_transfer_d(size_t n, size_t k, size_t xi,
                                const std::vector<size_t>& erased_per_region);

// Hop-free reference term of the same transfer chain,
// 2^n (prod_i a_i 2^(n-t) + prod_i b_i 2^t).
mpq_class block_transfer_diag_term(size_t n, size_t k, size_t xi,
                                   const std::vector<size_t>& erased_per_region);

// True iff every coefficient of (1+az)^m (1+bz)^n is bounded by the matching
// coefficient of (1 + (am+bn)/(m+n) z)^(m+n); exact rational arithmetic.
bool coef_domination_check(const mpq_class& a, const mpq_class& b, unsigned m,
                           unsigned n);

// True iff the exact hypergeometric expectation sum_x 2^(2x) P(X = x) with
// X ~ Hypergeom(n, t, m) is bounded by (1 + 3t/n)^m.
bool hypergeom_bound_check(unsigned n, unsigned t, unsigned m);

}  // namespace aqec
