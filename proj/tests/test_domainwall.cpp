#include <doctest.h>

#include <cmath>

#include "aqec/analytics.hpp"
#include "aqec/domainwall.hpp"
#include "support/doubled_twirl.hpp"

using namespace aqec;

namespace {

// Brickwork gate list on n sites (periodic), `layers` staggered layers.
std::vector<std::pair<size_t, size_t>> brickwork_gates(size_t n, size_t layers) {
  std::vector<std::pair<size_t, size_t>> gates;
  for (size_t l = 1; l <= layers; ++l) {
    for (size_t i = 0; i < n / 2; ++i) {
      size_t a = (l % 2 == 1) ? 2 * i : 2 * i + 1;
      gates.emplace_back(a, (a + 1) % n);
    }
  }
  return gates;
}

std::vector<SiteTraces> random_traces(size_t n, Rng& rng) {
  std::vector<SiteTraces> out;
  for (size_t i = 0; i < n; ++i)
    out.push_back({0.5 + rng_unit(rng), 0.5 + rng_unit(rng)});
  return out;
}

double product_id(const std::vector<SiteTraces>& t) {
  double v = 1;
  for (const auto& s : t) v *= s.tr_id;
  return v;
}
double product_swap(const std::vector<SiteTraces>& t) {
  double v = 1;
  for (const auto& s : t) v *= s.tr_swap;
  return v;
}

// Direct simulation of the biased configuration walk until absorption.
bool walk_absorbs_to_identity(size_t n, size_t m, double q, Rng& rng) {
  std::vector<int> cfg(n, 0);
  for (size_t i = 0; i < m; ++i) cfg[i] = 1;
  double p_to_swap = 1.0 / (q * q + 1.0);
  for (;;) {
    size_t swaps = 0;
    for (int c : cfg) swaps += c;
    if (swaps == 0) return true;
    if (swaps == n) return false;
    size_t a = rng_below(rng, n);
    size_t b = (a + 1) % n;
    if (cfg[a] == cfg[b]) continue;
    int next = rng_unit(rng) < p_to_swap ? 1 : 0;
    cfg[a] = cfg[b] = next;
  }
}

}  // namespace

TEST_CASE("haar second moment: identity pair collapses to the plain trace") {
  // O1 = O2 = identity on both copies: tr(O2 Phi(O1)) = q^(2n).
  for (size_t n : {1, 2, 3}) {
    double q = 2;
    double qn = std::pow(q, double(n));
    double v = haar_second_moment(qn * qn, qn, qn * qn, qn, n, q);
    CHECK(v == doctest::Approx(qn * qn).epsilon(1e-12));
  }
}

TEST_CASE("haar second moment equals the brute-force single-qubit average") {
  // O1 = O2 = |1><1| on both copies of one qubit: E_C |<1|C|1>|^4 over the
  // 24-element group; the images are the six stabilizer states, giving
  // (4*1 + 4*0 + 16*(1/4))/24 = 1/3.
  double brute = (4.0 * 1.0 + 4.0 * 0.0 + 16.0 * 0.25) / 24.0;
  CHECK(haar_second_moment(1, 1, 1, 1, 1, 2) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("haar second moment: antisymmetric first-coefficient cancellation") {
  // tr(O1 g_I) = 0 when trO1_I = q^-n trO1_F, so only the swap branch
  // survives; a boundary with zero swap trace then annihilates the value.
  double q = 2;
  size_t n = 2;
  double qn = std::pow(q, double(n));
  double t1f = 3.7, t1i = t1f / qn;
  double v = haar_second_moment(t1i, t1f, 5.0, 0.0, n, q);
  double expect_cf = (t1f - t1i / qn) / (qn * qn - 1);
  CHECK(v == doctest::Approx(expect_cf * 0.0 + (t1i - t1f / qn) / (qn * qn - 1) * 5.0)
                 .epsilon(1e-12));
  CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single global gate reproduces the haar twirl exactly") {
  // One two-qudit gate covering both sites is itself a global 2-design.
  std::vector<SiteTraces> ones = {{1, 1}, {1, 1}};
  double exact = markov_second_moment_exact(2, 2.0, {{0, 1}}, ones, ones);
  double haar = haar_second_moment(1, 1, 1, 1, 2, 2);
  CHECK(exact == doctest::Approx(haar).epsilon(1e-12));
  CHECK(exact == doctest::Approx(0.1).epsilon(1e-12));  // 2/(d(d+1)), d = 4

  Rng rng = make_rng(21);
  auto o1 = random_traces(2, rng), o2 = random_traces(2, rng);
  double e2 = markov_second_moment_exact(2, 2.0, {{0, 1}}, o1, o2);
  double h2 = haar_second_moment(product_id(o1), product_swap(o1), product_id(o2),
                                 product_swap(o2), 2, 2.0);
  CHECK(e2 == doctest::Approx(h2).epsilon(1e-12));
}

TEST_CASE("deep brickwork converges geometrically to the haar value") {
  Rng rng = make_rng(606);
  size_t n = 6;
  double q = 2.0;
  auto o1 = random_traces(n, rng), o2 = random_traces(n, rng);
  double haar = haar_second_moment(product_id(o1), product_swap(o1), product_id(o2),
                                   product_swap(o2), n, q);
  double r25 = std::abs(markov_second_moment_exact(n, q, brickwork_gates(n, 25), o1, o2) - haar);
  double r50 = std::abs(markov_second_moment_exact(n, q, brickwork_gates(n, 50), o1, o2) - haar);
  CHECK(r50 <= 1e-9);
  CHECK(r25 >= 10.0 * r50);
}

TEST_CASE("identity-only initial weight is absorbing") {
  // Site traces with tr_F = tr_I / q zero out every g_F coefficient, so the
  // initial weight sits entirely on I^n, which no gate can move.
  size_t n = 4;
  double q = 2.0;
  std::vector<SiteTraces> o1(n, SiteTraces{q, 1.0});
  Rng rng = make_rng(7);
  auto o2 = random_traces(n, rng);
  double with_gates = markov_second_moment_exact(n, q, brickwork_gates(n, 6), o1, o2);
  double no_gates = markov_second_moment_exact(n, q, {}, o1, o2);
  CHECK(with_gates == doctest::Approx(no_gates).epsilon(1e-12));
  // And the value is the direct I^n term.
  double c_id = 1.0;
  for (size_t j = 0; j < n; ++j) c_id *= (q - 1.0 / q) / (q * q - 1);  // tr(O1_j g_I)
  CHECK(no_gates == doctest::Approx(c_id * product_id(o2)).epsilon(1e-12));
}

TEST_CASE("biased walk absorption closed forms") {
  auto [i0, f0] = biased_walk_absorption(0, 5, 2.0);
  CHECK(i0 == doctest::Approx(1.0));
  CHECK(f0 == doctest::Approx(0.0));
  auto [in, fn] = biased_walk_absorption(5, 5, 2.0);
  CHECK(in == doctest::Approx(0.0));
  CHECK(fn == doctest::Approx(1.0));
  double prev = 1.0;
  for (size_t m = 0; m <= 6; ++m) {
    auto [pi, pf] = biased_walk_absorption(m, 6, 2.0);
    CHECK(pi + pf == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pi <= prev + 1e-12);
    prev = pi;
  }
}

TEST_CASE("biased walk absorption matches direct simulation") {
  struct Case { size_t n, m; };
  const Case cases[] = {{4, 1}, {4, 3}, {6, 2}};
  Rng rng = make_rng(1863);
  const size_t walks = 100000;
  for (const auto& c : cases) {
    size_t hits = 0;
    for (size_t w = 0; w < walks; ++w)
      hits += walk_absorbs_to_identity(c.n, c.m, 2.0, rng) ? 1 : 0;
    double expect = biased_walk_absorption(c.m, c.n, 2.0).first;
    double sigma = std::sqrt(expect * (1 - expect) / double(walks));
    CHECK(std::abs(double(hits) / double(walks) - expect) < 3 * sigma);
  }
}

TEST_CASE("block transfer: trivial patterns") {
  // t = 0: the environment is empty and tr rho_R^2 = 2^-k exactly.
  std::vector<size_t> none = {0, 0, 0, 0};
  CHECK(block_erasure_transfer(4, 1, 1, none) == mpq_class(1, 2));
  // t = n: the joint state is pure.
  std::vector<size_t> all = {1, 1, 1, 1};
  CHECK(block_erasure_transfer(4, 1, 1, all) == mpq_class(1));
  // k = 0, t = 0 gives exactly 1.
  CHECK(block_erasure_transfer(4, 0, 1, none) == mpq_class(1));
}

TEST_CASE("block transfer diag term matches its closed form") {
  // Reference: 2^n (prod_i a_i 2^(n-t) + prod_i b_i 2^t), checked at t = 0
  // and on mixed patterns against the chain evaluation with hops dropped.
  size_t n = 8, k = 2, xi = 2;
  mpq_class big_d = 16;  // block dimension 2^(2 xi)
  auto lam = spread_counts(k, n / xi);
  mpq_class prod_a = 1, prod_b = 1;
  for (size_t i = 0; i < n / (2 * xi); ++i) {
    mpq_class ref_purity = 1;
    for (size_t j = 0; j < lam[2 * i] + lam[2 * i + 1]; ++j) ref_purity /= 2;
    prod_a *= (ref_purity - 1 / big_d) / (big_d * big_d - 1);
    prod_b *= (1 - ref_purity / big_d) / (big_d * big_d - 1);
  }
  for (std::vector<size_t> pattern :
       {std::vector<size_t>{0, 0, 0, 0}, std::vector<size_t>{1, 0, 2, 1},
        std::vector<size_t>{2, 2, 2, 2}}) {
    size_t t = 0;
    for (size_t nf : pattern) t += nf;
    mpq_class pow_nt = 1, pow_t = 1, pow_n = 1;
    for (size_t i = 0; i < n - t; ++i) pow_nt *= 2;
    for (size_t i = 0; i < t; ++i) pow_t *= 2;
    for (size_t i = 0; i < n; ++i) pow_n *= 2;
    mpq_class expect = pow_n * (prod_a * pow_nt + prod_b * pow_t);
    expect.canonicalize();
    CHECK(block_transfer_diag_term(n, k, xi, pattern) == expect);
  }
}

TEST_CASE("block transfer equals the region-level markov engine exactly") {
  // xi = 1, four regions (n = 4, k = 1): every pattern with t <= 2.
  size_t n = 4, k = 1, xi = 1;
  auto lam = spread_counts(k, 4);
  std::vector<std::pair<size_t, size_t>> gates = {{0, 1}, {2, 3}, {1, 2}};
  for (size_t mask = 0; mask < 16; ++mask) {
    std::vector<size_t> pattern(4, 0);
    for (size_t r = 0; r < 4; ++r) pattern[r] = (mask >> r) & 1;
    std::vector<SiteTracesQ> o1, o2;
    for (size_t r = 0; r < 4; ++r) {
      mpq_class tr_id = lam[r] ? mpq_class(1, 2) : mpq_class(1);
      o1.push_back({tr_id, mpq_class(1)});
      // Erasure boundary per region: (u^2 v, u v^2).
      mpq_class u = pattern[r] ? 1 : 2, v = pattern[r] ? 2 : 1;
      o2.push_back({u * u * v, u * v * v});
    }
    mpq_class markov = markov_second_moment_exact_q(4, mpq_class(2), gates, o1, o2);
    mpq_class chain = block_erasure_transfer(n, k, xi, pattern);
    CHECK(markov == chain);
  }
}

TEST_CASE("block transfer equals the dense doubled-space twirl oracle exactly") {
  // n = 4 physical + 1 reference qubit; regions are single qubits. The dense
  // oracle twirls |psi><psi|^(x2) with the closed-form gate twirls and then
  // contracts against the erasure swap boundary.
  size_t n = 4, k = 1;
  size_t single = n + k;  // reference qubit occupies bit 0
  std::map<std::pair<uint64_t, uint64_t>, mpq_class> rho;
  // Encoded EPR at slot 0 (physical qubit bit 1), ancillas |0>.
  for (uint64_t x = 0; x < 2; ++x)
    for (uint64_t y = 0; y < 2; ++y)
      rho[{x | (x << 1), y | (y << 1)}] = mpq_class(1, 2);
  oracle::SparseOp st = oracle::doubled_state(rho, single);
  // Double-layer gates over physical qubits {1,2}, {3,4}, then {2,3}.
  st = oracle::twirl_gate(st, {1, 2}, single);
  st = oracle::twirl_gate(st, {3, 4}, single);
  st = oracle::twirl_gate(st, {2, 3}, single);

  for (size_t mask = 0; mask < 16; ++mask) {
    std::vector<size_t> pattern(4, 0);
    std::vector<size_t> swapped = {0};  // reference always in the kept trace
    size_t t = 0;
    for (size_t r = 0; r < 4; ++r) {
      pattern[r] = (mask >> r) & 1;
      if (pattern[r]) { swapped.push_back(r + 1); ++t; }
    }
    if (t > 2) continue;
    mpq_class dense = oracle::trace_against_swap_pattern(st, swapped, single);
    mpq_class chain = block_erasure_transfer(n, k, 1, pattern);
    CHECK(dense == chain);
    // Float path within 1e-9 relative.
    double d = block_erasure_transfer_d(n, k, 1, pattern);
    CHECK(std::abs(d - dense.get_d()) <= 1e-9 * std::abs(dense.get_d()));
  }
}

TEST_CASE("pattern-averaged transfer obeys the closure bound") {
  // Average the exact second moment over all patterns of weight t and compare
  // with the pre-simplification bound
  //   2^-t-k + 2^-(n-t) + 2^(1-t-k) ((1 + 2^-xi(1+k/n) + 2^-xi(1-k/n))^(N-1) - 1),
  // inside its hypothesis: uniform slots per region and
  // 1 - k/n - log2(1 + 3t/n) >= 0.
  size_t n = 8, k = 4, xi = 2;
  size_t regions = n / xi;
  for (size_t t : {0UL, 1UL}) {
    mpq_class total = 0;
    size_t count = 0;
    // Enumerate per-region erasure counts summing to t.
    for (size_t a = 0; a <= std::min(t, xi); ++a)
      for (size_t b = 0; b <= std::min(t - a, xi); ++b)
        for (size_t c = 0; c <= std::min(t - a - b, xi); ++c) {
          if (a + b + c > t) continue;
          size_t d = t - a - b - c;
          if (d > xi) continue;
          std::vector<size_t> pattern = {a, b, c, d};
          // Weight: number of qubit-level patterns with these region counts.
          size_t ways = 1;
          auto choose = [](size_t nn, size_t kk) {
            size_t r = 1;
            for (size_t i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
            return r;
          };
          ways = choose(xi, a) * choose(xi, b) * choose(xi, c) * choose(xi, d);
          total += mpq_class(long(ways)) * block_erasure_transfer(n, k, xi, pattern);
          count += ways;
        }
    mpq_class avg = total / mpq_class(long(count));
    double rate = double(k) / double(n);
    double bound = std::exp2(-double(t) - double(k)) + std::exp2(-double(n - t)) +
                   std::exp2(1.0 - double(t) - double(k)) *
                       (std::pow(1.0 + std::exp2(-double(xi) * (1 + rate)) +
                                     std::exp2(-double(xi) * (1 - rate)),
                                 double(regions / 2) - 1.0) -
                        1.0);
    CHECK(avg.get_d() <= bound + 1e-12);
  }
}

TEST_CASE("coefficient domination lemma") {
  CHECK(coef_domination_check(mpq_class(3, 2), mpq_class(3, 2), 4, 6));  // a = b
  CHECK(coef_domination_check(mpq_class(4), mpq_class(1), 3, 5));
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    mpq_class a(long(1 + rng_below(rng, 8)), long(1 + rng_below(rng, 4)));
    mpq_class b(long(1 + rng_below(rng, 8)), long(1 + rng_below(rng, 4)));
    unsigned m = 1 + unsigned(rng_below(rng, 10));
    unsigned n = 1 + unsigned(rng_below(rng, 10));
    CHECK(coef_domination_check(a, b, m, n));
  }
  CHECK_THROWS_AS(coef_domination_check(mpq_class(0), mpq_class(1), 2, 2),
                  std::invalid_argument);
}

TEST_CASE("hypergeometric moment bound") {
  CHECK(hypergeom_bound_check(10, 0, 4));  // t = 0 reduces to 1 <= 1
  for (unsigned n : {4u, 8u, 16u, 20u}) {
    for (unsigned t = 0; t <= n; ++t) CHECK(hypergeom_bound_check(n, t, n));  // m = n
  }
  Rng rng = make_rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    unsigned n = 2 + unsigned(rng_below(rng, 30));
    unsigned t = unsigned(rng_below(rng, n + 1));
    unsigned m = unsigned(rng_below(rng, n + 1));
    CHECK(hypergeom_bound_check(n, t, m));
  }
}

TEST_CASE("two-qudit gate list extraction from brickwork specs") {
  EnsembleParams p;
  p.n = 12; p.k = 6; p.epsilon = 12.0; p.family = Family::Brickwork;
  Rng rng = make_rng(3);
  CircuitSpec spec = build_brickwork(p, rng);
  auto gates = two_qudit_gate_list(spec, 2);
  CHECK(gates.size() == spec.depth() * 3);
  CHECK(gates[0] == std::pair<size_t, size_t>{0, 1});
  CHECK_THROWS_AS(two_qudit_gate_list(spec, 3), std::invalid_argument);
}

TEST_CASE("closure bound dominates the exact brickwork second moment") {
  // Tilde-normalized boundary traces per qudit: (1, 2^-H2(S|R)) for the
  // input, (q^2, q^2 2^-H2(S|E)) for the noise side; the packaged RHS must
  // dominate the exact configuration-transfer value at every depth past the
  // closure threshold.
  Rng rng = make_rng(5);
  const size_t sites = 6;
  const double q = 4.0;
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<double> h2se, h2sr;
    std::vector<SiteTraces> o1, o2;
    for (size_t i = 0; i < sites; ++i) {
      double lam = rng_below(rng, 2) ? 1.0 : 0.0;
      bool erased = rng_below(rng, 4) == 0;
      h2sr.push_back(-lam);
      h2se.push_back(erased ? -std::log2(q) : std::log2(q));
      o1.push_back({1.0, std::exp2(lam)});
      o2.push_back({q * q, erased ? q * q * q : q});
    }
    for (size_t depth : {8UL, 12UL, 20UL, 30UL}) {
      double exact = markov_second_moment_exact(sites, q, brickwork_gates(sites, depth),
                                                o1, o2);
      double eta = q / (q * q + 1);
      double l2 = std::log2(1.0 / (2 * eta));
      double dstar =
          std::log2(double(sites)) / l2 + std::log2(std::exp(1.0) - 1) / l2 + 1;
      double eps = double(sites) * std::exp2(-(double(depth) - dstar));
      double rhs = aqec::decoupling_rhs_brickwork(h2se, h2sr, q, eps);
      CHECK(exact <= 1.0 + rhs * rhs + 1e-9);
    }
  }
}

TEST_CASE("block transfer never drops below the squared fixed-point floor") {
  // The value is a trace of a square and its hop-free floor is 2^(-t-k).
  for (size_t mask = 0; mask < 16; ++mask) {
    std::vector<size_t> pattern(4, 0);
    size_t t = 0;
    for (size_t r = 0; r < 4; ++r) {
      pattern[r] = (mask >> r) & 1;
      t += pattern[r];
    }
    mpq_class q = block_erasure_transfer(4, 1, 1, pattern);
    mpq_class floor(1, long(1) << (t + 1));
    CHECK(q >= floor);
  }
}
