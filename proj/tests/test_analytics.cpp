#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aqec/analytics.hpp"
#include "support/mpreal.hpp"

using namespace aqec;

TEST_CASE("f and h of basic pauli vectors") {
  PauliVec pure(1, 0, 0, 0);
  CHECK(f_of_p(pure) == 0.0);
  CHECK(h_of_p(pure) == 0.0);
  PauliVec uniform(0.25, 0.25, 0.25, 0.25);
  CHECK(f_of_p(uniform) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(h_of_p(uniform) == doctest::Approx(2.0).epsilon(1e-12));
  PauliVec half(0.5, 0.5, 0, 0);
  CHECK(h_of_p(half) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f_of_p for depolarizing strength matches a 256-bit reevaluation") {
  for (double p : {0.1, 0.05, 0.31}) {
    PauliVec v = to_pauli_vec_depolarizing(p);
    mp::Real mpf = mp::f_of_p(1.0 - 3 * p / 4, p / 4, p / 4, p / 4);
    CHECK(std::abs(f_of_p(v) - mpf.d()) <= 1e-12 * std::abs(mpf.d()));
    mp::Real mph = mp::h_of_p(1.0 - 3 * p / 4, p / 4, p / 4, p / 4);
    CHECK(std::abs(h_of_p(v) - mph.d()) <= 1e-12 * std::abs(mph.d()));
  }
}

TEST_CASE("achievable rates at the known anchor points") {
  CHECK(achievable_rate(NoiseSpec::erasure_iid(1.0 / 3.0), Regime::NonSmooth) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(achievable_rate(NoiseSpec::erasure_iid(0.25), Regime::Smooth) ==
        doctest::Approx(0.5));
  CHECK(achievable_rate(NoiseSpec::amplitude_damping(0.0), Regime::NonSmooth) ==
        doctest::Approx(1.0));
  CHECK(achievable_rate(NoiseSpec::zz_coupling(0.5), Regime::NonSmooth,
                        Family::DoubleLayer) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(achievable_rate(NoiseSpec::zz_coupling(0.1), Regime::Smooth),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      achievable_rate(NoiseSpec::zz_coupling(0.1), Regime::NonSmooth, Family::Brickwork),
      std::invalid_argument);
  CHECK(achievable_rate(NoiseSpec::zz_coupling(0.1), Regime::NonSmooth,
                        Family::Brickwork, 0.25) ==
        doctest::Approx(1 - 2 * 1.25 * std::log2(std::sqrt(0.9) + std::sqrt(0.1))));
}

TEST_CASE("noiseless erasure bound reduces to the epsilon tail") {
  size_t n = 64, k = 16;
  double eps = 1.0 / 64.0;
  auto rep = choi_upper_bound(Family::DoubleLayer, NoiseSpec::erasure_iid(0.0),
                              Regime::NonSmooth, n, k, eps);
  double tail = 4.0 * std::pow(eps, 1.0 - 0.25) * std::pow(double(n), 0.25) /
                std::log2(double(n) / eps);
  double expect = std::pow(std::exp2(-double(n - k)) + tail, 0.25);
  CHECK(rep.value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("double-layer erasure bound matches a 256-bit reevaluation") {
  size_t n = 256, k = 51;
  double p = 0.1, eps = 1.0 / 256.0;
  auto rep = choi_upper_bound(Family::DoubleLayer, NoiseSpec::erasure_iid(p),
                              Regime::NonSmooth, n, k, eps);
  mp::Real rate = mp::Real(1.0) - mp::log2(mp::Real(1.0) + mp::Real(3.0) * mp::Real(p));
  mp::Real kn = mp::Real(long(k)) / mp::Real(long(n));
  mp::Real head = mp::exp2(-(mp::Real(long(n)) * (rate - kn)));
  mp::Real tail = mp::Real(4.0) * mp::pow(mp::Real(eps), mp::Real(1.0) - kn) *
                  mp::pow(mp::Real(long(n)), kn) /
                  mp::log2(mp::Real(long(n)) / mp::Real(eps));
  mp::Real expect = mp::pow(head + tail, mp::Real(0.25));
  CHECK(std::abs(rep.value - expect.d()) <= 1e-10 * expect.d());
  CHECK(!rep.vacuous);
}

TEST_CASE("smooth bounds carry the 8 delta floor") {
  size_t n = 128, k = 32;
  BoundOptions opts;
  opts.delta = 0.01;
  auto rep = choi_upper_bound(Family::DoubleLayer, NoiseSpec::erasure_iid(0.05),
                              Regime::Smooth, n, k, 1.0 / 128.0, opts);
  CHECK(rep.value > std::sqrt(8 * 0.01));
  auto base = clifford_baseline(NoiseSpec::erasure_iid(0.05), Regime::Smooth, n, k, opts);
  CHECK(base.value > std::sqrt(8 * 0.01));
  CHECK_THROWS_AS(choi_upper_bound(Family::DoubleLayer, NoiseSpec::erasure_iid(0.05),
                                   Regime::Smooth, n, k, 1.0 / 128.0),
                  std::invalid_argument);
}

TEST_CASE("fixed-t bounds and the vacuous flag") {
  // n - 2t - k = 0 makes the leading addend 1: the bound is vacuous.
  auto rep = choi_upper_bound(Family::DoubleLayer, NoiseSpec::erasure_fixed_t(12),
                              Regime::NonSmooth, 32, 8, 0.5);
  CHECK(rep.vacuous);
  CHECK(rep.value >= 1.0);
  // Baselines: n - 2t - k = 4 -> 2^-1; the Singleton-check point 2^-2.
  auto b1 = clifford_baseline(NoiseSpec::erasure_fixed_t(10), Regime::NonSmooth, 32, 8);
  CHECK(b1.value == doctest::Approx(0.5).epsilon(1e-12));
  auto b2 = clifford_baseline(NoiseSpec::erasure_fixed_t(12), Regime::NonSmooth, 40, 8);
  CHECK(b2.value == doctest::Approx(0.25).epsilon(1e-12));
  // p = 0 Pauli baseline.
  auto b3 = clifford_baseline(NoiseSpec::pauli_iid(PauliVec(1, 0, 0, 0)),
                              Regime::NonSmooth, 20, 4);
  CHECK(b3.value == doctest::Approx(std::exp2(-20.0 * (1 - 0.2) / 4)).epsilon(1e-12));
}

TEST_CASE("smooth regime is rejected where no smooth bound exists") {
  CHECK_THROWS_AS(choi_upper_bound(Family::DoubleLayer, NoiseSpec::zz_coupling(0.1),
                                   Regime::Smooth, 64, 16, 0.1, {.delta = 0.01}),
                  std::invalid_argument);
  CHECK_THROWS_AS(choi_upper_bound(Family::Brickwork, NoiseSpec::erasure_iid(0.1),
                                   Regime::Smooth, 64, 16, 0.1, {.delta = 0.01}),
                  std::invalid_argument);
}

TEST_CASE("bound monotonicity in n at fixed rate and epsilon rule") {
  double prev = 2.0;
  for (size_t n : {64, 128, 256, 512, 1024}) {
    auto rep = choi_upper_bound(Family::DoubleLayer, NoiseSpec::erasure_iid(0.05),
                                Regime::NonSmooth, n, n / 4, 1.0 / double(n));
    CHECK(rep.value < prev);
    prev = rep.value;
  }
}

TEST_CASE("log-space evaluation survives n = 10^6") {
  auto rep = choi_upper_bound(Family::DoubleLayer, NoiseSpec::erasure_iid(0.1),
                              Regime::NonSmooth, 1000000, 250000, 1e-6);
  CHECK(std::isfinite(rep.log2_value));
  CHECK(rep.value >= 0.0);
  CHECK(!rep.vacuous);
}

TEST_CASE("block lower bound at the published operating point") {
  // eps-rule n^-0.375 at rate 0.2, p = 0.25.
  CHECK(block_poly_exponent(0.375, 0.2, 0.25) == doctest::Approx(0.14).epsilon(0.05));
  CHECK(std::abs(block_poly_exponent(0.375, 0.2, 0.25) - 0.14) < 0.005);
  CHECK(double_layer_decay_exponent(0.375, 0.2) == doctest::Approx(-0.025).epsilon(1e-9));

  // The relative entropy vanishes as the rate approaches 1 - 2p.
  size_t n = 256;
  double p = 0.25;
  double knear = (1 - 2 * p) - 1e-6;
  auto near = block_lower_bound(n, size_t(knear * n), std::pow(double(n), -0.375), p);
  CHECK(near.term_poly == doctest::Approx(double(n)).epsilon(1e-2));
  CHECK_THROWS_AS(block_lower_bound(n, size_t(0.6 * n), 0.5, p), std::invalid_argument);

  // Concrete n = 256 evaluation against a 256-bit reevaluation.
  auto blb = block_lower_bound(256, 51, std::pow(256.0, -0.375), 0.25);
  mp::Real eps = mp::pow(mp::Real(256L), mp::Real(-0.375));
  mp::Real tau = (mp::Real(1.0) - mp::Real(51L) / mp::Real(256L)) / mp::Real(2.0);
  mp::Real d = tau * mp::log2(tau / mp::Real(0.25)) +
               (mp::Real(1.0) - tau) * mp::log2((mp::Real(1.0) - tau) / mp::Real(0.75));
  mp::Real poly = mp::exp2(mp::log2(mp::Real(256L)) +
                           mp::Real(8.0) * d * mp::log2(eps / mp::Real(256L)));
  CHECK(std::abs(blb.term_poly - poly.d()) <= 1e-10 * poly.d());
  mp::Real xi = mp::log2(mp::Real(256L) / eps);
  mp::Real m = mp::Real(256L) / (mp::Real(4.0) * xi);
  mp::Real c = (mp::Real(1.0) - mp::pow(mp::Real(1.0) - mp::Real(1.0) / m, m)) /
               mp::sqrt(mp::Real(2.0));
  CHECK(std::abs(blb.term_const - c.d()) <= 1e-10 * c.d());
}

TEST_CASE("f_ave from choi fidelity") {
  CHECK(f_ave_from_choi(1.0, 3) == doctest::Approx(1.0));
  CHECK(f_ave_from_choi(0.0, 1) == doctest::Approx(std::sqrt(1.0 / 3.0)));
  // k = 2, F = 0.9: sqrt((4*0.81 + 1)/5), frozen from independent evaluation.
  CHECK(f_ave_from_choi(0.9, 2) == doctest::Approx(0.920869154658).epsilon(1e-10));
}

TEST_CASE("decoupling rhs: noiseless collapse and N = 1") {
  double inf = std::numeric_limits<double>::infinity();
  std::vector<double> se = {inf, inf, inf, inf};
  std::vector<double> sr = {-1, -1, -1, -1};
  CHECK(decoupling_rhs_double_layer(se, sr, 3) == 0.0);
  // N = 1 kills the closure coefficient entirely.
  std::vector<double> se1 = {2.0, 2.0};
  std::vector<double> sr1 = {-1.0, -1.0};
  double expect = std::sqrt(std::exp2(-(2.0 + 2.0 - 1.0 - 1.0)));
  CHECK(decoupling_rhs_double_layer(se1, sr1, 4) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("decoupling rhs matches the packaged closed-form bound") {
  size_t n = 256, k = 32;
  double p = 0.02, eps = 1.0 / 256.0;
  size_t xi = double_layer_xi(n, eps);
  size_t regions = n / xi;  // 256 / 16 = 16 regions
  REQUIRE(regions % 2 == 0);
  double f = f_of_p(to_pauli_vec_depolarizing(p));
  double rate = double(k) / double(n);
  REQUIRE(1 - f - rate > 0);  // inside the achievable regime
  std::vector<double> se(regions, double(xi) * (1 - f));
  std::vector<double> sr(regions, -rate * double(xi));
  double rhs = decoupling_rhs_double_layer(se, sr, xi);

  double eta = std::exp2(double(xi)) / (std::exp2(2.0 * double(xi)) + 1.0);
  double c = 2.0 * (std::pow(1.0 + 2.0 * eta * std::exp2(rate * double(xi)),
                             double(regions / 2) - 1.0) -
                    1.0);
  double term1 = std::exp2(-double(n) * (1 - f - rate));
  // All per-region exponents are negative, so the best nonempty subset is a
  // single region.
  double best = std::exp2(-double(xi) * (1 - f - rate));
  CHECK(rhs == doctest::Approx(std::sqrt(term1 + c * best)).epsilon(1e-10));

  // The packaged closure-coefficient bound dominates the exact c.
  double c_bound = 4.0 * std::pow(eps, 1 - rate) * std::pow(double(n), rate) /
                   std::log2(double(n) / eps);
  CHECK(c <= c_bound);
  // And the packaged bound dominates the exact decoupling rhs.
  auto rep = choi_upper_bound(Family::DoubleLayer, NoiseSpec::depolarizing(p),
                              Regime::NonSmooth, n, k, eps);
  CHECK(std::pow(rep.value, 4.0) >= rhs * rhs - 1e-12);
}

TEST_CASE("brickwork decoupling rhs") {
  // Noiseless limit vanishes.
  double inf = std::numeric_limits<double>::infinity();
  std::vector<double> se(8, inf), sr(8, -1.0);
  CHECK(decoupling_rhs_brickwork(se, sr, 4.0, 0.125) == 0.0);
  // Matches a direct evaluation.
  std::vector<double> se2(8, 1.5), sr2(8, -1.0);
  double q = 4.0, eps = 0.125;
  double eta = q / (q * q + 1);
  double rho_m = 2.0;
  double factor = std::pow(eps / 8.0, std::log2(1.0 / (2 * eta * rho_m)));
  double term1 = std::exp2(-8.0 * (1.5 - 1.0));
  double best = std::exp2(-0.5);  // best single site, all exponents negative
  double expect = std::sqrt(term1 + factor * best);
  CHECK(decoupling_rhs_brickwork(se2, sr2, q, eps) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("rate curves: shape, anchors and orderings") {
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(i * 0.01);
  std::string csv = emit_rate_curves(grid);
  std::string csv2 = emit_rate_curves(grid);
  CHECK(csv == csv2);  // deterministic, byte-identical

  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "p,pauli_nonsmooth,pauli_hashing,erasure_nonsmooth,erasure_capacity,"
        "amp_nonsmooth,amp_smooth,zz_nonsmooth");
  size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    double col[8];
    std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &col[0], &col[1],
                &col[2], &col[3], &col[4], &col[5], &col[6], &col[7]);
    if (rows == 0)
      for (int c = 1; c < 8; ++c) CHECK(col[c] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(col[2] >= col[1] - 1e-12);  // hashing above non-smooth for depolarizing
    if (col[0] <= 1.0 / 3.0 + 1e-12)
      CHECK(col[4] >= col[3] - 1e-12);  // capacity above non-smooth for erasure
    CHECK(col[4] == doctest::Approx(std::max(0.0, 1 - 2 * col[0])).epsilon(1e-9));
    for (int c = 1; c < 8; ++c) CHECK(col[c] >= 0.0);
    ++rows;
  }
  CHECK(rows == 61);
  CHECK_THROWS_AS(emit_rate_curves({0.7}), std::invalid_argument);
}

TEST_CASE("hashing-threshold root: bisection and Newton agree") {
  auto g = [](double p) { return 1.0 - h_of_p(to_pauli_vec_depolarizing(p)); };
  // Bisection on [0.1, 0.3].
  double lo = 0.1, hi = 0.3;
  REQUIRE(g(lo) > 0);
  REQUIRE(g(hi) < 0);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  double root_bisect = 0.5 * (lo + hi);
  // Newton with a numerical derivative.
  double x = 0.2;
  for (int it = 0; it < 100; ++it) {
    double fx = g(x);
    double dfx = (g(x + 1e-9) - g(x - 1e-9)) / 2e-9;
    x -= fx / dfx;
  }
  CHECK(std::abs(x - root_bisect) < 1e-10);
}

TEST_CASE("depth formula dispatch") {
  CHECK(depth_formula(Family::Brickwork, 16, 8, 1.0) == 10);
  CHECK(depth_formula(Family::DoubleLayer, 256, 64, 1.0) == 8);
  CHECK(depth_formula(Family::BlockEncoding, 256, 64, 1.0) == 8);
  CHECK_THROWS_AS(depth_formula(Family::FullClifford, 16, 8, 1.0), std::invalid_argument);

  // Arbitrary-precision recheck of the brickwork depth at (16, 8, 1).
  mp::Real r = mp::Real(16L) / mp::Real(8L);
  mp::Real q = mp::exp2(r);
  mp::Real log2_inv_2eta = mp::log2((q * q + mp::Real(1.0)) / (mp::Real(2.0) * q));
  mp::Real e1 = mp::Real(std::exp(1.0)) - mp::Real(1.0);
  mp::Real d = mp::log2(mp::Real(16L) / mp::Real(1.0)) +
               mp::log2(mp::Real(16L)) / log2_inv_2eta + mp::log2(e1) / log2_inv_2eta +
               mp::Real(1.0);
  CHECK(mp::ceil(d).d() == 10.0);
}

TEST_CASE("log2_sum_exp2 is stable") {
  CHECK(log2_sum_exp2(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(log2_sum_exp2(-1e6, 0.0) == doctest::Approx(0.0));
  CHECK(log2_sum_exp2(-std::numeric_limits<double>::infinity(), -3.0) ==
        doctest::Approx(-3.0));
}

TEST_CASE("bound report JSON carries the inputs") {
  auto rep = choi_upper_bound(Family::DoubleLayer, NoiseSpec::erasure_iid(0.1),
                              Regime::NonSmooth, 256, 51, 1.0 / 256);
  std::string j = rep.to_json();
  CHECK(j.find("\"n\": 256") != std::string::npos);
  CHECK(j.find("\"formula_id\": \"dl-erasure-iid-nonsmooth\"") != std::string::npos);
}
