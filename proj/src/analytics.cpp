#include "aqec/analytics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace aqec {

double binary_entropy(double x) {
  if (x < 0 || x > 1) throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  double h = 0;
  if (x > 0) h -= x * std::log2(x);
  if (x < 1) h -= (1 - x) * std::log2(1 - x);
  return h;
}

double h_of_p(const PauliVec& v) {
  double h = 0;
  for (double p : {v.p_i, v.p_x, v.p_y, v.p_z})
    if (p > 0) h -= p * std::log2(p);
  return h;
}

double f_of_p(const PauliVec& v) {
  double s = std::sqrt(v.p_i) + std::sqrt(v.p_x) + std::sqrt(v.p_y) + std::sqrt(v.p_z);
  return 2 * std::log2(s);
}

double binary_relative_entropy(double a, double b) {
  if (a < 0 || a > 1 || b <= 0 || b >= 1)
    throw std::invalid_argument("binary_relative_entropy: bad arguments");
  double d = 0;
  if (a > 0) d += a * std::log2(a / b);
  if (a < 1) d += (1 - a) * std::log2((1 - a) / (1 - b));
  return d;
}

double log2_sum_exp2(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

namespace {

double zz_rate(double p, double c) {
  return 1 - 2 * c * std::log2(std::sqrt(1 - p) + std::sqrt(p));
}

double amp_rate_nonsmooth(double p) {
  return -std::log2(1.0 / (2 - p) + std::sqrt(p / (2 - p)));
}

}  // namespace

double achievable_rate(const NoiseSpec& noise, Regime regime, Family family,
                       double k_over_n) {
  switch (noise.kind) {
    case NoiseKind::PauliIID:
    case NoiseKind::Depolarizing: {
      PauliVec v = noise.pauli_vec();
      return regime == Regime::NonSmooth ? 1 - f_of_p(v) : 1 - h_of_p(v);
    }
    case NoiseKind::ErasureIID:
      return regime == Regime::NonSmooth ? 1 - std::log2(1 + 3 * noise.p)
                                         : 1 - 2 * noise.p;
    case NoiseKind::AmplitudeDamping:
      return regime == Regime::NonSmooth
                 ? amp_rate_nonsmooth(noise.p)
                 : binary_entropy((1 - noise.p) / 2) - binary_entropy(noise.p / 2);
    case NoiseKind::ZZCoupling: {
      if (regime == Regime::Smooth)
        throw std::invalid_argument("achievable_rate: no smooth bound for zz coupling");
      double c = 1.0;
      if (family == Family::Brickwork) {
        if (std::isnan(k_over_n))
          throw std::invalid_argument("achievable_rate: brickwork zz needs k/n");
        c = 1.0 + k_over_n;
      }
      return zz_rate(noise.p, c);
    }
    case NoiseKind::ErasureFixedT:
      throw std::invalid_argument("achievable_rate: defined for per-qubit noise only");
  }
  throw std::invalid_argument("achievable_rate: unknown noise");
}

std::string BoundReport::to_json() const {
  nlohmann::json j;
  j["family"] = family;
  j["noise"] = noise;
  j["regime"] = regime;
  j["n"] = n;
  j["k"] = k;
  j["epsilon"] = epsilon;
  if (delta > 0) j["delta"] = delta;
  if (has_t) j["t"] = t;
  j["value"] = value;
  j["log2_value"] = log2_value;
  j["vacuous"] = vacuous;
  j["formula_id"] = formula_id;
  j["warnings"] = warnings;
  return j.dump(2);
}

namespace {

struct RateInfo {
  double rate;            // entropy-rate term of the exponent
  const char* tag;        // formula id fragment
};

RateInfo nonsmooth_rate(const NoiseSpec& noise, Family family, size_t n, size_t k,
                        double epsilon, bool zz_exact_xi) {
  switch (noise.kind) {
    case NoiseKind::PauliIID:
    case NoiseKind::Depolarizing:
      return {1 - f_of_p(noise.pauli_vec()), "pauli"};
    case NoiseKind::ErasureIID:
      return {1 - std::log2(1 + 3 * noise.p), "erasure-iid"};
    case NoiseKind::AmplitudeDamping:
      return {amp_rate_nonsmooth(noise.p), "amp"};
    case NoiseKind::ZZCoupling: {
      double c = family == Family::Brickwork ? 1.0 + double(k) / double(n) : 1.0;
      if (zz_exact_xi && family != Family::Brickwork)
        c *= 1.0 + 1.0 / double(double_layer_xi(n, epsilon));
      return {zz_rate(noise.p, c), "zz"};
    }
    default:
      throw std::invalid_argument("nonsmooth_rate: unsupported noise kind");
  }
}

double smooth_rate(const NoiseSpec& noise) {
  switch (noise.kind) {
    case NoiseKind::PauliIID:
    case NoiseKind::Depolarizing:
      return 1 - h_of_p(noise.pauli_vec());
    case NoiseKind::ErasureIID:
      return 1 - 2 * noise.p;
    case NoiseKind::AmplitudeDamping:
      return binary_entropy((1 - noise.p) / 2) - binary_entropy(noise.p / 2);
    default:
      throw std::invalid_argument("smooth bound: unsupported noise kind");
  }
}

void finish_report(BoundReport& r) {
  r.value = std::exp2(r.log2_value);
  r.vacuous = r.log2_value >= 0.0;
  if (r.vacuous) r.warnings.push_back("bound is vacuous (value >= 1)");
}

}  // namespace

BoundReport choi_upper_bound(Family family, const NoiseSpec& noise, Regime regime,
                             size_t n, size_t k, double epsilon,
                             const BoundOptions& opts) {
  if (n == 0 || k > n) throw std::invalid_argument("choi_upper_bound: need 0 <= k <= n");
  if (!(epsilon > 0) || epsilon >= double(n))
    throw std::invalid_argument("choi_upper_bound: epsilon must lie in (0, n)");
  if (family == Family::FullClifford)
    return clifford_baseline(noise, regime, n, k, opts);
  if (noise.kind == NoiseKind::ErasureFixedT && noise.t > n)
    throw std::invalid_argument("choi_upper_bound: t exceeds n");

  BoundReport r;
  r.family = family_name(family);
  r.noise = noise.describe();
  r.regime = regime == Regime::NonSmooth ? "non-smooth" : "smooth";
  r.n = n; r.k = k; r.epsilon = epsilon; r.delta = opts.delta;
  double rate = double(k) / double(n);

  // Closure term from the ensemble's deviation from a global 2-design.
  double log2_tail;
  if (family == Family::Brickwork) {
    if (k == 0 || n % k != 0)
      throw std::invalid_argument("choi_upper_bound: brickwork needs integer n/k");
    log2_tail = (double(n) / double(k) - 2.0) * std::log2(epsilon / double(k));
  } else {
    double log_ratio = std::log2(double(n) / epsilon);
    log2_tail = 2.0 + (1 - rate) * std::log2(epsilon) + rate * std::log2(double(n)) -
                std::log2(log_ratio);
  }

  if (regime == Regime::NonSmooth) {
    double log2_head;
    std::string tag;
    if (noise.kind == NoiseKind::ErasureFixedT) {
      log2_head = -(double(n) - 2.0 * double(noise.t) - double(k));
      tag = "erasure-fixed-t";
      r.has_t = true;
      r.t = noise.t;
      if (log2_head >= 0)
        r.warnings.push_back("n - 2t - k <= 0: outside the correctable regime");
    } else {
      RateInfo info = nonsmooth_rate(noise, family, n, k, epsilon, opts.zz_exact_xi);
      log2_head = -double(n) * (info.rate - rate);
      tag = info.tag;
      if (info.rate - rate < 0)
        r.warnings.push_back("encoding rate exceeds the non-smooth achievable rate");
    }
    r.log2_value = 0.25 * log2_sum_exp2(log2_head, log2_tail);
    r.formula_id = std::string(family == Family::Brickwork ? "bw-" : "dl-") + tag + "-nonsmooth";
  } else {
    if (family == Family::Brickwork)
      throw std::invalid_argument("choi_upper_bound: no smooth brickwork bound");
    if (noise.kind == NoiseKind::ErasureFixedT)
      throw std::invalid_argument("choi_upper_bound: no smooth fixed-t bound");
    double srate = smooth_rate(noise);
    double delta = opts.delta;
    if (delta <= 0)
      throw std::invalid_argument("choi_upper_bound: smooth regime needs delta > 0");
    if (srate - rate - delta < 0)
      r.warnings.push_back("encoding rate exceeds the smooth achievable rate");
    double log2_head = -double(n) * (srate - rate - delta);
    double inner = std::exp2(0.5 * log2_sum_exp2(log2_head, log2_tail));
    r.log2_value = 0.5 * std::log2(8 * delta + inner);
    r.formula_id = std::string("dl-") +
                   (noise.kind == NoiseKind::ErasureIID       ? "erasure-iid"
                    : noise.kind == NoiseKind::AmplitudeDamping ? "amp"
                                                                : "pauli") +
                   "-smooth";
  }
  finish_report(r);
  return r;
}

BoundReport clifford_baseline(const NoiseSpec& noise, Regime regime, size_t n,
                              size_t k, const BoundOptions& opts) {
  if (n == 0 || k > n) throw std::invalid_argument("clifford_baseline: need 0 <= k <= n");
  BoundReport r;
  r.family = family_name(Family::FullClifford);
  r.noise = noise.describe();
  r.regime = regime == Regime::NonSmooth ? "non-smooth" : "smooth";
  r.n = n; r.k = k; r.delta = opts.delta;
  double rate = double(k) / double(n);

  if (regime == Regime::NonSmooth) {
    double log2_head;
    std::string tag;
    if (noise.kind == NoiseKind::ErasureFixedT) {
      if (noise.t > n) throw std::invalid_argument("clifford_baseline: t exceeds n");
      log2_head = -(double(n) - 2.0 * double(noise.t) - double(k));
      tag = "erasure-fixed-t";
      r.has_t = true;
      r.t = noise.t;
    } else {
      RateInfo info = nonsmooth_rate(noise, Family::FullClifford, n, k, 1.0, false);
      log2_head = -double(n) * (info.rate - rate);
      tag = info.tag;
      if (info.rate - rate < 0)
        r.warnings.push_back("encoding rate exceeds the non-smooth achievable rate");
    }
    r.log2_value = 0.25 * log2_head;
    r.formula_id = "clifford-" + tag + "-nonsmooth";
  } else {
    double srate = smooth_rate(noise);
    double delta = opts.delta;
    if (delta <= 0)
      throw std::invalid_argument("clifford_baseline: smooth regime needs delta > 0");
    double inner = std::exp2(-0.5 * double(n) * (srate - rate - delta));
    r.log2_value = 0.5 * std::log2(8 * delta + inner);
    r.formula_id = "clifford-smooth";
  }
  finish_report(r);
  return r;
}

BlockLowerBound block_lower_bound(size_t n, size_t k, double epsilon, double p) {
  if (n == 0 || k > n) throw std::invalid_argument("block_lower_bound: need 0 <= k <= n");
  if (!(epsilon > 0) || epsilon >= double(n))
    throw std::invalid_argument("block_lower_bound: epsilon must lie in (0, n)");
  double tau = 0.5 * (1.0 - double(k) / double(n));
  if (tau <= p) throw std::invalid_argument("block_lower_bound: outside Chernoff regime");
  double d = binary_relative_entropy(tau, p);
  double xi = std::log2(double(n) / epsilon);  // idealized, not rounded
  double m = double(n) / (4.0 * xi);
  BlockLowerBound out;
  out.relative_entropy = d;
  out.m = m;
  out.term_poly = std::exp2(std::log2(double(n)) + 8.0 * d * std::log2(epsilon / double(n)));
  out.term_const = (1.0 - std::pow(1.0 - 1.0 / m, m)) / std::sqrt(2.0);
  return out;
}

double block_poly_exponent(double beta, double r, double p) {
  return 1.0 - 8.0 * (1.0 + beta) * binary_relative_entropy(0.5 * (1.0 - r), p);
}

double double_layer_decay_exponent(double beta, double r) {
  return 0.25 * (r - beta * (1.0 - r));
}

size_t depth_formula(Family family, size_t n, size_t k, double epsilon) {
  switch (family) {
    case Family::Brickwork: return brickwork_depth(n, k, epsilon);
    case Family::DoubleLayer:
    case Family::BlockEncoding: return double_layer_xi(n, epsilon);
    case Family::FullClifford:
      throw std::invalid_argument("depth_formula: full Clifford has no depth parameter");
  }
  throw std::invalid_argument("depth_formula: unknown family");
}

double f_ave_from_choi(double f_choi, size_t k) {
  if (f_choi < 0 || f_choi > 1)
    throw std::invalid_argument("f_ave_from_choi: fidelity outside [0,1]");
  double d = std::exp2(double(k));
  return std::sqrt((d * f_choi * f_choi + 1.0) / (d + 1.0));
}

namespace {

// log2 of max over nonempty subsets A of prod_{i in A} 2^{e_i}: include every
// positive exponent; when none is positive the best subset is the single
// largest term. -inf entries (noiseless regions) never help.
double log2_max_nonempty_subset(const std::vector<double>& e) {
  double sum_pos = 0;
  bool any_pos = false;
  double best_single = -std::numeric_limits<double>::infinity();
  for (double x : e) {
    if (x > 0) {
      sum_pos += x;
      any_pos = true;
    }
    best_single = std::max(best_single, x);
  }
  return any_pos ? sum_pos : best_single;
}

}  // namespace

double decoupling_rhs_double_layer(const std::vector<double>& h2_s_given_e,
                                   const std::vector<double>& h2_s_given_r,
                                   size_t xi) {
  if (h2_s_given_e.size() != h2_s_given_r.size() || h2_s_given_e.empty() ||
      h2_s_given_e.size() % 2 != 0)
    throw std::invalid_argument("decoupling_rhs_double_layer: need 2N matched entropies");
  size_t two_n = h2_s_given_e.size();
  size_t big_n = two_n / 2;
  double eta = std::exp2(double(xi)) / (std::exp2(2.0 * double(xi)) + 1.0);

  double sum_exponent = 0;
  std::vector<double> e(two_n);
  double max_rho = 1.0;
  for (size_t i = 0; i < two_n; ++i) {
    sum_exponent += h2_s_given_e[i] + h2_s_given_r[i];
    e[i] = -(h2_s_given_e[i] + h2_s_given_r[i]);
    max_rho = std::max({max_rho, std::exp2(h2_s_given_r[i]), std::exp2(-h2_s_given_r[i])});
  }
  double c = 2.0 * (std::pow(1.0 + 2.0 * eta * max_rho, double(big_n) - 1.0) - 1.0);
  double term1 = std::exp2(-sum_exponent);
  double term2 = c * std::exp2(log2_max_nonempty_subset(e));
  return std::sqrt(term1 + term2);
}

double decoupling_rhs_brickwork(const std::vector<double>& h2_s_given_e,
                                const std::vector<double>& h2_s_given_r,
                                double q, double epsilon) {
  if (h2_s_given_e.size() != h2_s_given_r.size() || h2_s_given_e.empty())
    throw std::invalid_argument("decoupling_rhs_brickwork: need matched entropies");
  size_t sites = h2_s_given_e.size();
  double eta = q / (q * q + 1.0);
  double sum_exponent = 0;
  std::vector<double> e(sites);
  double rho_m = 1.0;
  for (size_t i = 0; i < sites; ++i) {
    sum_exponent += h2_s_given_e[i] + h2_s_given_r[i];
    e[i] = -(h2_s_given_e[i] + h2_s_given_r[i]);
    rho_m = std::max({rho_m, std::exp2(h2_s_given_r[i]), std::exp2(-h2_s_given_r[i])});
  }
  double exponent = std::log2(1.0 / (2.0 * eta * rho_m));
  double factor = std::pow(epsilon / double(sites), exponent);
  double term1 = std::exp2(-sum_exponent);
  double term2 = factor * std::exp2(log2_max_nonempty_subset(e));
  return std::sqrt(term1 + term2);
}

std::string emit_rate_curves(const std::vector<double>& p_grid) {
  std::string out =
      "p,pauli_nonsmooth,pauli_hashing,erasure_nonsmooth,erasure_capacity,"
      "amp_nonsmooth,amp_smooth,zz_nonsmooth\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.12g%c", v, sep);
    out += buf;
  };
  for (double p : p_grid) {
    if (p < 0 || p > 0.6)
      throw std::invalid_argument("emit_rate_curves: grid must lie in [0, 0.6]");
    PauliVec depol = to_pauli_vec_depolarizing(p);
    double cols[8] = {
        p,
        1 - f_of_p(depol),
        1 - h_of_p(depol),
        1 - std::log2(1 + 3 * p),
        1 - 2 * p,
        amp_rate_nonsmooth(p),
        binary_entropy((1 - p) / 2) - binary_entropy(p / 2),
        zz_rate(p, 1.0),
    };
    for (int c = 0; c < 8; ++c) {
      double v = c == 0 ? cols[0] : std::max(0.0, cols[c]);
      put(v, c == 7 ? '\n' : ',');
    }
  }
  return out;
}

}  // namespace aqec
