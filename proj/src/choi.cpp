#include "aqec/choi.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace aqec {

std::vector<size_t> EncodedState::ref_indices() const {
  std::vector<size_t> r(k);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

size_t EncodedState::pattern_mutual_info(const std::vector<size_t>& pattern) const {
  std::vector<size_t> refs = ref_indices();
  std::vector<size_t> erased;
  erased.reserve(pattern.size());
  for (size_t q : pattern) {
    if (q >= n) throw std::invalid_argument("pattern_mutual_info: index out of range");
    erased.push_back(k + q);
  }
  return ref_env_mutual_info(state, refs, erased);
}

double EncodedState::pattern_damage(const std::vector<size_t>& pattern) const {
  return 0.5 * double(pattern_mutual_info(pattern));
}

EncodedState encode_epr_state(const CircuitSpec& spec, Rng& rng) {
  spec.validate();
  EncodedState enc;
  enc.k = spec.k();
  enc.n = spec.n_qubits;
  enc.state = StabilizerState(enc.k + enc.n);
  for (size_t j = 0; j < enc.k; ++j) {
    enc.state.apply_gate(Gate::H, j);
    enc.state.apply_gate(Gate::CNOT, j, enc.k + spec.logical_slots[j]);
  }
  for (const auto& layer : spec.layers) {
    for (const auto& gate : layer) {
      std::vector<size_t> support;
      support.reserve(gate.support.size());
      for (size_t q : gate.support) support.push_back(enc.k + q);
      if (gate.fresh) {
        CliffordElement c = sample_uniform_clifford(gate.support.size(), rng);
        enc.state.apply_clifford(c, support);
      } else {
        enc.state.apply_clifford(gate.fixed, support);
      }
    }
  }
  return enc;
}

namespace {

// C(n, t) capped at `cap` (returns cap + 1 once exceeded).
size_t binomial_capped(size_t n, size_t t, size_t cap) {
  if (t > n) return 0;
  t = std::min(t, n - t);
  size_t c = 1;
  for (size_t i = 1; i <= t; ++i) {
    c = c * (n - t + i) / i;
    if (c > cap) return cap + 1;
  }
  return c;
}

bool next_subset(std::vector<size_t>& idx, size_t n) {
  size_t t = idx.size();
  for (size_t i = t; i-- > 0;) {
    if (idx[i] < n - t + i) {
      ++idx[i];
      for (size_t j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

ChoiEstimate erasure_choi_error(const EncodedState& st, const NoiseSpec& noise,
                                size_t n_patterns, Rng& rng) {
  if (!noise.is_erasure())
    throw std::invalid_argument("erasure_choi_error: analytic-only noise family");
  if (noise.kind == NoiseKind::ErasureFixedT && noise.t > st.n)
    throw std::invalid_argument("erasure_choi_error: t exceeds n");

  ChoiEstimate est;
  std::vector<double> f2s;
  if (noise.kind == NoiseKind::ErasureFixedT &&
      binomial_capped(st.n, noise.t, 10000) <= 10000) {
    est.exact_enumeration = true;
    std::vector<size_t> idx(noise.t);
    std::iota(idx.begin(), idx.end(), 0);
    if (noise.t == 0) {
      f2s.push_back(1.0);
    } else {
      do {
        size_t mi = st.pattern_mutual_info(idx);
        f2s.push_back(std::exp2(-double(mi)));
      } while (next_subset(idx, st.n));
    }
  } else {
    if (n_patterns == 0)
      throw std::invalid_argument("erasure_choi_error: zero patterns requested");
    for (size_t i = 0; i < n_patterns; ++i) {
      std::vector<size_t> pattern = sample_erasure_pattern(noise, st.n, rng);
      size_t mi = st.pattern_mutual_info(pattern);
      f2s.push_back(std::exp2(-double(mi)));
    }
  }

  size_t m = f2s.size();
  double mean = std::accumulate(f2s.begin(), f2s.end(), 0.0) / double(m);
  double fails = 0;
  for (double f2 : f2s) fails += f2 < 1.0 ? 1.0 : 0.0;
  est.mean_f2 = mean;
  est.failure_prob = fails / double(m);
  est.n_patterns = m;
  est.epsilon_hat = std::sqrt(std::max(0.0, 1.0 - mean));
  if (est.exact_enumeration) {
    est.ci_low = est.ci_high = est.epsilon_hat;
  } else {
    double var = 0;
    for (double f2 : f2s) var += (f2 - mean) * (f2 - mean);
    var /= double(m) * std::max<double>(1.0, double(m) - 1.0);
    double se = std::sqrt(var);
    double hi_f2 = std::min(1.0, mean + 1.96 * se);
    double lo_f2 = std::max(0.0, mean - 1.96 * se);
    est.ci_low = std::sqrt(std::max(0.0, 1.0 - hi_f2));
    est.ci_high = std::sqrt(std::max(0.0, 1.0 - lo_f2));
  }
  return est;
}

std::string SimReport::to_json(bool include_per_circuit) const {
  nlohmann::json j;
  j["family"] = family;
  j["n"] = n;
  j["k"] = k;
  j["epsilon"] = epsilon;
  j["noise"] = noise;
  j["n_circuits"] = n_circuits;
  j["n_patterns_per_circuit"] = n_patterns_per_circuit;
  j["seed"] = seed;
  j["workers"] = workers;
  j["mean_choi_error"] = mean_choi_error;
  j["ci_low"] = ci_low;
  j["ci_high"] = ci_high;
  j["mean_failure_prob"] = mean_failure_prob;
  j["wall_time_s"] = wall_time_s;
  if (include_per_circuit) j["per_circuit_epsilon"] = per_circuit_epsilon;
  if (bound) j["bound"] = nlohmann::json::parse(bound->to_json());
  return j.dump(2);
}

SimReport estimate_spec_choi(const CircuitSpec& spec, const NoiseSpec& noise,
                             const SimOptions& opts, const std::string& family_label) {
  if (!noise.is_erasure())
    throw std::invalid_argument("estimate: analytic-only noise family");
  if (opts.n_circuits == 0)
    throw std::invalid_argument("estimate: need at least one circuit");
  auto t0 = std::chrono::steady_clock::now();

  std::vector<double> eps(opts.n_circuits, 0.0);
  std::vector<double> fail(opts.n_circuits, 0.0);
  std::atomic<size_t> next{0};
  size_t workers = std::max<size_t>(1, opts.workers);
  auto body = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= opts.n_circuits) return;
      Rng rng = split_rng(opts.seed, 0x636972u /* per-circuit stream */, i);
      CircuitSpec local = spec;
      if (opts.pauli_twirl) {
        // Separate stream: wrapping must not shift the encoding draws, so a
        // twirled run resolves the same Clifford elements as an untwirled one.
        Rng twirl_rng = split_rng(opts.seed, 0x7477726cu /* twirl stream */, i);
        local = pauli_twirl_wrap(spec, twirl_rng);
      }
      EncodedState st = encode_epr_state(local, rng);
      ChoiEstimate est = erasure_choi_error(st, noise, opts.n_patterns, rng);
      eps[i] = est.epsilon_hat;
      fail[i] = est.failure_prob;
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }

  SimReport rep;
  rep.family = family_label;
  rep.n = spec.n_qubits;
  rep.k = spec.k();
  rep.noise = noise.describe();
  rep.n_circuits = opts.n_circuits;
  rep.n_patterns_per_circuit = opts.n_patterns;
  rep.seed = opts.seed;
  rep.workers = workers;
  rep.per_circuit_epsilon = eps;
  rep.mean_choi_error = std::accumulate(eps.begin(), eps.end(), 0.0) / double(eps.size());
  rep.mean_failure_prob =
      std::accumulate(fail.begin(), fail.end(), 0.0) / double(fail.size());

  // Bootstrap CI over circuits, 1000 resamples at 95%.
  Rng brng = split_rng(opts.seed, 0x626f6f74u /* bootstrap stream */, 0);
  size_t m = eps.size();
  std::vector<double> means;
  means.reserve(1000);
  for (int b = 0; b < 1000; ++b) {
    double acc = 0;
    for (size_t i = 0; i < m; ++i) acc += eps[rng_below(brng, m)];
    means.push_back(acc / double(m));
  }
  std::sort(means.begin(), means.end());
  rep.ci_low = means[static_cast<size_t>(0.025 * 1000)];
  rep.ci_high = means[static_cast<size_t>(0.975 * 1000) - 1];

  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SimReport estimate_ensemble_choi(const EnsembleParams& params, const NoiseSpec& noise,
                                 const SimOptions& opts) {
  Rng build_rng = make_rng(opts.seed);
  CircuitSpec spec = build_ensemble(params, build_rng);
  SimReport rep = estimate_spec_choi(spec, noise, opts, family_name(params.family));
  rep.epsilon = params.epsilon;
  return rep;
}

}  // namespace aqec
