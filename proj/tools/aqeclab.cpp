// aqeclab: stabilizer-circuit laboratory for low-depth random encodings.
//
// Subcommands: bounds, curves, simulate, compare-block, second-moment,
// lightcone. Config by flags or a JSON file (--config); every JSON artifact
// echoes the tool version, the full configuration, the seed and the wall
// time. Exit codes: 0 success, 2 usage, 3 parameter error, 4 internal
// invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "aqec/analytics.hpp"
#include "aqec/choi.hpp"
#include "aqec/domainwall.hpp"
#include "aqec/lightcone.hpp"
#include "aqec/version.hpp"

using namespace aqec;
using nlohmann::json;

namespace {

struct EpsilonChoice {
  double literal = 0;
  double rule_alpha = 0;
  bool has_literal = false;
  bool has_rule = false;

  double value(size_t n) const {
    if (has_rule) return std::pow(double(n), -rule_alpha);
    if (has_literal) return literal;
    throw std::invalid_argument("epsilon: give --eps or --eps-rule");
  }
  std::string describe() const {
    if (has_rule) return "n^-" + std::to_string(rule_alpha);
    return std::to_string(literal);
  }
};

// "n^-0.375" (or "n^-1") -> alpha.
double parse_eps_rule(const std::string& text) {
  if (text.rfind("n^-", 0) != 0)
    throw std::invalid_argument("eps-rule: expected the form n^-<alpha>");
  return std::stod(text.substr(3));
}

void write_artifact(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << text << "\n";
  }
}

json meta_wrap(const json& config, const json& payload, double wall_s) {
  json j;
  j["tool_version"] = kVersion;
  j["config"] = config;
  j["report"] = payload;
  j["wall_time_s"] = wall_s;
  return j;
}

size_t default_workers() {
  if (const char* env = std::getenv("AQEC_LAB_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return size_t(v);
  }
  return 1;
}

// Merges a JSON config file into argv-style tokens so that explicit flags
// win; unknown keys are rejected by the parser downstream.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    if (i + 1 >= args.size())
      throw std::invalid_argument("--config needs a file argument");
    std::ifstream f(args[i + 1]);
    if (!f) throw std::invalid_argument("cannot read config file: " + args[i + 1]);
    json cfg = json::parse(f);
    std::vector<std::string> extra;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      std::string v;
      if (it.value().is_string()) v = it.value().get<std::string>();
      else v = it.value().dump();
      extra.push_back("--" + it.key() + "=" + v);
    }
    args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
    // Insert where --config stood, so flags given later still override.
    args.insert(args.begin() + long(i), extra.begin(), extra.end());
    break;
  }
  return args;
}

json sim_report_json(const SimReport& rep) { return json::parse(rep.to_json()); }

int run(int argc, char** argv) {
  CLI::App app{"stabilizer-circuit laboratory for 1D log-depth random encodings"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  // Later occurrences win, so explicit flags override --config defaults.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string noise_text, family_text = "double-layer", regime_text = "nonsmooth";
  std::string out_path, spec_path;
  size_t n = 0, k = 0, workers = default_workers();
  uint64_t seed = 1;
  double delta = 0.0, p = 0.1;
  bool zz_exact_xi = false, pauli_twirl = false, with_bound = false;
  size_t circuits = 200, patterns = 500;
  EpsilonChoice eps;

  auto add_eps = [&](CLI::App* cmd) {
    cmd->add_option_function<double>(
        "--eps", [&](double v) { eps.literal = v; eps.has_literal = true; },
        "epsilon literal");
    cmd->add_option_function<std::string>(
        "--eps-rule",
        [&](const std::string& s) {
          eps.rule_alpha = parse_eps_rule(s);
          eps.has_rule = true;
        },
        "epsilon rule n^-alpha evaluated at the run n");
  };

  auto* cmd_bounds = app.add_subcommand("bounds", "closed-form Choi-error bounds");
  cmd_bounds->add_option("--noise", noise_text, "noise spec, e.g. erasure-iid:0.1")->required();
  cmd_bounds->add_option("--n", n, "physical qubits")->required();
  cmd_bounds->add_option("--k", k, "logical qubits")->required();
  cmd_bounds->add_option("--family", family_text, "double-layer|brickwork|block|clifford");
  cmd_bounds->add_option("--regime", regime_text, "nonsmooth|smooth");
  cmd_bounds->add_option("--delta", delta, "smoothing parameter");
  cmd_bounds->add_flag("--zz-exact-xi", zz_exact_xi, "keep the finite-xi ZZ factor");
  cmd_bounds->add_option("--out", out_path, "output JSON path");
  add_eps(cmd_bounds);

  auto* cmd_curves = app.add_subcommand("curves", "rate-curve CSV table");
  size_t points = 61;
  double p_max = 0.6;
  cmd_curves->add_option("--points", points, "grid points");
  cmd_curves->add_option("--p-max", p_max, "grid upper end");
  cmd_curves->add_option("--out", out_path, "output CSV path");

  auto* cmd_sim = app.add_subcommand("simulate", "Monte-Carlo Choi-error estimate");
  cmd_sim->add_option("--noise", noise_text, "erasure noise spec")->required();
  cmd_sim->add_option("--n", n, "physical qubits")->required();
  cmd_sim->add_option("--k", k, "logical qubits")->required();
  cmd_sim->add_option("--family", family_text, "ensemble family");
  cmd_sim->add_option("--circuits", circuits, "number of circuit draws");
  cmd_sim->add_option("--patterns", patterns, "patterns per circuit");
  cmd_sim->add_option("--seed", seed, "64-bit master seed");
  cmd_sim->add_option("--workers", workers, "worker threads");
  cmd_sim->add_flag("--pauli-twirl", pauli_twirl, "prepend a random logical Pauli layer");
  cmd_sim->add_flag("--with-bound", with_bound, "attach the analytic bound");
  cmd_sim->add_option("--out", out_path, "output JSON path");
  add_eps(cmd_sim);

  auto* cmd_block =
      app.add_subcommand("compare-block", "double-layer vs separate block encoding");
  cmd_block->add_option("--n", n, "physical qubits")->required();
  cmd_block->add_option("--k", k, "logical qubits")->required();
  cmd_block->add_option("--p", p, "iid erasure strength")->required();
  cmd_block->add_option("--circuits", circuits, "circuit draws per ensemble");
  cmd_block->add_option("--patterns", patterns, "patterns per circuit");
  cmd_block->add_option("--seed", seed, "64-bit master seed");
  cmd_block->add_option("--workers", workers, "worker threads");
  cmd_block->add_option("--out", out_path, "output JSON path");
  add_eps(cmd_block);

  auto* cmd_sm = app.add_subcommand("second-moment",
                                    "exact configuration transfer vs the Haar value");
  size_t sites = 6, depth = 50;
  double q_dim = 2.0;
  cmd_sm->add_option("--sites", sites, "qudit count (<= 12)");
  cmd_sm->add_option("--q", q_dim, "local dimension");
  cmd_sm->add_option("--depth", depth, "brickwork layers");
  cmd_sm->add_option("--seed", seed, "seed for the boundary traces");
  cmd_sm->add_option("--out", out_path, "output JSON path");

  auto* cmd_lc = app.add_subcommand("lightcone", "light-cone analysis of a layout");
  cmd_lc->add_option("--spec", spec_path, "CircuitSpec JSON path");
  cmd_lc->add_option("--family", family_text, "built-in family instead of --spec");
  cmd_lc->add_option("--n", n, "physical qubits (with --family)");
  cmd_lc->add_option("--k", k, "logical qubits (with --family)");
  cmd_lc->add_option("--seed", seed, "seed (recorded)");
  cmd_lc->add_option("--p", p, "depolarizing strength for the floor");
  cmd_lc->add_option("--out", out_path, "output JSON path");
  add_eps(cmd_lc);

  std::vector<std::string> args;
  try {
    args = merge_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    std::vector<const char*> cargs = {argv[0]};
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(int(cargs.size()), const_cast<char**>(cargs.data()));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  if (*cmd_bounds) {
    NoiseSpec noise = NoiseSpec::parse(noise_text);
    Family family = family_from_name(family_text);
    Regime regime = regime_text == "smooth" ? Regime::Smooth : Regime::NonSmooth;
    double epsilon = family == Family::FullClifford && !eps.has_literal && !eps.has_rule
                         ? 1.0
                         : eps.value(n);
    BoundOptions opts;
    opts.delta = delta;
    opts.zz_exact_xi = zz_exact_xi;
    BoundReport rep = family == Family::FullClifford
                          ? clifford_baseline(noise, regime, n, k, opts)
                          : choi_upper_bound(family, noise, regime, n, k, epsilon, opts);
    json config = {{"command", "bounds"},  {"noise", noise_text},
                   {"n", n},               {"k", k},
                   {"epsilon", eps.describe()}, {"family", family_text},
                   {"regime", regime_text},    {"delta", delta},
                   {"seed", seed}};
    write_artifact(out_path, meta_wrap(config, json::parse(rep.to_json()), wall()).dump(2));
    return 0;
  }

  if (*cmd_curves) {
    if (points < 2) throw std::invalid_argument("curves: need at least 2 points");
    std::vector<double> grid;
    for (size_t i = 0; i < points; ++i)
      grid.push_back(p_max * double(i) / double(points - 1));
    std::string csv = emit_rate_curves(grid);
    if (!csv.empty() && csv.back() == '\n') csv.pop_back();
    write_artifact(out_path, csv);
    std::cerr << "curves: " << points << " rows in " << wall() << " s\n";
    return 0;
  }

  if (*cmd_sim) {
    NoiseSpec noise = NoiseSpec::parse(noise_text);
    EnsembleParams params;
    params.n = n;
    params.k = k;
    params.family = family_from_name(family_text);
    // epsilon is meaningless for the global-Clifford family; default it.
    if (params.family == Family::FullClifford && !eps.has_literal && !eps.has_rule)
      params.epsilon = 1.0;
    else
      params.epsilon = eps.value(n);
    SimOptions opts;
    opts.n_circuits = circuits;
    opts.n_patterns = patterns;
    opts.seed = seed;
    opts.workers = workers;
    opts.pauli_twirl = pauli_twirl;
    SimReport rep = estimate_ensemble_choi(params, noise, opts);
    if (with_bound && noise.is_erasure()) {
      rep.bound = params.family == Family::FullClifford
                      ? clifford_baseline(noise, Regime::NonSmooth, n, k)
                      : choi_upper_bound(params.family, noise, Regime::NonSmooth, n, k,
                                         params.epsilon);
    }
    json config = {{"command", "simulate"}, {"noise", noise_text}, {"n", n},
                   {"k", k},                {"epsilon", eps.describe()},
                   {"family", family_text}, {"circuits", circuits},
                   {"patterns", patterns},  {"seed", seed},
                   {"workers", workers},    {"pauli_twirl", pauli_twirl}};
    write_artifact(out_path, meta_wrap(config, sim_report_json(rep), wall()).dump(2));
    std::cerr << "simulate: mean eps " << rep.mean_choi_error << " [" << rep.ci_low
              << ", " << rep.ci_high << "] in " << rep.wall_time_s << " s\n";
    return 0;
  }

  if (*cmd_block) {
    double epsilon = eps.value(n);
    // Matched block parameter: the smallest xi at or above log2(n/eps) whose
    // 4-region block divides n.
    size_t xi = double_layer_xi(n, epsilon);
    while (n % (4 * xi) != 0) {
      ++xi;
      if (4 * xi > n) throw std::invalid_argument("compare-block: no admissible xi");
    }
    NoiseSpec noise = NoiseSpec::erasure_iid(p);

    json analytic;
    BlockLowerBound blb = block_lower_bound(n, k, epsilon, p);
    analytic["block_lower_poly"] = blb.term_poly;
    analytic["block_lower_const"] = blb.term_const;
    analytic["block_lower"] = std::min(blb.term_poly, blb.term_const);
    analytic["relative_entropy_bits"] = blb.relative_entropy;
    BoundReport dl =
        choi_upper_bound(Family::DoubleLayer, noise, Regime::NonSmooth, n, k, epsilon);
    analytic["double_layer_upper"] = dl.value;
    if (eps.has_rule) {
      analytic["block_poly_exponent"] =
          block_poly_exponent(eps.rule_alpha, double(k) / double(n), p);
      analytic["double_layer_decay_exponent"] =
          double_layer_decay_exponent(eps.rule_alpha, double(k) / double(n));
    }
    analytic["xi_used"] = xi;

    EnsembleParams dl_params;
    dl_params.n = n;
    dl_params.k = k;
    dl_params.epsilon = epsilon;
    dl_params.family = Family::DoubleLayer;
    dl_params.xi_override = xi;
    EnsembleParams bl_params = dl_params;
    bl_params.family = Family::BlockEncoding;
    SimOptions opts;
    opts.n_circuits = circuits;
    opts.n_patterns = patterns;
    opts.seed = seed;
    opts.workers = workers;
    Rng build_rng = make_rng(seed);
    SimReport dl_rep = estimate_spec_choi(build_double_layer(dl_params, build_rng),
                                          noise, opts, "double-layer");
    SimReport bl_rep =
        estimate_spec_choi(build_block_encoding(bl_params), noise, opts, "block");

    json payload;
    payload["analytic"] = analytic;
    payload["empirical"]["double_layer"] = sim_report_json(dl_rep);
    payload["empirical"]["block"] = sim_report_json(bl_rep);
    json config = {{"command", "compare-block"}, {"n", n},
                   {"k", k},                     {"p", p},
                   {"epsilon", eps.describe()},  {"circuits", circuits},
                   {"patterns", patterns},       {"seed", seed},
                   {"workers", workers}};
    write_artifact(out_path, meta_wrap(config, payload, wall()).dump(2));
    std::cerr << "compare-block: dl " << dl_rep.mean_choi_error << " vs block "
              << bl_rep.mean_choi_error << "\n";
    return 0;
  }

  if (*cmd_sm) {
    if (sites > 12) throw std::invalid_argument("second-moment: sites capped at 12");
    Rng rng = make_rng(seed);
    std::vector<SiteTraces> o1, o2;
    for (size_t i = 0; i < sites; ++i)
      o1.push_back({0.5 + rng_unit(rng), 0.5 + rng_unit(rng)});
    for (size_t i = 0; i < sites; ++i)
      o2.push_back({0.5 + rng_unit(rng), 0.5 + rng_unit(rng)});
    std::vector<std::pair<size_t, size_t>> gates;
    for (size_t l = 1; l <= depth; ++l)
      for (size_t i = 0; i < sites / 2; ++i) {
        size_t a = (l % 2 == 1) ? 2 * i : 2 * i + 1;
        gates.emplace_back(a, (a + 1) % sites);
      }
    double exact = markov_second_moment_exact(sites, q_dim, gates, o1, o2);
    double t1i = 1, t1f = 1, t2i = 1, t2f = 1;
    for (const auto& s : o1) { t1i *= s.tr_id; t1f *= s.tr_swap; }
    for (const auto& s : o2) { t2i *= s.tr_id; t2f *= s.tr_swap; }
    double haar = haar_second_moment(t1i, t1f, t2i, t2f, sites, q_dim);
    json inputs = {{"sites", sites}, {"q", q_dim}, {"depth", depth}, {"seed", seed}};
    json payload = {{"inputs", inputs},
                    {"exact", exact},
                    {"haar", haar},
                    {"residual", std::abs(exact - haar)}};
    json config = {{"command", "second-moment"}, {"sites", sites}, {"q", q_dim},
                   {"depth", depth},             {"seed", seed}};
    write_artifact(out_path, meta_wrap(config, payload, wall()).dump(2));
    return 0;
  }

  if (*cmd_lc) {
    CircuitSpec spec;
    if (!spec_path.empty()) {
      std::ifstream f(spec_path);
      if (!f) throw std::invalid_argument("cannot read spec file: " + spec_path);
      std::string text((std::istreambuf_iterator<char>(f)),
                       std::istreambuf_iterator<char>());
      spec = CircuitSpec::from_json(text);
    } else {
      EnsembleParams params;
      params.n = n;
      params.k = k;
      params.epsilon = eps.value(n);
      params.family = family_from_name(family_text);
      Rng rng = make_rng(seed);
      spec = build_ensemble(params, rng);
    }
    LayoutGraph layout = LayoutGraph::from_spec(spec);
    LightCones cones = light_cones(layout);
    auto j_set = disjoint_logical_set(layout, cones);
    double floor = choi_floor(layout, p);
    json depth_table = json::array();
    for (double e : {1e-3, 1e-2, 5e-2, 0.099}) {
      json row = {
          {"eps", e},
          {"min_depth_1d",
           depth_lower_bound_ddim(1, p, e, std::max<size_t>(1, spec.k()))},
          {"min_depth_all_to_all",
           depth_lower_bound_all_to_all(p, e, std::max<size_t>(1, spec.k()))}};
      depth_table.push_back(row);
    }
    json payload = {{"M", cones.m_bound},   {"J", j_set},
                    {"J_size", j_set.size()}, {"floor", floor},
                    {"min_depth_table", depth_table}, {"depth_layers", spec.depth()}};
    json config = {{"command", "lightcone"}, {"spec", spec_path}, {"p", p},
                   {"family", family_text},  {"n", spec.n_qubits}, {"k", spec.k()},
                   {"seed", seed}};
    write_artifact(out_path, meta_wrap(config, payload, wall()).dump(2));
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const internal_error& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
