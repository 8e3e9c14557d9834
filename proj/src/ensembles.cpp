#include "aqec/ensembles.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace aqec {

const char* family_name(Family f) {
  switch (f) {
    case Family::Brickwork: return "brickwork";
    case Family::DoubleLayer: return "double-layer";
    case Family::BlockEncoding: return "block";
    case Family::FullClifford: return "clifford";
  }
  throw std::invalid_argument("family_name: unknown family");
}

Family family_from_name(std::string_view name) {
  if (name == "brickwork") return Family::Brickwork;
  if (name == "double-layer") return Family::DoubleLayer;
  if (name == "block") return Family::BlockEncoding;
  if (name == "clifford") return Family::FullClifford;
  throw std::invalid_argument("family_from_name: unknown family");
}

void CircuitSpec::validate() const {
  for (const auto& layer : layers) {
    std::set<size_t> seen;
    for (const auto& gate : layer) {
      if (gate.support.empty())
        throw std::invalid_argument("CircuitSpec: empty gate support");
      for (size_t q : gate.support) {
        if (q >= n_qubits)
          throw std::invalid_argument("CircuitSpec: support index out of range");
        if (!seen.insert(q).second)
          throw std::invalid_argument("CircuitSpec: overlapping supports within a layer");
      }
      if (!gate.fresh && gate.fixed.m != gate.support.size())
        throw std::invalid_argument("CircuitSpec: fixed element size mismatch");
    }
  }
  std::set<size_t> slots(logical_slots.begin(), logical_slots.end());
  if (slots.size() != logical_slots.size())
    throw std::invalid_argument("CircuitSpec: duplicate logical slots");
  for (size_t q : logical_slots)
    if (q >= n_qubits)
      throw std::invalid_argument("CircuitSpec: logical slot out of range");
}

namespace {

std::string element_to_string(const CliffordElement& c) {
  std::string s;
  for (size_t j = 0; j < c.m; ++j) {
    if (j) s += ';';
    s += c.x_images[j].label();
  }
  for (size_t j = 0; j < c.m; ++j) {
    s += ';';
    s += c.z_images[j].label();
  }
  return s;
}

CliffordElement element_from_string(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ';')) parts.push_back(item);
  if (parts.empty() || parts.size() % 2 != 0)
    throw std::invalid_argument("CircuitSpec: bad fixed element encoding");
  CliffordElement c;
  c.m = parts.size() / 2;
  for (size_t j = 0; j < c.m; ++j)
    c.x_images.push_back(PauliString::from_label(parts[j]));
  for (size_t j = 0; j < c.m; ++j)
    c.z_images.push_back(PauliString::from_label(parts[c.m + j]));
  if (!c.is_valid())
    throw std::invalid_argument("CircuitSpec: fixed element is not a Clifford");
  return c;
}

}  // namespace

std::string CircuitSpec::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["n"] = n_qubits;
  j["boundary"] = boundary == Boundary::Periodic ? "periodic" : "open";
  j["logical_slots"] = logical_slots;
  j["seed"] = seed;
  j["rng"] = "mt19937_64/mix64";
  nlohmann::json jl = nlohmann::json::array();
  for (const auto& layer : layers) {
    nlohmann::json jlayer = nlohmann::json::array();
    for (const auto& gate : layer) {
      nlohmann::json jg;
      jg["support"] = gate.support;
      jg["element"] = gate.fresh ? std::string("fresh") : element_to_string(gate.fixed);
      jlayer.push_back(jg);
    }
    jl.push_back(jlayer);
  }
  j["layers"] = jl;
  return j.dump(2);
}

CircuitSpec CircuitSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CircuitSpec spec;
  spec.n_qubits = j.at("n").get<size_t>();
  spec.boundary = j.at("boundary").get<std::string>() == "periodic" ? Boundary::Periodic
                                                                    : Boundary::Open;
  spec.logical_slots = j.at("logical_slots").get<std::vector<size_t>>();
  spec.seed = j.value("seed", uint64_t(0));
  for (const auto& jlayer : j.at("layers")) {
    Layer layer;
    for (const auto& jg : jlayer) {
      GateSlot gate;
      gate.support = jg.at("support").get<std::vector<size_t>>();
      std::string el = jg.at("element").get<std::string>();
      if (el == "fresh") {
        gate.fresh = true;
      } else {
        gate.fresh = false;
        gate.fixed = element_from_string(el);
      }
      layer.push_back(std::move(gate));
    }
    spec.layers.push_back(std::move(layer));
  }
  spec.validate();
  return spec;
}

size_t double_layer_xi(size_t n, double epsilon) {
  if (epsilon <= 0)
    throw std::invalid_argument("double_layer_xi: epsilon must be positive");
  double xi = std::ceil(std::log2(static_cast<double>(n) / epsilon));
  return xi < 1 ? 1 : static_cast<size_t>(xi);
}

size_t brickwork_depth(size_t n, size_t k, double epsilon) {
  if (k == 0 || n % k != 0)
    throw std::invalid_argument("brickwork_depth: n/k must be a positive integer");
  if (epsilon <= 0 || epsilon > static_cast<double>(n))
    throw std::invalid_argument("brickwork_depth: epsilon must lie in (0, n]");
  double r = static_cast<double>(n) / static_cast<double>(k);  // log2 q
  // log2((q^2+1)/(2q)) evaluated without forming q^2 to keep large r safe.
  double log2_inv_2eta = 2 * r + std::log1p(std::exp2(-2 * r)) / std::log(2.0) - 1 - r;
  double d = std::log2(static_cast<double>(n) / epsilon) +
             std::log2(static_cast<double>(n)) / log2_inv_2eta +
             std::log2(std::exp(1.0) - 1) / log2_inv_2eta + 1;
  return static_cast<size_t>(std::ceil(d));
}

std::vector<std::pair<size_t, size_t>> double_layer_regions(size_t n, size_t xi) {
  if (xi == 0) throw std::invalid_argument("double_layer_regions: xi must be positive");
  if (xi >= n) throw std::invalid_argument("double_layer_regions: blocks exceed register");
  size_t count = n / xi;
  if (count % 2) --count;  // keep the region count even; the tail is absorbed
  if (count < 2) throw std::invalid_argument("double_layer_regions: blocks exceed register");
  std::vector<std::pair<size_t, size_t>> regions;
  size_t start = 0;
  for (size_t r = 0; r + 1 < count; ++r) {
    regions.emplace_back(start, xi);
    start += xi;
  }
  regions.emplace_back(start, n - start);
  return regions;
}

std::vector<size_t> spread_counts(size_t k, size_t bins) {
  std::vector<size_t> out(bins, 0);
  size_t base = k / bins, rem = k % bins;
  for (size_t b = 0; b < bins; ++b) out[b] = base + (b < rem ? 1 : 0);
  return out;
}

namespace {

std::vector<size_t> range_support(size_t start, size_t len) {
  std::vector<size_t> s(len);
  std::iota(s.begin(), s.end(), start);
  return s;
}

void check_k(const EnsembleParams& p) {
  if (p.k > p.n || p.n == 0)
    throw std::invalid_argument("ensemble: need 0 <= k <= n, n > 0");
}

}  // namespace

CircuitSpec build_brickwork(const EnsembleParams& params, Rng&) {
  check_k(params);
  if (params.k == 0 || params.n % params.k != 0)
    throw std::invalid_argument("build_brickwork: n/k must be a positive integer");
  size_t qudits = params.k;
  size_t w = params.n / params.k;  // qubits per qudit
  if (qudits % 2 != 0)
    throw std::invalid_argument("build_brickwork: qudit count k must be even");
  size_t depth = brickwork_depth(params.n, params.k, params.epsilon);

  CircuitSpec spec;
  spec.n_qubits = params.n;
  spec.boundary = Boundary::Periodic;
  for (size_t l = 1; l <= depth; ++l) {
    Layer layer;
    for (size_t i = 0; i < qudits / 2; ++i) {
      size_t qa = (l % 2 == 1) ? 2 * i : 2 * i + 1;
      size_t qb = (qa + 1) % qudits;
      GateSlot gate;
      auto a = range_support(qa * w, w);
      auto b = range_support(qb * w, w);
      gate.support = a;
      gate.support.insert(gate.support.end(), b.begin(), b.end());
      layer.push_back(std::move(gate));
    }
    spec.layers.push_back(std::move(layer));
  }
  for (size_t j = 0; j < qudits; ++j) spec.logical_slots.push_back(j * w);
  spec.validate();
  return spec;
}

CircuitSpec build_double_layer(const EnsembleParams& params, Rng&) {
  check_k(params);
  size_t xi = params.xi_override ? params.xi_override : double_layer_xi(params.n, params.epsilon);
  auto regions = double_layer_regions(params.n, xi);
  size_t count = regions.size();

  CircuitSpec spec;
  spec.n_qubits = params.n;
  spec.boundary = Boundary::Open;

  Layer first;
  for (size_t i = 0; i + 1 < count; i += 2) {
    GateSlot gate;
    gate.support = range_support(regions[i].first, regions[i].second + regions[i + 1].second);
    first.push_back(std::move(gate));
  }
  Layer second;
  for (size_t i = 1; i + 1 < count; i += 2) {
    GateSlot gate;
    gate.support = range_support(regions[i].first, regions[i].second + regions[i + 1].second);
    second.push_back(std::move(gate));
  }
  spec.layers.push_back(std::move(first));
  spec.layers.push_back(std::move(second));

  auto counts = spread_counts(params.k, count);
  for (size_t r = 0; r < count; ++r)
    for (size_t j = 0; j < counts[r]; ++j)
      spec.logical_slots.push_back(regions[r].first + j);
  spec.validate();
  return spec;
}

CircuitSpec build_block_encoding(const EnsembleParams& params, size_t block_regions) {
  check_k(params);
  size_t xi = params.xi_override ? params.xi_override : double_layer_xi(params.n, params.epsilon);
  size_t block = block_regions * xi;
  if (block == 0 || params.n % block != 0)
    throw std::invalid_argument("build_block_encoding: block size must divide n");
  size_t blocks = params.n / block;

  CircuitSpec spec;
  spec.n_qubits = params.n;
  spec.boundary = Boundary::Open;
  Layer layer;
  for (size_t b = 0; b < blocks; ++b) {
    GateSlot gate;
    gate.support = range_support(b * block, block);
    layer.push_back(std::move(gate));
  }
  spec.layers.push_back(std::move(layer));

  auto counts = spread_counts(params.k, blocks);
  for (size_t b = 0; b < blocks; ++b)
    for (size_t j = 0; j < counts[b]; ++j)
      spec.logical_slots.push_back(b * block + j);
  spec.validate();
  return spec;
}

CircuitSpec build_full_clifford(const EnsembleParams& params) {
  check_k(params);
  CircuitSpec spec;
  spec.n_qubits = params.n;
  spec.boundary = Boundary::Open;
  Layer layer;
  GateSlot gate;
  gate.support = range_support(0, params.n);
  layer.push_back(std::move(gate));
  spec.layers.push_back(std::move(layer));
  for (size_t j = 0; j < params.k; ++j) spec.logical_slots.push_back(j);
  spec.validate();
  return spec;
}

CircuitSpec build_ensemble(const EnsembleParams& params, Rng& rng) {
  switch (params.family) {
    case Family::Brickwork: return build_brickwork(params, rng);
    case Family::DoubleLayer: return build_double_layer(params, rng);
    case Family::BlockEncoding: return build_block_encoding(params);
    case Family::FullClifford: return build_full_clifford(params);
  }
  throw std::invalid_argument("build_ensemble: unknown family");
}

CircuitSpec pauli_twirl_wrap(const CircuitSpec& spec, Rng& rng) {
  static const char kPaulis[4] = {'I', 'X', 'Y', 'Z'};
  CircuitSpec out = spec;
  Layer twirl;
  for (size_t slot : spec.logical_slots) {
    GateSlot gate;
    gate.support = {slot};
    gate.fresh = false;
    gate.fixed = CliffordElement::single_pauli(kPaulis[rng_below(rng, 4)]);
    twirl.push_back(std::move(gate));
  }
  out.layers.insert(out.layers.begin(), std::move(twirl));
  out.validate();
  return out;
}

}  // namespace aqec
