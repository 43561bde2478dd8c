// Copyright 2026 The projens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "specs.hpp"

namespace projens::cli {

std::uint64_t Context::require_seed(const std::string& reason) const {
  if (!seed) throw ConfigError("config.seed: " + reason + " is stochastic and needs an explicit seed (field 'seed' or --seed)");
  return *seed;
}

std::filesystem::path Context::input(const std::string& relative) const {
  const std::filesystem::path p(relative);
  return p.is_absolute() ? p : config_dir / p;
}

namespace {

std::vector<double> site_values(Node& node, std::string_view key, int n) {
  const json& v = node.raw(key);
  if (v.is_null()) return {};
  if (v.is_number()) return std::vector<double>(static_cast<std::size_t>(n), convert<double>(v, node.field(key)));
  auto values = convert<std::vector<double>>(v, node.field(key));
  if (values.size() != static_cast<std::size_t>(n)) {
    throw ConfigError(node.field(key) + ": expected " + std::to_string(n) + " values, got " +
                      std::to_string(values.size()));
  }
  return values;
}

}  // namespace

ModelConfig read_model(Node node, const Context& ctx) {
  ModelConfig m;
  m.type = node.req<std::string>("type");
  m.n = node.req<int>("n");
  if (m.n < 1) throw ConfigError(node.field("n") + ": must be >= 1");
  if (m.type == "rydberg") {
    auto& r = m.rydberg;
    r.n = m.n;
    r.omega = node.req<double>("omega");
    r.delta = node.req<double>("delta");
    r.spacing = node.get<double>("spacing", r.spacing);
    if (node.has("vnnn") && node.has("c6")) throw ConfigError(node.path() + ": give either c6 or vnnn, not both");
    if (node.has("vnnn")) {
      r.c6 = c6_for_vnnn(node.req<double>("vnnn"), r.spacing);
    } else {
      r.c6 = node.get<double>("c6", r.c6);
    }
    r.omega_offsets = site_values(node, "omega_offsets", m.n);
    r.delta_offsets = site_values(node, "delta_offsets", m.n);
    r.displacements = site_values(node, "displacements", m.n);
    m.constraint = parse_enum(node, "constraint", "blockade", parse_constraint);
    m.sector = parse_enum(node, "sector", "all", parse_sector);
    try {
      r.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(node.path() + ": " + e.what());
    }
  } else if (m.type == "ion") {
    m.ion = IonSpec{m.n, node.get<double>("j", 1.0), node.get<double>("hx", 0.4), node.get<double>("hy", 0.45)};
  } else if (m.type == "qimf") {
    auto& q = m.qimf;
    q.n = m.n;
    q.hx = node.get<double>("hx", q.hx);
    q.hy = node.get<double>("hy", q.hy);
    q.jxx = node.get<double>("jxx", q.jxx);
    if (node.has("fields") && node.has("realization")) {
      throw ConfigError(node.path() + ": give either fields or realization, not both");
    }
    if (node.has("realization")) {
      const auto k = node.req<std::uint64_t>("realization");
      Rng rng = make_rng(ctx.require_seed("random qimf fields"), 0xF1E1D000 + k);
      q.fields = sample_qimf_fields(m.n, rng);
    } else {
      q.fields = site_values(node, "fields", m.n);
    }
  } else if (m.type == "quench") {
    auto& q = m.quench;
    q.n = m.n;
    q.hx = site_values(node, "hx", m.n);
    q.hy = site_values(node, "hy", m.n);
    q.hz = site_values(node, "hz", m.n);
    q.jxx = site_values(node, "jxx", m.n - 1);
    for (auto* v : {&q.hx, &q.hy, &q.hz}) {
      if (v->empty()) v->assign(static_cast<std::size_t>(m.n), 0.0);
    }
    if (q.jxx.empty()) q.jxx.assign(static_cast<std::size_t>(m.n - 1), 0.0);
  } else if (m.type == "circuit") {
    auto& c = m.circuit;
    c.n = m.n;
    c.gate_set = parse_enum(node, "gate_set", "su4", parse_gate_set);
    c.depth = node.req<int>("depth");
    if (c.depth < 0) throw ConfigError(node.field("depth") + ": must be >= 0");
    c.odd_first = node.get<bool>("odd_first", true);
    c.seed = node.has("circuit_seed") ? node.req<std::uint64_t>("circuit_seed")
                                      : derive_seed(ctx.require_seed("a random circuit"), 0xC1C);
    c.fsim.theta = node.get<double>("fsim_theta", c.fsim.theta);
    c.fsim.phi = node.get<double>("fsim_phi", c.fsim.phi);
  } else {
    throw ConfigError(node.field("type") + ": unknown model type '" + m.type +
                      "' (expected rydberg, ion, qimf, quench or circuit)");
  }
  node.done();
  return m;
}

BasisPtr ModelConfig::basis() const { return make_basis(n, constraint, sector); }

Hamiltonian ModelConfig::hamiltonian(BasisPtr b) const {
  if (type == "rydberg") return build_rydberg(rydberg, std::move(b));
  if (type == "ion") return build_ion(ion, std::move(b));
  if (type == "qimf") return build_qimf(qimf, std::move(b));
  if (type == "quench") return build_quench(quench, std::move(b));
  throw ConfigError("config.model: a circuit has no Hamiltonian");
}

NoiseModel read_noise(Node& node) {
  NoiseModel nm;
  auto drift = [&](std::string_view key, DriftSpec& d) {
    if (auto o = node.maybe_object(key)) {
      d.amplitude = o->req<double>("amplitude");
      d.correlation_time = o->get<double>("correlation_time", d.correlation_time);
      o->done();
    }
  };
  drift("omega_drift", nm.omega_drift);
  drift("delta_drift", nm.delta_drift);
  nm.omega_site_sigma = node.get<double>("omega_site_sigma", 0.0);
  nm.delta_site_sigma = node.get<double>("delta_site_sigma", 0.0);
  nm.position_sigma = node.get<double>("position_sigma", 0.0);
  nm.decay_rate = node.get<double>("decay_rate", 0.0);
  nm.pauli_rate = node.get<double>("pauli_rate", 0.0);
  nm.dt = node.get<double>("dt", nm.dt);
  if (auto s = node.maybe_object("spam")) {
    nm.spam.prep = s->get<double>("prep", 0.0);
    nm.spam.p01 = s->get<double>("p01", 0.0);
    nm.spam.p10 = s->get<double>("p10", 0.0);
    s->done();
  }
  try {
    nm.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(node.path() + ": " + e.what());
  }
  return nm;
}

std::vector<double> read_times(Node& parent, std::string_view key) {
  if (!parent.has(key)) throw ConfigError(parent.field(key) + ": required field missing");
  std::vector<double> t;
  const json& v = parent.raw(key);
  if (v.is_array()) {
    t = convert<std::vector<double>>(v, parent.field(key));
  } else {
    json resolved;
    Node g(&v, &resolved, parent.field(key));
    const double start = g.req<double>("start"), stop = g.req<double>("stop");
    const int count = g.req<int>("count");
    g.done();
    if (count < 1) throw ConfigError(g.field("count") + ": must be >= 1");
    if (count == 1 && start != stop) throw ConfigError(g.field("count") + ": a single point needs start == stop");
    for (int i = 0; i < count; ++i) t.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  }
  if (t.empty()) throw ConfigError(parent.field(key) + ": no times given");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 0.0) throw ConfigError(parent.field(key) + ": times must be non-negative");
    if (i > 0 && !(t[i] > t[i - 1])) throw ConfigError(parent.field(key) + ": times must be strictly increasing");
  }
  return t;
}

Bipartition read_bipartition(Node& parent, std::string_view key, int n) {
  auto node = parent.maybe_object(key);
  if (!node) return Bipartition::half_chain(n);
  const bool rule = node->get<bool>("boundary_rule", false);
  try {
    if (node->has("sites")) {
      if (node->has("first") || node->has("length")) {
        throw ConfigError("give either sites or first/length, not both");
      }
      auto b = Bipartition(n, node->req<std::vector<int>>("sites"), rule);
      node->done();
      return b;
    }
    auto b = Bipartition::contiguous(n, node->req<int>("first"), node->req<int>("length"), rule);
    node->done();
    return b;
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind("config.", 0) == 0) throw;
    throw ConfigError(node->path() + ": " + what);
  }
}

StateVector read_initial(Node& parent, std::string_view key, const BasisPtr& basis) {
  const auto text = parent.get<std::string>(key, "zeros");
  const int n = basis->num_sites();
  Bitstring z;
  try {
    z = text == "zeros" ? Bitstring::zeros(n) : Bitstring::parse(text);
  } catch (const InputDataError& e) {
    throw ConfigError(parent.field(key) + ": " + e.what());
  }
  if (z.size() != n) {
    throw ConfigError(parent.field(key) + ": bitstring has " + std::to_string(z.size()) + " sites, model has " +
                      std::to_string(n));
  }
  if (basis->constraint() == Constraint::kBlockade && !blockade_legal(z.bits())) {
    throw ConfigError(parent.field(key) + ": initial configuration violates the blockade");
  }
  if (basis->sector() == Sector::kAll) return StateVector::basis_state(basis, z);
  auto parent_basis = make_basis(n, basis->constraint());
  const auto iso = sector_isometry(*basis, *parent_basis);
  const CVector full = StateVector::basis_state(parent_basis, z).amplitudes();
  const CVector proj = iso.adjoint() * full;
  if (proj.norm() < 1e-12) throw ConfigError(parent.field(key) + ": initial state has no weight in the parity sector");
  return StateVector::normalized(basis, proj);
}

}  // namespace projens::cli
