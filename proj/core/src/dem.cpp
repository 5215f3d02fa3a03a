#include "foldsim/dem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <tuple>

#include "foldsim/layout.hpp"

namespace foldsim {

namespace {

constexpr Pauli kDepolarize1Member[3] = {Pauli::X, Pauli::Y, Pauli::Z};

inline void depolarize2_member(int m, Pauli& pa, Pauli& pb) {
  int code = m + 1;
  static constexpr Pauli digit[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  pa = digit[(code >> 2) & 3];
  pb = digit[code & 3];
}

// Splits a Pauli into the X-type and Z-type factors (Y contributes to both).
void split_parts(const SparsePauli& f, SparsePauli& px, SparsePauli& pz) {
  for (const auto& [c, p] : f.support()) {
    if (p == Pauli::X || p == Pauli::Y) px.set(c, Pauli::X);
    if (p == Pauli::Z || p == Pauli::Y) pz.set(c, Pauli::Z);
  }
}

using EdgeKey = std::tuple<std::vector<int>, std::vector<int>, bool>;

EdgeKey key_of(const ErrorEffect& e) { return {e.dz, e.dx, e.logical_flip}; }

void toggle(std::set<int>& s, int v) {
  auto [it, inserted] = s.insert(v);
  if (!inserted) s.erase(it);
}

}  // namespace

RegionIndex build_region_index(const Circuit& c, const DetectorSet& ds) {
  RegionIndex idx;
  idx.n_detectors = static_cast<int>(ds.detectors.size());
  int n_moments = c.layers.empty() ? 0 : c.layers.back().ts.index() + 1;
  idx.sites.resize(n_moments);
  idx.x_class.resize(idx.n_detectors);

  auto insert_region = [&](int id, const std::map<int, SparsePauli>& snapshots) {
    for (const auto& [moment, region] : snapshots)
      for (const auto& [coord, pauli] : region.support())
        idx.sites[moment][coord].push_back({id, pauli});
  };

  for (const Detector& det : ds.detectors) {
    idx.x_class[det.id] = slot_is_x_class(det.coord) ? 1 : 0;
    insert_region(det.id, detecting_region(c, det).snapshots);
  }
  insert_region(-1, observable_region(c, ds).snapshots);
  return idx;
}

std::vector<ErrorLocation> enumerate_error_locations(const Circuit& c) {
  // Layer position lookup for the previous-moment placement of measurement
  // flips.
  std::map<int, int> layer_pos;
  for (std::size_t i = 0; i < c.layers.size(); ++i)
    layer_pos[c.layers[i].ts.index()] = static_cast<int>(i);

  std::vector<ErrorLocation> out;
  for (const NoiseChannel& ch : c.channels) {
    auto push = [&](SparsePauli fault, Timestamp at, double p) {
      ErrorLocation loc;
      loc.id = static_cast<int>(out.size());
      loc.timestamp = at;
      loc.fault = std::move(fault);
      loc.probability = p;
      loc.parent_channel = ch.id;
      out.push_back(std::move(loc));
    };
    switch (ch.kind) {
      case NoiseKind::Depolarize1:
      case NoiseKind::PreRoundDepolarize1:
        for (Pauli p : kDepolarize1Member)
          push(SparsePauli::single(ch.a, p), ch.ts, ch.probability / 3.0);
        break;
      case NoiseKind::Depolarize2:
        for (int m = 0; m < 15; ++m) {
          Pauli pa, pb;
          depolarize2_member(m, pa, pb);
          SparsePauli f;
          f.set(ch.a, pa);
          f.set(ch.b, pb);
          push(std::move(f), ch.ts, ch.probability / 15.0);
        }
        break;
      case NoiseKind::FlipReset: {
        const ResetLocation& r = c.resets.at(c.reset_index(ch.a, ch.ts.round));
        Pauli anti = (r.basis == GateKind::ResetX) ? Pauli::Z : Pauli::X;
        push(SparsePauli::single(ch.a, anti), ch.ts, ch.probability);
        break;
      }
      case NoiseKind::FlipMeasure: {
        const MeasurementLocation& m =
            c.measurements.at(c.measurement_index(ch.a, ch.ts.round));
        Pauli anti = (m.basis == GateKind::MeasX) ? Pauli::Z : Pauli::X;
        int pos = layer_pos.at(ch.ts.index());
        if (pos == 0) throw std::logic_error("measurement in the first moment");
        push(SparsePauli::single(ch.a, anti), c.layers[pos - 1].ts, ch.probability);
        break;
      }
    }
  }
  return out;
}

ErrorEffect effect_via_regions(const SparsePauli& fault, Timestamp at,
                               const RegionIndex& index) {
  std::set<int> dz, dx;
  bool logical = false;
  int moment = at.index();
  if (moment >= 0 && moment < static_cast<int>(index.sites.size())) {
    const auto& here = index.sites[moment];
    for (const auto& [coord, pauli] : fault.support()) {
      auto it = here.find(coord);
      if (it == here.end()) continue;
      for (const auto& [id, rp] : it->second) {
        if (pauli_commutes(pauli, rp)) continue;
        if (id < 0)
          logical = !logical;
        else
          toggle(index.x_class[id] ? dx : dz, id);
      }
    }
  }
  ErrorEffect eff;
  eff.dz.assign(dz.begin(), dz.end());
  eff.dx.assign(dx.begin(), dx.end());
  eff.logical_flip = logical;
  return eff;
}

ErrorEffect effect_via_frame(const SparsePauli& fault, Timestamp at,
                             const FrameSampler& sampler, const DetectorSet& ds) {
  ShotRecord rec = sampler.run_injected({{fault, at}});
  ErrorEffect eff;
  for (const Detector& det : ds.detectors) {
    if (!rec.detector_bits.get(det.id)) continue;
    (slot_is_x_class(det.coord) ? eff.dx : eff.dz).push_back(det.id);
  }
  eff.logical_flip = rec.logical_bit != ds.observable_reference;
  return eff;
}

double edge_weight_from_probability(double p) {
  if (p < 1e-12) p = 1e-12;
  if (p > 0.5 - 1e-9) p = 0.5 - 1e-9;
  return std::log((1.0 - p) / p);
}

DecodingHypergraph build_hypergraph(const Circuit& c, const DetectorSet& ds) {
  DecodingHypergraph hg;
  hg.n_detectors = static_cast<int>(ds.detectors.size());
  RegionIndex index = build_region_index(c, ds);
  hg.locations = enumerate_error_locations(c);
  hg.location_effects.reserve(hg.locations.size());
  for (const ErrorLocation& loc : hg.locations)
    hg.location_effects.push_back(effect_via_regions(loc.fault, loc.timestamp, index));

  // Pass 1: candidate edge identities from the X/Z-parts that satisfy the
  // endpoint criterion.
  std::map<EdgeKey, int> edge_of;
  auto candidate = [&](const SparsePauli& part, Timestamp at) {
    if (part.identity()) return;
    ErrorEffect eff = effect_via_regions(part, at, index);
    if (eff.trivial()) return;
    if (eff.dz.size() > 2 || eff.dx.size() > 2) return;
    edge_of.emplace(key_of(eff), 0);
  };
  for (const ErrorLocation& loc : hg.locations) {
    SparsePauli px, pz;
    split_parts(loc.fault, px, pz);
    candidate(px, loc.timestamp);
    candidate(pz, loc.timestamp);
  }

  // Canonical ordering: lexicographic on (dz, dx, logical); detector ids are
  // already time-then-space sorted, so this is a stable spacetime order.
  {
    int next = 0;
    for (auto& [key, id] : edge_of) id = next++;
  }
  std::vector<EdgeKey> key_by_id(edge_of.size());
  for (const auto& [key, id] : edge_of) key_by_id[id] = key;

  // Pass 2: decompose every location over the retained edges. A part that
  // failed the criterion falls back to its single-qubit factors, which come
  // from the same channel's members and therefore share its spacetime
  // neighbourhood.
  auto decompose_part = [&](const SparsePauli& part, Timestamp at,
                            std::vector<int>& into, int loc_id) {
    if (part.identity()) return;
    ErrorEffect eff = effect_via_regions(part, at, index);
    if (eff.trivial()) return;
    auto it = edge_of.find(key_of(eff));
    if (it != edge_of.end()) {
      into.push_back(it->second);
      return;
    }
    for (const auto& [coord, pauli] : part.support()) {
      ErrorEffect feff =
          effect_via_regions(SparsePauli::single(coord, pauli), at, index);
      if (feff.trivial()) continue;
      auto fit = edge_of.find(key_of(feff));
      if (fit == edge_of.end())
        throw std::logic_error("error location " + std::to_string(loc_id) +
                               " does not decompose into retained edges");
      into.push_back(fit->second);
    }
  };

  hg.decomposition.resize(hg.locations.size());
  for (const ErrorLocation& loc : hg.locations) {
    const ErrorEffect& full = hg.location_effects[loc.id];
    std::vector<int>& decomp = hg.decomposition[loc.id];
    if (full.trivial()) continue;
    SparsePauli px, pz;
    split_parts(loc.fault, px, pz);
    decompose_part(px, loc.timestamp, decomp, loc.id);
    decompose_part(pz, loc.timestamp, decomp, loc.id);
    // Edges appearing an even number of times cancel.
    std::sort(decomp.begin(), decomp.end());
    std::vector<int> reduced;
    for (std::size_t i = 0; i < decomp.size();) {
      std::size_t j = i;
      while (j < decomp.size() && decomp[j] == decomp[i]) ++j;
      if ((j - i) % 2) reduced.push_back(decomp[i]);
      i = j;
    }
    decomp = std::move(reduced);
    // The decomposition must reproduce the location's symptoms exactly.
    std::set<int> vz, vx;
    bool vl = false;
    for (int e : decomp) {
      const auto& [kz, kx, kl] = key_by_id[e];
      for (int d : kz) toggle(vz, d);
      for (int d : kx) toggle(vx, d);
      vl ^= kl;
    }
    bool match = vl == full.logical_flip &&
                 std::equal(vz.begin(), vz.end(), full.dz.begin(), full.dz.end()) &&
                 vz.size() == full.dz.size() &&
                 std::equal(vx.begin(), vx.end(), full.dx.begin(), full.dx.end()) &&
                 vx.size() == full.dx.size();
    if (!match)
      throw std::logic_error("decomposition of error location " +
                             std::to_string(loc.id) + " does not reproduce its effect");
  }

  // Pass 3: accumulate probabilities and provenance; drop identities no
  // decomposition references (a component whose parts cancel contributes to
  // nothing).
  std::vector<double> prob(edge_of.size(), 0.0);
  std::vector<std::vector<int>> sources(edge_of.size());
  std::vector<std::set<int>> chans(edge_of.size());
  for (const ErrorLocation& loc : hg.locations) {
    for (int e : hg.decomposition[loc.id]) {
      prob[e] = xor_probability(prob[e], loc.probability);
      sources[e].push_back(loc.id);
      chans[e].insert(loc.parent_channel);
    }
  }
  std::vector<int> remap(edge_of.size(), -1);
  for (std::size_t e = 0; e < key_by_id.size(); ++e) {
    if (sources[e].empty()) continue;
    DemEdge edge;
    edge.id = static_cast<int>(hg.edges.size());
    remap[e] = edge.id;
    std::tie(edge.dz, edge.dx, edge.logical_flip) = key_by_id[e];
    edge.probability = prob[e];
    edge.weight = edge_weight_from_probability(prob[e]);
    edge.sources = std::move(sources[e]);
    edge.channels.assign(chans[e].begin(), chans[e].end());
    hg.edges.push_back(std::move(edge));
  }
  for (auto& decomp : hg.decomposition)
    for (int& e : decomp) e = remap[e];

  for (const DemEdge& e : hg.edges) {
    if (e.dz.empty())
      hg.pure_x.push_back(e.id);
    else if (e.dx.empty())
      hg.pure_z.push_back(e.id);
    else
      hg.mixed.push_back(e.id);
  }

  // Ambiguity: distinct edges with an identical non-empty Z footprint.
  std::map<std::vector<int>, long> z_groups;
  for (const DemEdge& e : hg.edges)
    if (!e.dz.empty()) ++z_groups[e.dz];
  for (const auto& [fz, n] : z_groups) hg.ambiguity_pairs += n * (n - 1) / 2;

  if (!hg.mixed.empty()) {
    long single = 0;
    for (int e : hg.mixed)
      if (hg.edges[e].dx.size() == 1) ++single;
    hg.mixed_single_x_fraction = double(single) / double(hg.mixed.size());
  }
  return hg;
}

std::string hypergraph_to_text(const DecodingHypergraph& hg) {
  std::string out;
  char buf[64];
  auto ids = [](const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(v[i]);
    }
    return s + "]";
  };
  for (const DemEdge& e : hg.edges) {
    std::snprintf(buf, sizeof buf, "%.12g", e.probability);
    out += "EDGE ";
    out += buf;
    out += " dZ:" + ids(e.dz) + " dX:" + ids(e.dx) + " L:";
    out += e.logical_flip ? '1' : '0';
    out += " faults:" + ids(e.channels) + "\n";
  }
  return out;
}

}  // namespace foldsim
