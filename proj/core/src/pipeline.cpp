#include "foldsim/pipeline.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "foldsim/layout.hpp"

namespace foldsim {

const char* decoder_mode_name(DecoderMode mode) {
  switch (mode) {
    case DecoderMode::Plain:
      return "plain";
    case DecoderMode::VTB:
      return "vtb";
    case DecoderMode::VTB_PR:
      return "vtb-pr";
    case DecoderMode::VTB_FR:
      return "vtb-fr";
  }
  throw std::invalid_argument("unknown decoder mode");
}

DecoderMode decoder_mode_from_name(std::string_view name) {
  if (name == "plain") return DecoderMode::Plain;
  if (name == "vtb") return DecoderMode::VTB;
  if (name == "vtb-pr") return DecoderMode::VTB_PR;
  if (name == "vtb-fr") return DecoderMode::VTB_FR;
  throw std::invalid_argument("unknown decoder mode '" + std::string(name) + "'");
}

std::vector<std::vector<AttributionClass>> attribution_classes(const DecodingHypergraph& hg,
                                                               const MatchingGraph& g,
                                                               bool x_class) {
  std::vector<std::vector<AttributionClass>> out(g.edges.size());
  for (const GraphEdge& e : g.edges) {
    std::map<std::pair<std::vector<int>, bool>, AttributionClass> groups;
    for (int dem : e.dem_edges) {
      const DemEdge& de = hg.edges[dem];
      const std::vector<int>& cross = x_class ? de.dz : de.dx;
      AttributionClass& cls = groups[{cross, de.logical_flip}];
      if (cls.rep_member < 0) {
        cls.dx = cross;
        cls.logical_flip = de.logical_flip;
      }
      cls.probability = xor_probability(cls.probability, de.probability);
      if (cls.rep_member < 0 || de.probability > hg.edges[cls.rep_member].probability)
        cls.rep_member = dem;
    }
    std::vector<AttributionClass>& classes = out[e.id];
    for (auto& [key, cls] : groups) {
      cls.weight = edge_weight_from_probability(cls.probability);
      classes.push_back(std::move(cls));
    }
    // Most probable class first; the map key (footprint, flip) settles ties.
    std::stable_sort(classes.begin(), classes.end(),
                     [](const AttributionClass& a, const AttributionClass& b) {
                       return a.probability > b.probability;
                     });
  }
  return out;
}

CompiledPipeline compile_pipeline(const Circuit& noisy_circuit) {
  CompiledPipeline p;
  p.detectors = enumerate_detectors(noisy_circuit);
  p.hypergraph = build_hypergraph(noisy_circuit, p.detectors);
  p.gz = compile_matching_graph(p.hypergraph, p.detectors, /*x_class=*/false);
  p.gz_vtb = compile_matching_graph(p.hypergraph, p.detectors, /*x_class=*/false,
                                    /*with_virtual_time_boundaries=*/true);
  p.gx = compile_matching_graph(p.hypergraph, p.detectors, /*x_class=*/true);
  p.gz_classes = attribution_classes(p.hypergraph, p.gz, /*x_class=*/false);
  p.gz_vtb_classes = attribution_classes(p.hypergraph, p.gz_vtb, /*x_class=*/false);
  p.det_x.resize(p.detectors.detectors.size());
  for (const Detector& det : p.detectors.detectors)
    p.det_x[det.id] = slot_is_x_class(det.coord);
  p.dem_to_gx.assign(p.hypergraph.edges.size(), -1);
  for (const GraphEdge& e : p.gx.edges)
    for (int dem : e.dem_edges) p.dem_to_gx[dem] = e.id;
  return p;
}

ReweightResult reweight_for_chosen_edges(const CompiledPipeline& p,
                                         const std::vector<int>& chosen_dem_edges) {
  const DecodingHypergraph& hg = p.hypergraph;
  ReweightResult out;
  out.gx_weights.reserve(p.gx.edges.size());
  for (const GraphEdge& e : p.gx.edges) out.gx_weights.push_back(e.weight);

  for (int dem : chosen_dem_edges) {
    const DemEdge& chosen = hg.edges[dem];
    const double share = 1.0 / double(chosen.sources.size());
    for (int loc : chosen.sources) out.location_mass[loc] += share;
  }
  if (out.location_mass.empty()) return out;

  std::set<int> affected;
  for (const auto& [loc, mass] : out.location_mass)
    for (int dem : hg.decomposition[loc]) affected.insert(dem);
  out.affected_dem_edges.assign(affected.begin(), affected.end());

  // Rebuild the probability of each affected hyperedge from its sources, then
  // xor-recombine the graph edges containing one.
  std::map<int, double> dem_probability;
  for (int dem : out.affected_dem_edges) {
    double total = 0.0;
    for (int loc : hg.edges[dem].sources) {
      auto it = out.location_mass.find(loc);
      total += (it != out.location_mass.end()) ? it->second : hg.locations[loc].probability;
    }
    dem_probability[dem] = total;
  }
  std::set<int> touched_gx;
  for (int dem : out.affected_dem_edges)
    if (p.dem_to_gx[dem] >= 0) touched_gx.insert(p.dem_to_gx[dem]);
  for (int geid : touched_gx) {
    double combined = 0.0;
    for (int dem : p.gx.edges[geid].dem_edges) {
      auto it = dem_probability.find(dem);
      const double q = (it != dem_probability.end()) ? std::min(it->second, 1.0)
                                                     : hg.edges[dem].probability;
      combined = xor_probability(combined, q);
    }
    out.gx_weights[geid] = edge_weight_from_probability(combined);
  }
  return out;
}

namespace {

bool fault_flip(const MatchingGraph& g, const std::vector<int>& fault) {
  bool flip = false;
  for (int eid : fault) flip = flip != g.edges[eid].logical_flip;
  return flip;
}

double path_weight(const MatchResult& r, const std::vector<double>& weights) {
  double total = 0.0;
  for (const auto& path : r.matched_paths)
    for (int eid : path) total += weights[eid];
  return total;
}

// Enumerating every footprint assignment of a Z-side fault set is exponential
// in its heterogeneous edges; shots needing more candidates than this keep the
// most probable class on the overflowing edges.
constexpr long long kMaxAssignments = 64;

// Completes a Z-side solution through the X stage, trying each assignment of
// the matched edges to their attribution classes and keeping the smallest
// total weight.  The first assignment visited picks the most probable class
// everywhere; later ones only replace it when strictly lighter.
DecodeOutcome complete_outcome(const CompiledPipeline& p, DecoderMode mode,
                               const std::vector<std::vector<AttributionClass>>& classes,
                               const MatchingGraph& gz, const MatchResult& rz,
                               const std::vector<int>& x_defects) {
  std::vector<int> radix;  // class choices explored per fault edge
  long long assignments = 1;
  for (int geid : rz.fault_set) {
    const auto n = static_cast<long long>(classes[geid].size());
    const bool room = assignments * n <= kMaxAssignments;
    radix.push_back(room ? int(n) : 1);
    if (room) assignments *= n;
  }

  DecodeOutcome best;
  bool have_best = false;
  std::vector<int> choice(rz.fault_set.size(), 0);
  for (;;) {
    double z_weight = 0.0;
    bool z_flip = false;
    std::set<int> dx(x_defects.begin(), x_defects.end());
    std::vector<int> chosen_members;
    for (size_t i = 0; i < rz.fault_set.size(); ++i) {
      const AttributionClass& cls = classes[rz.fault_set[i]][choice[i]];
      z_weight += cls.weight;
      z_flip = z_flip != cls.logical_flip;
      chosen_members.push_back(cls.rep_member);
      for (int det : cls.dx) {
        auto [it, fresh] = dx.insert(det);
        if (!fresh) dx.erase(it);
      }
    }
    const std::vector<int> dx_corrected(dx.begin(), dx.end());

    MatchResult rx;
    double x_weight = 0.0;
    if (mode == DecoderMode::Plain || mode == DecoderMode::VTB) {
      rx = decode(p.gx, dx_corrected);
      x_weight = rx.total_weight;
    } else {
      const ReweightResult rw = reweight_for_chosen_edges(p, chosen_members);
      if (mode == DecoderMode::VTB_PR) {
        rx = decode(p.gx, dx_corrected);
        x_weight = path_weight(rx, rw.gx_weights);
      } else {
        rx = decode(p.gx, dx_corrected, &rw.gx_weights);
        x_weight = rx.total_weight;
      }
    }

    const double total = z_weight + x_weight;
    if (!have_best || total < best.total_weight) {
      have_best = true;
      best.total_weight = total;
      best.z_weight = z_weight;
      best.x_weight = x_weight;
      best.logical_correction = z_flip != fault_flip(p.gx, rx.fault_set);
      best.z_fault_edges = rz.fault_set;
      best.x_fault_edges = rx.fault_set;
    }

    size_t digit = 0;
    while (digit < choice.size() && ++choice[digit] == radix[digit]) choice[digit++] = 0;
    if (digit == choice.size()) break;
  }
  return best;
}

}  // namespace

DecodeOutcome decode_shot(const CompiledPipeline& p, const BitVec& detector_bits,
                          DecoderMode mode) {
  if (detector_bits.size() != p.detectors.detectors.size())
    throw std::invalid_argument("detector bit count mismatch");
  std::vector<int> dz, dx;
  for (size_t i = 0; i < p.det_x.size(); ++i)
    if (detector_bits.get(i)) (p.det_x[i] ? dx : dz).push_back(int(i));

  if (mode == DecoderMode::Plain) {
    const MatchResult rz = decode(p.gz, dz);
    return complete_outcome(p, mode, p.gz_classes, p.gz, rz, dx);
  }

  DecodeOutcome out;
  bool have_best = false;
  for (int condition = 0; condition < 4; ++condition) {
    std::vector<int> dz_cond = dz;
    if (condition & 2) dz_cond.push_back(p.gz_vtb.v0);
    if (condition & 1) dz_cond.push_back(p.gz_vtb.vf);
    const MatchResult rz = decode(p.gz_vtb, dz_cond);
    DecodeOutcome cand = complete_outcome(p, mode, p.gz_vtb_classes, p.gz_vtb, rz, dx);
    cand.condition = condition;
    if (!have_best || cand.total_weight < out.total_weight) {
      have_best = true;
      out = std::move(cand);
    }
  }
  return out;
}

}  // namespace foldsim
