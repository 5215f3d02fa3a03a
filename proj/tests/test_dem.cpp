#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "foldsim/circuit.hpp"
#include "foldsim/dem.hpp"
#include "foldsim/layout.hpp"

using namespace foldsim;

namespace {

DecodingHypergraph graph_of(Circuit c, double p) {
  apply_noise(c, p);
  return build_hypergraph(c, enumerate_detectors(c));
}

const Circuit& mem3() {
  static const Circuit c = [] {
    Circuit c = build_x_memory(build_layout(3), 4);
    apply_noise(c, 1e-3);
    return c;
  }();
  return c;
}

const DecodingHypergraph& mem3_graph() {
  static const DecodingHypergraph hg = build_hypergraph(mem3(), enumerate_detectors(mem3()));
  return hg;
}

const Circuit& s2d3() {
  static const Circuit c = [] {
    Circuit c = build_s2(build_layout(3), 2, 2);
    apply_noise(c, 1e-3);
    return c;
  }();
  return c;
}

const DecodingHypergraph& s2d3_graph() {
  static const DecodingHypergraph hg = build_hypergraph(s2d3(), enumerate_detectors(s2d3()));
  return hg;
}

}  // namespace

TEST_CASE("edge weights and probability combinator") {
  CHECK(edge_weight_from_probability(0.01) == doctest::Approx(std::log(99.0)));
  CHECK(edge_weight_from_probability(0.5) == doctest::Approx(0.0).epsilon(1e-6));
  // Clamping keeps degenerate inputs finite.
  CHECK(edge_weight_from_probability(0.0) == doctest::Approx(std::log((1 - 1e-12) / 1e-12)));
  CHECK(edge_weight_from_probability(0.9) == doctest::Approx(edge_weight_from_probability(0.5)));
  CHECK(xor_probability(0.1, 0.1) == doctest::Approx(0.18));
  CHECK(xor_probability(0.0, 0.25) == doctest::Approx(0.25));
}

TEST_CASE("memory hypergraph census at d = 3") {
  const DecodingHypergraph& hg = mem3_graph();
  CHECK(hg.n_detectors == 32);
  CHECK(hg.locations.size() == 2086);
  CHECK(hg.edges.size() == 110);
  CHECK(hg.pure_z.size() == 39);
  CHECK(hg.pure_x.size() == 71);
  CHECK(hg.mixed.size() == 0);
  CHECK(hg.ambiguity_pairs == 0);
}

TEST_CASE("fold-circuit hypergraph census at d = 3 and d = 5") {
  const DecodingHypergraph& d3 = s2d3_graph();
  CHECK(d3.n_detectors == 64);
  CHECK(d3.ambiguity_pairs == 26);
  CHECK(!d3.mixed.empty());

  Circuit c5 = build_s2(build_layout(5), 2, 3);
  apply_noise(c5, 1e-3);
  const DecodingHypergraph d5 = build_hypergraph(c5, enumerate_detectors(c5));
  CHECK(d5.n_detectors == 216);
  CHECK(d5.edges.size() == 1036);
  CHECK(d5.pure_z.size() == 355);
  CHECK(d5.pure_x.size() == 527);
  CHECK(d5.mixed.size() == 154);
  CHECK(d5.ambiguity_pairs == 82);
  // Nearly all hyperedge errors touch exactly one X-class detector.
  CHECK(d5.mixed_single_x_fraction >= 0.9);
  for (int eid : d5.mixed) CHECK(d5.edges[eid].dx.size() <= 2);
}

TEST_CASE("edge structure invariants") {
  for (const DecodingHypergraph* hg : {&mem3_graph(), &s2d3_graph()}) {
    std::set<std::tuple<std::vector<int>, std::vector<int>, bool>> identities;
    for (std::size_t i = 0; i < hg->edges.size(); ++i) {
      const DemEdge& e = hg->edges[i];
      CHECK(e.id == int(i));
      CHECK(e.dz.size() <= 2);
      CHECK(e.dx.size() <= 2);
      CHECK(!(e.dz.empty() && e.dx.empty()));
      CHECK(std::is_sorted(e.dz.begin(), e.dz.end()));
      CHECK(std::is_sorted(e.dx.begin(), e.dx.end()));
      CHECK(identities.insert({e.dz, e.dx, e.logical_flip}).second);
      CHECK(e.probability > 0.0);
      CHECK(e.probability < 0.5);
      CHECK(e.weight == doctest::Approx(edge_weight_from_probability(e.probability)));
      CHECK(!e.sources.empty());
      // Accumulation can only raise the probability above any contributor.
      double max_src = 0.0;
      for (int loc : e.sources) {
        CHECK(std::binary_search(hg->decomposition[loc].begin(), hg->decomposition[loc].end(),
                                 e.id));
        max_src = std::max(max_src, hg->locations[loc].probability);
      }
      CHECK(e.probability >= max_src - 1e-15);
      CHECK(std::is_sorted(e.channels.begin(), e.channels.end()));
      CHECK(std::adjacent_find(e.channels.begin(), e.channels.end()) == e.channels.end());
    }
    // Class partition covers the edge set exactly once.
    CHECK(hg->pure_z.size() + hg->pure_x.size() + hg->mixed.size() == hg->edges.size());
  }
}

TEST_CASE("every location decomposes exactly over the retained edges") {
  for (const DecodingHypergraph* hg : {&mem3_graph(), &s2d3_graph()}) {
    REQUIRE(hg->decomposition.size() == hg->locations.size());
    for (const ErrorLocation& loc : hg->locations) {
      std::set<int> dz, dx;
      bool flip = false;
      for (int eid : hg->decomposition[loc.id]) {
        const DemEdge& e = hg->edges[eid];
        for (int d : e.dz) dz.count(d) ? (void)dz.erase(d) : (void)dz.insert(d);
        for (int d : e.dx) dx.count(d) ? (void)dx.erase(d) : (void)dx.insert(d);
        flip ^= e.logical_flip;
        CHECK(std::binary_search(e.sources.begin(), e.sources.end(), loc.id));
      }
      const ErrorEffect& eff = hg->location_effects[loc.id];
      CHECK(std::vector<int>(dz.begin(), dz.end()) == eff.dz);
      CHECK(std::vector<int>(dx.begin(), dx.end()) == eff.dx);
      CHECK(flip == eff.logical_flip);
    }
  }
}

TEST_CASE("region and frame effect oracles agree on every location at d = 3") {
  for (const Circuit* c : {&mem3(), &s2d3()}) {
    const DetectorSet ds = enumerate_detectors(*c);
    const RegionIndex index = build_region_index(*c, ds);
    const FrameSampler sampler(*c, ds);
    const auto locations = enumerate_error_locations(*c);
    CHECK(!locations.empty());
    for (const ErrorLocation& loc : locations) {
      const ErrorEffect via_regions = effect_via_regions(loc.fault, loc.timestamp, index);
      const ErrorEffect via_frame = effect_via_frame(loc.fault, loc.timestamp, sampler, ds);
      REQUIRE(via_regions == via_frame);
    }
  }
}

TEST_CASE("error locations enumerate channel components in canonical order") {
  const Circuit& c = mem3();
  const auto locations = enumerate_error_locations(c);
  std::size_t expected = 0;
  for (const NoiseChannel& ch : c.channels)
    expected += ch.kind == NoiseKind::Depolarize2 ? 15
                : ch.kind == NoiseKind::FlipMeasure || ch.kind == NoiseKind::FlipReset
                    ? 1
                    : 3;
  CHECK(locations.size() == expected);
  int prev_channel = -1;
  for (const ErrorLocation& loc : locations) {
    CHECK(loc.parent_channel >= prev_channel);
    prev_channel = loc.parent_channel;
    CHECK(!loc.fault.identity());
    const NoiseChannel& ch = c.channels[loc.parent_channel];
    const double k = ch.kind == NoiseKind::Depolarize2 ? 15.0
                     : ch.kind == NoiseKind::Depolarize1 ||
                             ch.kind == NoiseKind::PreRoundDepolarize1
                         ? 3.0
                         : 1.0;
    CHECK(loc.probability == doctest::Approx(ch.probability / k));
  }
}

TEST_CASE("single-qubit sources reach every memory edge") {
  // Two-qubit gate faults reduce to combinations already generated by
  // single-qubit errors; no memory edge exists solely through a CX channel.
  const DecodingHypergraph& hg = mem3_graph();
  for (const DemEdge& e : hg.edges) {
    bool single = false;
    for (int loc : e.sources) single |= hg.locations[loc].fault.weight() == 1;
    CHECK(single);
  }
}

TEST_CASE("fold CZ faults decompose into at most four edges") {
  const Circuit& c = s2d3();
  const DecodingHypergraph& hg = s2d3_graph();
  for (const ErrorLocation& loc : hg.locations) {
    if (c.channels[loc.parent_channel].kind != NoiseKind::Depolarize2) continue;
    if (loc.timestamp.label != MidCycleLabel::PostS) continue;
    CHECK(hg.decomposition[loc.id].size() <= 4);
  }
}

TEST_CASE("hypergraph text export is stable and line-per-edge") {
  const DecodingHypergraph& hg = mem3_graph();
  const std::string text = hypergraph_to_text(hg);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == hg.edges.size());
  CHECK(text.substr(0, 5) == "EDGE ");
  CHECK(text.find(" dZ:[") != std::string::npos);
  CHECK(text.find(" dX:[") != std::string::npos);
  CHECK(text.find(" L:0") != std::string::npos);
  CHECK(text.find(" faults:[") != std::string::npos);

  Circuit again = build_x_memory(build_layout(3), 4);
  apply_noise(again, 1e-3);
  const DecodingHypergraph hg2 = build_hypergraph(again, enumerate_detectors(again));
  CHECK(hypergraph_to_text(hg2) == text);
}

TEST_CASE("higher physical noise raises edge probabilities monotonically") {
  const DecodingHypergraph lo = graph_of(build_x_memory(build_layout(3), 2), 1e-3);
  const DecodingHypergraph hi = graph_of(build_x_memory(build_layout(3), 2), 5e-3);
  REQUIRE(lo.edges.size() == hi.edges.size());
  for (std::size_t i = 0; i < lo.edges.size(); ++i) {
    CHECK(lo.edges[i].dz == hi.edges[i].dz);
    CHECK(lo.edges[i].dx == hi.edges[i].dx);
    CHECK(hi.edges[i].probability > lo.edges[i].probability);
    CHECK(hi.edges[i].weight < lo.edges[i].weight);
  }
}
