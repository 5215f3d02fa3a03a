#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "foldsim/circuit.hpp"
#include "foldsim/frame.hpp"
#include "foldsim/trajectory.hpp"

namespace foldsim {

// One elementary Pauli fault: a component of a noise channel, placed
// immediately after the moment `timestamp`. Measurement flips are represented
// as the anticommuting Pauli on the measured qubit just before the
// measurement layer; reset flips as the anticommuting Pauli right after the
// reset. Both reproduce the recorded-outcome flip exactly.
struct ErrorLocation {
  int id = -1;
  Timestamp timestamp;
  SparsePauli fault;        // unsigned, non-identity
  double probability = 0.0; // component probability, in (0, 0.5]
  int parent_channel = -1;
};

// Symptoms of a fault: triggered detectors split by check class, plus the
// induced flip of the logical observable.
struct ErrorEffect {
  std::vector<int> dz;  // sorted ids of triggered Z-class detectors
  std::vector<int> dx;  // sorted ids of triggered X-class detectors
  bool logical_flip = false;

  bool trivial() const { return dz.empty() && dx.empty() && !logical_flip; }
  friend bool operator==(const ErrorEffect&, const ErrorEffect&) = default;
};

// A hyperedge of the decoding model: a set of symptoms with at most two
// endpoints in each class, carrying the xor-combined probability of every
// error location whose decomposition contains it.
struct DemEdge {
  int id = -1;
  std::vector<int> dz;       // <= 2 Z-class endpoints
  std::vector<int> dx;       // <= 2 X-class endpoints
  bool logical_flip = false;
  double probability = 0.0;
  double weight = 0.0;       // ln((1-p)/p), clamped
  std::vector<int> sources;  // error-location ids decomposing through this edge
  std::vector<int> channels; // parent channel ids (sorted, deduplicated)
};

// Live detecting-region snapshots, indexed by moment, for fast fault-effect
// queries: sites[t][q] lists every region crossing qubit q right after moment
// t together with its restriction there. Detector id -1 is the observable.
struct RegionIndex {
  int n_detectors = 0;
  std::vector<char> x_class;  // per detector id
  std::vector<std::map<Coord, std::vector<std::pair<int, Pauli>>>> sites;
};

struct DecodingHypergraph {
  int n_detectors = 0;
  std::vector<ErrorLocation> locations;        // E_tot, id = index
  std::vector<ErrorEffect> location_effects;   // parallel to locations
  std::vector<DemEdge> edges;                  // E, canonical order, id = index
  std::vector<std::vector<int>> decomposition; // per location: sorted edge ids

  // Partition of E by endpoint classes.
  std::vector<int> pure_z;  // only Z endpoints
  std::vector<int> pure_x;  // only X endpoints
  std::vector<int> mixed;   // endpoints in both classes

  // Number of unordered edge pairs sharing an identical non-empty Z
  // footprint (distinguishable only through their X endpoints or logical).
  long ambiguity_pairs = 0;
  // Fraction of mixed edges with exactly one X endpoint.
  double mixed_single_x_fraction = 0.0;
};

RegionIndex build_region_index(const Circuit& c, const DetectorSet& ds);

// Pauli components of every noise channel, in channel order then canonical
// member order (X,Y,Z for one qubit; the 15 base-4 pairs for two).
std::vector<ErrorLocation> enumerate_error_locations(const Circuit& c);

// Symptoms computed by commutation against the live detecting regions at the
// fault's moment.
ErrorEffect effect_via_regions(const SparsePauli& fault, Timestamp at,
                               const RegionIndex& index);

// Independent oracle: inject the fault into a noiseless Pauli-frame run and
// read the triggered detectors off the sampled record.
ErrorEffect effect_via_frame(const SparsePauli& fault, Timestamp at,
                             const FrameSampler& sampler, const DetectorSet& ds);

// Builds the full decoding hypergraph: enumerates E_tot, splits each fault
// into its X-part and Z-part candidate edges, retains candidates with at most
// two endpoints per class, merges identical symptom sets, and decomposes
// every error location over the retained edges (two-qubit parts fall back to
// their single-qubit factors). Throws std::logic_error if any location fails
// to decompose exactly.
DecodingHypergraph build_hypergraph(const Circuit& c, const DetectorSet& ds);

// ln((1-p)/p) with p clamped to [1e-12, 0.5 - 1e-9].
double edge_weight_from_probability(double p);

// Combined probability that an odd number of two independent flips occur.
inline double xor_probability(double p, double q) { return p + q - 2.0 * p * q; }

// Byte-stable export: one line per edge,
//   EDGE <p> dZ:[ids] dX:[ids] L:<0|1> faults:[channel ids]
std::string hypergraph_to_text(const DecodingHypergraph& hg);

}  // namespace foldsim
