#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "foldsim/circuit.hpp"
#include "foldsim/dem.hpp"
#include "foldsim/frame.hpp"
#include "foldsim/matching.hpp"

namespace foldsim {

// Plain: Z-type matching, then X-type matching with the X defect set
// corrected by the cross-class footprints of the Z-side choices; when a
// matched Z edge bundles mechanisms with different X footprints, every
// footprint assignment is scored and the lightest total kept.
// VTB: the Z-type matching additionally explores all four assignments of the
// two virtual time-boundary nodes.
// VTB_PR: as VTB, but each candidate's X-side cost is re-scored with weights
// conditioned on the Z-side choices (selection still on original weights).
// VTB_FR: as VTB, but the X-side matching itself runs on conditioned weights.
enum class DecoderMode { Plain, VTB, VTB_PR, VTB_FR };

const char* decoder_mode_name(DecoderMode mode);
DecoderMode decoder_mode_from_name(std::string_view name);

// One way a matched Z-side graph edge can act on the X class: hyperedge
// members sharing a cross footprint and logical flip, aggregated.
struct AttributionClass {
  std::vector<int> dx;
  bool logical_flip = false;
  double probability = 0.0;  // xor-combined over the class members
  double weight = 0.0;
  int rep_member = -1;  // most probable hyperedge of the class
};

struct DecodeOutcome {
  bool logical_correction = false;
  double total_weight = 0.0;
  double z_weight = 0.0;  // summed attribution-class weights of the Z fault set
  double x_weight = 0.0;
  int condition = -1;  // chosen virtual-boundary assignment (0..3); -1 for Plain
  std::vector<int> z_fault_edges;  // graph edge ids in the Z-side fault set
  std::vector<int> x_fault_edges;
};

struct CompiledPipeline {
  DetectorSet detectors;
  DecodingHypergraph hypergraph;
  MatchingGraph gz;      // Z-class graph
  MatchingGraph gz_vtb;  // Z-class graph with virtual time-boundary nodes
  MatchingGraph gx;      // X-class graph
  std::vector<std::vector<AttributionClass>> gz_classes;      // per gz edge
  std::vector<std::vector<AttributionClass>> gz_vtb_classes;  // per gz_vtb edge
  std::vector<bool> det_x;     // detector id -> X class
  std::vector<int> dem_to_gx;  // hyperedge id -> gx edge id, -1 if no X footprint
};

// Enumerates detectors, builds the hypergraph and compiles all three matching
// graphs of a noisy circuit.
CompiledPipeline compile_pipeline(const Circuit& noisy_circuit);

// Distinct (cross footprint, logical flip) classes of each graph edge's
// member hyperedges, most probable class first.
std::vector<std::vector<AttributionClass>> attribution_classes(const DecodingHypergraph& hg,
                                                               const MatchingGraph& g,
                                                               bool x_class);

// Weights of the X-class graph conditioned on a set of decoded hyperedges:
// each spreads unit reliability mass over its error locations; hyperedges
// decomposed from any touched location get their probability rebuilt from the
// reassigned masses, every other edge keeps its original weight.
struct ReweightResult {
  std::map<int, double> location_mass;  // touched location id -> reassigned mass
  std::vector<int> affected_dem_edges;  // hyperedges with a touched source (sorted)
  std::vector<double> gx_weights;       // full per-edge weight vector for gx
};

ReweightResult reweight_for_chosen_edges(const CompiledPipeline& p,
                                         const std::vector<int>& chosen_dem_edges);

DecodeOutcome decode_shot(const CompiledPipeline& p, const BitVec& detector_bits,
                          DecoderMode mode);

}  // namespace foldsim
