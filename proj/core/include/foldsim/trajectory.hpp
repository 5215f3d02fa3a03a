#pragma once

#include <map>
#include <string>
#include <vector>

#include "foldsim/circuit.hpp"
#include "foldsim/tableau.hpp"

namespace foldsim {

// A parity check on recorded measurement outcomes whose value is fixed in
// every noiseless run of the circuit.
struct Detector {
  int id = -1;
  std::vector<int> measurements;       // sorted indices into Circuit::measurements
  bool reference_parity = false;       // XOR of member outcomes in a noiseless run
  std::vector<int> generating_resets;  // sorted indices into Circuit::resets
  Coord coord;                         // site of the earliest member
  int t2 = 0;                          // doubled time coordinate
  bool z_type = false;                 // every member is a Z-basis measurement
};

struct DetectorSet {
  std::vector<Detector> detectors;     // sorted by (t2, x2, y2), ids assigned
  std::vector<int> observable;         // measurement indices of the logical readout
  bool observable_reference = false;   // parity of the observable in a noiseless run
  std::vector<int> observable_resets;  // resets generating the logical relation
};

// Walks the noiseless circuit on a dependency-tracking tableau, emitting every
// deterministic outcome relation as a detector (reduced to a minimal
// generating set), and separating out the logical-observable relation.
// Throws std::logic_error if some extraction measurement ends up uncovered.
DetectorSet enumerate_detectors(const Circuit& c);

// Noiseless tableau advanced through every layer with timestamp <= ts; random
// outcomes take the 0 branch. Qubit indices follow Circuit::qubits.
Tableau tableau_at(const Circuit& c, Timestamp ts);
std::string stabilizer_group_at(const Circuit& c, Timestamp ts);

// Canonical form of the group generated by `gens` over the given qubit
// ordering; comparable with Tableau::canonical_stabilizers output.
std::string canonical_group(const std::vector<SparsePauli>& gens,
                            const std::vector<Coord>& qubits);

// In-place conjugation of a signed Pauli by one unitary instruction.
void conjugate_forward(SparsePauli& p, const Instruction& ins);

// A stabilizer flow: basis Paulis launched at chosen resets and conjugated
// through the rest of the circuit, peeling factors off at the measurements
// they have converged to.
struct FlowResult {
  // State at each checkpoint (keyed by Timestamp::index()), after that
  // moment's instructions; empty states are omitted.
  std::map<int, SparsePauli> snapshots;
  std::vector<int> absorbed;  // sorted measurement indices peeled off
  int final_sign = +1;        // sign once the flow has fully terminated
};

// Throws std::logic_error if the flow anticommutes with a measurement, passes
// through a reset, or fails to terminate by the end of the circuit.
FlowResult propagate_flow(const Circuit& c, const std::vector<int>& launch_resets);

// Backward trace of a candidate outcome relation: multiplies in each member's
// measurement operator at its moment and conjugates the running region toward
// the start of the circuit. Every reset the region terminates on is recorded;
// the region must vanish exactly there, so the member set alone determines the
// generating resets and the reference sign. Throws std::logic_error if the
// members do not form a deterministic relation.
struct RegionResult {
  // Region after each moment (keyed by Timestamp::index()); empty omitted.
  std::map<int, SparsePauli> snapshots;
  std::vector<int> generating_resets;  // sorted reset indices
  int final_sign = +1;
};
RegionResult trace_region(const Circuit& c, const std::vector<int>& members);

// Detecting region of a detector; validates that the absorbed measurements
// are exactly the detector's members and that the terminal sign matches the
// reference parity.
FlowResult detecting_region(const Circuit& c, const Detector& det);
FlowResult observable_region(const Circuit& c, const DetectorSet& ds);

// Conjugates `p` from checkpoint `from` (exclusive) to `to` (inclusive);
// measurements and resets inside the window must not touch its support.
SparsePauli conjugate_between(const Circuit& c, const SparsePauli& p,
                              Timestamp from, Timestamp to);

}  // namespace foldsim
