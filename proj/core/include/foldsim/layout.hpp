#pragma once

#include <map>
#include <utility>
#include <vector>

#include "foldsim/geometry.hpp"

namespace foldsim {

// Rotated surface-code patch in doubled coordinates.
//
//   data qubits    : (even, even) in [0, 2d-2]^2
//   ancilla qubits : (odd, odd) in [-1, 2d-1]^2; interior slots all occupied,
//                    rim slots occupied on alternating positions (weight-2
//                    checks); X and Z ancillas live on disjoint diagonals:
//                    X iff (x - y) % 4 == 0, Z iff (x - y) % 4 == 2.
//   logical X      : X on the data row y = 0 (bottom edge)
//   logical Z      : Z on the data column x = 0 (left edge)
//
// The CNOT schedule runs four layers; each ancilla touches its present
// diagonal neighbours in a fixed corner order (X-type: NE,SE,NW,SW;
// Z-type: NE,NW,SE,SW). The fold layer conjugates the patch across the main
// diagonal x = y: S / S-dagger alternating along the diagonal, CZ on every
// mirrored interior pair.
struct Layout {
  int distance = 0;
  std::vector<Coord> data;       // sorted
  std::vector<Coord> ancilla_x;  // sorted
  std::vector<Coord> ancilla_z;  // sorted

  // Ancilla -> data neighbours in CNOT-layer order (absent corners skipped,
  // relative order preserved). This is both the stabilizer support and the
  // extraction schedule.
  std::map<Coord, std::vector<Coord>> stabilizer_support;

  // Fold layer: (qubit, true for S-dagger) along the diagonal, then CZ pairs
  // {(x,y),(y,x)} over the interior region, first element below the diagonal.
  std::vector<std::pair<Coord, bool>> fold_phase_targets;
  std::vector<std::pair<Coord, Coord>> fold_cz_pairs;

  bool is_data(Coord c) const;
  bool is_x_ancilla(Coord c) const;
  bool is_z_ancilla(Coord c) const;
  bool is_ancilla(Coord c) const { return is_x_ancilla(c) || is_z_ancilla(c); }

  // CNOT pairs of one extraction layer, layer in [1,4]; pair = (control,
  // target): ancilla controls for X-type checks, data controls for Z-type.
  std::vector<std::pair<Coord, Coord>> cnot_layer(int layer) const;

  std::vector<Coord> logical_x_support() const;  // data row y = 0
  std::vector<Coord> logical_z_support() const;  // data column x = 0

  std::vector<Coord> all_qubits() const;  // data + ancillas, sorted
};

// Builds and validates the layout. Throws std::invalid_argument for even or
// sub-3 distances, std::logic_error if internal validation fails.
Layout build_layout(int distance);

// Static classification helpers (independent of a built Layout) -------------

// True iff the ancilla slot at c is occupied for the given distance.
bool ancilla_slot_occupied(int distance, Coord c);

// X/Z class of an ancilla slot from its diagonal: X iff (x-y) % 4 == 0.
bool slot_is_x_class(Coord c);

// Half-cycle reference structure: the unrotated surface code the patch morphs
// into after the first two CNOT layers -------------------------------------

// One stabilizer of the unrotated code: plaquette centre + support.
struct UnrotatedCheck {
  Coord centre;               // (even, odd) for X-type, (odd, even) for Z-type
  std::vector<Coord> support; // region qubits at centre +- unit steps
  bool x_type = false;
};

// All checks of the unrotated code living on the region [0, 2d-2]^2
// (d^2 data + (d-1)^2 interior ancillas). Boundary checks are truncated to
// weight 3 / 2 at the region edge.
std::vector<UnrotatedCheck> unrotated_checks(int distance);

// Logical operators of the unrotated code: X along the data row y = 0
// (all region qubits with y = 0), Z along the column x = 0.
std::vector<Coord> unrotated_logical_x(int distance);
std::vector<Coord> unrotated_logical_z(int distance);

// Rim ancillas are outside the unrotated region and sit unentangled at the
// half-cycle checkpoint: X-type rims in |+>, Z-type rims in |0>.
std::vector<Coord> rim_ancillas(const Layout& layout);

}  // namespace foldsim
