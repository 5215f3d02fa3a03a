#pragma once

#include <map>
#include <string>
#include <vector>

#include "foldsim/geometry.hpp"
#include "foldsim/layout.hpp"

namespace foldsim {

// A crossed pair of acousto-optic deflector line arrays. Horizontal grids
// select sites by (x, y); diagonal grids are rotated 45 degrees and select by
// (u, v) = (x - y, x + y), which is what makes the two check classes
// separately addressable.
enum class AodOrientation { Horizontal, Diagonal };

const char* aod_orientation_name(AodOrientation o);

// One rigid move: every occupied site on the row/column line product is
// picked up and translated by (dx2, dy2). Horizontal batches list row lines
// as y values and column lines as x values; diagonal batches list u values
// and v values. Lines are doubled coordinates, sorted strictly increasing.
struct MoveBatch {
  std::vector<int> row_lines;
  std::vector<int> col_lines;
  int dx2 = 0;
  int dy2 = 0;

  std::string str() const;  // "BATCH rows:[..] cols:[..] d:(dx2,dy2)"
};

struct RearrangementPlan {
  AodOrientation orientation = AodOrientation::Horizontal;
  std::vector<MoveBatch> batches;
  std::map<Coord, Coord> target;  // intended site permutation

  std::string to_text() const;  // one BATCH line per move
};

struct PlanViolation {
  int batch = -1;
  Coord atom;      // moving atom's start position
  Coord obstacle;  // static atom it sweeps over or lands on
  bool landing = false;

  std::string str() const;
};

struct PlanCheck {
  std::vector<PlanViolation> violations;
  std::map<Coord, Coord> achieved;  // initial site -> final site
  bool matches_target = false;

  bool ok() const { return violations.empty() && matches_target; }
};

// Reflects a site set about the given axis using block-reversal: each halving
// depth parks one half outside the bounding box, slides the other half into
// place, then drops the parked half onto the vacated lines -- 4 batches per
// depth, 5 when the block size is odd. For a horizontal plan the axis is an
// x value and sites mirror to (2*axis2 - x, y); for a diagonal plan it is a
// u value and sites mirror to u' = 2*axis2 - u at fixed v. Throws
// std::invalid_argument unless the site set is mirror-symmetric and its
// occupied lines are uniformly spaced.
RearrangementPlan plan_reflection(const std::vector<Coord>& sites, int axis2,
                                  AodOrientation orientation);

// A -90 degree rotation of the data-qubit array: a horizontal reflection
// about the centre column followed by a diagonal reflection about the main
// diagonal, composing to (x, y) -> (y, 2(d-1) - x).
struct RotationPlan {
  RearrangementPlan horizontal;
  RearrangementPlan diagonal;
  std::map<Coord, Coord> target;
};

RotationPlan plan_rotation(const Layout& layout);

// Replays a plan on an initial occupancy, checking every moving atom's
// straight-line transit and landing against the atoms left behind.
PlanCheck verify_plan(const RearrangementPlan& plan, const std::vector<Coord>& occupied);

// True when the X- and Z-ancilla diagonal (u = x - y) line sets are disjoint,
// i.e. a diagonal grid can address one check class without touching the
// other. Horizontal grids do not have this property.
bool check_diagonal_addressing(const Layout& layout);

}  // namespace foldsim
