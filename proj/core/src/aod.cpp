#include "foldsim/aod.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace foldsim {

const char* aod_orientation_name(AodOrientation o) {
  return o == AodOrientation::Horizontal ? "horizontal" : "diagonal";
}

namespace {

std::string int_list(const std::vector<int>& xs) {
  std::string out = "[";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out + "]";
}

// Moving-line coordinate: the one the reflection inverts.
int moving_coord(AodOrientation o, Coord c) {
  return o == AodOrientation::Horizontal ? c.x2 : c.x2 - c.y2;
}

// Track coordinate: constant for every atom of a moving line.
int track_coord(AodOrientation o, Coord c) {
  return o == AodOrientation::Horizontal ? c.y2 : c.x2 + c.y2;
}

// Translation shifting the moving coordinate by `dm` at fixed track.
std::pair<int, int> along_move(AodOrientation o, int dm) {
  if (o == AodOrientation::Horizontal) return {dm, 0};
  if (dm % 2) throw std::logic_error("diagonal line shift must be even");
  return {dm / 2, -dm / 2};
}

// Translation shifting the track coordinate by `dt` at fixed moving line.
std::pair<int, int> along_track(AodOrientation o, int dt) {
  if (o == AodOrientation::Horizontal) return {0, dt};
  if (dt % 2) throw std::logic_error("diagonal track shift must be even");
  return {dt / 2, dt / 2};
}

MoveBatch make_batch(AodOrientation o, std::vector<int> moving, std::vector<int> tracks,
                     std::pair<int, int> d) {
  MoveBatch b;
  // Horizontal grids select columns by x; diagonal grids select rows by u.
  if (o == AodOrientation::Horizontal) {
    b.col_lines = std::move(moving);
    b.row_lines = std::move(tracks);
  } else {
    b.row_lines = std::move(moving);
    b.col_lines = std::move(tracks);
  }
  b.dx2 = d.first;
  b.dy2 = d.second;
  return b;
}

bool on_open_segment(Coord a, Coord b, Coord q) {
  const long long abx = b.x2 - a.x2, aby = b.y2 - a.y2;
  const long long aqx = q.x2 - a.x2, aqy = q.y2 - a.y2;
  if (abx * aqy - aby * aqx != 0) return false;  // not collinear
  const long long dot = aqx * abx + aqy * aby;
  const long long len2 = abx * abx + aby * aby;
  return dot > 0 && dot < len2;
}

}  // namespace

std::string MoveBatch::str() const {
  std::string out = "BATCH rows:";
  out += int_list(row_lines);
  out += " cols:";
  out += int_list(col_lines);
  char buf[48];
  std::snprintf(buf, sizeof buf, " d:(%d,%d)", dx2, dy2);
  return out + buf;
}

std::string RearrangementPlan::to_text() const {
  std::string out;
  for (const MoveBatch& b : batches) {
    out += b.str();
    out += '\n';
  }
  return out;
}

std::string PlanViolation::str() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "batch %d: atom %s %s %s", batch, atom.str().c_str(),
                landing ? "lands on" : "sweeps over", obstacle.str().c_str());
  return buf;
}

RearrangementPlan plan_reflection(const std::vector<Coord>& sites, int axis2,
                                  AodOrientation orientation) {
  RearrangementPlan plan;
  plan.orientation = orientation;
  if (sites.empty()) return plan;

  std::set<Coord> site_set(sites.begin(), sites.end());
  std::set<int> lines_set, tracks_set;
  for (Coord c : sites) {
    const int m = moving_coord(orientation, c);
    const int t = track_coord(orientation, c);
    lines_set.insert(m);
    tracks_set.insert(t);
    const int mm = 2 * axis2 - m;
    Coord mirror = orientation == AodOrientation::Horizontal
                       ? Coord{mm, c.y2}
                       : Coord{(t + mm) / 2, (t - mm) / 2};
    if (!site_set.count(mirror))
      throw std::invalid_argument("site set is not mirror-symmetric about the axis");
    plan.target[c] = mirror;
  }

  const std::vector<int> lines(lines_set.begin(), lines_set.end());
  const std::vector<int> tracks(tracks_set.begin(), tracks_set.end());
  const int n = int(lines.size());
  if (n < 2) return plan;  // already in place
  const int g = lines[1] - lines[0];
  for (int i = 2; i < n; ++i)
    if (lines[i] - lines[i - 1] != g)
      throw std::invalid_argument("occupied lines must be uniformly spaced");
  if (orientation == AodOrientation::Diagonal && g % 2)
    throw std::invalid_argument("diagonal moves shift u by even steps, so lines need even spacing");

  // Parking band beyond the occupied bounding box. Horizontal plans park at a
  // half-site offset for good measure; diagonal ones cannot (x + y keeps its
  // parity under diagonal moves), so they rely on the clearance alone.
  const int t_range = tracks.back() - tracks.front();
  const int t_park = orientation == AodOrientation::Horizontal ? t_range + 3 : t_range + 4;
  std::vector<int> band_tracks;
  for (int t : tracks) band_tracks.push_back(t + t_park);

  // Block-reversal: swap the halves of every block of the current depth, then
  // recurse into the halves. Blocks at one depth share a size, so each phase
  // is a single rigid batch across all of them.
  std::vector<int> starts = {0};
  int size = n;
  while (size >= 2) {
    const int h = size / 2;
    const bool odd = size % 2;
    const int w = (size - h) * g;
    std::vector<int> left, mid, right, landed;
    for (int lo : starts) {
      for (int i = 0; i < h; ++i) {
        left.push_back(lines[lo + i]);
        right.push_back(lines[lo + size - h + i]);
        landed.push_back(lines[lo + i] + w);
      }
      if (odd) mid.push_back(lines[lo + h]);
    }
    std::vector<int> parked = left;
    parked.insert(parked.end(), mid.begin(), mid.end());
    std::sort(parked.begin(), parked.end());

    plan.batches.push_back(
        make_batch(orientation, parked, tracks, along_track(orientation, t_park)));
    plan.batches.push_back(make_batch(orientation, right, tracks, along_move(orientation, -w)));
    if (odd)
      plan.batches.push_back(
          make_batch(orientation, mid, band_tracks, along_track(orientation, -t_park)));
    plan.batches.push_back(make_batch(orientation, left, band_tracks, along_move(orientation, w)));
    plan.batches.push_back(
        make_batch(orientation, landed, band_tracks, along_track(orientation, -t_park)));

    std::vector<int> next;
    for (int lo : starts) {
      next.push_back(lo);
      next.push_back(lo + size - h);
    }
    starts = std::move(next);
    size = h;
  }
  return plan;
}

RotationPlan plan_rotation(const Layout& layout) {
  RotationPlan plan;
  const int d = layout.distance;
  plan.horizontal = plan_reflection(layout.data, d - 1, AodOrientation::Horizontal);
  plan.diagonal = plan_reflection(layout.data, 0, AodOrientation::Diagonal);
  for (Coord c : layout.data) plan.target[c] = Coord{c.y2, 2 * (d - 1) - c.x2};
  return plan;
}

PlanCheck verify_plan(const RearrangementPlan& plan, const std::vector<Coord>& occupied) {
  PlanCheck check;
  std::map<Coord, Coord> where;  // start -> current
  std::set<Coord> now(occupied.begin(), occupied.end());
  if (now.size() != occupied.size()) throw std::invalid_argument("duplicate occupied site");
  for (Coord c : occupied) where[c] = c;

  for (int bi = 0; bi < int(plan.batches.size()); ++bi) {
    const MoveBatch& b = plan.batches[bi];
    if (plan.orientation == AodOrientation::Horizontal) {
      if (b.dx2 != 0 && b.dy2 != 0)
        throw std::invalid_argument("horizontal batches translate along one axis");
    } else if (std::abs(b.dx2) != std::abs(b.dy2)) {
      throw std::invalid_argument("diagonal batches translate along a diagonal");
    }
    const std::set<int> rows(b.row_lines.begin(), b.row_lines.end());
    const std::set<int> cols(b.col_lines.begin(), b.col_lines.end());
    auto selected = [&](Coord c) {
      if (plan.orientation == AodOrientation::Horizontal)
        return rows.count(c.y2) && cols.count(c.x2);
      return rows.count(c.x2 - c.y2) && cols.count(c.x2 + c.y2);
    };

    std::vector<Coord> moving;
    for (Coord c : now)
      if (selected(c)) moving.push_back(c);
    std::set<Coord> statics = now;
    for (Coord c : moving) statics.erase(c);

    for (Coord a : moving) {
      const Coord e{a.x2 + b.dx2, a.y2 + b.dy2};
      for (Coord q : statics) {
        if (on_open_segment(a, e, q))
          check.violations.push_back({bi, a, q, /*landing=*/false});
        if (q == e) check.violations.push_back({bi, a, q, /*landing=*/true});
      }
    }
    for (Coord c : moving) now.erase(c);
    for (Coord c : moving) now.insert(Coord{c.x2 + b.dx2, c.y2 + b.dy2});
    for (auto& [start, cur] : where)
      if (selected(cur) && !statics.count(cur)) cur = Coord{cur.x2 + b.dx2, cur.y2 + b.dy2};
  }

  check.achieved = where;
  check.matches_target = (check.achieved == plan.target);
  return check;
}

bool check_diagonal_addressing(const Layout& layout) {
  std::set<int> ux, uz;
  for (Coord c : layout.ancilla_x) ux.insert(c.x2 - c.y2);
  for (Coord c : layout.ancilla_z) uz.insert(c.x2 - c.y2);
  for (int u : ux)
    if (uz.count(u)) return false;
  return true;
}

}  // namespace foldsim
