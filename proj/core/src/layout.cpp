#include "foldsim/layout.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

namespace foldsim {

namespace {

int mod4(int v) { return ((v % 4) + 4) % 4; }

// Corner visit order per ancilla class; index = extraction layer - 1.
constexpr std::array<Coord, 4> kOrderX{kNE, kSE, kNW, kSW};
constexpr std::array<Coord, 4> kOrderZ{kNE, kNW, kSE, kSW};

bool in_data_range(int distance, Coord c) {
  return c.x2 >= 0 && c.x2 <= 2 * distance - 2 && c.y2 >= 0 && c.y2 <= 2 * distance - 2;
}

}  // namespace

bool slot_is_x_class(Coord c) { return mod4(c.x2 - c.y2) == 0; }

bool ancilla_slot_occupied(int distance, Coord c) {
  const int hi = 2 * distance - 1;
  if (!(c.x2 & 1) || !(c.y2 & 1)) return false;
  if (c.x2 < -1 || c.x2 > hi || c.y2 < -1 || c.y2 > hi) return false;
  const bool x_interior = c.x2 >= 1 && c.x2 <= hi - 2;
  const bool y_interior = c.y2 >= 1 && c.y2 <= hi - 2;
  if (x_interior && y_interior) return true;
  // Rim slots alternate; the transverse coordinate stays strictly interior,
  // so the four corner slots are always empty.
  if (c.x2 == -1) return y_interior && mod4(c.y2) == 3;          // X-type rim
  if (c.x2 == hi) return y_interior && mod4(c.y2) == mod4(hi);   // X-type rim
  if (c.y2 == -1) return x_interior && mod4(c.x2) == 1;          // Z-type rim
  if (c.y2 == hi) return x_interior && mod4(c.x2) == mod4(hi + 2);  // Z-type rim
  return false;
}

bool Layout::is_data(Coord c) const {
  return c.is_data_site() && in_data_range(distance, c);
}

bool Layout::is_x_ancilla(Coord c) const {
  return ancilla_slot_occupied(distance, c) && slot_is_x_class(c);
}

bool Layout::is_z_ancilla(Coord c) const {
  return ancilla_slot_occupied(distance, c) && !slot_is_x_class(c);
}

std::vector<std::pair<Coord, Coord>> Layout::cnot_layer(int layer) const {
  if (layer < 1 || layer > 4) throw std::invalid_argument("layer must be in [1,4]");
  std::vector<std::pair<Coord, Coord>> out;
  auto emit = [&](const std::vector<Coord>& ancillas, bool x_type) {
    const auto& order = x_type ? kOrderX : kOrderZ;
    for (Coord a : ancillas) {
      Coord q = a + order[layer - 1];
      if (!in_data_range(distance, q)) continue;
      if (x_type)
        out.emplace_back(a, q);  // ancilla controls, copies X onto data
      else
        out.emplace_back(q, a);  // data controls, copies Z onto ancilla
    }
  };
  emit(ancilla_x, true);
  emit(ancilla_z, false);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Coord> Layout::logical_x_support() const {
  std::vector<Coord> v;
  for (int x = 0; x <= 2 * distance - 2; x += 2) v.push_back({x, 0});
  return v;
}

std::vector<Coord> Layout::logical_z_support() const {
  std::vector<Coord> v;
  for (int y = 0; y <= 2 * distance - 2; y += 2) v.push_back({0, y});
  return v;
}

std::vector<Coord> Layout::all_qubits() const {
  std::vector<Coord> v = data;
  v.insert(v.end(), ancilla_x.begin(), ancilla_x.end());
  v.insert(v.end(), ancilla_z.begin(), ancilla_z.end());
  std::sort(v.begin(), v.end());
  return v;
}

Layout build_layout(int distance) {
  if (distance < 3 || distance % 2 == 0)
    throw std::invalid_argument("distance must be odd and >= 3");

  Layout l;
  l.distance = distance;
  const int hi = 2 * distance - 1;

  for (int x = 0; x <= 2 * distance - 2; x += 2)
    for (int y = 0; y <= 2 * distance - 2; y += 2) l.data.push_back({x, y});

  for (int x = -1; x <= hi; x += 2)
    for (int y = -1; y <= hi; y += 2) {
      Coord c{x, y};
      if (!ancilla_slot_occupied(distance, c)) continue;
      (slot_is_x_class(c) ? l.ancilla_x : l.ancilla_z).push_back(c);
    }
  std::sort(l.data.begin(), l.data.end());
  std::sort(l.ancilla_x.begin(), l.ancilla_x.end());
  std::sort(l.ancilla_z.begin(), l.ancilla_z.end());

  const std::size_t n_anc = l.ancilla_x.size() + l.ancilla_z.size();
  if (l.data.size() != std::size_t(distance) * distance ||
      n_anc != std::size_t(distance) * distance - 1 ||
      l.ancilla_x.size() != n_anc / 2 || l.ancilla_z.size() != n_anc - n_anc / 2)
    throw std::logic_error("ancilla census mismatch");

  auto fill_support = [&](const std::vector<Coord>& ancillas, bool x_type) {
    const auto& order = x_type ? kOrderX : kOrderZ;
    for (Coord a : ancillas) {
      std::vector<Coord> sup;
      for (Coord corner : order) {
        Coord q = a + corner;
        if (in_data_range(distance, q)) sup.push_back(q);
      }
      const bool rim = a.x2 == -1 || a.x2 == hi || a.y2 == -1 || a.y2 == hi;
      if (sup.size() != (rim ? 2u : 4u)) throw std::logic_error("check weight mismatch");
      l.stabilizer_support[a] = std::move(sup);
    }
  };
  fill_support(l.ancilla_x, true);
  fill_support(l.ancilla_z, false);

  // Every data qubit must see at most one gate per layer; over all four
  // layers boundary data see 2-3 gates, bulk data exactly 4.
  for (int layer = 1; layer <= 4; ++layer) {
    std::set<Coord> busy;
    for (auto& [c, t] : l.cnot_layer(layer)) {
      if (!busy.insert(c).second || !busy.insert(t).second)
        throw std::logic_error("extraction layer is not a parallel moment");
    }
  }

  // Stabilizers must pairwise commute: X and Z supports overlap evenly.
  for (Coord ax : l.ancilla_x)
    for (Coord az : l.ancilla_z) {
      const auto& sx = l.stabilizer_support[ax];
      const auto& sz = l.stabilizer_support[az];
      int overlap = 0;
      for (Coord q : sx)
        overlap += std::count(sz.begin(), sz.end(), q);
      if (overlap % 2) throw std::logic_error("anticommuting checks");
    }

  // Fold layer across x = y: phase gates on the diagonal (S on data, S-dagger
  // on ancillas), CZ on mirrored pairs of the interior region.
  for (int t = 0; t <= 2 * distance - 2; ++t) {
    Coord c{t, t};
    if (t % 2 == 0) {
      l.fold_phase_targets.emplace_back(c, false);  // data: S
    } else {
      if (!l.is_x_ancilla(c)) throw std::logic_error("fold diagonal must be X-class");
      l.fold_phase_targets.emplace_back(c, true);   // ancilla: S-dagger
    }
  }
  auto in_region = [&](Coord c) {
    if (c.is_data_site()) return in_data_range(distance, c);
    if (c.is_ancilla_site())
      return c.x2 >= 1 && c.x2 <= hi - 2 && c.y2 >= 1 && c.y2 <= hi - 2;
    return false;
  };
  for (int x = -1; x <= hi; ++x)
    for (int y = x + 1; y <= hi; ++y) {
      Coord below{y, x}, above{x, y};
      if (in_region(below) && in_region(above)) l.fold_cz_pairs.emplace_back(below, above);
    }

  return l;
}

std::vector<UnrotatedCheck> unrotated_checks(int distance) {
  if (distance < 3 || distance % 2 == 0)
    throw std::invalid_argument("distance must be odd and >= 3");
  std::vector<UnrotatedCheck> out;
  const int edge = 2 * distance - 2;
  auto in_region = [&](Coord c) {
    return c.x2 >= 0 && c.x2 <= edge && c.y2 >= 0 && c.y2 <= edge;
  };
  // X-type: centres (even, odd), truncated at the left/right region edges.
  for (int x = 0; x <= edge; x += 2)
    for (int y = 1; y <= edge - 1; y += 2) {
      UnrotatedCheck c{{x, y}, {}, true};
      for (Coord d : {Coord{x, y - 1}, Coord{x - 1, y}, Coord{x + 1, y}, Coord{x, y + 1}})
        if (in_region(d)) c.support.push_back(d);
      out.push_back(std::move(c));
    }
  // Z-type: centres (odd, even), truncated at the bottom/top region edges.
  for (int x = 1; x <= edge - 1; x += 2)
    for (int y = 0; y <= edge; y += 2) {
      UnrotatedCheck c{{x, y}, {}, false};
      for (Coord d : {Coord{x, y - 1}, Coord{x - 1, y}, Coord{x + 1, y}, Coord{x, y + 1}})
        if (in_region(d)) c.support.push_back(d);
      out.push_back(std::move(c));
    }
  return out;
}

std::vector<Coord> unrotated_logical_x(int distance) {
  std::vector<Coord> v;
  for (int x = 0; x <= 2 * distance - 2; x += 2) v.push_back({x, 0});
  return v;
}

std::vector<Coord> unrotated_logical_z(int distance) {
  std::vector<Coord> v;
  for (int y = 0; y <= 2 * distance - 2; y += 2) v.push_back({0, y});
  return v;
}

std::vector<Coord> rim_ancillas(const Layout& layout) {
  std::vector<Coord> v;
  const int hi = 2 * layout.distance - 1;
  auto rim = [&](Coord c) {
    return c.x2 == -1 || c.x2 == hi || c.y2 == -1 || c.y2 == hi;
  };
  for (Coord c : layout.ancilla_x)
    if (rim(c)) v.push_back(c);
  for (Coord c : layout.ancilla_z)
    if (rim(c)) v.push_back(c);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace foldsim
