#include <set>
#include <string>

#include "doctest.h"
#include "foldsim/circuit.hpp"
#include "foldsim/layout.hpp"
#include "foldsim/tableau.hpp"
#include "foldsim/trajectory.hpp"

using namespace foldsim;

namespace {

BitVec bits(int n, std::initializer_list<int> ones) {
  BitVec v(n);
  for (int i : ones) v.set(i, true);
  return v;
}

}  // namespace

TEST_CASE("fresh tableau stabilizes |0..0>") {
  Tableau t(3);
  const std::string canon = t.canonical_stabilizers();
  CHECK(canon == "+IIZ\n+IZI\n+ZII\n");
  for (int q = 0; q < 3; ++q) {
    const MeasureResult r = t.measure_z(q);
    CHECK(r.deterministic);
    CHECK(r.value == false);
  }
}

TEST_CASE("bell pair correlations") {
  Tableau t(2);
  t.h(0);
  t.cx(0, 1);
  CHECK(t.canonical_stabilizers() == "+XX\n+ZZ\n");
  // Both Z measurements agree; outcome of the first is random.
  const MeasureResult a = t.measure_z(0, -1, false);
  CHECK(!a.deterministic);
  const MeasureResult b = t.measure_z(1);
  CHECK(b.deterministic);
  CHECK(b.value == a.value);

  Tableau u(2);
  u.h(0);
  u.cx(0, 1);
  const MeasureResult c = u.measure_z(0, -1, true);
  CHECK(u.measure_z(1).value == c.value);
}

TEST_CASE("phase gates compose as expected") {
  // S twice is Z: conjugates X to -X.
  Tableau t(1);
  t.h(0);  // |+>, stabilizer +X
  t.s(0);
  t.s(0);
  CHECK(t.canonical_stabilizers() == "-X\n");
  // S then Sdag is the identity.
  Tableau u(1);
  u.h(0);
  u.s(0);
  u.sdag(0);
  CHECK(u.canonical_stabilizers() == "+X\n");
  // S conjugates X to Y: the Y operator is now a +1 stabilizer.
  Tableau v(1);
  v.h(0);
  v.s(0);
  const auto y = v.group_value(bits(1, {0}), bits(1, {0}));
  REQUIRE(y.has_value());
  CHECK(y->sign_bit == false);
}

TEST_CASE("cz equals h-conjugated cx") {
  Tableau a(2), b(2);
  a.h(0);
  b.h(0);
  a.h(1);
  b.h(1);
  a.cz(0, 1);
  b.h(1);
  b.cx(0, 1);
  b.h(1);
  CHECK(a.canonical_stabilizers() == b.canonical_stabilizers());
}

TEST_CASE("forcing a deterministic outcome to the wrong value throws") {
  Tableau t(1);
  CHECK_THROWS_AS(t.measure_z(0, -1, true), std::logic_error);
  CHECK_NOTHROW(t.measure_z(0, -1, false));
}

TEST_CASE("resets leave the +1 eigenstate regardless of history") {
  Tableau t(2);
  t.h(0);
  t.cx(0, 1);
  t.reset_z(0);
  CHECK(t.measure_z(0).deterministic);
  CHECK(t.measure_z(0).value == false);
  t.reset_x(1);
  const MeasureResult r = t.measure_x(1);
  CHECK(r.deterministic);
  CHECK(r.value == false);
}

TEST_CASE("group membership") {
  Tableau t(2);
  t.h(0);
  t.cx(0, 1);  // stabilizers XX, ZZ
  CHECK(t.group_value(bits(2, {0, 1}), bits(2, {})).has_value());
  CHECK(t.group_value(bits(2, {}), bits(2, {0, 1})).has_value());
  // Y(x)Y = (XZ)(XZ) is in the group with sign -1: YY = -XX*ZZ.
  const auto yy = t.group_value(bits(2, {0, 1}), bits(2, {0, 1}));
  REQUIRE(yy.has_value());
  CHECK(yy->sign_bit == true);
  // X alone is not.
  CHECK(!t.group_value(bits(2, {0}), bits(2, {})).has_value());
}

TEST_CASE("apply_pauli flips anticommuting signs") {
  Tableau t(1);  // stabilizer +Z
  t.apply_pauli(bits(1, {0}), bits(1, {}));
  CHECK(t.canonical_stabilizers() == "-Z\n");
  const MeasureResult r = t.measure_z(0);
  CHECK(r.deterministic);
  CHECK(r.value == true);
}

TEST_CASE("measurement dependency tracking names the outcome variables") {
  Tableau t(2, 4, 0);
  t.h(0);
  t.cx(0, 1);
  const MeasureResult a = t.measure_z(0, 0, false);
  CHECK(!a.deterministic);
  const MeasureResult b = t.measure_z(1, 1);
  REQUIRE(b.deterministic);
  // The second outcome equals the recorded first one.
  CHECK(b.meas_deps == std::vector<int>{0});
  CHECK(b.sign_bit == false);
  CHECK(t.recorded(0) == a.value);
}

TEST_CASE("canonical group ignores generator presentation") {
  const std::vector<Coord> qs = {{0, 0}, {2, 0}};
  std::vector<SparsePauli> g1, g2;
  SparsePauli zz;
  zz.set({0, 0}, Pauli::Z);
  zz.set({2, 0}, Pauli::Z);
  g1.push_back(SparsePauli::single({0, 0}, Pauli::Z));
  g1.push_back(SparsePauli::single({2, 0}, Pauli::Z));
  g2.push_back(zz);
  g2.push_back(SparsePauli::single({2, 0}, Pauli::Z));
  CHECK(canonical_group(g1, qs) == canonical_group(g2, qs));
  CHECK(canonical_group(g1, qs) != canonical_group({zz}, qs));
}

// Substance of the morphing claim at d = 3: between CNOT layers 2 and 3 of a
// plain extraction round the patch is an unrotated surface code of the same
// distance, with the off-region ancillas unentangled.
TEST_CASE("half-cycle state is the unrotated code plus free rims") {
  const Layout layout = build_layout(3);
  const Circuit c = build_x_memory(layout, 4);
  for (int round : {1, 3}) {
    const std::string got = stabilizer_group_at(c, {MidCycleLabel::HalfCycle, round});
    std::vector<SparsePauli> gens;
    for (const UnrotatedCheck& chk : unrotated_checks(3)) {
      SparsePauli g;
      for (Coord q : chk.support) g.set(q, chk.x_type ? Pauli::X : Pauli::Z);
      gens.push_back(g);
    }
    SparsePauli lx;
    for (Coord q : unrotated_logical_x(3)) lx.set(q, Pauli::X);
    gens.push_back(lx);  // memory runs hold the logical X eigenstate
    for (Coord rim : rim_ancillas(layout))
      gens.push_back(SparsePauli::single(rim, slot_is_x_class(rim) ? Pauli::X : Pauli::Z));
    CHECK(got == canonical_group(gens, c.qubits));
  }
}

// Substance of the logical action claim at d = 3: each fold round applies S,
// i.e. X-bar -> +Y-bar, and the two folds compose to Z = S^2: X-bar -> -X-bar.
TEST_CASE("fold rounds enact the logical phase gate") {
  const Layout layout = build_layout(3);
  const Circuit c = build_s2(layout, 1, 1);  // folds in rounds 2 and 4

  const auto logical_bits = [&](Pauli p) {
    BitVec x(c.qubits.size()), z(c.qubits.size());
    for (Coord q : layout.logical_x_support()) {
      const int i = c.qubit(q);
      if (p == Pauli::X || p == Pauli::Y) x.set(i, true);
      if (p == Pauli::Z || p == Pauli::Y) z.set(i, true);
    }
    return std::pair{x, z};
  };

  // Before the first fold the state stabilizes +X-bar.
  Tableau before = tableau_at(c, {MidCycleLabel::EndCycle, 1});
  auto [x0, z0] = logical_bits(Pauli::X);
  auto vx = before.group_value(x0, z0);
  REQUIRE(vx.has_value());
  CHECK(vx->sign_bit == false);

  // After one fold it stabilizes +Y-bar and X-bar has left the group.
  Tableau mid = tableau_at(c, {MidCycleLabel::EndCycle, 2});
  auto [x1, z1] = logical_bits(Pauli::Y);
  auto vy = mid.group_value(x1, z1);
  REQUIRE(vy.has_value());
  CHECK(vy->sign_bit == false);
  CHECK(!mid.group_value(x0, z0).has_value());

  // After the second fold it stabilizes -X-bar: S o S = Z.
  Tableau after = tableau_at(c, {MidCycleLabel::EndCycle, 4});
  auto vz = after.group_value(x0, z0);
  REQUIRE(vz.has_value());
  CHECK(vz->sign_bit == true);
}
