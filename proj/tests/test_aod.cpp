#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "foldsim/aod.hpp"

using namespace foldsim;

namespace {

std::vector<Coord> data_sites(const Layout& layout) {
  std::vector<Coord> sites(layout.data_qubits().begin(), layout.data_qubits().end());
  std::sort(sites.begin(), sites.end());
  return sites;
}

int batch_bound(std::size_t n) {
  int lg = 0;
  while ((std::size_t(1) << lg) < n) ++lg;
  return 3 * lg + 4;
}

}  // namespace

TEST_CASE("single site needs no moves") {
  const RearrangementPlan plan =
      plan_reflection({{4, 2}}, 4, AodOrientation::Horizontal);
  CHECK(plan.batches.empty());
  CHECK(plan.target.at(Coord{4, 2}) == Coord{4, 2});
  CHECK(verify_plan(plan, {{4, 2}}).ok());
}

TEST_CASE("two-by-two block reflection, frozen plan") {
  const std::vector<Coord> sites{{0, 0}, {0, 2}, {2, 0}, {2, 2}};
  const RearrangementPlan plan = plan_reflection(sites, 1, AodOrientation::Horizontal);
  REQUIRE(plan.batches.size() == 4);
  CHECK(plan.batches[0].str() == "BATCH rows:[0,2] cols:[0] d:(0,5)");
  CHECK(plan.batches[1].str() == "BATCH rows:[0,2] cols:[2] d:(-2,0)");
  CHECK(plan.batches[2].str() == "BATCH rows:[5,7] cols:[0] d:(2,0)");
  CHECK(plan.batches[3].str() == "BATCH rows:[0,2] cols:[2] d:(0,-5)");
  CHECK(plan.to_text() ==
        plan.batches[0].str() + "\n" + plan.batches[1].str() + "\n" +
            plan.batches[2].str() + "\n" + plan.batches[3].str() + "\n");
  const PlanCheck check = verify_plan(plan, sites);
  CHECK(check.ok());
  CHECK(check.achieved.at(Coord{0, 0}) == Coord{2, 0});
  CHECK(check.achieved.at(Coord{2, 2}) == Coord{0, 2});
}

TEST_CASE("data-array reflections verify across distances") {
  for (int d = 3; d <= 13; d += 2) {
    const Layout layout = build_layout(d);
    const std::vector<Coord> sites = data_sites(layout);
    for (AodOrientation o : {AodOrientation::Horizontal, AodOrientation::Diagonal}) {
      // Mirror about the array centre: x = d-1 doubled for horizontal,
      // u = 0 for the main diagonal.
      const int axis2 = o == AodOrientation::Horizontal ? d - 1 : 0;
      const RearrangementPlan plan = plan_reflection(sites, axis2, o);
      CHECK(int(plan.batches.size()) <= batch_bound(sites.size()));
      const PlanCheck check = verify_plan(plan, sites);
      CHECK(check.ok());
      for (const Coord& c : sites) {
        // Horizontal mirrors x; diagonal mirrors u = x - y at fixed x + y.
        const Coord want = o == AodOrientation::Horizontal
                               ? Coord{2 * axis2 - c.x2, c.y2}
                               : Coord{c.y2 + axis2, c.x2 - axis2};
        CHECK(check.achieved.at(c) == want);
      }
    }
  }
}

TEST_CASE("reflection is an involution on the targets") {
  const Layout layout = build_layout(5);
  const std::vector<Coord> sites = data_sites(layout);
  const RearrangementPlan plan = plan_reflection(sites, 4, AodOrientation::Horizontal);
  for (const Coord& c : sites) {
    const Coord once = plan.target.at(c);
    CHECK(plan.target.at(once) == c);
  }
}

TEST_CASE("rotation composes the two reflections") {
  for (int d : {3, 5, 7}) {
    const Layout layout = build_layout(d);
    const RotationPlan rot = plan_rotation(layout);
    const std::vector<Coord> sites = data_sites(layout);

    const PlanCheck first = verify_plan(rot.horizontal, sites);
    REQUIRE(first.ok());
    std::vector<Coord> mid;
    for (const Coord& c : sites) mid.push_back(first.achieved.at(c));
    std::sort(mid.begin(), mid.end());
    const PlanCheck second = verify_plan(rot.diagonal, mid);
    REQUIRE(second.ok());

    for (const Coord& c : sites) {
      const Coord got = second.achieved.at(first.achieved.at(c));
      const Coord want{c.y2, 2 * (d - 1) - c.x2};
      CHECK(got == want);
      CHECK(rot.target.at(c) == want);
    }
  }
}

TEST_CASE("asymmetric or unevenly spaced sets are rejected") {
  // Not mirror-symmetric about the axis.
  CHECK_THROWS_AS(plan_reflection({{0, 0}, {2, 0}, {4, 0}, {8, 0}}, 2,
                                  AodOrientation::Horizontal),
                  std::invalid_argument);
  // Odd line spacing cannot be parked on half-integer sites.
  CHECK_THROWS_AS(plan_reflection({{1, 0}, {2, 0}, {3, 0}}, 2,
                                  AodOrientation::Diagonal),
                  std::invalid_argument);
  // Symmetric but non-uniform spacing breaks the block slide.
  CHECK_THROWS_AS(plan_reflection({{0, 0}, {2, 0}, {8, 0}, {10, 0}}, 5,
                                  AodOrientation::Horizontal),
                  std::invalid_argument);
}

TEST_CASE("verify_plan flags sweeps over parked atoms") {
  const std::vector<Coord> sites{{0, 0}, {0, 2}, {2, 0}, {2, 2}};
  RearrangementPlan plan = plan_reflection(sites, 1, AodOrientation::Horizontal);
  // Sabotage: make the first parked column land on the static one.
  REQUIRE(!plan.batches.empty());
  plan.batches[0].dx2 += 2;
  plan.batches[0].dy2 = 0;
  const PlanCheck check = verify_plan(plan, sites);
  CHECK(!check.ok());
  CHECK(!check.violations.empty());
  CHECK(!check.violations[0].str().empty());
}

TEST_CASE("diagonal grids address one check class at a time") {
  for (int d = 3; d <= 13; d += 2) CHECK(check_diagonal_addressing(build_layout(d)));
}

TEST_CASE("orientation names") {
  CHECK(std::string(aod_orientation_name(AodOrientation::Horizontal)) == "horizontal");
  CHECK(std::string(aod_orientation_name(AodOrientation::Diagonal)) == "diagonal");
}
