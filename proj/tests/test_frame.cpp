#include <cmath>
#include <random>

#include "doctest.h"
#include "foldsim/circuit.hpp"
#include "foldsim/dem.hpp"
#include "foldsim/frame.hpp"
#include "foldsim/layout.hpp"
#include "foldsim/tableau.hpp"
#include "foldsim/trajectory.hpp"

using namespace foldsim;

namespace {

// Full stabilizer-simulation reference: walk the circuit on a tableau with
// the fault applied after its moment, then read detector parities off the
// recorded outcomes. Unforced random outcomes take the 0 branch, matching the
// detector-set construction.
ShotRecord tableau_reference(const Circuit& c, const DetectorSet& ds,
                             const FaultInjection& inj) {
  Tableau t(int(c.qubits.size()), int(c.measurements.size()), int(c.resets.size()));
  for (const Layer& layer : c.layers) {
    for (const Instruction& ins : layer.instructions) {
      const int a = c.qubit(ins.a);
      switch (ins.kind) {
        case GateKind::ResetX:
          t.reset_x(a, c.reset_index(ins.a, layer.ts.round));
          break;
        case GateKind::ResetZ:
          t.reset_z(a, c.reset_index(ins.a, layer.ts.round));
          break;
        case GateKind::MeasX:
          t.measure_x(a, c.measurement_index(ins.a, layer.ts.round));
          break;
        case GateKind::MeasZ:
          t.measure_z(a, c.measurement_index(ins.a, layer.ts.round));
          break;
        case GateKind::H:
          t.h(a);
          break;
        case GateKind::S:
          t.s(a);
          break;
        case GateKind::Sdag:
          t.sdag(a);
          break;
        case GateKind::CX:
          t.cx(a, c.qubit(ins.b));
          break;
        case GateKind::CZ:
          t.cz(a, c.qubit(ins.b));
          break;
        case GateKind::Idle:
          break;
      }
    }
    if (layer.ts.index() == inj.at.index()) {
      BitVec x(c.qubits.size()), z(c.qubits.size());
      for (const auto& [q, p] : inj.fault.support()) {
        const int i = c.qubit(q);
        if (p == Pauli::X || p == Pauli::Y) x.set(i, true);
        if (p == Pauli::Z || p == Pauli::Y) z.set(i, true);
      }
      t.apply_pauli(x, z);
    }
  }
  ShotRecord rec;
  rec.detector_bits = BitVec(ds.detectors.size());
  for (const Detector& d : ds.detectors) {
    bool parity = d.reference_parity;
    for (int m : d.measurements) parity ^= t.recorded(m);
    rec.detector_bits.set(d.id, parity);
  }
  rec.logical_bit = false;
  for (int m : ds.observable) rec.logical_bit ^= t.recorded(m);
  return rec;
}

bool same_record(const ShotRecord& a, const ShotRecord& b) {
  if (a.logical_bit != b.logical_bit) return false;
  if (a.detector_bits.size() != b.detector_bits.size()) return false;
  for (std::size_t i = 0; i < a.detector_bits.size(); ++i)
    if (a.detector_bits.get(i) != b.detector_bits.get(i)) return false;
  return true;
}

}  // namespace

TEST_CASE("noiseless shots are all-quiet") {
  const Layout l3 = build_layout(3);
  for (const Circuit& c : {build_x_memory(l3, 4), build_s2(l3, 2, 2)}) {
    const DetectorSet ds = enumerate_detectors(c);
    const FrameSampler sampler(c, ds);
    for (std::uint64_t shot = 0; shot < 64; ++shot) {
      const ShotRecord rec = sampler.sample(123, shot);
      CHECK(!rec.detector_bits.any());
      CHECK(rec.logical_bit == ds.observable_reference);
    }
  }
}

TEST_CASE("shots are reproducible per (seed, shot) and vary across them") {
  const Layout l3 = build_layout(3);
  Circuit c = build_x_memory(l3, 4);
  apply_noise(c, 0.02);
  const DetectorSet ds = enumerate_detectors(c);
  const FrameSampler sampler(c, ds);
  int differing = 0;
  for (std::uint64_t shot = 0; shot < 32; ++shot) {
    const ShotRecord a = sampler.sample(9, shot);
    const ShotRecord b = sampler.sample(9, shot);
    CHECK(same_record(a, b));
    differing += !same_record(a, sampler.sample(10, shot));
  }
  CHECK(differing > 0);
}

TEST_CASE("frame agrees with the stabilizer simulation on random injected faults") {
  const Layout l3 = build_layout(3);
  std::mt19937_64 rng(20240815);
  for (const Circuit& c : {build_x_memory(l3, 3), build_s2(l3, 1, 1)}) {
    const DetectorSet ds = enumerate_detectors(c);
    const FrameSampler sampler(c, ds);
    const int checks = 500;
    for (int it = 0; it < checks; ++it) {
      // A random 1- or 2-qubit Pauli after a random moment (not the readout).
      const Layer& layer = c.layers[rng() % (c.layers.size() - 1)];
      FaultInjection inj;
      inj.at = layer.ts;
      const int weight = 1 + int(rng() % 2);
      for (int k = 0; k < weight; ++k) {
        const Coord q = c.qubits[rng() % c.qubits.size()];
        inj.fault.set(q, Pauli(1 + rng() % 3));
      }
      if (inj.fault.identity()) continue;
      const ShotRecord via_frame = sampler.run_injected({inj});
      const ShotRecord via_tableau = tableau_reference(c, ds, inj);
      REQUIRE(same_record(via_frame, via_tableau));
    }
  }
}

TEST_CASE("injected faults compose linearly over the frame") {
  const Layout l3 = build_layout(3);
  const Circuit c = build_s2(l3, 1, 2);
  const DetectorSet ds = enumerate_detectors(c);
  const FrameSampler sampler(c, ds);
  std::mt19937_64 rng(77);
  for (int it = 0; it < 50; ++it) {
    FaultInjection f1, f2;
    f1.at = c.layers[rng() % (c.layers.size() - 1)].ts;
    f2.at = c.layers[rng() % (c.layers.size() - 1)].ts;
    f1.fault.set(c.qubits[rng() % c.qubits.size()], Pauli(1 + rng() % 3));
    f2.fault.set(c.qubits[rng() % c.qubits.size()], Pauli(1 + rng() % 3));
    const ShotRecord a = sampler.run_injected({f1});
    const ShotRecord b = sampler.run_injected({f2});
    const ShotRecord ab = sampler.run_injected({f1, f2});
    CHECK(ab.logical_bit ==
          (a.logical_bit ^ b.logical_bit ^ ds.observable_reference));
    for (std::size_t i = 0; i < ab.detector_bits.size(); ++i)
      CHECK(ab.detector_bits.get(i) == (a.detector_bits.get(i) ^ b.detector_bits.get(i)));
  }
}

TEST_CASE("detector trigger rates match the channel-exact prediction") {
  const Layout l3 = build_layout(3);
  Circuit c = build_x_memory(l3, 4);
  const double p = 1e-3;
  apply_noise(c, p);
  const DetectorSet ds = enumerate_detectors(c);
  const DecodingHypergraph hg = build_hypergraph(c, ds);
  const FrameSampler sampler(c, ds);

  // Exact trigger probability per detector: members of one channel are
  // mutually exclusive, channels are independent.
  std::vector<double> per_channel(c.channels.size(), 0.0);
  std::vector<double> predicted(ds.detectors.size(), 0.0);
  for (int det = 0; det < int(ds.detectors.size()); ++det) {
    std::fill(per_channel.begin(), per_channel.end(), 0.0);
    for (const ErrorLocation& loc : hg.locations) {
      const ErrorEffect& eff = hg.location_effects[loc.id];
      const bool hits = std::binary_search(eff.dz.begin(), eff.dz.end(), det) ||
                        std::binary_search(eff.dx.begin(), eff.dx.end(), det);
      if (hits) per_channel[loc.parent_channel] += loc.probability;
    }
    double q = 0.0;
    for (double pc : per_channel) q = xor_probability(q, pc);
    predicted[det] = q;
  }

  const long shots = 200000;
  std::vector<long> hits(ds.detectors.size(), 0);
  for (long s = 0; s < shots; ++s) {
    const ShotRecord rec = sampler.sample(4242, s);
    for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += rec.detector_bits.get(i);
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const double obs = double(hits[i]) / double(shots);
    const double sigma = std::sqrt(predicted[i] * (1 - predicted[i]) / double(shots));
    CHECK(std::abs(obs - predicted[i]) <= 5 * sigma);
  }
}

TEST_CASE("measurement_flips exposes the raw outcome flips") {
  const Layout l3 = build_layout(3);
  const Circuit c = build_x_memory(l3, 2);
  const DetectorSet ds = enumerate_detectors(c);
  const FrameSampler sampler(c, ds);
  CHECK(sampler.n_measurements() == int(c.measurements.size()));
  CHECK(sampler.n_detectors() == int(ds.detectors.size()));
  // A Z error on a data qubit right after init flips the adjacent X checks.
  FaultInjection inj;
  inj.fault = SparsePauli::single({0, 0}, Pauli::Z);
  inj.at = {MidCycleLabel::PostReset, 0};
  const auto flips = sampler.measurement_flips({inj});
  int flipped = 0;
  for (std::size_t m = 0; m < flips.size(); ++m)
    if (flips[m]) {
      ++flipped;
      CHECK(c.measurements[m].basis == GateKind::MeasX);
    }
  CHECK(flipped > 0);
}
