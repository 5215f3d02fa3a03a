#include <map>
#include <set>

#include "doctest.h"
#include "foldsim/circuit.hpp"

using namespace foldsim;

namespace {

const Layout& l3() {
  static const Layout l = build_layout(3);
  return l;
}

std::map<GateKind, int> gate_census(const Circuit& c) {
  std::map<GateKind, int> n;
  for (const Layer& layer : c.layers)
    for (const Instruction& ins : layer.instructions) ++n[ins.kind];
  return n;
}

}  // namespace

TEST_CASE("memory round plan") {
  const Circuit c = build_x_memory(l3(), 6);
  REQUIRE(c.round_kinds.size() == 8);
  CHECK(c.round_kinds.front() == RoundKind::Init);
  CHECK(c.round_kinds.back() == RoundKind::FinalMeas);
  for (int r = 1; r <= 6; ++r) CHECK(c.round_kinds[r] == RoundKind::ISE);
  CHECK(c.se_rounds == 6);
  // Init is a single reset moment, the readout a single measure moment, and
  // each plain round spans six moments (no fold slot).
  CHECK(c.layers.size() == 1 + 6 * 6 + 1);

  const Circuit dflt = build_x_memory(l3());
  CHECK(dflt.se_rounds == 6);  // 2d default
  CHECK_THROWS_AS(build_x_memory(l3(), 0), std::invalid_argument);
}

TEST_CASE("s2 round plan sandwiches the folds") {
  const Circuit c = build_s2(l3(), 2, 3);
  // pad, fold, n_m, fold, pad.
  const std::vector<RoundKind> want = {
      RoundKind::Init, RoundKind::ISE, RoundKind::ISE, RoundKind::SSE,
      RoundKind::ISE,  RoundKind::ISE, RoundKind::ISE, RoundKind::SSE,
      RoundKind::ISE,  RoundKind::ISE, RoundKind::FinalMeas};
  CHECK(c.round_kinds == want);
  CHECK(c.se_rounds == 9);
  CHECK(build_s2(l3(), 2, 2).layers.size() == 52);
  CHECK_THROWS_AS(build_s2(l3(), 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_s2(l3(), 2, 0), std::invalid_argument);
}

TEST_CASE("first and last moments are the transversal init and readout") {
  for (const Circuit& c : {build_x_memory(l3(), 4), build_s2(l3(), 1, 1)}) {
    const Layer& init = c.layers.front();
    CHECK(init.ts.label == MidCycleLabel::PostReset);
    CHECK(init.ts.round == 0);
    int data_resets = 0;
    for (const Instruction& ins : init.instructions)
      if (ins.kind == GateKind::ResetX && c.layout.is_data(ins.a)) ++data_resets;
    CHECK(data_resets == 9);

    const Layer& readout = c.layers.back();
    CHECK(readout.ts.label == MidCycleLabel::EndCycle);
    int data_meas = 0;
    for (const Instruction& ins : readout.instructions)
      if (ins.kind == GateKind::MeasX && c.layout.is_data(ins.a)) ++data_meas;
    CHECK(data_meas == 9);
  }
}

TEST_CASE("every layer acts on disjoint qubits and covers all of them") {
  for (const Circuit& c : {build_x_memory(l3(), 3), build_s2(l3(), 1, 2)}) {
    for (const Layer& layer : c.layers) {
      std::set<Coord> touched;
      for (const Instruction& ins : layer.instructions) {
        CHECK(touched.insert(ins.a).second);
        if (gate_is_two_qubit(ins.kind)) CHECK(touched.insert(ins.b).second);
      }
      // Idles make the coverage explicit: every qubit appears every moment.
      CHECK(touched.size() == c.qubits.size());
    }
  }
}

TEST_CASE("extraction round structure") {
  const Circuit c = build_x_memory(l3(), 2);
  // Ancillas reset at PostReset in their own basis and measure at EndCycle.
  for (const Layer& layer : c.layers) {
    if (layer.ts.round != 1) continue;
    for (const Instruction& ins : layer.instructions) {
      if (!c.layout.is_ancilla(ins.a) || gate_is_two_qubit(ins.kind)) continue;
      const bool x_anc = c.layout.is_x_ancilla(ins.a);
      if (layer.ts.label == MidCycleLabel::PostReset)
        CHECK(ins.kind == (x_anc ? GateKind::ResetX : GateKind::ResetZ));
      if (layer.ts.label == MidCycleLabel::EndCycle)
        CHECK(ins.kind == (x_anc ? GateKind::MeasX : GateKind::MeasZ));
    }
  }
  // The four CX moments replay Layout::cnot_layer exactly, in order.
  const MidCycleLabel cx_labels[4] = {MidCycleLabel::AfterLayer1, MidCycleLabel::HalfCycle,
                                      MidCycleLabel::WaningCrescent, MidCycleLabel::PreMeasure};
  for (int k = 1; k <= 4; ++k) {
    std::set<std::pair<Coord, Coord>> want;
    for (auto pr : c.layout.cnot_layer(k)) want.insert(pr);
    std::set<std::pair<Coord, Coord>> got;
    for (const Layer& layer : c.layers) {
      if (layer.ts.round != 1 || layer.ts.label != cx_labels[k - 1]) continue;
      for (const Instruction& ins : layer.instructions)
        if (ins.kind == GateKind::CX) got.insert({ins.a, ins.b});
    }
    CHECK(got == want);
  }
}

TEST_CASE("fold moment sits at the half-cycle of an SSE round") {
  const Circuit c = build_s2(l3(), 1, 1);  // folds at rounds 2 and 4
  int fold_layers = 0;
  for (const Layer& layer : c.layers) {
    if (layer.ts.label != MidCycleLabel::PostS) continue;
    ++fold_layers;
    CHECK((layer.ts.round == 2 || layer.ts.round == 4));
    std::map<GateKind, int> kinds;
    std::set<Coord> phase_targets;
    std::set<std::pair<Coord, Coord>> cz_pairs;
    for (const Instruction& ins : layer.instructions) {
      ++kinds[ins.kind];
      if (ins.kind == GateKind::S || ins.kind == GateKind::Sdag) phase_targets.insert(ins.a);
      if (ins.kind == GateKind::CZ) cz_pairs.insert({ins.a, ins.b});
    }
    CHECK(kinds[GateKind::S] == 3);
    CHECK(kinds[GateKind::Sdag] == 2);
    CHECK(kinds[GateKind::CZ] == 4);
    CHECK(kinds[GateKind::CX] == 0);
    // Rim ancillas idle through the fold.
    CHECK(kinds[GateKind::Idle] == 4);
    for (auto [q, dagger] : c.layout.fold_phase_targets) CHECK(phase_targets.count(q));
    for (auto pr : c.layout.fold_cz_pairs) CHECK(cz_pairs.count(pr));
  }
  CHECK(fold_layers == 2);
  // Plain rounds have no fold moment.
  for (const Layer& layer : build_x_memory(l3(), 4).layers)
    CHECK(layer.ts.label != MidCycleLabel::PostS);
}

TEST_CASE("timestamps are strictly increasing") {
  for (const Circuit& c : {build_x_memory(l3(), 5), build_s2(l3(), 2, 2)}) {
    for (std::size_t i = 1; i < c.layers.size(); ++i)
      CHECK(c.layers[i - 1].ts.index() < c.layers[i].ts.index());
  }
}

TEST_CASE("measurement and reset records line up with the layers") {
  const Circuit c = build_x_memory(l3(), 6);
  CHECK(c.measurements.size() == 6 * 8 + 9);
  CHECK(c.resets.size() == 9 + 6 * 8);
  // Lookup helpers invert the records.
  for (std::size_t i = 0; i < c.measurements.size(); ++i) {
    const MeasurementLocation& m = c.measurements[i];
    CHECK(c.measurement_index(m.coord, m.round) == int(i));
  }
  for (std::size_t i = 0; i < c.resets.size(); ++i)
    CHECK(c.reset_index(c.resets[i].coord, c.resets[i].round) == int(i));
  CHECK_THROWS_AS(c.measurement_index({0, 0}, 1), std::invalid_argument);
  // The observable is the final X readout of the data row y = 0.
  CHECK(c.observable.size() == 3);
  for (int idx : c.observable) {
    CHECK(c.measurements[idx].basis == GateKind::MeasX);
    CHECK(c.measurements[idx].coord.y2 == 0);
    CHECK(c.measurements[idx].round == 7);
  }
}

TEST_CASE("text form is stable and distinguishes families") {
  const Circuit a = build_x_memory(l3(), 2);
  const Circuit b = build_x_memory(l3(), 2);
  CHECK(a.to_text() == b.to_text());
  CHECK(a.text_hash() == 0xe7a13add657c2ce5ull);
  CHECK(build_s2(l3(), 1, 1).text_hash() == 0x17fd86f97f2526a5ull);
  // One line per instruction.
  std::size_t instructions = 0;
  for (const Layer& layer : a.layers) instructions += layer.instructions.size();
  std::size_t lines = 0;
  for (char ch : a.to_text()) lines += ch == '\n';
  CHECK(lines == instructions);
}

TEST_CASE("noise strength validation") {
  Circuit c = build_x_memory(l3(), 2);
  CHECK_THROWS_AS(apply_noise(c, -0.01), std::invalid_argument);
  CHECK_THROWS_AS(apply_noise(c, 0.5), std::invalid_argument);
  apply_noise(c, 0.0);
  CHECK(c.channels.empty());
}

TEST_CASE("noise channel census") {
  Circuit c = build_x_memory(l3(), 6);
  apply_noise(c, 1e-3);
  std::map<NoiseKind, int> n;
  for (const NoiseChannel& ch : c.channels) {
    CHECK(ch.probability == 1e-3);
    ++n[ch.kind];
  }
  const auto gates = gate_census(c);
  CHECK(n[NoiseKind::Depolarize2] == gates.at(GateKind::CX));
  CHECK(n[NoiseKind::Depolarize2] == 144);
  CHECK(n[NoiseKind::FlipMeasure] == int(c.measurements.size()));
  CHECK(n[NoiseKind::FlipReset] == int(c.resets.size()));
  CHECK(n[NoiseKind::Depolarize1] == gates.at(GateKind::Idle));
  CHECK(n[NoiseKind::Depolarize1] == 228);
  CHECK(n[NoiseKind::PreRoundDepolarize1] == 6 * 9);
  // Ids are dense and stable across reapplication.
  for (std::size_t i = 0; i < c.channels.size(); ++i) CHECK(c.channels[i].id == int(i));
  Circuit again = build_x_memory(l3(), 6);
  apply_noise(again, 3e-3);
  REQUIRE(again.channels.size() == c.channels.size());
  for (std::size_t i = 0; i < c.channels.size(); ++i) {
    CHECK(again.channels[i].kind == c.channels[i].kind);
    CHECK(again.channels[i].a == c.channels[i].a);
    CHECK(again.channels[i].ts.index() == c.channels[i].ts.index());
  }
}

TEST_CASE("fold moment noise covers phase gates and CZ pairs") {
  Circuit c = build_s2(l3(), 1, 1);
  apply_noise(c, 2e-3);
  int fold_dep1 = 0, fold_dep2 = 0;
  for (const NoiseChannel& ch : c.channels) {
    if (ch.ts.label != MidCycleLabel::PostS) continue;
    fold_dep1 += ch.kind == NoiseKind::Depolarize1;
    fold_dep2 += ch.kind == NoiseKind::Depolarize2;
  }
  // Per fold: 5 phase gates + 4 idling rims, and 4 CZ pairs.
  CHECK(fold_dep1 == 2 * (5 + 4));
  CHECK(fold_dep2 == 2 * 4);
}
