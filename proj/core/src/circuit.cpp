#include "foldsim/circuit.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "foldsim/rng.hpp"

namespace foldsim {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::ResetX: return "RESET_X";
    case GateKind::ResetZ: return "RESET_Z";
    case GateKind::MeasX: return "MEAS_X";
    case GateKind::MeasZ: return "MEAS_Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdag: return "SDAG";
    case GateKind::CX: return "CX";
    case GateKind::CZ: return "CZ";
    case GateKind::Idle: return "IDLE";
  }
  return "?";
}

bool gate_is_two_qubit(GateKind k) { return k == GateKind::CX || k == GateKind::CZ; }

const char* noise_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::Depolarize1: return "DEPOLARIZE1";
    case NoiseKind::Depolarize2: return "DEPOLARIZE2";
    case NoiseKind::FlipMeasure: return "FLIP_MEASURE";
    case NoiseKind::FlipReset: return "FLIP_RESET";
    case NoiseKind::PreRoundDepolarize1: return "PRE_ROUND_DEPOLARIZE1";
  }
  return "?";
}

int Circuit::qubit(Coord c) const {
  auto it = qubit_index.find(c);
  if (it == qubit_index.end()) throw std::invalid_argument("unknown qubit " + c.str());
  return it->second;
}

int Circuit::measurement_index(Coord c, int round) const {
  auto it = meas_lookup_.find({c, round});
  if (it == meas_lookup_.end())
    throw std::invalid_argument("no measurement of " + c.str() + " in round " +
                                std::to_string(round));
  return it->second;
}

int Circuit::reset_index(Coord c, int round) const {
  auto it = reset_lookup_.find({c, round});
  if (it == reset_lookup_.end())
    throw std::invalid_argument("no reset of " + c.str() + " in round " +
                                std::to_string(round));
  return it->second;
}

namespace {

struct Builder {
  Circuit c;

  explicit Builder(const Layout& layout) {
    c.layout = layout;
    c.qubits = layout.all_qubits();
    for (std::size_t i = 0; i < c.qubits.size(); ++i)
      c.qubit_index[c.qubits[i]] = static_cast<int>(i);
  }

  Layer& layer(Timestamp ts) {
    if (!c.layers.empty() && !(c.layers.back().ts < ts))
      throw std::logic_error("layers must be appended chronologically");
    c.layers.push_back({ts, {}});
    return c.layers.back();
  }

  // Appends Idle markers for every live qubit untouched by the moment.
  void pad_idles(Layer& l, const std::set<Coord>& live) {
    std::set<Coord> busy;
    for (const auto& ins : l.instructions) {
      busy.insert(ins.a);
      if (gate_is_two_qubit(ins.kind)) busy.insert(ins.b);
    }
    for (Coord q : live)
      if (!busy.count(q)) l.instructions.push_back({GateKind::Idle, q, {}, l.ts});
    sort_layer(l);
  }

  static void sort_layer(Layer& l) {
    std::stable_sort(l.instructions.begin(), l.instructions.end(),
                     [](const Instruction& a, const Instruction& b) {
                       if (a.kind != b.kind) return a.kind < b.kind;
                       if (a.a != b.a) return a.a < b.a;
                       return a.b < b.b;
                     });
  }

  void add_round(int round, RoundKind kind) {
    const Layout& lay = c.layout;
    std::set<Coord> live_all(c.qubits.begin(), c.qubits.end());
    std::set<Coord> live_data(lay.data.begin(), lay.data.end());

    if (kind == RoundKind::Init) {
      Layer& l = layer({MidCycleLabel::PostReset, round});
      for (Coord q : lay.data) {
        l.instructions.push_back({GateKind::ResetX, q, {}, l.ts});
        c.resets.push_back({GateKind::ResetX, q, round});
      }
      sort_layer(l);
      return;
    }
    if (kind == RoundKind::FinalMeas) {
      Layer& l = layer({MidCycleLabel::EndCycle, round});
      for (Coord q : lay.data) {
        l.instructions.push_back({GateKind::MeasX, q, {}, l.ts});
        c.measurements.push_back({GateKind::MeasX, q, round});
      }
      sort_layer(l);
      return;
    }

    // Extraction round: reset, four CNOT layers (fold between 2 and 3 for
    // S-rounds), measure. Ancillas are live for the whole round.
    {
      Layer& l = layer({MidCycleLabel::PostReset, round});
      for (Coord a : lay.ancilla_x) {
        l.instructions.push_back({GateKind::ResetX, a, {}, l.ts});
        c.resets.push_back({GateKind::ResetX, a, round});
      }
      for (Coord a : lay.ancilla_z) {
        l.instructions.push_back({GateKind::ResetZ, a, {}, l.ts});
        c.resets.push_back({GateKind::ResetZ, a, round});
      }
      pad_idles(l, live_all);
    }
    const MidCycleLabel cnot_labels[4] = {
        MidCycleLabel::AfterLayer1, MidCycleLabel::HalfCycle,
        MidCycleLabel::WaningCrescent, MidCycleLabel::PreMeasure};
    for (int step = 1; step <= 4; ++step) {
      if (step == 3 && kind == RoundKind::SSE) {
        Layer& l = layer({MidCycleLabel::PostS, round});
        for (auto& [q, dagger] : lay.fold_phase_targets)
          l.instructions.push_back({dagger ? GateKind::Sdag : GateKind::S, q, {}, l.ts});
        for (auto& [a, b] : lay.fold_cz_pairs)
          l.instructions.push_back({GateKind::CZ, a, b, l.ts});
        pad_idles(l, live_all);
      }
      Layer& l = layer({cnot_labels[step - 1], round});
      for (auto& [ctrl, tgt] : lay.cnot_layer(step))
        l.instructions.push_back({GateKind::CX, ctrl, tgt, l.ts});
      pad_idles(l, live_all);
    }
    {
      Layer& l = layer({MidCycleLabel::EndCycle, round});
      for (Coord a : lay.ancilla_x) {
        l.instructions.push_back({GateKind::MeasX, a, {}, l.ts});
        c.measurements.push_back({GateKind::MeasX, a, round});
      }
      for (Coord a : lay.ancilla_z) {
        l.instructions.push_back({GateKind::MeasZ, a, {}, l.ts});
        c.measurements.push_back({GateKind::MeasZ, a, round});
      }
      pad_idles(l, live_all);
    }
  }
};

}  // namespace

Circuit finalize_circuit(Circuit&& c) {
  std::sort(c.resets.begin(), c.resets.end(), [](const auto& a, const auto& b) {
    if (a.round != b.round) return a.round < b.round;
    return a.coord < b.coord;
  });
  std::sort(c.measurements.begin(), c.measurements.end(),
            [](const auto& a, const auto& b) {
              if (a.round != b.round) return a.round < b.round;
              return a.coord < b.coord;
            });
  for (std::size_t i = 0; i < c.measurements.size(); ++i)
    c.meas_lookup_[{c.measurements[i].coord, c.measurements[i].round}] = int(i);
  for (std::size_t i = 0; i < c.resets.size(); ++i)
    c.reset_lookup_[{c.resets[i].coord, c.resets[i].round}] = int(i);

  const int final_round = int(c.round_kinds.size()) - 1;
  for (Coord q : c.layout.logical_x_support())
    c.observable.push_back(c.measurement_index(q, final_round));
  std::sort(c.observable.begin(), c.observable.end());
  return std::move(c);
}

static Circuit build_rounds(const Layout& layout, const std::vector<RoundKind>& kinds) {
  Builder b(layout);
  b.c.round_kinds = kinds;
  b.c.se_rounds = int(kinds.size()) - 2;
  for (int r = 0; r < int(kinds.size()); ++r) b.add_round(r, kinds[r]);
  return finalize_circuit(std::move(b.c));
}

Circuit build_x_memory(const Layout& layout, int rounds) {
  if (rounds < 0) rounds = 2 * layout.distance;
  if (rounds < 1) throw std::invalid_argument("need at least one extraction round");
  std::vector<RoundKind> kinds{RoundKind::Init};
  kinds.insert(kinds.end(), rounds, RoundKind::ISE);
  kinds.push_back(RoundKind::FinalMeas);
  return build_rounds(layout, kinds);
}

Circuit build_s2(const Layout& layout, int n_pad, int n_m) {
  if (n_pad < 1 || n_m < 1)
    throw std::invalid_argument("padding and mid-segment must each have >= 1 round");
  std::vector<RoundKind> kinds{RoundKind::Init};
  kinds.insert(kinds.end(), n_pad, RoundKind::ISE);
  kinds.push_back(RoundKind::SSE);
  kinds.insert(kinds.end(), n_m, RoundKind::ISE);
  kinds.push_back(RoundKind::SSE);
  kinds.insert(kinds.end(), n_pad, RoundKind::ISE);
  kinds.push_back(RoundKind::FinalMeas);
  return build_rounds(layout, kinds);
}

void apply_noise(Circuit& circuit, double p) {
  if (p < 0.0 || p >= 0.5) throw std::invalid_argument("noise strength must be in [0, 0.5)");
  circuit.channels.clear();
  if (p == 0.0) return;

  auto add = [&](NoiseKind kind, Coord a, Coord b, Timestamp ts) {
    NoiseChannel ch{kind, p, a, b, ts, int(circuit.channels.size())};
    circuit.channels.push_back(ch);
  };

  for (const Layer& l : circuit.layers) {
    const RoundKind rk = circuit.kind_of_round(l.ts.round);
    // Pre-round data depolarization rides on the reset moment of every
    // extraction round, listed ahead of that moment's other channels.
    if (l.ts.label == MidCycleLabel::PostReset &&
        (rk == RoundKind::ISE || rk == RoundKind::SSE))
      for (Coord q : circuit.layout.data)
        add(NoiseKind::PreRoundDepolarize1, q, {}, l.ts);

    for (const Instruction& ins : l.instructions) {
      switch (ins.kind) {
        case GateKind::ResetX:
        case GateKind::ResetZ:
          add(NoiseKind::FlipReset, ins.a, {}, l.ts);
          break;
        case GateKind::MeasX:
        case GateKind::MeasZ:
          add(NoiseKind::FlipMeasure, ins.a, {}, l.ts);
          break;
        case GateKind::CX:
        case GateKind::CZ:
          add(NoiseKind::Depolarize2, ins.a, ins.b, l.ts);
          break;
        case GateKind::H:
        case GateKind::S:
        case GateKind::Sdag:
        case GateKind::Idle:
          add(NoiseKind::Depolarize1, ins.a, {}, l.ts);
          break;
      }
    }
  }
}

std::string Circuit::to_text() const {
  // Lines ordered by timestamp, then kind (gate kinds ahead of noise kinds,
  // each in declaration order), then coordinates.
  std::map<int, std::vector<int>> channels_at;  // timestamp index -> channel ids
  for (const NoiseChannel& ch : channels) channels_at[ch.ts.index()].push_back(ch.id);

  std::string out;
  char buf[160];
  for (const Layer& l : layers) {
    for (const Instruction& ins : l.instructions) {
      if (gate_is_two_qubit(ins.kind))
        std::snprintf(buf, sizeof buf, "%s %d,%d %d,%d @ %s:%d\n", gate_name(ins.kind),
                      ins.a.x2, ins.a.y2, ins.b.x2, ins.b.y2, label_name(l.ts.label),
                      l.ts.round);
      else
        std::snprintf(buf, sizeof buf, "%s %d,%d @ %s:%d\n", gate_name(ins.kind),
                      ins.a.x2, ins.a.y2, label_name(l.ts.label), l.ts.round);
      out += buf;
    }
    auto it = channels_at.find(l.ts.index());
    if (it == channels_at.end()) continue;
    std::vector<int> ids = it->second;
    std::sort(ids.begin(), ids.end(), [&](int x, int y) {
      const NoiseChannel &a = channels[x], &b = channels[y];
      if (a.kind != b.kind) return a.kind < b.kind;
      if (a.a != b.a) return a.a < b.a;
      return a.b < b.b;
    });
    for (int id : ids) {
      const NoiseChannel& ch = channels[id];
      if (ch.kind == NoiseKind::Depolarize2)
        std::snprintf(buf, sizeof buf, "NOISE %s %.12g %d,%d %d,%d @ %s:%d\n",
                      noise_name(ch.kind), ch.probability, ch.a.x2, ch.a.y2, ch.b.x2,
                      ch.b.y2, label_name(ch.ts.label), ch.ts.round);
      else
        std::snprintf(buf, sizeof buf, "NOISE %s %.12g %d,%d @ %s:%d\n",
                      noise_name(ch.kind), ch.probability, ch.a.x2, ch.a.y2,
                      label_name(ch.ts.label), ch.ts.round);
      out += buf;
    }
  }
  return out;
}

std::uint64_t Circuit::text_hash() const {
  std::string t = to_text();
  return fnv1a64(t.data(), t.size());
}

}  // namespace foldsim
