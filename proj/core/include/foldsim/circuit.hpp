#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "foldsim/layout.hpp"

namespace foldsim {

enum class GateKind : std::uint8_t {
  ResetX, ResetZ, MeasX, MeasZ, H, S, Sdag, CX, CZ, Idle
};

const char* gate_name(GateKind k);
bool gate_is_two_qubit(GateKind k);

struct Instruction {
  GateKind kind;
  Coord a;           // single target, or control for CX / first for CZ
  Coord b;           // second target of a two-qubit gate
  Timestamp ts;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

enum class NoiseKind : std::uint8_t {
  Depolarize1, Depolarize2, FlipMeasure, FlipReset, PreRoundDepolarize1
};

const char* noise_name(NoiseKind k);

struct NoiseChannel {
  NoiseKind kind;
  double probability = 0.0;
  Coord a;
  Coord b;           // second target of Depolarize2 only
  Timestamp ts;
  int id = -1;       // stable index into Circuit::channels
};

enum class RoundKind : std::uint8_t { Init, ISE, SSE, FinalMeas };

struct ResetLocation {
  GateKind basis;    // ResetX or ResetZ
  Coord coord;
  int round = 0;
};

struct MeasurementLocation {
  GateKind basis;    // MeasX or MeasZ
  Coord coord;
  int round = 0;
};

// One parallel moment: all instructions share a timestamp and act on
// disjoint qubits.
struct Layer {
  Timestamp ts;
  std::vector<Instruction> instructions;
};

struct Circuit {
  Layout layout;
  std::vector<Coord> qubits;            // sorted; index space for simulators
  std::map<Coord, int> qubit_index;
  std::vector<RoundKind> round_kinds;   // rounds 0 .. R+1
  int se_rounds = 0;                    // R: number of ISE/SSE rounds

  std::vector<Layer> layers;            // chronological
  std::vector<NoiseChannel> channels;   // empty until apply_noise
  std::vector<ResetLocation> resets;    // global order
  std::vector<MeasurementLocation> measurements;  // global order

  // Logical readout: XOR of these measurement indices (final X measurements
  // of the data row y = 0).
  std::vector<int> observable;

  int qubit(Coord c) const;
  int measurement_index(Coord c, int round) const;
  int reset_index(Coord c, int round) const;
  RoundKind kind_of_round(int round) const { return round_kinds.at(round); }

  // Byte-stable text form; lines sorted by timestamp, kind, coordinates.
  std::string to_text() const;
  std::uint64_t text_hash() const;

 private:
  std::map<std::pair<Coord, int>, int> meas_lookup_;
  std::map<std::pair<Coord, int>, int> reset_lookup_;
  friend Circuit finalize_circuit(Circuit&&);
};

// X-basis memory experiment: transversal |+> init, `rounds` plain extraction
// rounds (default 2d), transversal X readout.
Circuit build_x_memory(const Layout& layout, int rounds = -1);

// Two fold rounds separated by n_m plain rounds, padded by n_pad plain
// rounds on both sides: pad, fold, n_m, fold, pad.
Circuit build_s2(const Layout& layout, int n_pad, int n_m);

// Uniform circuit-level noise of strength p: every gate (idles included) is
// followed by a depolarizing channel of its arity, resets and measurements
// flip with probability p, and every data qubit depolarizes at the start of
// each extraction round. Throws for p < 0 or p >= 0.5; p == 0 yields no
// channels. Channel ids are stable across calls.
void apply_noise(Circuit& circuit, double p);

}  // namespace foldsim
