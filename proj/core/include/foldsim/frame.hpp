#pragma once

#include <cstdint>
#include <vector>

#include "foldsim/circuit.hpp"
#include "foldsim/tableau.hpp"
#include "foldsim/trajectory.hpp"

namespace foldsim {

// Decoder-facing outcome of one sampled shot.
struct ShotRecord {
  BitVec detector_bits;      // indexed by detector id; 1 = parity differs from reference
  bool logical_bit = false;  // observed logical readout (absolute, not reference-relative)
};

// A Pauli error inserted immediately after the moment labelled `at`.
struct FaultInjection {
  SparsePauli fault;
  Timestamp at;
};

// Pauli-frame sampler: propagates an X/Z flip mask through the Clifford layers
// instead of a full stabilizer state, which is exact for Pauli noise on
// Clifford circuits. A noiseless shot therefore reads all detectors 0 and the
// logical bit at its reference value by construction of the detector set.
//
// Frame rules per gate (sign-free; frames compose under XOR):
//   H swaps x,z;  S and Sdag add x into z;  CX adds x(c) into x(t) and z(t)
//   into z(c);  CZ adds x of each target into z of the other.  A measurement
//   records the anticommuting frame bit as an outcome flip and leaves the
//   frame untouched; a reset clears both bits.
class FrameSampler {
 public:
  FrameSampler(const Circuit& c, const DetectorSet& ds);

  // One noisy shot. Each channel draws u = counter_uniform(seed, shot, id);
  // the channel fires iff u < p, and the fired member index is the
  // subdivision min(k-1, floor(u*k/p)), so records are reproducible per
  // (seed, shot) independently of evaluation order.
  ShotRecord sample(std::uint64_t seed, std::uint64_t shot) const;

  // Deterministic run with the given faults inserted and all channels silent.
  ShotRecord run_injected(const std::vector<FaultInjection>& faults) const;

  // Raw measurement flips of an injected run (oracle/diagnostic use).
  std::vector<char> measurement_flips(const std::vector<FaultInjection>& faults) const;

  int n_detectors() const { return n_detectors_; }
  int n_measurements() const { return n_measurements_; }

 private:
  enum class OpKind : std::uint8_t { H, Phase, Cx, Cz, Clear, RecordZ, RecordX };
  struct Op {
    OpKind kind;
    int a = -1;
    int b = -1;  // second qubit, or measurement index for records
  };
  // Precompiled noise channel: targets resolved to qubit indices, measurement
  // flips resolved to their record slot.
  struct Noise {
    NoiseKind kind;
    double probability;
    int id;
    int a = -1;
    int b = -1;
    int measurement = -1;  // FlipMeasure only
    bool anti_x = false;   // FlipReset: true -> set x bit, false -> set z bit
  };

  void run(std::vector<char>& x, std::vector<char>& z, std::vector<char>& mflip,
           std::uint64_t seed, std::uint64_t shot, bool noisy,
           const std::vector<FaultInjection>* faults) const;
  ShotRecord assemble(const std::vector<char>& mflip) const;

  int n_qubits_ = 0;
  int n_measurements_ = 0;
  int n_detectors_ = 0;
  std::vector<std::vector<Op>> layer_ops_;        // per layer position
  std::vector<std::vector<Noise>> layer_noise_;   // per layer position
  std::vector<int> layer_index_of_ts_;            // Timestamp::index() -> layer position
  std::vector<std::vector<int>> detector_members_;
  std::vector<int> observable_;
  bool observable_reference_ = false;
  std::map<Coord, int> qubit_index_;
};

// Convenience bulk sampler.
std::vector<ShotRecord> sample_shots(const FrameSampler& sampler, long n_shots,
                                     std::uint64_t seed);

}  // namespace foldsim
