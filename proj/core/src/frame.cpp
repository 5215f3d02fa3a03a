#include "foldsim/frame.hpp"

#include <stdexcept>

#include "foldsim/rng.hpp"

namespace foldsim {

namespace {

// Canonical member order of a depolarizing draw on one qubit: X, Y, Z.
constexpr Pauli kDepolarize1Member[3] = {Pauli::X, Pauli::Y, Pauli::Z};

// Canonical member order on two qubits: the 15 non-identity pairs listed by
// the base-4 digits of (member + 1) with digit map 0->I, 1->X, 2->Y, 3->Z,
// i.e. IX, IY, IZ, XI, XX, ..., ZZ.
inline void depolarize2_member(int m, Pauli& pa, Pauli& pb) {
  int code = m + 1;
  static constexpr Pauli digit[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  pa = digit[(code >> 2) & 3];
  pb = digit[code & 3];
}

inline void apply_pauli_bits(std::vector<char>& x, std::vector<char>& z, int q, Pauli p) {
  if (p == Pauli::X || p == Pauli::Y) x[q] ^= 1;
  if (p == Pauli::Z || p == Pauli::Y) z[q] ^= 1;
}

}  // namespace

FrameSampler::FrameSampler(const Circuit& c, const DetectorSet& ds) {
  n_qubits_ = static_cast<int>(c.qubits.size());
  n_measurements_ = static_cast<int>(c.measurements.size());
  n_detectors_ = static_cast<int>(ds.detectors.size());
  qubit_index_ = c.qubit_index;

  layer_ops_.resize(c.layers.size());
  layer_noise_.resize(c.layers.size());
  int max_index = c.layers.empty() ? 0 : c.layers.back().ts.index();
  layer_index_of_ts_.assign(max_index + 1, -1);

  // Track per-qubit measurement counters to resolve record slots in circuit
  // order; Circuit::measurements is sorted by (round, coord), matching the
  // per-layer instruction order used here.
  for (std::size_t li = 0; li < c.layers.size(); ++li) {
    const Layer& layer = c.layers[li];
    layer_index_of_ts_[layer.ts.index()] = static_cast<int>(li);
    for (const Instruction& ins : layer.instructions) {
      int a = c.qubit(ins.a);
      switch (ins.kind) {
        case GateKind::H:
          layer_ops_[li].push_back({OpKind::H, a, -1});
          break;
        case GateKind::S:
        case GateKind::Sdag:
          layer_ops_[li].push_back({OpKind::Phase, a, -1});
          break;
        case GateKind::CX:
          layer_ops_[li].push_back({OpKind::Cx, a, c.qubit(ins.b)});
          break;
        case GateKind::CZ:
          layer_ops_[li].push_back({OpKind::Cz, a, c.qubit(ins.b)});
          break;
        case GateKind::ResetX:
        case GateKind::ResetZ:
          layer_ops_[li].push_back({OpKind::Clear, a, -1});
          break;
        case GateKind::MeasZ:
          layer_ops_[li].push_back(
              {OpKind::RecordZ, a, c.measurement_index(ins.a, ins.ts.round)});
          break;
        case GateKind::MeasX:
          layer_ops_[li].push_back(
              {OpKind::RecordX, a, c.measurement_index(ins.a, ins.ts.round)});
          break;
        case GateKind::Idle:
          break;
      }
    }
  }

  for (const NoiseChannel& ch : c.channels) {
    int li = layer_index_of_ts_.at(ch.ts.index());
    if (li < 0) throw std::logic_error("noise channel timestamp has no layer");
    Noise n;
    n.kind = ch.kind;
    n.probability = ch.probability;
    n.id = ch.id;
    n.a = c.qubit(ch.a);
    if (ch.kind == NoiseKind::Depolarize2) n.b = c.qubit(ch.b);
    if (ch.kind == NoiseKind::FlipMeasure)
      n.measurement = c.measurement_index(ch.a, ch.ts.round);
    if (ch.kind == NoiseKind::FlipReset) {
      const ResetLocation& r = c.resets.at(c.reset_index(ch.a, ch.ts.round));
      // A flipped ResetX leaves |-> (Z error on |+>); a flipped ResetZ
      // leaves |1> (X error on |0>).
      n.anti_x = (r.basis == GateKind::ResetZ);
    }
    layer_noise_[li].push_back(n);
  }

  for (const Detector& d : ds.detectors) detector_members_.push_back(d.measurements);
  observable_ = ds.observable;
  observable_reference_ = ds.observable_reference;
}

void FrameSampler::run(std::vector<char>& x, std::vector<char>& z,
                       std::vector<char>& mflip, std::uint64_t seed,
                       std::uint64_t shot, bool noisy,
                       const std::vector<FaultInjection>* faults) const {
  x.assign(n_qubits_, 0);
  z.assign(n_qubits_, 0);
  mflip.assign(n_measurements_, 0);

  // Faults grouped by layer position; each applies after that moment.
  std::vector<std::vector<const FaultInjection*>> pending(layer_ops_.size());
  if (faults) {
    for (const FaultInjection& f : *faults) {
      int idx = f.at.index();
      int li = (idx >= 0 && idx < static_cast<int>(layer_index_of_ts_.size()))
                   ? layer_index_of_ts_[idx]
                   : -1;
      if (li < 0) throw std::invalid_argument("fault timestamp has no circuit layer");
      pending[li].push_back(&f);
    }
  }

  for (std::size_t li = 0; li < layer_ops_.size(); ++li) {
    for (const Op& op : layer_ops_[li]) {
      switch (op.kind) {
        case OpKind::H:
          std::swap(x[op.a], z[op.a]);
          break;
        case OpKind::Phase:
          z[op.a] ^= x[op.a];
          break;
        case OpKind::Cx:
          x[op.b] ^= x[op.a];
          z[op.a] ^= z[op.b];
          break;
        case OpKind::Cz:
          z[op.a] ^= x[op.b];
          z[op.b] ^= x[op.a];
          break;
        case OpKind::Clear:
          x[op.a] = 0;
          z[op.a] = 0;
          break;
        case OpKind::RecordZ:
          mflip[op.b] ^= x[op.a];
          break;
        case OpKind::RecordX:
          mflip[op.b] ^= z[op.a];
          break;
      }
    }
    if (noisy) {
      for (const Noise& n : layer_noise_[li]) {
        double u = counter_uniform(seed, shot, static_cast<std::uint64_t>(n.id));
        if (u >= n.probability) continue;
        switch (n.kind) {
          case NoiseKind::Depolarize1:
          case NoiseKind::PreRoundDepolarize1: {
            int m = static_cast<int>(u * 3.0 / n.probability);
            if (m > 2) m = 2;
            apply_pauli_bits(x, z, n.a, kDepolarize1Member[m]);
            break;
          }
          case NoiseKind::Depolarize2: {
            int m = static_cast<int>(u * 15.0 / n.probability);
            if (m > 14) m = 14;
            Pauli pa, pb;
            depolarize2_member(m, pa, pb);
            apply_pauli_bits(x, z, n.a, pa);
            apply_pauli_bits(x, z, n.b, pb);
            break;
          }
          case NoiseKind::FlipMeasure:
            mflip[n.measurement] ^= 1;
            break;
          case NoiseKind::FlipReset:
            if (n.anti_x)
              x[n.a] ^= 1;
            else
              z[n.a] ^= 1;
            break;
        }
      }
    }
    if (faults) {
      for (const FaultInjection* f : pending[li]) {
        for (const auto& [coord, pauli] : f->fault.support()) {
          auto it = qubit_index_.find(coord);
          if (it == qubit_index_.end())
            throw std::invalid_argument("fault touches unknown qubit " + coord.str());
          apply_pauli_bits(x, z, it->second, pauli);
        }
      }
    }
  }
}

ShotRecord FrameSampler::assemble(const std::vector<char>& mflip) const {
  ShotRecord rec;
  rec.detector_bits = BitVec(n_detectors_);
  for (int d = 0; d < n_detectors_; ++d) {
    char parity = 0;
    for (int m : detector_members_[d]) parity ^= mflip[m];
    if (parity) rec.detector_bits.set(d, true);
  }
  char obs = 0;
  for (int m : observable_) obs ^= mflip[m];
  rec.logical_bit = observable_reference_ ^ (obs != 0);
  return rec;
}

ShotRecord FrameSampler::sample(std::uint64_t seed, std::uint64_t shot) const {
  std::vector<char> x, z, mflip;
  run(x, z, mflip, seed, shot, /*noisy=*/true, nullptr);
  return assemble(mflip);
}

ShotRecord FrameSampler::run_injected(const std::vector<FaultInjection>& faults) const {
  std::vector<char> x, z, mflip;
  run(x, z, mflip, 0, 0, /*noisy=*/false, &faults);
  return assemble(mflip);
}

std::vector<char> FrameSampler::measurement_flips(
    const std::vector<FaultInjection>& faults) const {
  std::vector<char> x, z, mflip;
  run(x, z, mflip, 0, 0, /*noisy=*/false, &faults);
  return mflip;
}

std::vector<ShotRecord> sample_shots(const FrameSampler& sampler, long n_shots,
                                     std::uint64_t seed) {
  std::vector<ShotRecord> out;
  out.reserve(static_cast<std::size_t>(n_shots));
  for (long s = 0; s < n_shots; ++s)
    out.push_back(sampler.sample(seed, static_cast<std::uint64_t>(s)));
  return out;
}

}  // namespace foldsim
