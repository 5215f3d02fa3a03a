#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foldsim/geometry.hpp"

namespace foldsim {

// Dynamic bitset used for tableau rows and dependency sets.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t bits) : bits_(bits), w_((bits + 63) / 64) {}

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v) {
    if (v)
      w_[i >> 6] |= 1ull << (i & 63);
    else
      w_[i >> 6] &= ~(1ull << (i & 63));
  }
  void flip(std::size_t i) { w_[i >> 6] ^= 1ull << (i & 63); }
  void operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  std::size_t size() const { return bits_; }
  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < bits_; ++i)
      if (get(i)) v.push_back(i);
    return v;
  }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> w_;
};

// Outcome of a measurement processed by the tableau.
struct MeasureResult {
  bool value = false;          // evaluated outcome for this run
  bool deterministic = false;
  // For deterministic outcomes: value == sign_bit XOR parity of the recorded
  // outcomes named in meas_deps; reset_deps is the provenance (which resets
  // generated the stabilizers forcing the outcome).
  bool sign_bit = false;
  std::vector<int> meas_deps;
  std::vector<int> reset_deps;
};

// Aaronson--Gottesman stabilizer tableau over qubit indices [0, n), with
// optional symbolic tracking of how each generator's sign depends on recorded
// measurement outcomes and which reset locations generated it.
class Tableau {
 public:
  explicit Tableau(int n_qubits, int n_measurements = 0, int n_resets = 0);

  int n() const { return n_; }

  void h(int q);
  void s(int q);
  void sdag(int q);
  void cx(int c, int t);
  void cz(int a, int b);

  // Measurement in the Z (or X) basis. `record_id` names the outcome variable
  // for dependency tracking (-1 for unrecorded internal measurements).
  // `force` pins random outcomes; forcing a deterministic outcome to the
  // wrong value throws std::logic_error.
  MeasureResult measure_z(int q, int record_id = -1, std::optional<bool> force = {});
  MeasureResult measure_x(int q, int record_id = -1, std::optional<bool> force = {});

  // Projective reset; the implied measurement outcome is discarded and the
  // qubit ends in the +1 eigenstate. `reset_id` tags provenance.
  void reset_z(int q, int reset_id = -1);
  void reset_x(int q, int reset_id = -1);

  // Membership test for a Pauli operator given as (x bits, z bits): returns
  // its sign data iff +-P is in the stabilizer group, nullopt otherwise.
  std::optional<MeasureResult> group_value(const BitVec& x, const BitVec& z) const;

  // Evaluated outcome value previously recorded under `record_id`.
  bool recorded(int record_id) const { return recorded_.at(record_id); }

  // Canonical generator matrix: Gauss--Jordan reduced stabilizer half, rows
  // sorted; one line per generator, sign then Pauli letters by qubit index.
  std::string canonical_stabilizers() const;

  // Applies a Pauli (given by bits) unconditionally; flips signs of
  // anticommuting generators.
  void apply_pauli(const BitVec& x, const BitVec& z);

 private:
  int n_;
  int rows_;  // 2n: destabilizers then stabilizers
  std::vector<BitVec> x_, z_;
  std::vector<bool> r_;  // sign bit (constant term)
  bool track_;
  std::vector<BitVec> meas_dep_, reset_dep_;
  std::vector<bool> recorded_;  // evaluated outcome values by record id

  void rowsum(int h, int i);  // row_h *= row_i (AG phase rule)
  // Stabilizer basis change stab_h *= stab_i; applies the dual update
  // destab_i *= destab_h so the symplectic pairing is preserved.
  void stab_mul(int h, int i);
  void rowsum_scratch(BitVec& sx, BitVec& sz, int& phase2, BitVec& md, BitVec& rd,
                      int i) const;
  bool row_anticommutes_z(int row, int q) const { return x_[row].get(q); }
  friend class TableauScratch;
};

}  // namespace foldsim
