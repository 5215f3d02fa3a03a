#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace foldsim {

// Doubled integer coordinates: data qubits sit at (even, even), ancilla qubits
// at (odd, odd). Halving recovers the conventional half-integer frame exactly.
struct Coord {
  int x2 = 0;
  int y2 = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;

  bool is_data_site() const { return x2 % 2 == 0 && y2 % 2 == 0; }
  bool is_ancilla_site() const { return (x2 & 1) && (y2 & 1); }

  std::string str() const { return std::to_string(x2) + "," + std::to_string(y2); }
};

inline Coord operator+(Coord a, Coord b) { return {a.x2 + b.x2, a.y2 + b.y2}; }
inline Coord operator-(Coord a, Coord b) { return {a.x2 - b.x2, a.y2 - b.y2}; }

struct CoordHash {
  std::size_t operator()(const Coord& c) const {
    return std::hash<std::uint64_t>{}((std::uint64_t(std::uint32_t(c.x2)) << 32) |
                                      std::uint32_t(c.y2));
  }
};

// Diagonal corner offsets from an ancilla to its data neighbours.
inline constexpr Coord kNE{+1, +1};
inline constexpr Coord kNW{-1, +1};
inline constexpr Coord kSE{+1, -1};
inline constexpr Coord kSW{-1, -1};

enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

// Phase class of a Pauli product, tracked modulo the subgroup {+1}:
// 0 -> +1, 1 -> +i, 2 -> -1, 3 -> -i (exponent of i).
struct PauliProduct {
  Pauli op;
  int phase_exponent;  // exponent of i in a*b = i^k (ab)
};

// Single-qubit Pauli product using the x/z bit representation:
// P = i^{?} X^x Z^z with Y == XZ carrying an implicit +i convention handled
// by the phase bookkeeping below.
inline PauliProduct pauli_mul(Pauli a, Pauli b) {
  auto xbit = [](Pauli p) { return (static_cast<int>(p) & 1); };
  auto zbit = [](Pauli p) { return (static_cast<int>(p) >> 1) & 1; };
  int ax = xbit(a), az = zbit(a), bx = xbit(b), bz = zbit(b);
  // i-exponent from commuting Z_a past X_b plus Y-normalisation terms.
  // Using P(x,z) = i^{x*z} X^x Z^z so that P(1,1) = Y exactly.
  // a*b = i^{ax*az + bx*bz} X^ax Z^az X^bx Z^bz
  //     = i^{ax*az + bx*bz} (-1)^{az*bx} X^{ax+bx} Z^{az+bz}
  int cx = ax ^ bx, cz = az ^ bz;
  int k = ax * az + bx * bz + 2 * (az * bx) - cx * cz;
  k = ((k % 4) + 4) % 4;
  Pauli out = static_cast<Pauli>(cx | (cz << 1));
  return {out, k};
}

inline bool pauli_commutes(Pauli a, Pauli b) {
  if (a == Pauli::I || b == Pauli::I || a == b) return true;
  return false;
}

inline char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Z: return 'Z';
    case Pauli::Y: return 'Y';
  }
  return '?';
}

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Z': return Pauli::Z;
    case 'Y': return Pauli::Y;
  }
  throw std::invalid_argument("not a Pauli letter");
}

// Signed sparse multi-qubit Pauli keyed by coordinate. Identity entries are
// never stored; global phase is collapsed to a sign, which is valid because
// every operator tracked through the circuits here is Hermitian.
class SparsePauli {
 public:
  SparsePauli() = default;

  static SparsePauli single(Coord c, Pauli p, int sign = +1) {
    SparsePauli s;
    s.set(c, p);
    s.sign_ = sign;
    return s;
  }

  Pauli at(Coord c) const {
    auto it = support_.find(c);
    return it == support_.end() ? Pauli::I : it->second;
  }

  void set(Coord c, Pauli p) {
    if (p == Pauli::I)
      support_.erase(c);
    else
      support_[c] = p;
  }

  int sign() const { return sign_; }
  void set_sign(int s) {
    if (s != 1 && s != -1) throw std::invalid_argument("sign must be +-1");
    sign_ = s;
  }
  void flip_sign() { sign_ = -sign_; }

  bool identity() const { return support_.empty(); }
  std::size_t weight() const { return support_.size(); }
  const std::map<Coord, Pauli>& support() const { return support_; }

  // Hermitian product: accumulated i-phase must come out real.
  SparsePauli operator*(const SparsePauli& o) const {
    SparsePauli r = *this;
    int iexp = 0;
    for (const auto& [c, p] : o.support_) {
      auto pr = pauli_mul(r.at(c), p);
      iexp += pr.phase_exponent;
      r.set(c, pr.op);
    }
    iexp = ((iexp % 4) + 4) % 4;
    if (iexp % 2 != 0) throw std::logic_error("non-Hermitian Pauli product");
    r.sign_ = sign_ * o.sign_ * (iexp == 2 ? -1 : 1);
    return r;
  }

  bool commutes(const SparsePauli& o) const {
    int anti = 0;
    const auto *small = &support_, *big = &o.support_;
    if (small->size() > big->size()) std::swap(small, big);
    const bool swapped = (small != &support_);
    for (const auto& [c, p] : *small) {
      Pauli q = swapped ? at(c) : o.at(c);
      if (!pauli_commutes(p, q)) anti ^= 1;
    }
    return anti == 0;
  }

  friend bool operator==(const SparsePauli& a, const SparsePauli& b) {
    return a.sign_ == b.sign_ && a.support_ == b.support_;
  }

  std::string str() const {
    std::string s = sign_ < 0 ? "-" : "+";
    for (const auto& [c, p] : support_) {
      s += pauli_char(p);
      s += c.str();
      s += ' ';
    }
    if (!support_.empty()) s.pop_back();
    return s;
  }

 private:
  std::map<Coord, Pauli> support_;
  int sign_ = +1;
};

// The seven mid-cycle checkpoints of one syndrome-extraction round, in strict
// circuit order. Instructions are tagged with the label of the state they
// produce; the fold layer of an S-round sits at PostS, between CNOT layers
// 2 and 3.
enum class MidCycleLabel : std::uint8_t {
  PostReset = 0,
  AfterLayer1 = 1,
  HalfCycle = 2,
  PostS = 3,
  WaningCrescent = 4,
  PreMeasure = 5,
  EndCycle = 6,
};

inline constexpr int kLabelsPerRound = 7;

inline const char* label_name(MidCycleLabel l) {
  switch (l) {
    case MidCycleLabel::PostReset: return "post_reset";
    case MidCycleLabel::AfterLayer1: return "after_layer1";
    case MidCycleLabel::HalfCycle: return "half_cycle";
    case MidCycleLabel::PostS: return "post_s";
    case MidCycleLabel::WaningCrescent: return "waning_crescent";
    case MidCycleLabel::PreMeasure: return "pre_measure";
    case MidCycleLabel::EndCycle: return "end_cycle";
  }
  return "?";
}

inline MidCycleLabel label_from_name(const std::string& s) {
  for (int i = 0; i < kLabelsPerRound; ++i) {
    auto l = static_cast<MidCycleLabel>(i);
    if (s == label_name(l)) return l;
  }
  throw std::invalid_argument("unknown mid-cycle label: " + s);
}

struct Timestamp {
  MidCycleLabel label = MidCycleLabel::PostReset;
  int round = 0;

  friend bool operator==(const Timestamp& a, const Timestamp& b) {
    return a.round == b.round && a.label == b.label;
  }
  friend auto operator<=>(const Timestamp& a, const Timestamp& b) {
    if (auto c = a.round <=> b.round; c != 0) return c;
    return static_cast<int>(a.label) <=> static_cast<int>(b.label);
  }

  // Dense index into the global checkpoint sequence.
  int index() const { return round * kLabelsPerRound + static_cast<int>(label); }
};

inline bool timestamp_before(const Timestamp& a, const Timestamp& b) { return a < b; }

}  // namespace foldsim
