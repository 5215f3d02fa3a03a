#include "foldsim/tableau.hpp"

#include <algorithm>
#include <stdexcept>

namespace foldsim {

namespace {

// Phase exponent contribution when multiplying the Pauli (x1,z1) onto an
// accumulator currently holding (x2,z2) on one qubit (Aaronson--Gottesman).
int g_exp(bool x1, bool z1, bool x2, bool z2) {
  if (!x1 && !z1) return 0;
  if (x1 && z1) return int(z2) - int(x2);
  if (x1) return int(z2) * (2 * int(x2) - 1);
  return int(x2) * (1 - 2 * int(z2));
}

}  // namespace

Tableau::Tableau(int n_qubits, int n_measurements, int n_resets)
    : n_(n_qubits), rows_(2 * n_qubits) {
  if (n_qubits <= 0) throw std::invalid_argument("tableau needs at least one qubit");
  if (n_measurements < 0 || n_resets < 0)
    throw std::invalid_argument("negative tracking capacity");
  track_ = n_measurements > 0 || n_resets > 0;
  x_.assign(rows_, BitVec(n_));
  z_.assign(rows_, BitVec(n_));
  r_.assign(rows_, false);
  if (track_) {
    meas_dep_.assign(rows_, BitVec(n_measurements));
    reset_dep_.assign(rows_, BitVec(n_resets));
  }
  recorded_.assign(n_measurements, false);
  for (int i = 0; i < n_; ++i) {
    x_[i].set(i, true);          // destabilizer X_i
    z_[n_ + i].set(i, true);     // stabilizer Z_i
  }
}

void Tableau::h(int q) {
  for (int i = 0; i < rows_; ++i) {
    bool x = x_[i].get(q), z = z_[i].get(q);
    if (x && z) r_[i] = !r_[i];
    x_[i].set(q, z);
    z_[i].set(q, x);
  }
}

void Tableau::s(int q) {
  for (int i = 0; i < rows_; ++i) {
    bool x = x_[i].get(q), z = z_[i].get(q);
    if (x && z) r_[i] = !r_[i];
    z_[i].set(q, z ^ x);
  }
}

void Tableau::sdag(int q) {
  for (int i = 0; i < rows_; ++i) {
    bool x = x_[i].get(q), z = z_[i].get(q);
    if (x && !z) r_[i] = !r_[i];
    z_[i].set(q, z ^ x);
  }
}

void Tableau::cx(int c, int t) {
  if (c == t) throw std::invalid_argument("cx needs distinct qubits");
  for (int i = 0; i < rows_; ++i) {
    bool xc = x_[i].get(c), zc = z_[i].get(c);
    bool xt = x_[i].get(t), zt = z_[i].get(t);
    if (xc && zt && (xt == zc)) r_[i] = !r_[i];
    x_[i].set(t, xt ^ xc);
    z_[i].set(c, zc ^ zt);
  }
}

void Tableau::cz(int a, int b) {
  if (a == b) throw std::invalid_argument("cz needs distinct qubits");
  for (int i = 0; i < rows_; ++i) {
    bool xa = x_[i].get(a), za = z_[i].get(a);
    bool xb = x_[i].get(b), zb = z_[i].get(b);
    if (xa && xb && (za != zb)) r_[i] = !r_[i];
    z_[i].set(a, za ^ xb);
    z_[i].set(b, zb ^ xa);
  }
}

void Tableau::rowsum(int h, int i) {
  int phase = 2 * int(r_[h]) + 2 * int(r_[i]);
  for (int q = 0; q < n_; ++q)
    phase += g_exp(x_[i].get(q), z_[i].get(q), x_[h].get(q), z_[h].get(q));
  phase = ((phase % 4) + 4) % 4;
  if (h >= n_ && (phase & 1))
    throw std::logic_error("rowsum produced a non-Hermitian stabilizer");
  r_[h] = (phase >> 1) & 1;
  x_[h] ^= x_[i];
  z_[h] ^= z_[i];
  if (track_) {
    meas_dep_[h] ^= meas_dep_[i];
    reset_dep_[h] ^= reset_dep_[i];
  }
}

void Tableau::stab_mul(int h, int i) {
  rowsum(h, i);
  rowsum(i - n_, h - n_);
}

void Tableau::rowsum_scratch(BitVec& sx, BitVec& sz, int& phase2, BitVec& md,
                             BitVec& rd, int i) const {
  int phase = phase2 + 2 * int(r_[i]);
  for (int q = 0; q < n_; ++q)
    phase += g_exp(x_[i].get(q), z_[i].get(q), sx.get(q), sz.get(q));
  phase2 = ((phase % 4) + 4) % 4;
  sx ^= x_[i];
  sz ^= z_[i];
  if (track_) {
    md ^= meas_dep_[i];
    rd ^= reset_dep_[i];
  }
}

MeasureResult Tableau::measure_z(int q, int record_id, std::optional<bool> force) {
  if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
  if (record_id >= int(recorded_.size()))
    throw std::invalid_argument("record id exceeds tracking capacity");

  int pivot = -1;
  for (int p = n_; p < rows_; ++p)
    if (x_[p].get(q)) {
      pivot = p;
      break;
    }

  MeasureResult res;
  if (pivot >= 0) {
    // Random outcome: standard projection update.
    for (int i = 0; i < rows_; ++i)
      if (i != pivot && x_[i].get(q)) rowsum(i, pivot);
    x_[pivot - n_] = x_[pivot];
    z_[pivot - n_] = z_[pivot];
    r_[pivot - n_] = r_[pivot];
    if (track_) {
      meas_dep_[pivot - n_] = meas_dep_[pivot];
      reset_dep_[pivot - n_] = reset_dep_[pivot];
    }
    bool v = force.value_or(false);
    x_[pivot].clear();
    z_[pivot].clear();
    z_[pivot].set(q, true);
    if (track_) {
      meas_dep_[pivot].clear();
      reset_dep_[pivot].clear();
    }
    if (record_id >= 0) {
      // Symbolic sign: row reads "Z_q equals this outcome variable".
      r_[pivot] = false;
      meas_dep_[pivot].set(record_id, true);
      recorded_[record_id] = v;
    } else {
      r_[pivot] = v;
    }
    res.value = v;
    res.deterministic = false;
    return res;
  }

  // Deterministic outcome: accumulate the stabilizer subset that multiplies
  // to Z_q, indexed by the anticommuting destabilizers.
  BitVec sx(n_), sz(n_);
  BitVec md(track_ ? meas_dep_[0].size() : 0), rd(track_ ? reset_dep_[0].size() : 0);
  int phase2 = 0;
  std::vector<int> srows;
  for (int i = 0; i < n_; ++i)
    if (x_[i].get(q)) {
      rowsum_scratch(sx, sz, phase2, md, rd, n_ + i);
      srows.push_back(n_ + i);
    }
  sz.flip(q);
  if (srows.empty() || sx.any() || sz.any() || (phase2 & 1))
    throw std::logic_error("deterministic measurement did not reduce to the measured operator");

  res.deterministic = true;
  res.sign_bit = (phase2 >> 1) & 1;
  res.value = res.sign_bit;
  for (auto m : md.ones()) {
    res.meas_deps.push_back(int(m));
    res.value ^= recorded_[m];
  }
  for (auto rdep : rd.ones()) res.reset_deps.push_back(int(rdep));
  if (force && *force != res.value)
    throw std::logic_error("forced outcome contradicts a deterministic measurement");

  if (record_id >= 0) {
    recorded_[record_id] = res.value;
    // Re-anchor the basis on the fresh outcome: fold the subset into one row
    // that becomes exactly Z_q with sign given by this outcome variable.
    // Prefer consuming a row without support on q so that rows still touching
    // q (the ones a later reset will strip) carry the newest anchor forward.
    int piv = srows.front();
    for (int row : srows)
      if (!z_[row].get(q) && !x_[row].get(q)) {
        piv = row;
        break;
      }
    for (int row : srows)
      if (row != piv) stab_mul(piv, row);
    bool ok = !x_[piv].any();
    if (ok) {
      z_[piv].flip(q);
      ok = !z_[piv].any();
      z_[piv].flip(q);
    }
    if (!ok) throw std::logic_error("measurement refresh failed to isolate the operator");
    r_[piv] = false;
    meas_dep_[piv].clear();
    meas_dep_[piv].set(record_id, true);
    reset_dep_[piv].clear();
  }
  return res;
}

MeasureResult Tableau::measure_x(int q, int record_id, std::optional<bool> force) {
  h(q);
  MeasureResult res = measure_z(q, record_id, force);
  h(q);
  return res;
}

void Tableau::reset_z(int q, int reset_id) {
  if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
  if (track_ && reset_id >= int(reset_dep_[0].size()))
    throw std::invalid_argument("reset id exceeds tracking capacity");

  int pivot = -1;
  for (int p = n_; p < rows_; ++p)
    if (x_[p].get(q)) {
      pivot = p;
      break;
    }

  if (pivot >= 0) {
    // Random implied outcome; take the branch where it reads 0 so no
    // correction is needed. Any other stabilizer still touching Z_q would be
    // left with a sign correlated to the discarded branch choice.
    for (int i = 0; i < rows_; ++i)
      if (i != pivot && x_[i].get(q)) rowsum(i, pivot);
    x_[pivot - n_] = x_[pivot];
    z_[pivot - n_] = z_[pivot];
    r_[pivot - n_] = r_[pivot];
    if (track_) {
      meas_dep_[pivot - n_] = meas_dep_[pivot];
      reset_dep_[pivot - n_] = reset_dep_[pivot];
    }
    x_[pivot].clear();
    z_[pivot].clear();
    z_[pivot].set(q, true);
    r_[pivot] = false;
    if (track_) {
      meas_dep_[pivot].clear();
      reset_dep_[pivot].clear();
      if (reset_id >= 0) reset_dep_[pivot].set(reset_id, true);
    }
    for (int p2 = n_; p2 < rows_; ++p2)
      if (p2 != pivot && z_[p2].get(q))
        throw std::logic_error("reset on a qubit with correlated sign information");
    return;
  }

  // Deterministic implied outcome: Z_q is already a product of stabilizers.
  BitVec sx(n_), sz(n_);
  BitVec md(track_ ? meas_dep_[0].size() : 0), rd(track_ ? reset_dep_[0].size() : 0);
  int phase2 = 0;
  std::vector<int> srows;
  for (int i = 0; i < n_; ++i)
    if (x_[i].get(q)) {
      rowsum_scratch(sx, sz, phase2, md, rd, n_ + i);
      srows.push_back(n_ + i);
    }
  sz.flip(q);
  if (srows.empty() || sx.any() || sz.any() || (phase2 & 1))
    throw std::logic_error("reset reduction did not produce the reset operator");

  // Consolidate the subset into one row holding Z_q with its current sign
  // data, strip Z_q from every other stabilizer (this hands them the sign
  // dependence the conditional correction would imprint), then relabel the
  // pivot as the freshly generated stabilizer.
  int piv = -1;
  for (int row : srows)
    if (z_[row].get(q)) {
      piv = row;
      break;
    }
  if (piv < 0) throw std::logic_error("reset subset lacks a row supported on the qubit");
  for (int row : srows)
    if (row != piv) stab_mul(piv, row);
  bool ok = !x_[piv].any();
  if (ok) {
    z_[piv].flip(q);
    ok = !z_[piv].any();
    z_[piv].flip(q);
  }
  if (!ok) throw std::logic_error("reset consolidation failed to isolate the operator");
  for (int p2 = n_; p2 < rows_; ++p2)
    if (p2 != piv && z_[p2].get(q)) stab_mul(p2, piv);
  r_[piv] = false;
  if (track_) {
    meas_dep_[piv].clear();
    reset_dep_[piv].clear();
    if (reset_id >= 0) reset_dep_[piv].set(reset_id, true);
  }
}

void Tableau::reset_x(int q, int reset_id) {
  h(q);
  reset_z(q, reset_id);
  h(q);
}

std::optional<MeasureResult> Tableau::group_value(const BitVec& x, const BitVec& z) const {
  if (int(x.size()) != n_ || int(z.size()) != n_)
    throw std::invalid_argument("pauli bit width mismatch");
  BitVec sx(n_), sz(n_);
  BitVec md(track_ ? meas_dep_[0].size() : 0), rd(track_ ? reset_dep_[0].size() : 0);
  int phase2 = 0;
  bool nontrivial = false;
  for (int i = 0; i < n_; ++i) {
    bool anti = false;
    for (int q = 0; q < n_; ++q) {
      anti ^= x_[i].get(q) && z.get(q);
      anti ^= z_[i].get(q) && x.get(q);
    }
    if (anti) {
      rowsum_scratch(sx, sz, phase2, md, rd, n_ + i);
      nontrivial = true;
    }
  }
  sx ^= x;
  sz ^= z;
  if (sx.any() || sz.any()) return std::nullopt;
  if (!nontrivial && (x.any() || z.any())) return std::nullopt;
  if (phase2 & 1) throw std::logic_error("group reduction produced a non-Hermitian operator");
  MeasureResult res;
  res.deterministic = true;
  res.sign_bit = (phase2 >> 1) & 1;
  res.value = res.sign_bit;
  for (auto m : md.ones()) {
    res.meas_deps.push_back(int(m));
    res.value ^= recorded_[m];
  }
  for (auto rdep : rd.ones()) res.reset_deps.push_back(int(rdep));
  return res;
}

std::string Tableau::canonical_stabilizers() const {
  struct Row {
    BitVec x, z;
    bool r;
  };
  std::vector<Row> rows(n_);
  for (int i = 0; i < n_; ++i) {
    rows[i].x = x_[n_ + i];
    rows[i].z = z_[n_ + i];
    bool sign = r_[n_ + i];
    if (track_)
      for (auto m : meas_dep_[n_ + i].ones()) sign ^= recorded_[m];
    rows[i].r = sign;
  }
  auto mul = [&](Row& hrow, const Row& irow) {
    int phase = 2 * int(hrow.r) + 2 * int(irow.r);
    for (int q = 0; q < n_; ++q)
      phase += g_exp(irow.x.get(q), irow.z.get(q), hrow.x.get(q), hrow.z.get(q));
    phase = ((phase % 4) + 4) % 4;
    if (phase & 1) throw std::logic_error("canonicalization produced a non-Hermitian row");
    hrow.r = (phase >> 1) & 1;
    hrow.x ^= irow.x;
    hrow.z ^= irow.z;
  };
  int done = 0;
  for (int q = 0; q < n_ && done < n_; ++q) {
    int sel = -1;
    for (int i = done; i < n_; ++i)
      if (rows[i].x.get(q)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[done], rows[sel]);
    for (int i = 0; i < n_; ++i)
      if (i != done && rows[i].x.get(q)) mul(rows[i], rows[done]);
    ++done;
  }
  for (int q = 0; q < n_ && done < n_; ++q) {
    int sel = -1;
    for (int i = done; i < n_; ++i)
      if (rows[i].z.get(q)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[done], rows[sel]);
    for (int i = 0; i < n_; ++i)
      if (i != done && rows[i].z.get(q)) mul(rows[i], rows[done]);
    ++done;
  }
  if (done != n_) throw std::logic_error("stabilizer half lost rank");
  std::vector<std::string> lines(n_);
  for (int i = 0; i < n_; ++i) {
    std::string s;
    s += rows[i].r ? '-' : '+';
    for (int q = 0; q < n_; ++q) {
      bool xb = rows[i].x.get(q), zb = rows[i].z.get(q);
      Pauli p = xb ? (zb ? Pauli::Y : Pauli::X) : (zb ? Pauli::Z : Pauli::I);
      s += pauli_char(p);
    }
    lines[i] = std::move(s);
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (int i = 0; i < n_; ++i) {
    out += lines[i];
    if (i + 1 < n_) out += '\n';
  }
  return out;
}

void Tableau::apply_pauli(const BitVec& x, const BitVec& z) {
  if (int(x.size()) != n_ || int(z.size()) != n_)
    throw std::invalid_argument("pauli bit width mismatch");
  for (int i = 0; i < rows_; ++i) {
    bool anti = false;
    for (int q = 0; q < n_; ++q) {
      anti ^= x_[i].get(q) && z.get(q);
      anti ^= z_[i].get(q) && x.get(q);
    }
    if (anti) r_[i] = !r_[i];
  }
}

}  // namespace foldsim
