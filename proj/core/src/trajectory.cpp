#include "foldsim/trajectory.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <stdexcept>

namespace foldsim {

namespace {

std::vector<int> sym_diff(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

// Advances a tableau through one layer; measurement outcomes are recorded
// under their global indices, random branches take the forced value 0.
// `on_measure` sees each measurement result right after it is processed.
template <typename F>
void step_layer(const Circuit& c, Tableau& t, const Layer& layer, F&& on_measure) {
  for (const auto& ins : layer.instructions) {
    switch (ins.kind) {
      case GateKind::ResetX:
        t.reset_x(c.qubit(ins.a), c.reset_index(ins.a, ins.ts.round));
        break;
      case GateKind::ResetZ:
        t.reset_z(c.qubit(ins.a), c.reset_index(ins.a, ins.ts.round));
        break;
      case GateKind::MeasX: {
        int mid = c.measurement_index(ins.a, ins.ts.round);
        auto res = t.measure_x(c.qubit(ins.a), mid,
                               std::optional<bool>{});
        on_measure(mid, res);
        break;
      }
      case GateKind::MeasZ: {
        int mid = c.measurement_index(ins.a, ins.ts.round);
        auto res = t.measure_z(c.qubit(ins.a), mid,
                               std::optional<bool>{});
        on_measure(mid, res);
        break;
      }
      case GateKind::H:
        t.h(c.qubit(ins.a));
        break;
      case GateKind::S:
        t.s(c.qubit(ins.a));
        break;
      case GateKind::Sdag:
        t.sdag(c.qubit(ins.a));
        break;
      case GateKind::CX:
        t.cx(c.qubit(ins.a), c.qubit(ins.b));
        break;
      case GateKind::CZ:
        t.cz(c.qubit(ins.a), c.qubit(ins.b));
        break;
      case GateKind::Idle:
        break;
    }
  }
}

}  // namespace

namespace {

// A parity relation over recorded outcomes, reduced against an online
// row-echelon basis keyed by each row's largest member.
struct Relation {
  std::vector<int> members;  // sorted
  bool parity = false;
  std::vector<int> prov;     // sorted reset indices
};

class RelationBasis {
 public:
  // Fully reduces `rel` against the basis; the result's parity/prov carry the
  // accumulated bookkeeping of every row used.
  Relation reduce(Relation rel) const {
    std::set<int> cur(rel.members.begin(), rel.members.end());
    std::vector<int> kept;
    while (!cur.empty()) {
      int p = *cur.rbegin();
      auto it = rows_.find(p);
      if (it == rows_.end()) {
        kept.push_back(p);
        cur.erase(p);
        continue;
      }
      for (int m : it->second.members) {
        if (!cur.erase(m)) cur.insert(m);
      }
      rel.parity ^= it->second.parity;
      rel.prov = sym_diff(rel.prov, it->second.prov);
    }
    std::sort(kept.begin(), kept.end());
    rel.members = std::move(kept);
    return rel;
  }

  void insert(const Relation& reduced) {
    if (reduced.members.empty())
      throw std::logic_error("cannot insert an empty relation");
    rows_[reduced.members.back()] = reduced;
  }

 private:
  std::map<int, Relation> rows_;  // pivot (largest member) -> reduced row
};

}  // namespace

DetectorSet enumerate_detectors(const Circuit& c) {
  DetectorSet out;
  out.observable = c.observable;

  // --- Construction. Detector membership is structural: each check compares
  // consecutive extractions, with one-sided references against the data
  // initialization and the transversal readout for checks matching those
  // bases. A comparison window containing a phase-fold layer additionally
  // carries one mirror-partner Z outcome from the fold round: the fold
  // multiplies every X check by the Z check one step beyond its mirror image,
  // and that residue surfaces in the partner's extraction when the partner
  // slot is occupied (for the pre-fold side, only when the partner's own
  // mirror is absent; otherwise the residue dies inside the fold and the pair
  // stays plain). The backward trace derives each member list's generating
  // resets and reference sign, and the forward flow engine must agree before
  // a detector is accepted.
  const int final_round = int(c.round_kinds.size()) - 1;
  const int last_se = final_round - 1;

  GateKind init_basis = c.resets.front().basis;
  GateKind readout_basis = GateKind::MeasX;
  for (const auto& ins : c.layers.back().instructions)
    if (ins.kind == GateKind::MeasX || ins.kind == GateKind::MeasZ)
      readout_basis = ins.kind;

  std::vector<Detector> dets;
  auto make_detector = [&](Coord anchor, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    RegionResult rr = trace_region(c, members);
    FlowResult fr = propagate_flow(c, rr.generating_resets);
    if (fr.absorbed != members)
      throw std::logic_error("region engines disagree on detector membership");
    if (fr.final_sign != rr.final_sign)
      throw std::logic_error("region engines disagree on reference parity");
    Detector d;
    d.measurements = std::move(members);
    d.reference_parity = rr.final_sign < 0;
    d.generating_resets = std::move(rr.generating_resets);
    int lo_round = c.measurements[d.measurements.front()].round;
    int hi_round = lo_round;
    bool all_z = true;
    for (int m : d.measurements) {
      const auto& loc = c.measurements[m];
      lo_round = std::min(lo_round, loc.round);
      hi_round = std::max(hi_round, loc.round);
      if (loc.basis != GateKind::MeasZ) all_z = false;
    }
    d.coord = anchor;
    d.t2 = d.measurements.size() == 1 ? 2 * lo_round - 1 : lo_round + hi_round;
    d.z_type = all_z;
    dets.push_back(std::move(d));
  };

  for (const auto& [anc, support] : c.layout.stabilizer_support) {
    bool x_anc = c.layout.is_x_ancilla(anc);
    if (x_anc == (init_basis == GateKind::ResetX))
      make_detector(anc, {c.measurement_index(anc, 1)});
    for (int i = 1; i < last_se; ++i) {
      std::vector<int> members{c.measurement_index(anc, i),
                               c.measurement_index(anc, i + 1)};
      if (x_anc && c.kind_of_round(i) == RoundKind::SSE) {
        Coord partner{anc.y2, anc.x2 + 2};
        if (c.layout.is_z_ancilla(partner))
          members.push_back(c.measurement_index(partner, i));
      }
      if (x_anc && c.kind_of_round(i + 1) == RoundKind::SSE) {
        Coord partner{anc.y2, anc.x2 - 2};
        if (c.layout.is_z_ancilla(partner) &&
            !c.layout.is_z_ancilla(Coord{partner.y2, partner.x2}))
          members.push_back(c.measurement_index(partner, i + 1));
      }
      make_detector(anc, std::move(members));
    }
    if (x_anc == (readout_basis == GateKind::MeasX)) {
      std::vector<int> members{c.measurement_index(anc, last_se)};
      for (Coord q : support)
        members.push_back(c.measurement_index(q, final_round));
      make_detector(anc, std::move(members));
    }
  }

  {
    RegionResult rr = trace_region(c, c.observable);
    FlowResult fr = propagate_flow(c, rr.generating_resets);
    if (fr.absorbed != c.observable)
      throw std::logic_error("region engines disagree on the observable");
    if (fr.final_sign != rr.final_sign)
      throw std::logic_error("region engines disagree on the observable sign");
    out.observable_reference = rr.final_sign < 0;
    out.observable_resets = std::move(rr.generating_resets);
  }

  // --- Certification. A dependency-tracking stabilizer walk must find every
  // constructed relation independent, and every deterministic outcome it
  // derives must reduce to the empty relation with even parity against them;
  // together these prove the set above is exactly a basis of the circuit's
  // outcome relations, with correct reference parities.
  RelationBasis basis;
  for (const auto& d : dets) {
    Relation red = basis.reduce(
        {d.measurements, d.reference_parity, d.generating_resets});
    if (red.members.empty())
      throw std::logic_error("constructed detectors are linearly dependent");
    basis.insert(red);
  }
  {
    Relation red = basis.reduce(
        {out.observable, out.observable_reference, out.observable_resets});
    if (red.members.empty())
      throw std::logic_error("logical observable lies in the detector span");
    basis.insert(red);
  }

  Tableau t(int(c.qubits.size()), int(c.measurements.size()), int(c.resets.size()));
  std::size_t deterministic_outcomes = 0;
  for (const auto& layer : c.layers) {
    step_layer(c, t, layer, [&](int mid, const MeasureResult& res) {
      if (!res.deterministic) return;
      ++deterministic_outcomes;
      Relation raw;
      raw.members = res.meas_deps;
      raw.members.push_back(mid);
      std::sort(raw.members.begin(), raw.members.end());
      raw.parity = res.sign_bit;
      Relation red = basis.reduce(std::move(raw));
      if (!red.members.empty())
        throw std::logic_error("deterministic outcome outside the detector span");
      if (red.parity)
        throw std::logic_error("detector reference parity contradicts the walk");
    });
  }
  if (deterministic_outcomes != dets.size() + 1)
    throw std::logic_error("detector count does not match the relation rank");

  // Every extraction measurement must participate in at least one detector.
  std::vector<char> covered(c.measurements.size(), 0);
  for (const auto& d : dets)
    for (int m : d.measurements) covered[m] = 1;
  for (std::size_t m = 0; m < c.measurements.size(); ++m)
    if (!covered[m] && c.layout.is_ancilla(c.measurements[m].coord))
      throw std::logic_error("extraction measurement not covered by any detector");

  std::sort(dets.begin(), dets.end(), [](const Detector& a, const Detector& b) {
    return std::tie(a.t2, a.coord.x2, a.coord.y2) <
           std::tie(b.t2, b.coord.x2, b.coord.y2);
  });
  for (std::size_t i = 0; i + 1 < dets.size(); ++i)
    if (dets[i].t2 == dets[i + 1].t2 && dets[i].coord == dets[i + 1].coord)
      throw std::logic_error("detector coordinate collision at (" +
                             std::to_string(dets[i].coord.x2) + "," +
                             std::to_string(dets[i].coord.y2) +
                             ") t2=" + std::to_string(dets[i].t2));
  for (std::size_t i = 0; i < dets.size(); ++i) dets[i].id = int(i);
  out.detectors = std::move(dets);
  return out;
}

Tableau tableau_at(const Circuit& c, Timestamp ts) {
  Tableau t(int(c.qubits.size()), int(c.measurements.size()), int(c.resets.size()));
  for (const auto& layer : c.layers) {
    if (ts < layer.ts) break;
    step_layer(c, t, layer, [](int, const MeasureResult&) {});
  }
  return t;
}

std::string stabilizer_group_at(const Circuit& c, Timestamp ts) {
  return tableau_at(c, ts).canonical_stabilizers();
}

std::string canonical_group(const std::vector<SparsePauli>& gens,
                            const std::vector<Coord>& qubits) {
  const int n = int(qubits.size());
  std::map<Coord, int> index;
  for (int i = 0; i < n; ++i) index[qubits[i]] = i;

  struct Row {
    BitVec x, z;
    bool r;
  };
  std::vector<Row> rows;
  rows.reserve(gens.size());
  for (const auto& g : gens) {
    Row row{BitVec(std::size_t(n)), BitVec(std::size_t(n)), g.sign() < 0};
    for (const auto& [coord, p] : g.support()) {
      auto it = index.find(coord);
      if (it == index.end())
        throw std::invalid_argument("generator supported outside the qubit set");
      row.x.set(it->second, (int(p) & 1) != 0);
      row.z.set(it->second, (int(p) >> 1) != 0);
    }
    rows.push_back(std::move(row));
  }

  auto g_exp = [](bool x1, bool z1, bool x2, bool z2) {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return int(z2) - int(x2);
    if (x1) return int(z2) * (2 * int(x2) - 1);
    return int(x2) * (1 - 2 * int(z2));
  };
  auto mul = [&](Row& h, const Row& i) {
    int phase = 2 * int(h.r) + 2 * int(i.r);
    for (int q = 0; q < n; ++q)
      phase += g_exp(i.x.get(q), i.z.get(q), h.x.get(q), h.z.get(q));
    phase = ((phase % 4) + 4) % 4;
    if (phase & 1) throw std::logic_error("non-Hermitian generator product");
    h.r = (phase >> 1) & 1;
    h.x ^= i.x;
    h.z ^= i.z;
  };

  std::size_t done = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (int q = 0; q < n && done < rows.size(); ++q) {
      std::size_t sel = done;
      while (sel < rows.size() &&
             !(pass == 0 ? rows[sel].x.get(q) : rows[sel].z.get(q)))
        ++sel;
      if (sel == rows.size()) continue;
      if (pass == 1 && rows[sel].x.any())
        throw std::logic_error("x parts must be exhausted before the z pass");
      std::swap(rows[done], rows[sel]);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        bool hit = pass == 0 ? rows[i].x.get(q) : rows[i].z.get(q);
        if (i != done && hit) mul(rows[i], rows[done]);
      }
      ++done;
    }
  }
  for (std::size_t i = done; i < rows.size(); ++i) {
    if (rows[i].x.any() || rows[i].z.any())
      throw std::logic_error("elimination left an unreduced generator");
    if (rows[i].r) throw std::logic_error("generators produce -identity");
  }
  rows.resize(done);

  std::vector<std::string> lines;
  lines.reserve(rows.size());
  for (const auto& row : rows) {
    std::string s;
    s += row.r ? '-' : '+';
    for (int q = 0; q < n; ++q) {
      bool xb = row.x.get(q), zb = row.z.get(q);
      Pauli p = xb ? (zb ? Pauli::Y : Pauli::X) : (zb ? Pauli::Z : Pauli::I);
      s += pauli_char(p);
    }
    lines.push_back(std::move(s));
  }
  std::sort(lines.begin(), lines.end());
  std::string outstr;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    outstr += lines[i];
    if (i + 1 < lines.size()) outstr += '\n';
  }
  return outstr;
}

void conjugate_forward(SparsePauli& p, const Instruction& ins) {
  auto xbit = [](Pauli q) { return (int(q) & 1) != 0; };
  auto zbit = [](Pauli q) { return (int(q) >> 1) != 0; };
  auto from_bits = [](bool x, bool z) {
    return static_cast<Pauli>(int(x) | (int(z) << 1));
  };
  switch (ins.kind) {
    case GateKind::H: {
      Pauli q = p.at(ins.a);
      if (xbit(q) && zbit(q)) p.flip_sign();
      p.set(ins.a, from_bits(zbit(q), xbit(q)));
      break;
    }
    case GateKind::S: {
      Pauli q = p.at(ins.a);
      if (xbit(q) && zbit(q)) p.flip_sign();
      p.set(ins.a, from_bits(xbit(q), zbit(q) ^ xbit(q)));
      break;
    }
    case GateKind::Sdag: {
      Pauli q = p.at(ins.a);
      if (xbit(q) && !zbit(q)) p.flip_sign();
      p.set(ins.a, from_bits(xbit(q), zbit(q) ^ xbit(q)));
      break;
    }
    case GateKind::CX: {
      Pauli qa = p.at(ins.a), qb = p.at(ins.b);
      bool xc = xbit(qa), zc = zbit(qa), xt = xbit(qb), zt = zbit(qb);
      if (xc && zt && (xt == zc)) p.flip_sign();
      p.set(ins.b, from_bits(xt ^ xc, zt));
      p.set(ins.a, from_bits(xc, zc ^ zt));
      break;
    }
    case GateKind::CZ: {
      Pauli qa = p.at(ins.a), qb = p.at(ins.b);
      bool xa = xbit(qa), za = zbit(qa), xb = xbit(qb), zb = zbit(qb);
      if (xa && xb && (za != zb)) p.flip_sign();
      p.set(ins.a, from_bits(xa, za ^ xb));
      p.set(ins.b, from_bits(xb, zb ^ xa));
      break;
    }
    case GateKind::Idle:
      break;
    default:
      throw std::invalid_argument("conjugate_forward needs a unitary instruction");
  }
}

FlowResult propagate_flow(const Circuit& c, const std::vector<int>& launch_resets) {
  std::vector<char> launch(c.resets.size(), 0);
  for (int r : launch_resets) launch.at(std::size_t(r)) = 1;

  FlowResult out;
  SparsePauli cur;
  for (const auto& layer : c.layers) {
    for (const auto& ins : layer.instructions) {
      switch (ins.kind) {
        case GateKind::ResetX:
        case GateKind::ResetZ: {
          if (cur.at(ins.a) != Pauli::I)
            throw std::logic_error("flow passes through a reset");
          int rid = c.reset_index(ins.a, ins.ts.round);
          if (launch[std::size_t(rid)]) {
            Pauli basis = ins.kind == GateKind::ResetX ? Pauli::X : Pauli::Z;
            cur = cur * SparsePauli::single(ins.a, basis);
          }
          break;
        }
        case GateKind::MeasX:
        case GateKind::MeasZ: {
          Pauli basis = ins.kind == GateKind::MeasX ? Pauli::X : Pauli::Z;
          Pauli r = cur.at(ins.a);
          if (r == Pauli::I) break;
          if (r != basis)
            throw std::logic_error("flow anticommutes with a measurement");
          cur = cur * SparsePauli::single(ins.a, basis);
          out.absorbed.push_back(c.measurement_index(ins.a, ins.ts.round));
          break;
        }
        default:
          conjugate_forward(cur, ins);
      }
    }
    if (!cur.identity()) out.snapshots[layer.ts.index()] = cur;
  }
  if (!cur.identity())
    throw std::logic_error("flow failed to terminate by the end of the circuit");
  out.final_sign = cur.sign();
  std::sort(out.absorbed.begin(), out.absorbed.end());
  return out;
}

RegionResult trace_region(const Circuit& c, const std::vector<int>& members) {
  std::set<int> pending(members.begin(), members.end());
  if (pending.size() != members.size())
    throw std::invalid_argument("duplicate member measurement");

  RegionResult out;
  SparsePauli cur;
  for (auto lit = c.layers.rbegin(); lit != c.layers.rend(); ++lit) {
    // The region seen here is the state after this moment in forward time;
    // members measured at the moment itself are only merged in below.
    if (!cur.identity()) out.snapshots[lit->ts.index()] = cur;
    for (auto iit = lit->instructions.rbegin(); iit != lit->instructions.rend();
         ++iit) {
      const Instruction& ins = *iit;
      switch (ins.kind) {
        case GateKind::MeasX:
        case GateKind::MeasZ: {
          Pauli basis = ins.kind == GateKind::MeasX ? Pauli::X : Pauli::Z;
          Pauli r = cur.at(ins.a);
          if (pending.erase(c.measurement_index(ins.a, ins.ts.round))) {
            if (r != Pauli::I && r != basis)
              throw std::logic_error("member measurement disturbs the region");
            cur = cur * SparsePauli::single(ins.a, basis);
          } else if (r != Pauli::I) {
            throw std::logic_error("region crosses a non-member measurement");
          }
          break;
        }
        case GateKind::ResetX:
        case GateKind::ResetZ: {
          Pauli basis = ins.kind == GateKind::ResetX ? Pauli::X : Pauli::Z;
          Pauli r = cur.at(ins.a);
          if (r == Pauli::I) break;
          if (r != basis)
            throw std::logic_error("member set does not form a detector");
          cur = cur * SparsePauli::single(ins.a, basis);
          out.generating_resets.push_back(c.reset_index(ins.a, ins.ts.round));
          break;
        }
        default: {
          // Walking backwards conjugates by the inverse gate; S and Sdag
          // trade places, the others are their own inverses.
          Instruction inv = ins;
          if (ins.kind == GateKind::S)
            inv.kind = GateKind::Sdag;
          else if (ins.kind == GateKind::Sdag)
            inv.kind = GateKind::S;
          conjugate_forward(cur, inv);
        }
      }
    }
  }
  if (!pending.empty())
    throw std::invalid_argument("member measurement does not exist");
  if (!cur.identity())
    throw std::logic_error("region does not terminate inside the circuit");
  out.final_sign = cur.sign();
  std::sort(out.generating_resets.begin(), out.generating_resets.end());
  return out;
}

FlowResult detecting_region(const Circuit& c, const Detector& det) {
  FlowResult flow = propagate_flow(c, det.generating_resets);
  if (flow.absorbed != det.measurements)
    throw std::logic_error("detecting region absorbed the wrong measurements");
  if ((flow.final_sign < 0) != det.reference_parity)
    throw std::logic_error("detecting region sign disagrees with reference parity");
  return flow;
}

FlowResult observable_region(const Circuit& c, const DetectorSet& ds) {
  FlowResult flow = propagate_flow(c, ds.observable_resets);
  if (flow.absorbed != ds.observable)
    throw std::logic_error("observable region absorbed the wrong measurements");
  if ((flow.final_sign < 0) != ds.observable_reference)
    throw std::logic_error("observable region sign disagrees with reference parity");
  return flow;
}

SparsePauli conjugate_between(const Circuit& c, const SparsePauli& p,
                              Timestamp from, Timestamp to) {
  SparsePauli cur = p;
  for (const auto& layer : c.layers) {
    if (!(from < layer.ts)) continue;
    if (to < layer.ts) break;
    for (const auto& ins : layer.instructions) {
      switch (ins.kind) {
        case GateKind::ResetX:
        case GateKind::ResetZ:
        case GateKind::MeasX:
        case GateKind::MeasZ:
          if (cur.at(ins.a) != Pauli::I)
            throw std::logic_error("operator support hits a projective instruction");
          break;
        default:
          conjugate_forward(cur, ins);
      }
    }
  }
  return cur;
}

}  // namespace foldsim
