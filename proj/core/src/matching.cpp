#include "foldsim/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace foldsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Single-source shortest paths; deterministic: the queue orders by (distance,
// dense index) and equal-length alternatives keep the smaller last-edge id.
void dijkstra(const MatchingGraph& g, int source, const std::vector<double>* w_over,
              std::vector<double>& dist, std::vector<int>& via) {
  const int n = int(g.nodes.size()) + 1;  // + boundary
  dist.assign(n, kInf);
  via.assign(n, -1);
  dist[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (int eid : g.adjacency[u]) {
      const GraphEdge& e = g.edges[eid];
      const double w = w_over ? (*w_over)[eid] : e.weight;
      const int a = g.dense(e.u);
      const int b = g.dense(e.v);
      const int t = (a == u) ? b : a;
      const double nd = du + w;
      if (nd < dist[t] || (nd == dist[t] && via[t] >= 0 && eid < via[t])) {
        dist[t] = nd;
        via[t] = eid;
        pq.emplace(nd, t);
      }
    }
  }
}

// Walks the canonical shortest path source -> target backward through `via`.
std::vector<int> expand_path(const MatchingGraph& g, int source, int target,
                             const std::vector<int>& via) {
  std::vector<int> path;
  int cur = target;
  while (cur != source) {
    const int eid = via[cur];
    if (eid < 0) throw std::runtime_error("defect has no path to its match");
    path.push_back(eid);
    const GraphEdge& e = g.edges[eid];
    const int a = g.dense(e.u);
    const int b = g.dense(e.v);
    cur = (cur == a) ? b : a;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Exact maximum-weight matching on a dense general graph: the classic O(n^3)
// primal-dual algorithm with blossom shrinking, over integer weights.
// Vertices are 1-indexed; weight 0 marks a missing edge.
class DenseBlossom {
 public:
  explicit DenseBlossom(int n)
      : n_(n),
        n_x_(n),
        g_(2 * n + 1, std::vector<E>(2 * n + 1)),
        lab_(2 * n + 1, 0),
        match_(2 * n + 1, 0),
        slack_(2 * n + 1, 0),
        st_(2 * n + 1, 0),
        pa_(2 * n + 1, 0),
        s_(2 * n + 1, -1),
        vis_(2 * n + 1, 0),
        flower_(2 * n + 1),
        flower_from_(2 * n + 1, std::vector<int>(n + 1, 0)) {
    for (int u = 0; u <= 2 * n_; ++u)
      for (int v = 0; v <= 2 * n_; ++v) g_[u][v] = E{u, v, 0};
  }

  void add_edge(int u, int v, long long w) { g_[u][v].w = g_[v][u].w = w; }

  void solve() {
    n_x_ = n_;
    std::fill(match_.begin(), match_.end(), 0);
    long long w_max = 0;
    for (int u = 1; u <= n_; ++u) {
      st_[u] = u;
      flower_[u].clear();
      for (int v = 1; v <= n_; ++v) {
        flower_from_[u][v] = (u == v) ? u : 0;
        w_max = std::max(w_max, g_[u][v].w);
      }
    }
    for (int u = 1; u <= n_; ++u) lab_[u] = w_max;
    while (matching()) {
    }
  }

  int match_of(int u) const { return match_[u]; }

 private:
  struct E {
    int u = 0, v = 0;
    long long w = 0;
  };

  long long e_delta(const E& e) const { return lab_[e.u] + lab_[e.v] - g_[e.u][e.v].w * 2; }

  void update_slack(int u, int x) {
    if (!slack_[x] || e_delta(g_[u][x]) < e_delta(g_[slack_[x]][x])) slack_[x] = u;
  }

  void set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (g_[u][x].w > 0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
  }

  void q_push(int x) {
    if (x <= n_) {
      q_.push_back(x);
    } else {
      for (int t : flower_[x]) q_push(t);
    }
  }

  void set_st(int x, int b) {
    st_[x] = b;
    if (x > n_)
      for (int t : flower_[x]) set_st(t, b);
  }

  int get_pr(int b, int xr) {
    int pr = int(std::find(flower_[b].begin(), flower_[b].end(), xr) - flower_[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower_[b].begin() + 1, flower_[b].end());
      return int(flower_[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match_[u] = g_[u][v].v;
    if (u <= n_) return;
    const E e = g_[u][v];
    const int xr = flower_from_[u][e.u];
    const int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
  }

  void augment(int u, int v) {
    for (;;) {
      const int xnv = st_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[pa_[xnv]]);
      u = st_[pa_[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++timer_; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis_[u] == timer_) return u;
      vis_[u] = timer_;
      u = st_[match_[u]];
      if (u) u = st_[pa_[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) ++b;
    if (b > n_x_) ++n_x_;
    lab_[b] = 0;
    s_[b] = 0;
    match_[b] = match_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      y = st_[match_[x]];
      flower_[b].push_back(y);
      q_push(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      y = st_[match_[x]];
      flower_[b].push_back(y);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; ++x) g_[b][x].w = g_[x][b].w = 0;
    for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
    for (int xs : flower_[b]) {
      for (int x = 1; x <= n_x_; ++x)
        if (g_[b][x].w == 0 || e_delta(g_[xs][x]) < e_delta(g_[b][x])) {
          g_[b][x] = g_[xs][x];
          g_[x][b] = g_[x][xs];
        }
      for (int x = 1; x <= n_; ++x)
        if (flower_from_[xs][x]) flower_from_[b][x] = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int t : flower_[b]) set_st(t, t);
    const int xr = flower_from_[b][g_[b][pa_[b]].u];
    const int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      const int xs = flower_[b][i];
      const int xns = flower_[b][i + 1];
      pa_[xs] = g_[xns][xs].u;
      s_[xs] = 1;
      s_[xns] = 0;
      slack_[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    s_[xr] = 1;
    pa_[xr] = pa_[b];
    for (int i = pr + 1; i < int(flower_[b].size()); ++i) {
      s_[flower_[b][i]] = -1;
      set_slack(flower_[b][i]);
    }
    st_[b] = 0;
  }

  bool on_found_edge(const E& e) {
    const int u = st_[e.u];
    const int v = st_[e.v];
    if (s_[v] == -1) {
      pa_[v] = e.u;
      s_[v] = 1;
      const int nu = st_[match_[v]];
      slack_[v] = slack_[nu] = 0;
      s_[nu] = 0;
      q_push(nu);
    } else if (s_[v] == 0) {
      const int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool matching() {
    std::fill(s_.begin(), s_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
    q_.clear();
    for (int x = 1; x <= n_x_; ++x)
      if (st_[x] == x && !match_[x]) {
        pa_[x] = 0;
        s_[x] = 0;
        q_push(x);
      }
    if (q_.empty()) return false;
    for (;;) {
      while (!q_.empty()) {
        const int u = q_.front();
        q_.pop_front();
        if (s_[st_[u]] == 1) continue;
        for (int v = 1; v <= n_; ++v)
          if (g_[u][v].w > 0 && st_[u] != st_[v]) {
            if (e_delta(g_[u][v]) == 0) {
              if (on_found_edge(g_[u][v])) return true;
            } else {
              update_slack(u, st_[v]);
            }
          }
      }
      long long d = std::numeric_limits<long long>::max();
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2);
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x]) {
          if (s_[x] == -1) {
            d = std::min(d, e_delta(g_[slack_[x]][x]));
          } else if (s_[x] == 0) {
            d = std::min(d, e_delta(g_[slack_[x]][x]) / 2);
          }
        }
      for (int u = 1; u <= n_; ++u) {
        if (s_[st_[u]] == 0) {
          if (lab_[u] <= d) return false;
          lab_[u] -= d;
        } else if (s_[st_[u]] == 1) {
          lab_[u] += d;
        }
      }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b) {
          if (s_[b] == 0) {
            lab_[b] += d * 2;
          } else if (s_[b] == 1) {
            lab_[b] -= d * 2;
          }
        }
      q_.clear();
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
            e_delta(g_[slack_[x]][x]) == 0)
          if (on_found_edge(g_[slack_[x]][x])) return true;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1 && lab_[b] == 0) expand_blossom(b);
    }
  }

  int n_;
  int n_x_;
  std::vector<std::vector<E>> g_;
  std::vector<long long> lab_;
  std::vector<int> match_, slack_, st_, pa_, s_, vis_;
  std::vector<std::vector<int>> flower_;
  std::vector<std::vector<int>> flower_from_;
  std::deque<int> q_;
  int timer_ = 0;
};

struct DefectDistances {
  // dd[i][j]: defect-to-defect, db[i]: defect-to-boundary; full rows kept for
  // path expansion.
  std::vector<std::vector<double>> dd;
  std::vector<double> db;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<int>> vias;
};

DefectDistances defect_distances(const MatchingGraph& g, const std::vector<int>& dense_ids,
                                 const std::vector<double>* w_over) {
  const int k = int(dense_ids.size());
  const int boundary = int(g.nodes.size());
  DefectDistances out;
  out.dd.assign(k, std::vector<double>(k, kInf));
  out.db.assign(k, kInf);
  out.rows.resize(k);
  out.vias.resize(k);
  for (int i = 0; i < k; ++i) {
    if (!w_over && !g.dist.empty()) {
      out.rows[i] = g.dist[dense_ids[i]];
      out.vias[i] = g.via[dense_ids[i]];
    } else {
      dijkstra(g, dense_ids[i], w_over, out.rows[i], out.vias[i]);
    }
    out.db[i] = out.rows[i][boundary];
    for (int j = 0; j < k; ++j) out.dd[i][j] = out.rows[i][dense_ids[j]];
  }
  return out;
}

// pairs[i] = (a, b) with b == -1 meaning "a matches the boundary".
std::vector<std::pair<int, int>> solve_pairing_dp(const DefectDistances& d, int k) {
  const int full = (1 << k) - 1;
  std::vector<double> dp(size_t(full) + 1, kInf);
  std::vector<int> choice(size_t(full) + 1, -2);
  dp[0] = 0.0;
  for (int mask = 1; mask <= full; ++mask) {
    int i = 0;
    while (!(mask & (1 << i))) ++i;
    const int rest = mask ^ (1 << i);
    if (d.db[i] < kInf && dp[rest] + d.db[i] < dp[mask]) {
      dp[mask] = dp[rest] + d.db[i];
      choice[mask] = -1;
    }
    for (int j = i + 1; j < k; ++j)
      if (mask & (1 << j)) {
        const int rem = rest ^ (1 << j);
        if (d.dd[i][j] < kInf && dp[rem] + d.dd[i][j] < dp[mask]) {
          dp[mask] = dp[rem] + d.dd[i][j];
          choice[mask] = j;
        }
      }
  }
  if (dp[full] == kInf) throw std::runtime_error("defects cannot all be matched");
  std::vector<std::pair<int, int>> pairs;
  int mask = full;
  while (mask) {
    int i = 0;
    while (!(mask & (1 << i))) ++i;
    const int j = choice[mask];
    if (j == -2) throw std::logic_error("pairing reconstruction failed");
    pairs.emplace_back(i, j);
    mask ^= (1 << i);
    if (j >= 0) mask ^= (1 << j);
  }
  return pairs;
}

std::vector<std::pair<int, int>> solve_pairing_blossom(const DefectDistances& d, int k) {
  // Nodes 1..k are defects, k+1..2k their boundary copies. Copy-copy edges are
  // free so unused copies pair among themselves; integer weights are
  // K - scaled_cost so the maximum-weight matching is the minimum-cost one.
  constexpr double kScale = double(1 << 20);
  long long max_cost = 0;
  auto scaled = [&](double w) { return llround(w * kScale); };
  for (int i = 0; i < k; ++i) {
    if (d.db[i] < kInf) max_cost = std::max(max_cost, scaled(d.db[i]));
    for (int j = i + 1; j < k; ++j)
      if (d.dd[i][j] < kInf) max_cost = std::max(max_cost, scaled(d.dd[i][j]));
  }
  const long long big = max_cost * (long long)(k + 1) + 1;
  DenseBlossom bl(2 * k);
  for (int i = 0; i < k; ++i) {
    if (d.db[i] < kInf) bl.add_edge(i + 1, k + i + 1, big - scaled(d.db[i]));
    for (int j = i + 1; j < k; ++j) {
      if (d.dd[i][j] < kInf) bl.add_edge(i + 1, j + 1, big - scaled(d.dd[i][j]));
      bl.add_edge(k + i + 1, k + j + 1, big);
    }
  }
  bl.solve();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i) {
    const int m = bl.match_of(i + 1);
    if (m == 0) throw std::runtime_error("defects cannot all be matched");
    if (m == k + i + 1) {
      pairs.emplace_back(i, -1);
    } else if (m > k) {
      throw std::logic_error("defect matched a foreign boundary copy");
    } else if (m - 1 > i) {
      pairs.emplace_back(i, m - 1);
    }
  }
  return pairs;
}

MatchResult assemble_result(const MatchingGraph& g, const std::vector<int>& dense_ids,
                            const DefectDistances& d,
                            std::vector<std::pair<int, int>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  MatchResult res;
  std::map<int, int> edge_count;
  const int boundary = int(g.nodes.size());
  for (auto [i, j] : pairs) {
    const int target = (j < 0) ? boundary : dense_ids[j];
    res.total_weight += (j < 0) ? d.db[i] : d.dd[i][j];
    std::vector<int> path = expand_path(g, dense_ids[i], target, d.vias[i]);
    for (int eid : path) ++edge_count[eid];
    res.matched_paths.push_back(std::move(path));
  }
  for (auto [eid, count] : edge_count)
    if (count % 2) {
      res.fault_set.push_back(eid);
      res.logical_correction = res.logical_correction != g.edges[eid].logical_flip;
    }
  return res;
}

std::vector<int> dense_defects(const MatchingGraph& g, const std::vector<int>& defects) {
  std::vector<int> ids;
  ids.reserve(defects.size());
  for (int node : defects) {
    auto it = g.node_pos.find(node);
    if (it == g.node_pos.end())
      throw std::invalid_argument("defect " + std::to_string(node) + " is not a node of this graph");
    ids.push_back(it->second);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw std::invalid_argument("duplicate defect");
  return ids;
}

}  // namespace

MatchingGraph compile_matching_graph(const DecodingHypergraph& hg, const DetectorSet& ds,
                                     bool x_class, bool with_virtual_time_boundaries) {
  MatchingGraph g;
  std::vector<bool> det_x(ds.detectors.size());
  int min_t2 = std::numeric_limits<int>::max();
  int max_t2 = std::numeric_limits<int>::min();
  for (const Detector& det : ds.detectors) {
    det_x[det.id] = slot_is_x_class(det.coord);
    if (det_x[det.id] == x_class) {
      g.nodes.push_back(det.id);
      min_t2 = std::min(min_t2, det.t2);
      max_t2 = std::max(max_t2, det.t2);
    }
  }
  if (with_virtual_time_boundaries) {
    g.v0 = hg.n_detectors;
    g.vf = hg.n_detectors + 1;
    g.nodes.push_back(g.v0);
    g.nodes.push_back(g.vf);
  }
  for (int i = 0; i < int(g.nodes.size()); ++i) g.node_pos[g.nodes[i]] = i;

  std::map<std::pair<int, int>, int> merged;  // (u, v) -> edge index
  for (const DemEdge& de : hg.edges) {
    const std::vector<int>& eps = x_class ? de.dx : de.dz;
    if (eps.empty()) continue;
    if (eps.size() > 2)
      throw std::invalid_argument("hyperedge with " + std::to_string(eps.size()) +
                                  " same-class endpoints is not matchable");
    int u = eps[0];
    int v = kBoundaryNode;
    if (eps.size() == 2) {
      v = eps[1];
    } else if (with_virtual_time_boundaries) {
      const int t = ds.detectors[u].t2;
      if (t == min_t2) {
        v = g.v0;
      } else if (t == max_t2) {
        v = g.vf;
      }
    }
    if (v != kBoundaryNode && v < u) std::swap(u, v);
    auto [it, fresh] = merged.try_emplace({u, v}, int(g.edges.size()));
    if (fresh) {
      GraphEdge e;
      e.id = it->second;
      e.u = u;
      e.v = v;
      g.edges.push_back(std::move(e));
    }
    GraphEdge& e = g.edges[it->second];
    e.probability = xor_probability(e.probability, de.probability);
    if (!e.dem_edges.empty()) {
      const DemEdge& rep = hg.edges[e.representative];
      if (de.logical_flip != rep.logical_flip && !e.flip_conflict) {
        e.flip_conflict = true;
        ++g.conflict_count;
      }
    }
    e.dem_edges.push_back(de.id);
    // Representative preference: no footprint on the other class (nothing to
    // hand to the second matching stage), then probability; ids ascend, so
    // ties keep the earliest member.
    if (e.representative < 0) {
      e.representative = de.id;
    } else {
      const DemEdge& rep = hg.edges[e.representative];
      const bool de_clean = (x_class ? de.dz : de.dx).empty();
      const bool rep_clean = (x_class ? rep.dz : rep.dx).empty();
      if (de_clean != rep_clean ? de_clean : de.probability > rep.probability)
        e.representative = de.id;
    }
  }
  for (GraphEdge& e : g.edges) {
    e.weight = edge_weight_from_probability(e.probability);
    e.logical_flip = hg.edges[e.representative].logical_flip;
  }

  const int n = int(g.nodes.size());
  g.adjacency.assign(n + 1, {});
  for (const GraphEdge& e : g.edges) {
    g.adjacency[g.dense(e.u)].push_back(e.id);
    g.adjacency[g.dense(e.v)].push_back(e.id);
  }
  g.dist.resize(n + 1);
  g.via.resize(n + 1);
  for (int s = 0; s <= n; ++s) dijkstra(g, s, nullptr, g.dist[s], g.via[s]);
  return g;
}

MatchResult decode(const MatchingGraph& g, const std::vector<int>& defects,
                   const std::vector<double>* weight_override) {
  if (weight_override && weight_override->size() != g.edges.size())
    throw std::invalid_argument("weight override size mismatch");
  const std::vector<int> ids = dense_defects(g, defects);
  if (ids.empty()) return {};
  const int k = int(ids.size());
  const DefectDistances d = defect_distances(g, ids, weight_override);
  auto pairs = (k <= 14) ? solve_pairing_dp(d, k) : solve_pairing_blossom(d, k);
  return assemble_result(g, ids, d, std::move(pairs));
}

MatchResult decode_via_blossom(const MatchingGraph& g, const std::vector<int>& defects,
                               const std::vector<double>* weight_override) {
  if (weight_override && weight_override->size() != g.edges.size())
    throw std::invalid_argument("weight override size mismatch");
  const std::vector<int> ids = dense_defects(g, defects);
  if (ids.empty()) return {};
  const DefectDistances d = defect_distances(g, ids, weight_override);
  return assemble_result(g, ids, d, solve_pairing_blossom(d, int(ids.size())));
}

namespace {

double exhaustive_rec(const DefectDistances& d, std::vector<char>& used, int k) {
  int i = 0;
  while (i < k && used[i]) ++i;
  if (i == k) return 0.0;
  used[i] = 1;
  double best = kInf;
  if (d.db[i] < kInf) best = d.db[i] + exhaustive_rec(d, used, k);
  for (int j = i + 1; j < k; ++j)
    if (!used[j] && d.dd[i][j] < kInf) {
      used[j] = 1;
      const double cand = d.dd[i][j] + exhaustive_rec(d, used, k);
      used[j] = 0;
      best = std::min(best, cand);
    }
  used[i] = 0;
  return best;
}

}  // namespace

double exhaustive_minimum_weight(const MatchingGraph& g, const std::vector<int>& defects,
                                 const std::vector<double>* weight_override) {
  const std::vector<int> ids = dense_defects(g, defects);
  if (ids.empty()) return 0.0;
  const int k = int(ids.size());
  const DefectDistances d = defect_distances(g, ids, weight_override);
  std::vector<char> used(k, 0);
  const double best = exhaustive_rec(d, used, k);
  if (best == kInf) throw std::runtime_error("defects cannot all be matched");
  return best;
}

}  // namespace foldsim
