#include "distlab/rotation_poset.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace distlab {

namespace {

struct PosTables {
  std::vector<std::vector<int>> mpos, wpos;

  explicit PosTables(const PreferenceProfile& prefs) {
    const int n = prefs.n;
    mpos.assign(n, std::vector<int>(n));
    wpos.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        mpos[i][prefs.men_ranks[i][k]] = k;
        wpos[i][prefs.women_ranks[i][k]] = k;
      }
  }
};

// succ(m): highest woman strictly after mu(m) on m's list who prefers m to her
// current partner, or -1.
int successor_woman(int m, const Matching& mu, const std::vector<int>& w_partner,
                    const PreferenceProfile& prefs, const PosTables& pos) {
  const auto& list = prefs.men_ranks[m];
  for (int k = pos.mpos[m][mu.man_to_woman[m]] + 1; k < prefs.n; ++k) {
    int w = list[k];
    if (pos.wpos[w][m] < pos.wpos[w][w_partner[w]]) return w;
  }
  return -1;
}

}  // namespace

std::vector<std::pair<int, int>> Rotation::canonical_pairs() const {
  int best = 0;
  for (int i = 1; i < size(); ++i)
    if (pairs[i].first < pairs[best].first) best = i;
  std::vector<std::pair<int, int>> out;
  out.reserve(pairs.size());
  for (int i = 0; i < size(); ++i) out.push_back(pairs[(best + i) % size()]);
  return out;
}

int ClosedSubset::count() const {
  return static_cast<int>(std::count(members.begin(), members.end(), true));
}

bool ClosedSubset::lex_less(const ClosedSubset& other) const {
  return members < other.members;  // vector<bool> compares lexicographically
}

std::vector<Rotation> find_exposed_rotations(const Matching& mu, const PreferenceProfile& prefs) {
  if (!is_stable(mu, prefs)) throw Error("NotStable", "matching has blocking pairs");
  const int n = prefs.n;
  PosTables pos(prefs);
  std::vector<int> w_partner = mu.woman_to_man();
  std::vector<int> next(n, -1);
  for (int m = 0; m < n; ++m) {
    int w = successor_woman(m, mu, w_partner, prefs, pos);
    if (w >= 0) next[m] = w_partner[w];
  }
  // Cycles of the partial map m -> next(m) are exactly the exposed rotations.
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on path, 2 done
  std::vector<Rotation> out;
  for (int s = 0; s < n; ++s) {
    if (state[s] != 0) continue;
    std::vector<int> path;
    int cur = s;
    while (cur != -1 && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = next[cur];
    }
    if (cur != -1 && state[cur] == 1) {
      auto it = std::find(path.begin(), path.end(), cur);
      Rotation rho;
      for (auto p = it; p != path.end(); ++p) rho.pairs.push_back({*p, mu.man_to_woman[*p]});
      rho.pairs = Rotation{-1, rho.pairs}.canonical_pairs();
      out.push_back(std::move(rho));
    }
    for (int m : path) state[m] = 2;
  }
  std::sort(out.begin(), out.end(),
            [](const Rotation& a, const Rotation& b) { return a.pairs < b.pairs; });
  return out;
}

Matching eliminate_rotation(const Matching& mu, const Rotation& rho,
                            const PreferenceProfile& prefs) {
  PosTables pos(prefs);
  std::vector<int> w_partner = mu.woman_to_man();
  const int k = rho.size();
  if (k < 2) throw Error("NotExposed", "rotation shorter than 2");
  for (int i = 0; i < k; ++i) {
    auto [m, w] = rho.pairs[i];
    if (mu.man_to_woman[m] != w) throw Error("NotExposed", "pair not matched");
    int succ = successor_woman(m, mu, w_partner, prefs, pos);
    if (succ != rho.pairs[(i + 1) % k].second)
      throw Error("NotExposed", "successor property violated");
  }
  Matching out = mu;
  for (int i = 0; i < k; ++i) out.man_to_woman[rho.pairs[i].first] = rho.pairs[(i + 1) % k].second;
  return out;
}

RotationPoset build_rotation_poset(const PreferenceProfile& prefs) {
  const int n = prefs.n;
  PosTables pos(prefs);
  RotationPoset poset;

  Matching mu = deferred_acceptance(prefs, Side::MenPropose);
  while (true) {
    auto exposed = find_exposed_rotations(mu, prefs);
    if (exposed.empty()) break;
    Rotation rho = exposed.front();
    rho.id = static_cast<int>(poset.rotations.size());
    mu = eliminate_rotation(mu, rho, prefs);
    poset.rotations.push_back(std::move(rho));
  }

  const int R = static_cast<int>(poset.rotations.size());
  // producer[m][w]: rotation that matches m to w when eliminated.
  // elim_pair[m][w]: rotation after which w is out of reach for m — w moves to
  // a man she prefers to m, having until then weakly preferred m to her
  // partner. Each (m, w) has at most one such rotation.
  std::vector<std::vector<int>> producer(n, std::vector<int>(n, -1));
  std::vector<std::vector<int>> elim_pair(n, std::vector<int>(n, -1));
  for (const Rotation& rho : poset.rotations) {
    const int k = rho.size();
    for (int i = 0; i < k; ++i) {
      int m_new = rho.pairs[i].first;               // gets woman w below
      int w = rho.pairs[(i + 1) % k].second;        // moves from m_old to m_new
      int m_old = rho.pairs[(i + 1) % k].first;
      producer[m_new][w] = rho.id;
      for (int r = pos.wpos[w][m_new] + 1; r <= pos.wpos[w][m_old]; ++r)
        elim_pair[prefs.women_ranks[w][r]][w] = rho.id;
    }
  }

  // Direct edges: production rule plus explicit predecessors.
  std::vector<std::vector<int>> direct(R);
  for (const Rotation& rho : poset.rotations) {
    const int k = rho.size();
    for (int i = 0; i < k; ++i) {
      auto [m, w] = rho.pairs[i];
      if (int p = producer[m][w]; p >= 0 && p != rho.id) direct[p].push_back(rho.id);
      int w_next = rho.pairs[(i + 1) % k].second;
      for (int r = 0; r < pos.mpos[m][w_next]; ++r) {
        int x = prefs.men_ranks[m][r];
        if (x == w) continue;
        if (int p = elim_pair[m][x]; p >= 0 && p != rho.id) direct[p].push_back(rho.id);
      }
    }
  }

  // Transitive closure by DFS from each node.
  std::vector<std::vector<bool>> reach(R, std::vector<bool>(R, false));
  for (int s = 0; s < R; ++s) {
    std::vector<int> stack{s};
    std::vector<bool> seen(R, false);  // s itself only marked if a cycle returns to it
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : direct[u])
        if (!seen[v]) {
          seen[v] = true;
          reach[s][v] = true;
          stack.push_back(v);
        }
    }
  }
  for (int u = 0; u < R; ++u) {
    if (reach[u][u]) throw Error("Internal", "precedence relation is cyclic");
    for (int v = 0; v < R; ++v)
      if (reach[u][v]) poset.precedence_edges.insert({u, v});
  }
  for (auto [u, v] : poset.precedence_edges) {
    bool implied = false;
    for (int w = 0; w < R && !implied; ++w)
      if (w != u && w != v && reach[u][w] && reach[w][v]) implied = true;
    if (!implied) poset.hasse_edges.insert({u, v});
  }
  return poset;
}

namespace {

std::vector<std::vector<int>> hasse_predecessors(const RotationPoset& poset) {
  std::vector<std::vector<int>> preds(poset.rotations.size());
  for (auto [u, v] : poset.hasse_edges) preds[v].push_back(u);
  return preds;
}

std::vector<int> topological_order(const RotationPoset& poset) {
  const int R = static_cast<int>(poset.rotations.size());
  std::vector<int> indeg(R, 0);
  std::vector<std::vector<int>> succs(R);
  for (auto [u, v] : poset.hasse_edges) {
    ++indeg[v];
    succs[u].push_back(v);
  }
  std::set<int> ready;
  for (int i = 0; i < R; ++i)
    if (indeg[i] == 0) ready.insert(i);
  std::vector<int> order;
  while (!ready.empty()) {
    int u = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(u);
    for (int v : succs[u])
      if (--indeg[v] == 0) ready.insert(v);
  }
  if (static_cast<int>(order.size()) != R) throw Error("Internal", "hasse diagram not a DAG");
  return order;
}

void enumerate_rec(const std::vector<int>& topo, const std::vector<std::vector<int>>& preds,
                   size_t i, ClosedSubset& cur,
                   const std::function<void(const ClosedSubset&)>& fn) {
  if (i == topo.size()) {
    fn(cur);
    return;
  }
  int node = topo[i];
  enumerate_rec(topo, preds, i + 1, cur, fn);
  bool ok = true;
  for (int p : preds[node])
    if (!cur.members[p]) {
      ok = false;
      break;
    }
  if (ok) {
    cur.members[node] = true;
    enumerate_rec(topo, preds, i + 1, cur, fn);
    cur.members[node] = false;
  }
}

}  // namespace

void for_each_closed_subset(const RotationPoset& poset,
                            const std::function<void(const ClosedSubset&)>& fn) {
  ClosedSubset cur{std::vector<bool>(poset.rotations.size(), false)};
  enumerate_rec(topological_order(poset), hasse_predecessors(poset), 0, cur, fn);
}

std::vector<ClosedSubset> closed_subsets(const RotationPoset& poset) {
  std::vector<ClosedSubset> out;
  for_each_closed_subset(poset, [&](const ClosedSubset& s) { out.push_back(s); });
  return out;
}

bool is_closed(const RotationPoset& poset, const ClosedSubset& subset) {
  for (auto [u, v] : poset.precedence_edges)
    if (subset.members[v] && !subset.members[u]) return false;
  return true;
}

Matching matching_from_closed_subset(const PreferenceProfile& prefs, const RotationPoset& poset,
                                     const ClosedSubset& subset) {
  if (subset.members.size() != poset.rotations.size())
    throw Error("NotClosed", "subset size mismatch");
  if (!is_closed(poset, subset)) throw Error("NotClosed", "subset not predecessor-closed");

  std::map<std::vector<std::pair<int, int>>, int> id_of;
  for (const Rotation& rho : poset.rotations) id_of[rho.canonical_pairs()] = rho.id;

  Matching mu = deferred_acceptance(prefs, Side::MenPropose);
  int remaining = subset.count();
  while (remaining > 0) {
    auto exposed = find_exposed_rotations(mu, prefs);
    bool advanced = false;
    for (const Rotation& rho : exposed) {
      auto it = id_of.find(rho.canonical_pairs());
      if (it != id_of.end() && subset.members[it->second]) {
        mu = eliminate_rotation(mu, rho, prefs);
        --remaining;
        advanced = true;
        break;
      }
    }
    if (!advanced) throw Error("NotClosed", "no exposed rotation inside subset");
  }
  return mu;
}

std::set<std::pair<int, int>> stable_pairs(const PreferenceProfile& prefs) {
  RotationPoset poset = build_rotation_poset(prefs);
  Matching mu0 = deferred_acceptance(prefs, Side::MenPropose);
  std::set<std::pair<int, int>> out;
  for (int m = 0; m < prefs.n; ++m) out.insert({m, mu0.man_to_woman[m]});
  for (const Rotation& rho : poset.rotations) {
    const int k = rho.size();
    for (int i = 0; i < k; ++i) out.insert({rho.pairs[i].first, rho.pairs[(i + 1) % k].second});
  }
  return out;
}

std::string poset_to_dot(const RotationPoset& poset) {
  std::ostringstream os;
  os << "digraph rotation_poset {\n";
  for (const Rotation& rho : poset.rotations) {
    os << "  r" << rho.id << " [label=\"";
    for (int i = 0; i < rho.size(); ++i) {
      if (i) os << " ";
      os << "(m" << rho.pairs[i].first + 1 << ",w" << rho.pairs[i].second + 1 << ")";
    }
    os << "\"];\n";
  }
  for (auto [u, v] : poset.hasse_edges) os << "  r" << u << " -> r" << v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace distlab
