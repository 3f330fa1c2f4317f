#include "distlab/welfare_opt.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace distlab {

double rotation_weight(const Rotation& rho, const Instance& inst) {
  const int k = rho.size();
  double delta = 0.0;
  for (int i = 0; i < k; ++i) {
    int m = rho.pairs[i].first;
    int w_old = rho.pairs[i].second;
    int w_new = rho.pairs[(i + 1) % k].second;
    delta += inst.values.men_values(m, w_new) - inst.values.men_values(m, w_old);
    // Woman w_old moves from m to the rotation's previous man.
    int m_new = rho.pairs[(i - 1 + k) % k].first;
    delta += inst.values.women_values(w_old, m_new) - inst.values.women_values(w_old, m);
  }
  return delta;
}

RotationWeights rotation_weights(const RotationPoset& poset, const Instance& inst) {
  RotationWeights w;
  w.weight.reserve(poset.rotations.size());
  for (const Rotation& rho : poset.rotations) w.weight.push_back(rotation_weight(rho, inst));
  return w;
}

FlowNetwork::FlowNetwork(int node_count) : adj_(node_count) {}

void FlowNetwork::add_arc(int from, int to, double capacity) {
  adj_[from].push_back({to, capacity, static_cast<int>(adj_[to].size())});
  adj_[to].push_back({from, 0.0, static_cast<int>(adj_[from].size()) - 1});
}

bool FlowNetwork::bfs_levels(int source, int sink) {
  level_.assign(adj_.size(), -1);
  std::queue<int> q;
  level_[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const Arc& a : adj_[u])
      if (a.cap > kWelfareTol && level_[a.to] < 0) {
        level_[a.to] = level_[u] + 1;
        q.push(a.to);
      }
  }
  return level_[sink] >= 0;
}

double FlowNetwork::dfs_augment(int u, int sink, double pushed) {
  if (u == sink) return pushed;
  for (int& i = iter_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
    Arc& a = adj_[u][i];
    if (a.cap > kWelfareTol && level_[a.to] == level_[u] + 1) {
      double got = dfs_augment(a.to, sink, std::min(pushed, a.cap));
      if (got > 0.0) {
        a.cap -= got;
        adj_[a.to][a.rev].cap += got;
        return got;
      }
    }
  }
  return 0.0;
}

double FlowNetwork::max_flow(int source, int sink) {
  double flow = 0.0;
  while (bfs_levels(source, sink)) {
    iter_.assign(adj_.size(), 0);
    while (double got = dfs_augment(source, sink, std::numeric_limits<double>::infinity()))
      flow += got;
  }
  return flow;
}

std::vector<bool> FlowNetwork::min_cut_source_side(int source) const {
  std::vector<bool> side(adj_.size(), false);
  std::vector<int> stack{source};
  side[source] = true;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (const Arc& a : adj_[u])
      if (a.cap > kWelfareTol && !side[a.to]) {
        side[a.to] = true;
        stack.push_back(a.to);
      }
  }
  return side;
}

ClosedSubset max_weight_closed_subset(const RotationPoset& poset, const RotationWeights& weights) {
  const int R = static_cast<int>(poset.rotations.size());
  double abs_sum = 0.0;
  for (double w : weights.weight) abs_sum += std::abs(w);
  const double inf_cap = 1.0 + abs_sum;

  const int source = R, sink = R + 1;
  FlowNetwork net(R + 2);
  for (int i = 0; i < R; ++i) {
    double w = weights.weight[i];
    if (w > 0.0) net.add_arc(source, i, w);
    if (w < 0.0) net.add_arc(i, sink, -w);
  }
  // Selecting a rotation forces its predecessors; the Hasse edges imply the
  // full precedence relation.
  for (auto [pi, rho] : poset.hasse_edges) net.add_arc(rho, pi, inf_cap);

  net.max_flow(source, sink);
  std::vector<bool> side = net.min_cut_source_side(source);
  ClosedSubset out{std::vector<bool>(R, false)};
  for (int i = 0; i < R; ++i) out.members[i] = side[i];
  if (!is_closed(poset, out)) throw Error("Internal", "min-cut subset not closed");
  return out;
}

OptimalStable optimal_stable_matching(const Instance& inst) {
  RotationPoset poset = build_rotation_poset(inst.prefs);
  RotationWeights weights = rotation_weights(poset, inst);
  ClosedSubset best = max_weight_closed_subset(poset, weights);
  Matching mu = matching_from_closed_subset(inst.prefs, poset, best);
  return {mu, social_welfare(mu, inst)};
}

}  // namespace distlab
