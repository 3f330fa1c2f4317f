#pragma once

#include "distlab/rotation_poset.hpp"

namespace distlab {

struct RotationWeights {
  std::vector<double> weight;  // indexed by rotation id, may be negative
};

// Social-welfare delta of eliminating the rotation (independent of which
// stable matching exposes it: only the rotation's own pairs change).
double rotation_weight(const Rotation& rho, const Instance& inst);

RotationWeights rotation_weights(const RotationPoset& poset, const Instance& inst);

// Picard project selection: max-weight predecessor-closed subset via min s-t
// cut. Ties resolve to the lexicographically smallest member bitset (the
// inclusion-minimal optimal closure, unique and contained in every optimum).
ClosedSubset max_weight_closed_subset(const RotationPoset& poset, const RotationWeights& weights);

struct OptimalStable {
  Matching matching;
  WelfareValue welfare;
};

OptimalStable optimal_stable_matching(const Instance& inst);

// Reusable max-flow solver (Dinic); exposed for tests.
class FlowNetwork {
 public:
  explicit FlowNetwork(int node_count);
  void add_arc(int from, int to, double capacity);
  double max_flow(int source, int sink);
  // After max_flow: nodes reachable from `source` in the residual graph.
  std::vector<bool> min_cut_source_side(int source) const;

 private:
  struct Arc {
    int to;
    double cap;
    int rev;
  };
  bool bfs_levels(int source, int sink);
  double dfs_augment(int u, int sink, double pushed);

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_, iter_;
};

}  // namespace distlab
