#include "distlab/matching.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace distlab {

namespace {

// Men-proposing DA over explicit rank rows; callers swap roles for the
// women-proposing variant. Free proposers are processed by ascending index.
std::vector<int> da_proposing(const std::vector<std::vector<int>>& prop_ranks,
                              const std::vector<std::vector<int>>& recv_ranks) {
  const int n = static_cast<int>(prop_ranks.size());
  std::vector<std::vector<int>> recv_pos(n, std::vector<int>(n));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) recv_pos[r][recv_ranks[r][k]] = k;

  std::vector<int> next(n, 0);           // next ranking position to propose to
  std::vector<int> engaged_to(n, -1);    // receiver -> proposer
  std::vector<int> partner(n, -1);       // proposer -> receiver
  std::set<int> free;                    // lowest-index free proposer goes first
  for (int p = 0; p < n; ++p) free.insert(p);

  while (!free.empty()) {
    int p = *free.begin();
    free.erase(free.begin());
    int r = prop_ranks[p][next[p]++];
    int cur = engaged_to[r];
    if (cur == -1) {
      engaged_to[r] = p;
      partner[p] = r;
    } else if (recv_pos[r][p] < recv_pos[r][cur]) {
      engaged_to[r] = p;
      partner[p] = r;
      partner[cur] = -1;
      free.insert(cur);
    } else {
      free.insert(p);
    }
  }
  return partner;
}

}  // namespace

Matching deferred_acceptance(const PreferenceProfile& prefs, Side side) {
  if (side == Side::MenPropose)
    return Matching{da_proposing(prefs.men_ranks, prefs.women_ranks)};
  std::vector<int> w_partner = da_proposing(prefs.women_ranks, prefs.men_ranks);
  std::vector<int> man_to_woman(prefs.n, -1);
  for (int w = 0; w < prefs.n; ++w) man_to_woman[w_partner[w]] = w;
  return Matching{std::move(man_to_woman)};
}

std::vector<BlockingPair> blocking_pairs(const Matching& mu, const PreferenceProfile& prefs) {
  const int n = prefs.n;
  std::vector<int> w_partner = mu.woman_to_man();
  std::vector<std::vector<int>> mpos(n, std::vector<int>(n)), wpos(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      mpos[i][prefs.men_ranks[i][k]] = k;
      wpos[i][prefs.women_ranks[i][k]] = k;
    }
  std::vector<BlockingPair> out;
  for (int m = 0; m < n; ++m)
    for (int w = 0; w < n; ++w)
      if (mpos[m][w] < mpos[m][mu.man_to_woman[m]] && wpos[w][m] < wpos[w][w_partner[w]])
        out.push_back({man(m), woman(w)});
  return out;
}

bool is_stable(const Matching& mu, const PreferenceProfile& prefs) {
  return blocking_pairs(mu, prefs).empty();
}

std::vector<Matching> enumerate_stable_bruteforce(const PreferenceProfile& prefs) {
  if (prefs.n > 9) throw Error("TooLarge", "n = " + std::to_string(prefs.n));
  std::vector<int> perm(prefs.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matching> out;
  do {
    Matching mu{perm};
    if (is_stable(mu, prefs)) out.push_back(mu);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;  // next_permutation order is already lexicographic
}

}  // namespace distlab
