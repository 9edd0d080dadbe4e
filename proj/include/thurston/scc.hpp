#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace thurston {

// Strongly connected components (Tarjan), each sorted.
inline std::vector<std::vector<int>> scc(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<int> idx(n, -1), low(n, 0), stk;
  std::vector<char> on(n, 0);
  std::vector<std::vector<int>> out;
  int counter = 0;
  std::function<void(int)> dfs = [&](int v) {
    idx[v] = low[v] = counter++;
    stk.push_back(v);
    on[v] = 1;
    for (int w : adj[v]) {
      if (idx[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stk.back();
        stk.pop_back();
        on[w] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(comp);
    }
  };
  for (int v = 0; v < n; ++v)
    if (idx[v] < 0) dfs(v);
  return out;
}

inline bool has_cycle(const std::vector<int>& comp, const std::vector<std::vector<int>>& adj) {
  if (comp.size() > 1) return true;
  int v = comp[0];
  return std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
}

}  // namespace thurston
