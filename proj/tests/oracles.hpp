#pragma once

// Test-only oracles. Each one recomputes a quantity by an independent route
// (plain loops, exhaustive enumeration, flow) so the production code paths
// have something honest to be compared against.

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "cyclefactor/graph.hpp"

namespace oracles {

using cyclefactor::Graph;
using cyclefactor::VertexSet;

// double-loop recount of ordered adjacent pairs A x B
inline long long edge_count_pairs(const Graph& g, const std::vector<int>& a,
                                  const std::vector<int>& b) {
    long long c = 0;
    for (int x : a)
        for (int y : b)
            if (g.has_edge(x, y)) ++c;
    return c;
}

// Dinic max-flow on a unit bipartite network, used as the matching oracle.
class MaxFlow {
public:
    explicit MaxFlow(int n) : head_(n, -1) {}
    void add_edge(int u, int v, int cap) {
        edges_.push_back({v, head_[u], cap});
        head_[u] = int(edges_.size()) - 1;
        edges_.push_back({u, head_[v], 0});
        head_[v] = int(edges_.size()) - 1;
    }
    int run(int s, int t) {
        int flow = 0;
        while (bfs(s, t)) {
            iter_ = head_;
            while (int f = dfs(s, t, 1 << 30)) flow += f;
        }
        return flow;
    }

private:
    struct E {
        int to, next, cap;
    };
    bool bfs(int s, int t) {
        level_.assign(head_.size(), -1);
        std::queue<int> q;
        q.push(s);
        level_[s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[u]; e != -1; e = edges_[e].next)
                if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[u] + 1;
                    q.push(edges_[e].to);
                }
        }
        return level_[t] >= 0;
    }
    int dfs(int u, int t, int f) {
        if (u == t) return f;
        for (int& e = iter_[u]; e != -1; e = edges_[e].next) {
            E& ed = edges_[e];
            if (ed.cap > 0 && level_[ed.to] == level_[u] + 1) {
                int d = dfs(ed.to, t, std::min(f, ed.cap));
                if (d > 0) {
                    ed.cap -= d;
                    edges_[e ^ 1].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }
    std::vector<E> edges_;
    std::vector<int> head_, level_, iter_;
};

// max matching size of a bipartite graph given as left-adjacency lists
inline int matching_size_flow(int nl, int nr, const std::vector<std::vector<int>>& adj) {
    MaxFlow mf(nl + nr + 2);
    int s = nl + nr, t = s + 1;
    for (int u = 0; u < nl; ++u) mf.add_edge(s, u, 1);
    for (int v = 0; v < nr; ++v) mf.add_edge(nl + v, t, 1);
    for (int u = 0; u < nl; ++u)
        for (int v : adj[size_t(u)]) mf.add_edge(u, nl + v, 1);
    return mf.run(s, t);
}

// exhaustive: does `verts` admit a partition into triangles of g?
inline bool has_triangle_factor(const Graph& g, std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    if (verts.size() % 3) return false;
    std::vector<bool> used(verts.size(), false);
    std::function<bool(size_t)> go = [&](size_t covered) -> bool {
        if (covered == verts.size()) return true;
        size_t first = 0;
        while (used[first]) ++first;
        used[first] = true;
        for (size_t i = first + 1; i < verts.size(); ++i) {
            if (used[i] || !g.has_edge(verts[first], verts[i])) continue;
            used[i] = true;
            for (size_t j = i + 1; j < verts.size(); ++j) {
                if (used[j] || !g.has_edge(verts[first], verts[j]) ||
                    !g.has_edge(verts[i], verts[j]))
                    continue;
                used[j] = true;
                if (go(covered + 3)) return true;
                used[j] = false;
            }
            used[i] = false;
        }
        used[first] = false;
        return false;
    };
    return go(0);
}

// first traversing triangle by plain triple loops over removable vertices
inline std::optional<std::array<int, 3>> traversing_triangle_loops(
    const Graph& g, const std::vector<int>& ra, const std::vector<int>& rb,
    const std::vector<int>& rc) {
    for (int x : ra)
        for (int y : rb)
            for (int z : rc)
                if (g.has_edge(x, y) && g.has_edge(y, z) && g.has_edge(x, z))
                    return std::array<int, 3>{x, y, z};
    return std::nullopt;
}

}  // namespace oracles
