#include "cyclefactor/graph.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw PreconditionError("graph", "edge endpoint out of range");
        if (u == v) throw PreconditionError("graph", "self-loop rejected");
        if (g.has_edge(u, v)) throw PreconditionError("graph", "duplicate edge rejected");
        g.add_edge_unchecked(u, v);
    }
    return g;
}

Graph Graph::complete(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge_unchecked(u, v);
    return g;
}

long long Graph::edge_count() const {
    long long s = 0;
    for (int v = 0; v < n_; ++v) s += degree_[v];
    return s / 2;
}

std::vector<int> Graph::neighbors(int v) const {
    std::vector<int> out;
    out.reserve(degree_[v]);
    const uint64_t* r = row(v);
    for (size_t i = 0; i < words_; ++i) {
        uint64_t w = r[i];
        while (w) {
            out.push_back(int(i * 64 + std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

bool Graph::check_invariants() const {
    for (int u = 0; u < n_; ++u) {
        if (has_edge(u, u)) return false;
        int d = 0;
        const uint64_t* r = row(u);
        for (size_t i = 0; i < words_; ++i) d += std::popcount(r[i]);
        if (d != degree_[u]) return false;
    }
    for (int u = 0; u < n_; ++u)
        for (int v : neighbors(u))
            if (!has_edge(v, u)) return false;
    return true;
}

std::pair<Graph, std::vector<int>> Graph::induced_subgraph(const VertexSet& s) const {
    std::vector<int> ids = s.to_vector();
    std::vector<int> inv(n_, -1);
    for (size_t i = 0; i < ids.size(); ++i) inv[ids[i]] = int(i);
    Graph g(int(ids.size()));
    for (size_t i = 0; i < ids.size(); ++i) {
        VertexSet nb = neighbors_in(ids[i], s);
        for (int v = nb.next(ids[i]); v != -1; v = nb.next(v))
            g.add_edge_unchecked(int(i), inv[v]);
    }
    return {std::move(g), std::move(ids)};
}

void GraphBuilder::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= g_.vertex_count() || v >= g_.vertex_count())
        throw PreconditionError("graph", "edge endpoint out of range");
    if (u == v) throw PreconditionError("graph", "self-loop rejected");
    if (!g_.has_edge(u, v)) g_.add_edge_unchecked(u, v);
}

Graph sample_gnp(int n, double p, uint64_t seed) {
    if (n < 1) throw PreconditionError("gnp", "n must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("gnp", "p must lie in [0,1]");
    Graph g(n);
    if (p == 0.0) return g;
    std::mt19937_64 rng(seed);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            // top 53 bits -> uniform double in [0,1); avoids distribution
            // objects whose output is implementation-defined
            double x = double(rng() >> 11) * 0x1.0p-53;
            if (x < p) g.add_edge_unchecked(u, v);
        }
    }
    return g;
}

long long edge_count_between(const Graph& g, const VertexSet& a, const VertexSet& b) {
    if (a.universe() != g.vertex_count() || b.universe() != g.vertex_count())
        throw PreconditionError("edge_count", "vertex set universe does not match the graph");
    long long total = 0;
    for (int v = a.first(); v != -1; v = a.next(v))
        total += g.degree_in(v, b);
    return total;
}

void Graph::save_edge_list(std::ostream& out) const {
    out << n_ << ' ' << edge_count() << '\n';
    for (int u = 0; u < n_; ++u) {
        const uint64_t* r = row(u);
        for (size_t i = 0; i < words_; ++i) {
            uint64_t w = r[i];
            while (w) {
                int v = int(i * 64 + std::countr_zero(w));
                w &= w - 1;
                if (u < v) out << u << ' ' << v << '\n';
            }
        }
    }
}

void Graph::save_edge_list_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot open " + path + " for writing");
    save_edge_list(out);
}

Graph Graph::load_edge_list(std::istream& in) {
    int n;
    long long m;
    if (!(in >> n >> m)) throw Error("io", "edge list header must be 'n m'", ExitCode::parse);
    if (n < 0 || m < 0) throw Error("io", "negative edge list header", ExitCode::parse);
    Graph g(n);
    for (long long i = 0; i < m; ++i) {
        int u, v;
        if (!(in >> u >> v)) throw Error("io", "truncated edge list", ExitCode::parse);
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw Error("io", "edge endpoint out of range in edge list", ExitCode::parse);
        if (u >= v)
            throw Error("io", "edge list requires u < v on every line", ExitCode::parse);
        if (g.has_edge(u, v)) throw Error("io", "duplicate edge in edge list", ExitCode::parse);
        g.add_edge_unchecked(u, v);
    }
    return g;
}

Graph Graph::load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open " + path, ExitCode::parse);
    return load_edge_list(in);
}

}  // namespace cyclefactor
