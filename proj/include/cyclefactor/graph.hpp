#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cyclefactor/bitset.hpp"

namespace cyclefactor {

// Undirected simple graph over dense vertex ids [0, n). Adjacency is a
// symmetric bit matrix: O(1) edge queries, O(n/64) row-vs-set intersections.
// Immutable after construction; every operation in the library is a pure read.
class Graph {
public:
    Graph() : n_(0), words_(0) {}
    explicit Graph(int n) : n_(n), words_((n + 63) / 64), bits_(size_t(n) * words_, 0), degree_(n, 0) {}

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
    static Graph complete(int n);

    int vertex_count() const { return n_; }
    long long edge_count() const;
    int degree(int v) const { return degree_[v]; }

    bool has_edge(int u, int v) const {
        return (bits_[size_t(u) * words_ + (v >> 6)] >> (v & 63)) & 1ULL;
    }
    const uint64_t* row(int v) const { return bits_.data() + size_t(v) * words_; }
    size_t row_words() const { return words_; }

    // |N(v) ∩ S|
    int degree_in(int v, const VertexSet& s) const {
        return intersection_count(row(v), s.data(), words_);
    }
    VertexSet neighbors_in(int v, const VertexSet& s) const {
        VertexSet out(n_);
        const uint64_t* r = row(v);
        for (size_t i = 0; i < words_; ++i) out.data()[i] = r[i] & s.data()[i];
        return out;
    }
    VertexSet neighbor_set(int v) const {
        VertexSet out(n_);
        const uint64_t* r = row(v);
        for (size_t i = 0; i < words_; ++i) out.data()[i] = r[i];
        return out;
    }
    // lowest-id neighbor of v inside s, or -1
    int first_neighbor_in(int v, const VertexSet& s) const {
        const uint64_t* r = row(v);
        for (size_t i = 0; i < words_; ++i) {
            uint64_t w = r[i] & s.data()[i];
            if (w) return int(i * 64 + std::countr_zero(w));
        }
        return -1;
    }
    bool has_neighbor_in(int v, const VertexSet& s) const {
        return first_neighbor_in(v, s) >= 0;
    }
    std::vector<int> neighbors(int v) const;

    // symmetry / no-self-loop audit; exhaustive, intended for tests
    bool check_invariants() const;

    // induced subgraph plus the sorted list mapping new ids to old ids
    std::pair<Graph, std::vector<int>> induced_subgraph(const VertexSet& s) const;

    void save_edge_list(std::ostream& out) const;
    void save_edge_list_file(const std::string& path) const;
    static Graph load_edge_list(std::istream& in);
    static Graph load_edge_list_file(const std::string& path);

private:
    void add_edge_unchecked(int u, int v) {
        bits_[size_t(u) * words_ + (v >> 6)] |= 1ULL << (v & 63);
        bits_[size_t(v) * words_ + (u >> 6)] |= 1ULL << (u & 63);
        ++degree_[u];
        ++degree_[v];
    }

    int n_;
    size_t words_;
    std::vector<uint64_t> bits_;
    std::vector<int> degree_;

    friend Graph sample_gnp(int n, double p, uint64_t seed);
    friend class GraphBuilder;
};

// Incremental construction for generators that cannot hand over a full edge
// list up front (LPS graphs, covers, planted instances).
class GraphBuilder {
public:
    explicit GraphBuilder(int n) : g_(n) {}
    void add_edge(int u, int v);
    bool has_edge(int u, int v) const { return g_.has_edge(u, v); }
    Graph build() { return std::move(g_); }

private:
    Graph g_;
};

// Seeded G(n,p): every unordered pair is an edge independently with
// probability p, drawn from a fixed-algorithm 64-bit generator so that equal
// (n, p, seed) give bit-identical graphs on any platform.
Graph sample_gnp(int n, double p, uint64_t seed);

// Ordered-pair count |{(a,b) ∈ A×B : ab ∈ E}|; an edge with both ends in
// A ∩ B contributes twice.
long long edge_count_between(const Graph& g, const VertexSet& a, const VertexSet& b);

}  // namespace cyclefactor
