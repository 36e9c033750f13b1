#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace cyclefactor {

// Fixed-universe vertex set backed by a word array. All graph-side set
// arithmetic (degree-into-set, intersections, sweeps) runs on these.
class VertexSet {
public:
    VertexSet() : n_(0) {}
    explicit VertexSet(int n) : n_(n), words_((n + 63) / 64, 0) {}

    static VertexSet full(int n) {
        VertexSet s(n);
        for (auto& w : s.words_) w = ~0ULL;
        s.trim();
        return s;
    }
    static VertexSet of(int n, const std::vector<int>& ids) {
        VertexSet s(n);
        for (int v : ids) s.insert(v);
        return s;
    }

    int universe() const { return n_; }
    bool empty() const {
        for (auto w : words_) if (w) return false;
        return true;
    }
    bool contains(int v) const { return (words_[v >> 6] >> (v & 63)) & 1ULL; }
    void insert(int v) { words_[v >> 6] |= 1ULL << (v & 63); }
    void erase(int v) { words_[v >> 6] &= ~(1ULL << (v & 63)); }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    VertexSet& operator&=(const VertexSet& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    VertexSet& operator|=(const VertexSet& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    // set difference
    VertexSet& operator-=(const VertexSet& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

    bool operator==(const VertexSet& o) const { return n_ == o.n_ && words_ == o.words_; }

    bool intersects(const VertexSet& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    bool is_subset_of(const VertexSet& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    // lowest id in the set, or -1
    int first() const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return int(i * 64 + std::countr_zero(words_[i]));
        return -1;
    }
    // lowest id strictly greater than v, or -1
    int next(int v) const {
        int i = (v + 1) >> 6;
        if (i >= int(words_.size())) return -1;
        uint64_t w = words_[i] & (~0ULL << ((v + 1) & 63));
        while (true) {
            if (w) return i * 64 + std::countr_zero(w);
            if (++i >= int(words_.size())) return -1;
            w = words_[i];
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for (int v = first(); v != -1; v = next(v)) out.push_back(v);
        return out;
    }

    const uint64_t* data() const { return words_.data(); }
    uint64_t* data() { return words_.data(); }
    size_t word_count() const { return words_.size(); }

private:
    void trim() {
        if (n_ % 64) words_.back() &= (~0ULL >> (64 - n_ % 64));
    }
    int n_;
    std::vector<uint64_t> words_;
};

// popcount of (a & b) over a shared universe
inline int intersection_count(const uint64_t* a, const uint64_t* b, size_t words) {
    int c = 0;
    for (size_t i = 0; i < words; ++i) c += std::popcount(a[i] & b[i]);
    return c;
}

inline int intersection_count(const VertexSet& a, const VertexSet& b) {
    return intersection_count(a.data(), b.data(), a.word_count());
}

}  // namespace cyclefactor
