#pragma once

// Context tree over a sliding window of one path.
//
// A node stands for a context word c; reading c from its newest symbol
// backwards gives the root-to-node path, so the children of c are its
// one-symbol left extensions z c.  The tree holds "successor positions" u in
// the window [lo, hi]: u belongs to the node of depth d whose word is
// path[u-d .. u-1], provided u - d >= lo.  Per node we keep the successor
// counts count(c, x) = #{u : context c, path[u] = x} and their total.
//
// Nodes are materialized lazily.  A node keeps its own position list until
// its total reaches `min_count`; only then are its children created.  Any
// word below an unexpanded node therefore occurs fewer than `min_count`
// times, which is all the frequency-filtered statistics need to know.
//
// For every node the tree maintains, per symbol x, the max and min of
// count(d, x) / total(d) over strict descendants d that "qualify": count(d, x)
// >= min_count and an optional external filter accepts (d, x).  Aggregates
// are recomputed lazily along dirty ancestor chains, so delta() is O(|X|)
// after amortized maintenance.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "ergo/types.hpp"

namespace ergo {

class ContextTree {
public:
    using NodeId = std::int32_t;
    static constexpr NodeId kNone = -1;
    /// Extra qualification test on (descendant, symbol) pairs.
    using Filter = std::function<bool(const ContextTree&, NodeId, Symbol)>;

    /// Empty window starting at `lo`.
    ContextTree(SymbolView path, int alphabet, std::size_t lo, std::size_t min_count);

    std::size_t lo() const { return lo_; }
    /// One past the last position in the window.
    std::size_t end() const { return end_; }
    std::size_t min_count() const { return min_count_; }

    /// Adds successor position end() to the window.
    void push_back();
    /// Drops lo() from the window.
    void pop_front();
    /// Raises the qualification threshold; thresholds never decrease.
    void raise_min_count(std::size_t min_count);
    void set_filter(Filter filter);
    /// Marks every aggregate that may depend on words ending at position u as
    /// stale (used when the external filter's answer can change for them).
    void invalidate_contexts_of(std::size_t u);

    NodeId root() const { return 0; }
    NodeId child(NodeId v, Symbol x) const;
    NodeId parent(NodeId v) const { return nodes_[idx(v)].parent; }
    std::size_t depth(NodeId v) const { return static_cast<std::size_t>(nodes_[idx(v)].depth); }
    bool expanded(NodeId v) const { return nodes_[idx(v)].expanded; }
    std::size_t total(NodeId v) const { return static_cast<std::size_t>(nodes_[idx(v)].total); }
    std::size_t count(NodeId v, Symbol x) const { return counts_[slot(v, x)]; }
    /// A position whose context is this node's word: word = path[w-d .. w-1].
    std::size_t witness(NodeId v) const { return static_cast<std::size_t>(nodes_[idx(v)].witness); }
    /// Unexpanded nodes only: positions currently held, increasing.
    std::vector<std::size_t> positions(NodeId v) const;
    std::size_t node_count() const { return nodes_.size(); }

    /// Node for a word (oldest symbol first).  kNone when the word is not
    /// materialized, which implies it occurs fewer than min_count() times.
    NodeId find(SymbolView word) const;

    /// max over qualifying strict descendants d and symbols x of
    /// |count(v,x)/total(v) - count(d,x)/total(d)|; 0 when there are none.
    double delta(NodeId v);

    int alphabet() const { return alphabet_; }
    SymbolView path() const { return path_; }

private:
    struct Node {
        NodeId parent = kNone;
        std::int32_t depth = 0;
        std::int32_t witness = 0;
        std::int32_t total = 0;
        std::uint32_t epoch = 0;
        bool expanded = false;
        bool dirty = true;
        std::vector<std::int32_t> held;  // positions, unexpanded nodes only
        std::size_t head = 0;            // first live entry of `held`
    };

    static std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }
    std::size_t slot(NodeId v, Symbol x) const {
        return idx(v) * static_cast<std::size_t>(alphabet_) + x;
    }
    NodeId make_node(NodeId parent, Symbol via, std::size_t witness);
    void add_position(NodeId v, std::size_t u);
    void expand(NodeId v);
    void mark_chain(NodeId v);
    bool qualifies(NodeId d, Symbol x) const;
    void refresh(NodeId v);

    SymbolView path_;
    int alphabet_;
    std::size_t lo_;
    std::size_t end_;
    std::size_t min_count_;
    std::uint32_t epoch_ = 1;
    std::size_t max_depth_ = 0;
    Filter filter_;

    std::vector<Node> nodes_;
    std::vector<NodeId> children_;      // nodes x alphabet
    std::vector<std::uint32_t> counts_;  // nodes x alphabet
    std::vector<double> agg_max_;        // nodes x alphabet, -inf when empty
    std::vector<double> agg_min_;        // nodes x alphabet, +inf when empty
};

}  // namespace ergo
