#include "ergo/context_tree.hpp"

#include <algorithm>
#include <utility>

namespace ergo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ContextTree::ContextTree(SymbolView path, int alphabet, std::size_t lo, std::size_t min_count)
    : path_(path), alphabet_(alphabet), lo_(lo), end_(lo), min_count_(std::max<std::size_t>(1, min_count)) {
    if (alphabet < 1 || alphabet > kMaxAlphabet) throw InputError("ContextTree: bad alphabet size");
    if (path.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
        throw InputError("ContextTree: path too long");
    validate_symbols(path, Alphabet{alphabet});
    make_node(kNone, 0, lo);
}

ContextTree::NodeId ContextTree::make_node(NodeId parent, Symbol via, std::size_t witness) {
    const auto id = static_cast<NodeId>(nodes_.size());
    Node node;
    node.parent = parent;
    node.depth = parent == kNone ? 0 : nodes_[idx(parent)].depth + 1;
    node.witness = static_cast<std::int32_t>(witness);
    nodes_.push_back(std::move(node));
    const auto a = static_cast<std::size_t>(alphabet_);
    children_.resize(children_.size() + a, kNone);
    counts_.resize(counts_.size() + a, 0);
    agg_max_.resize(agg_max_.size() + a, -kInf);
    agg_min_.resize(agg_min_.size() + a, kInf);
    if (parent != kNone) children_[slot(parent, via)] = id;
    max_depth_ = std::max(max_depth_, static_cast<std::size_t>(nodes_.back().depth));
    return id;
}

ContextTree::NodeId ContextTree::child(NodeId v, Symbol x) const {
    if (x >= alphabet_) return kNone;
    return children_[slot(v, x)];
}

std::vector<std::size_t> ContextTree::positions(NodeId v) const {
    const Node& node = nodes_[idx(v)];
    std::vector<std::size_t> out;
    for (std::size_t i = node.head; i < node.held.size(); ++i) out.push_back(static_cast<std::size_t>(node.held[i]));
    return out;
}

void ContextTree::add_position(NodeId v, std::size_t u) {
    ++counts_[slot(v, path_[u])];
    Node& node = nodes_[idx(v)];
    ++node.total;
    if (!node.expanded) node.held.push_back(static_cast<std::int32_t>(u));
}

void ContextTree::expand(NodeId v) {
    std::vector<NodeId> pending{v};
    while (!pending.empty()) {
        const NodeId w = pending.back();
        pending.pop_back();
        if (nodes_[idx(w)].expanded) continue;
        nodes_[idx(w)].expanded = true;
        const auto d = static_cast<std::size_t>(nodes_[idx(w)].depth);
        std::vector<std::int32_t> held;
        held.swap(nodes_[idx(w)].held);
        const std::size_t head = nodes_[idx(w)].head;
        nodes_[idx(w)].head = 0;
        for (std::size_t i = head; i < held.size(); ++i) {
            const auto u = static_cast<std::size_t>(held[i]);
            if (u < lo_ + d + 1) continue;  // context would leave the window
            const Symbol s = path_[u - d - 1];
            NodeId c = children_[slot(w, s)];
            if (c == kNone) c = make_node(w, s, u);
            add_position(c, u);
        }
        for (int x = 0; x < alphabet_; ++x) {
            const NodeId c = children_[slot(w, static_cast<Symbol>(x))];
            if (c != kNone && total(c) >= min_count_) pending.push_back(c);
        }
        mark_chain(w);
    }
}

void ContextTree::mark_chain(NodeId v) {
    for (; v != kNone; v = nodes_[idx(v)].parent) nodes_[idx(v)].dirty = true;
}

void ContextTree::push_back() {
    if (end_ >= path_.size()) throw InputError("ContextTree::push_back: window at end of path");
    const std::size_t u = end_++;
    NodeId v = root();
    for (std::size_t d = 0;; ++d) {
        add_position(v, u);
        if (!nodes_[idx(v)].expanded) {
            if (total(v) >= min_count_) expand(v);
            break;
        }
        if (u < lo_ + d + 1) break;
        const Symbol s = path_[u - d - 1];
        NodeId c = children_[slot(v, s)];
        if (c == kNone) c = make_node(v, s, u);
        v = c;
    }
    mark_chain(v);
}

void ContextTree::pop_front() {
    if (lo_ >= end_) throw InputError("ContextTree::pop_front: empty window");
    const std::size_t last = end_ - 1;
    for (std::size_t k = 0; k <= max_depth_ && lo_ + k <= last; ++k) {
        const std::size_t u = lo_ + k;
        NodeId v = root();
        for (std::size_t d = 0; d < k && v != kNone; ++d)
            v = nodes_[idx(v)].expanded ? children_[slot(v, path_[u - d - 1])] : kNone;
        if (v == kNone) continue;
        Node& node = nodes_[idx(v)];
        if (!node.expanded) {
            // Positions are appended in increasing order, so u is the front.
            if (node.head >= node.held.size() || static_cast<std::size_t>(node.held[node.head]) != u)
                throw std::logic_error("ContextTree: position bookkeeping out of sync");
            ++node.head;
            if (node.head > 32 && 2 * node.head > node.held.size()) {
                node.held.erase(node.held.begin(), node.held.begin() + static_cast<std::ptrdiff_t>(node.head));
                node.head = 0;
            }
        }
        --counts_[slot(v, path_[u])];
        --node.total;
        mark_chain(node.parent);
    }
    ++lo_;
}

void ContextTree::raise_min_count(std::size_t min_count) {
    if (min_count <= min_count_) return;
    min_count_ = min_count;
    ++epoch_;
}

void ContextTree::set_filter(Filter filter) {
    filter_ = std::move(filter);
    ++epoch_;
}

void ContextTree::invalidate_contexts_of(std::size_t u) {
    NodeId v = root();
    for (std::size_t d = 0; nodes_[idx(v)].expanded && u >= d + 1; ++d) {
        const NodeId c = children_[slot(v, path_[u - d - 1])];
        if (c == kNone) break;
        v = c;
    }
    mark_chain(v);
}

ContextTree::NodeId ContextTree::find(SymbolView word) const {
    NodeId v = root();
    for (std::size_t i = word.size(); i-- > 0;) {
        if (!nodes_[idx(v)].expanded) return kNone;
        v = child(v, word[i]);
        if (v == kNone) return kNone;
    }
    return v;
}

bool ContextTree::qualifies(NodeId d, Symbol x) const {
    if (counts_[slot(d, x)] < min_count_) return false;
    return !filter_ || filter_(*this, d, x);
}

void ContextTree::refresh(NodeId v) {
    auto fresh = [this](NodeId w) {
        const Node& n = nodes_[idx(w)];
        return !n.dirty && n.epoch == epoch_;
    };
    if (fresh(v)) return;
    const auto a = static_cast<std::size_t>(alphabet_);
    std::vector<std::pair<NodeId, bool>> stack{{v, false}};
    while (!stack.empty()) {
        auto [w, ready] = stack.back();
        if (!ready) {
            stack.back().second = true;
            if (total(w) >= min_count_)
                for (std::size_t x = 0; x < a; ++x) {
                    const NodeId c = children_[slot(w, static_cast<Symbol>(x))];
                    if (c != kNone && total(c) >= min_count_ && !fresh(c)) stack.emplace_back(c, false);
                }
            continue;
        }
        stack.pop_back();
        const std::size_t base = slot(w, 0);
        std::fill(agg_max_.begin() + static_cast<std::ptrdiff_t>(base),
                  agg_max_.begin() + static_cast<std::ptrdiff_t>(base + a), -kInf);
        std::fill(agg_min_.begin() + static_cast<std::ptrdiff_t>(base),
                  agg_min_.begin() + static_cast<std::ptrdiff_t>(base + a), kInf);
        if (total(w) >= min_count_) {
            for (std::size_t s = 0; s < a; ++s) {
                const NodeId c = children_[slot(w, static_cast<Symbol>(s))];
                if (c == kNone || total(c) < min_count_) continue;
                const double tc = static_cast<double>(total(c));
                const std::size_t cb = slot(c, 0);
                for (std::size_t x = 0; x < a; ++x) {
                    if (qualifies(c, static_cast<Symbol>(x))) {
                        const double r = static_cast<double>(counts_[cb + x]) / tc;
                        agg_max_[base + x] = std::max(agg_max_[base + x], r);
                        agg_min_[base + x] = std::min(agg_min_[base + x], r);
                    }
                    agg_max_[base + x] = std::max(agg_max_[base + x], agg_max_[cb + x]);
                    agg_min_[base + x] = std::min(agg_min_[base + x], agg_min_[cb + x]);
                }
            }
        }
        nodes_[idx(w)].dirty = false;
        nodes_[idx(w)].epoch = epoch_;
    }
}

double ContextTree::delta(NodeId v) {
    if (v == kNone || total(v) < min_count_) return 0.0;
    refresh(v);
    const double t = static_cast<double>(total(v));
    const std::size_t base = slot(v, 0);
    double out = 0.0;
    for (std::size_t x = 0; x < static_cast<std::size_t>(alphabet_); ++x) {
        if (agg_max_[base + x] == -kInf) continue;
        const double r = static_cast<double>(counts_[base + x]) / t;
        out = std::max({out, agg_max_[base + x] - r, r - agg_min_[base + x]});
    }
    return out;
}

}  // namespace ergo
