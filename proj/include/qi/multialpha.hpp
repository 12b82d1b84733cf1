#pragma once

// Multi-alphabet coding by factoring the multinomial class into binomial
// classes along a binary prefix-code tree. Every internal node receives the
// string of branch choices (0 = left, 1 = right) made by the symbols routed
// through it, and that string is coded with the binary block codec.

#include <cstdint>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "qi/codec.hpp"
#include "qi/error.hpp"
#include "qi/qtable.hpp"

namespace qi {

class CodeTree {
 public:
  struct Node {
    std::uint64_t count = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t symbol = -1;

    bool is_leaf() const noexcept { return symbol >= 0; }
  };

  std::uint32_t alphabet() const noexcept { return alphabet_; }
  std::int32_t root() const noexcept { return root_; }
  const Node& node(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::span<const Node> nodes() const noexcept { return nodes_; }

  /// Internal node ids in pre-order (parents before children, left first).
  const std::vector<std::int32_t>& internal_preorder() const noexcept { return preorder_; }

  /// Root-to-leaf branch bits for `symbol` and the internal nodes they are taken at.
  const std::vector<std::pair<std::int32_t, std::uint8_t>>& path(std::uint32_t symbol) const { return paths_[symbol]; }

  std::size_t depth(std::uint32_t symbol) const { return paths_[symbol].size(); }

  friend CodeTree build_tree(std::span<const std::uint64_t> counts);

 private:
  void index() {
    preorder_.clear();
    paths_.assign(alphabet_, {});
    std::vector<std::pair<std::int32_t, std::uint8_t>> trail;
    walk(root_, trail);
  }

  void walk(std::int32_t id, std::vector<std::pair<std::int32_t, std::uint8_t>>& trail) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) {
      paths_[static_cast<std::size_t>(n.symbol)] = trail;
      return;
    }
    preorder_.push_back(id);
    trail.emplace_back(id, 0);
    walk(n.left, trail);
    trail.back().second = 1;
    walk(n.right, trail);
    trail.pop_back();
  }

  std::uint32_t alphabet_ = 0;
  std::int32_t root_ = -1;
  std::vector<Node> nodes_;
  std::vector<std::int32_t> preorder_;
  std::vector<std::vector<std::pair<std::int32_t, std::uint8_t>>> paths_;
};

/// Huffman tree over `counts`. Ties are broken by (count, leaves before merged
/// nodes, symbol id or merge order); the first node popped becomes the left child.
inline CodeTree build_tree(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) fail(ErrorCode::degenerate_alphabet, "alphabet needs at least two symbols");
  CodeTree tree;
  tree.alphabet_ = static_cast<std::uint32_t>(counts.size());
  using Key = std::tuple<std::uint64_t, int, std::uint32_t, std::int32_t>;  // count, kind, order, node id
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (std::uint32_t sym = 0; sym < counts.size(); ++sym) {
    tree.nodes_.push_back({counts[sym], -1, -1, static_cast<std::int32_t>(sym)});
    heap.emplace(counts[sym], 0, sym, static_cast<std::int32_t>(sym));
  }
  std::uint32_t merges = 0;
  while (heap.size() > 1) {
    const Key a = heap.top();
    heap.pop();
    const Key b = heap.top();
    heap.pop();
    const auto id = static_cast<std::int32_t>(tree.nodes_.size());
    const std::uint64_t total = std::get<0>(a) + std::get<0>(b);
    tree.nodes_.push_back({total, std::get<3>(a), std::get<3>(b), -1});
    heap.emplace(total, 1, merges++, id);
  }
  tree.root_ = std::get<3>(heap.top());
  tree.index();
  return tree;
}

/// Block class (m, k) of an internal node: m symbols pass through it, k go right.
inline std::pair<std::uint32_t, std::uint32_t> node_class(const CodeTree& tree, std::int32_t id) {
  const auto& n = tree.node(id);
  return {static_cast<std::uint32_t>(n.count), static_cast<std::uint32_t>(tree.node(n.right).count)};
}

inline std::vector<std::uint64_t> symbol_counts(std::span<const std::uint8_t> symbols, std::uint32_t alphabet) {
  std::vector<std::uint64_t> counts(alphabet, 0);
  for (const std::uint8_t s : symbols) {
    if (s >= alphabet) fail(ErrorCode::symbol_out_of_alphabet, "symbol outside the alphabet");
    ++counts[s];
  }
  return counts;
}

/// One BlockCode per internal node, in pre-order.
inline std::vector<BlockCode> encode_multi(std::span<const std::uint8_t> symbols, const CodeTree& tree,
                                           const QuantTable& t) {
  if (symbols.size() > t.n_max()) fail(ErrorCode::block_too_long, "sequence longer than the table's n_max");
  std::vector<std::int32_t> slot(tree.nodes().size(), -1);
  const auto& order = tree.internal_preorder();
  for (std::size_t i = 0; i < order.size(); ++i) slot[static_cast<std::size_t>(order[i])] = static_cast<std::int32_t>(i);

  std::vector<std::vector<std::uint8_t>> strings(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) strings[i].reserve(tree.node(order[i]).count);
  for (const std::uint8_t s : symbols) {
    if (s >= tree.alphabet()) fail(ErrorCode::symbol_out_of_alphabet, "symbol outside the alphabet");
    for (const auto& [node, bit] : tree.path(s)) strings[static_cast<std::size_t>(slot[static_cast<std::size_t>(node)])].push_back(bit);
  }
  std::vector<BlockCode> codes;
  codes.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    BlockCode code = encode_block(strings[i], t);
    if (std::pair{code.m, code.k} != node_class(tree, order[i]))
      fail(ErrorCode::inconsistent_parameters, "symbol counts do not match the tree");
    codes.push_back(std::move(code));
  }
  return codes;
}

inline std::vector<std::uint8_t> decode_multi(std::span<const BlockCode> codes, std::span<const std::uint64_t> counts,
                                              const QuantTable& t) {
  const CodeTree tree = build_tree(counts);
  const auto& order = tree.internal_preorder();
  if (codes.size() != order.size()) fail(ErrorCode::corrupt_stream, "node code count does not match the tree");
  std::vector<std::int32_t> slot(tree.nodes().size(), -1);
  std::vector<std::vector<std::uint8_t>> strings(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    slot[static_cast<std::size_t>(order[i])] = static_cast<std::int32_t>(i);
    if (std::pair{codes[i].m, codes[i].k} != node_class(tree, order[i]))
      fail(ErrorCode::corrupt_stream, "node class does not match the symbol counts");
    try {
      strings[i] = decode_block(codes[i], t);
    } catch (const Error& e) {
      fail(ErrorCode::corrupt_stream, e.what());
    }
  }
  std::uint64_t n = 0;
  for (const std::uint64_t c : counts) n += c;
  std::vector<std::size_t> cursor(order.size(), 0);
  std::vector<std::uint8_t> symbols;
  symbols.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::int32_t id = tree.root();
    while (!tree.node(id).is_leaf()) {
      const auto sl = static_cast<std::size_t>(slot[static_cast<std::size_t>(id)]);
      const std::uint8_t bit = strings[sl][cursor[sl]++];
      id = bit ? tree.node(id).right : tree.node(id).left;
    }
    symbols.push_back(static_cast<std::uint8_t>(tree.node(id).symbol));
  }
  return symbols;
}

}  // namespace qi
