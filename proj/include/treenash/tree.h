#ifndef TREENASH_TREE_H_
#define TREENASH_TREE_H_

#include <optional>
#include <span>
#include <vector>

namespace treenash {

using PlayerId = int;

struct Edge {
  PlayerId u = 0;
  PlayerId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// A tree hung from a root. children[p] is sorted by id, descendants[p] holds
// every strict descendant of p, and bottom_up lists each player after all of
// its children.
struct RootedTree {
  PlayerId root = 0;
  std::vector<std::optional<PlayerId>> parent;
  std::vector<std::vector<PlayerId>> children;
  std::vector<std::vector<PlayerId>> descendants;
  std::vector<PlayerId> bottom_up;

  int num_players() const { return static_cast<int>(parent.size()); }
  bool is_leaf(PlayerId p) const { return children[p].empty(); }
};

// Throws kNotATree on a cycle, a disconnected graph, a self-loop, a repeated
// edge or a wrong edge count, and kInvalidPlayerId on out-of-range ids.
RootedTree root_tree(int num_players, std::span<const Edge> edges,
                     std::optional<PlayerId> root = std::nullopt);

}  // namespace treenash

#endif  // TREENASH_TREE_H_
