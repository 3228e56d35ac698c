#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "treenash/error.h"
#include "treenash/game.h"
#include "treenash/tree.h"

namespace treenash {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidGame: return "InvalidGame";
    case ErrorKind::kNotATree: return "NotATree";
    case ErrorKind::kInvalidPlayerId: return "InvalidPlayerId";
    case ErrorKind::kInvalidStrategy: return "InvalidStrategy";
    case ErrorKind::kMissingNeighborStrategy: return "MissingNeighborStrategy";
    case ErrorKind::kInvalidEpsilon: return "InvalidEpsilon";
    case ErrorKind::kOverflow: return "Overflow";
    case ErrorKind::kSetTooLarge: return "SetTooLarge";
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kNoEquilibriumFound: return "NoEquilibriumFound";
    case ErrorKind::kMissingExtension: return "MissingExtension";
    case ErrorKind::kInternalSoundnessViolation: return "InternalSoundnessViolation";
  }
  return "Unknown";
}

RootedTree root_tree(int num_players, std::span<const Edge> edges,
                     std::optional<PlayerId> root) {
  if (num_players < 1) {
    throw Error(ErrorKind::kNotATree, "a tree needs at least one vertex");
  }
  const PlayerId r = root.value_or(0);
  if (r < 0 || r >= num_players) {
    throw Error(ErrorKind::kInvalidPlayerId, "root " + std::to_string(r) + " out of range");
  }

  std::vector<std::vector<PlayerId>> adjacency(num_players);
  std::set<std::pair<PlayerId, PlayerId>> seen;
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_players || v < 0 || v >= num_players) {
      throw Error(ErrorKind::kInvalidPlayerId,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    }
    if (u == v) {
      throw Error(ErrorKind::kNotATree, "self-loop at " + std::to_string(u));
    }
    if (!seen.insert(std::minmax(u, v)).second) {
      throw Error(ErrorKind::kNotATree,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") repeated");
    }
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  if (static_cast<int>(edges.size()) != num_players - 1) {
    throw Error(ErrorKind::kNotATree, std::to_string(edges.size()) + " edges on " +
                                          std::to_string(num_players) + " vertices");
  }

  RootedTree tree;
  tree.root = r;
  tree.parent.assign(num_players, std::nullopt);
  tree.children.assign(num_players, {});
  tree.descendants.assign(num_players, {});

  // Iterative DFS; the preorder reversed is a valid bottom-up order.
  std::vector<char> visited(num_players, 0);
  std::vector<PlayerId> preorder;
  std::vector<PlayerId> stack{r};
  visited[r] = 1;
  while (!stack.empty()) {
    const PlayerId p = stack.back();
    stack.pop_back();
    preorder.push_back(p);
    for (PlayerId q : adjacency[p]) {
      if (visited[q]) {
        if (tree.parent[p] != q) {
          throw Error(ErrorKind::kNotATree, "cycle through " + std::to_string(q));
        }
        continue;
      }
      visited[q] = 1;
      tree.parent[q] = p;
      tree.children[p].push_back(q);
      stack.push_back(q);
    }
  }
  if (static_cast<int>(preorder.size()) != num_players) {
    throw Error(ErrorKind::kNotATree, "graph is disconnected");
  }
  for (auto& c : tree.children) std::sort(c.begin(), c.end());

  tree.bottom_up.assign(preorder.rbegin(), preorder.rend());
  for (PlayerId p : tree.bottom_up) {
    auto& desc = tree.descendants[p];
    for (PlayerId c : tree.children[p]) {
      desc.push_back(c);
      desc.insert(desc.end(), tree.descendants[c].begin(), tree.descendants[c].end());
    }
    std::sort(desc.begin(), desc.end());
  }
  return tree;
}

std::string describe(const NormalizationViolation& v) {
  std::ostringstream out;
  out << "player " << v.player << ": ";
  switch (v.kind) {
    case NormalizationViolation::Kind::kEntryOutOfRange:
      out << "entry (" << v.row << "," << v.col << ") of A[" << v.player << ","
          << v.neighbor.value_or(-1) << "] = " << v.value << " outside [0, " << v.bound << "]";
      break;
    case NormalizationViolation::Kind::kUtilityAboveOne:
      out << "pure utility of action " << v.row << " reaches " << v.value << " > 1";
      break;
    case NormalizationViolation::Kind::kUtilityBelowZero:
      out << "pure utility of action " << v.row << " reaches " << v.value << " < 0";
      break;
  }
  return out.str();
}

}  // namespace treenash
