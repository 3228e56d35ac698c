#ifndef TREENASH_GENERATOR_H_
#define TREENASH_GENERATOR_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "treenash/game.h"
#include "treenash/tree.h"

namespace treenash {

// Length n−2 sequence of ids in [0, n), uniform and seeded; empty for n < 3.
std::vector<PlayerId> random_prufer_sequence(int num_players, std::uint64_t seed);

// Standard Prüfer decoding; each edge is reported as (leaf, attached vertex)
// in the order the leaves are removed.
std::vector<Edge> decode_prufer(const std::vector<PlayerId>& sequence, int num_players);

// Uniformly random labelled tree on n vertices.
std::vector<Edge> random_tree(int num_players, std::uint64_t seed);

std::vector<Edge> path_tree(int num_players);
std::vector<Edge> star_tree(int num_players);

// Entries of every A_{p,q} are iid uniform on [0, B_p] with B_p the entry
// bound for p's degree in the final tree; a player whose pure utilities could
// exceed 1 has all its matrices rescaled. Edges are drawn in order, A_{u,v}
// before A_{v,u}, row-major.
Game random_normalized_game(int num_players, int num_actions, double epsilon,
                            const std::optional<std::vector<Edge>>& topology, std::uint64_t seed);

}  // namespace treenash

#endif  // TREENASH_GENERATOR_H_
