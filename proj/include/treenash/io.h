#ifndef TREENASH_IO_H_
#define TREENASH_IO_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "treenash/dp_solver.h"
#include "treenash/game.h"

namespace treenash::io {

// Malformed or schema-violating input; the message names the offending field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GameFile {
  Game game;
  double epsilon_normalization = 0;
};

// Game schema:
//   {"num_players": int, "num_actions": int, "epsilon_normalization": float,
//    "edges": [{"u": int, "v": int, "payoff_u_v": [[...]], "payoff_v_u": [[...]]}]}
// Unknown fields are rejected.
nlohmann::json game_to_json(const Game& game, double epsilon_normalization);
GameFile game_from_json(const nlohmann::json& j);

// Profile schema:
//   {"epsilon": float, "strategies": [[...]], "regrets": [...],
//    "support_size": int, "seed": int}
// Only "strategies" is required when reading.
struct ProfileFile {
  std::optional<double> epsilon;
  Profile<double> strategies;
  std::optional<std::vector<double>> regrets;
  std::optional<int> support_size;
  std::optional<std::uint64_t> seed;
};

nlohmann::json certificate_to_json(const EquilibriumCertificate& cert);
nlohmann::json profile_to_json(const Profile<double>& profile);
ProfileFile profile_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);
std::string dump(const nlohmann::json& j);

GameFile load_game(const std::string& path);
void save_game(const std::string& path, const Game& game, double epsilon_normalization);

}  // namespace treenash::io

#endif  // TREENASH_IO_H_
