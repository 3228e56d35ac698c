#include "treenash/dp_solver.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>
#include <utility>

#include "treenash/error.h"
#include "treenash/random.h"

namespace treenash {
namespace {

constexpr double kPruneSlack = 1e-12;

const char* to_string(ExtensionSource source) {
  return source == ExtensionSource::kLp ? "lp" : "exhaustive";
}

std::optional<Eigen::VectorXd> parent_strategy_of(const UniformStrategySet& uset,
                                                  std::optional<StrategyIndex> z) {
  if (!z) return std::nullopt;
  return Eigen::VectorXd(uset.at(*z));
}

Eigen::VectorXd parent_payoff_of(const Game& game, const RootedTree& rooted,
                                 const UniformStrategySet& uset, PlayerId q,
                                 std::optional<StrategyIndex> z) {
  if (!z) return Eigen::VectorXd::Zero(game.num_actions());
  return game.payoff(q, *rooted.parent[q]) * uset.at(*z);
}

bool has_empty(const std::vector<ChildCandidates>& children) {
  return std::any_of(children.begin(), children.end(),
                     [](const ChildCandidates& c) { return c.candidates.empty(); });
}

// Re-checks the extension through game-core.
void verify_extension(const Game& game, const RootedTree& rooted, const UniformStrategySet& uset,
                      PlayerId q, std::optional<StrategyIndex> z, StrategyIndex y,
                      const Extension& ext, double epsilon) {
  const auto neighbors = neighborhood(rooted, q, parent_strategy_of(uset, z), uset, ext);
  if (!is_epsilon_best_response(game, q, uset.at(y), neighbors, epsilon)) {
    throw Error(ErrorKind::kInternalSoundnessViolation,
                "extension at player " + std::to_string(q) + " failed re-verification");
  }
}

MembershipResult membership_with_children(const Game& game, const RootedTree& rooted,
                                          const UniformStrategySet& uset,
                                          const std::vector<ChildCandidates>& children,
                                          PlayerId q, std::optional<StrategyIndex> z,
                                          StrategyIndex y, const SolverConfig& config,
                                          SolveStats& stats) {
  MembershipResult result;
  if (has_empty(children)) return result;
  const Eigen::VectorXd y_vec = uset.at(y);
  const int d = static_cast<int>(children.size());

  if (d >= effective_lp_threshold(config, game.num_actions())) {
    std::vector<CandidateList> lists;
    for (const auto& c : children) lists.push_back(c.candidates);
    const auto z_vec = parent_strategy_of(uset, z);
    const LpInstance lp = build_lp(game, rooted, q, z_vec, y_vec, uset, lists, config.epsilon);
    LpDiagnostics diag;
    ++stats.lp_calls;
    const auto frac = solve_feasibility(lp, config.lp_tolerance, &diag);
    if (diag.status == PhaseOneStatus::kNumericalFailure) ++stats.numerical_failures;
    if (frac) {
      ++stats.lp_feasible;
      stats.max_lp_residual = std::max(
          stats.max_lp_residual,
          fractional_residual(game, rooted, q, z_vec, y_vec, uset, *frac, config.epsilon));
      const auto seed = derive_seed(
          config.rng_seed, {static_cast<std::uint64_t>(q),
                            static_cast<std::uint64_t>(z.value_or(uset.size())),
                            static_cast<std::uint64_t>(y)});
      const RoundingOutcome rounded = round_extension(game, rooted, q, z_vec, y_vec, uset, *frac,
                                                      config.epsilon, seed, config.max_tries);
      ++stats.roundings;
      stats.samples += static_cast<std::uint64_t>(rounded.tries);
      if (rounded.extension) {
        verify_extension(game, rooted, uset, q, z, y, *rounded.extension, config.epsilon);
        result.extension = rounded.extension;
        result.source = ExtensionSource::kLp;
        return result;
      }
    }
    ++stats.fallbacks;
  }

  ++stats.exhaustive_calls;
  const auto found = exhaustive_search_children(
      children, parent_payoff_of(game, rooted, uset, q, z), y_vec, config.epsilon,
      config.exhaustive_cap);
  if (found) {
    Extension ext{rooted.children[q], *found};
    verify_extension(game, rooted, uset, q, z, y, ext, config.epsilon);
    result.extension = std::move(ext);
    result.source = ExtensionSource::kExhaustive;
  }
  return result;
}

[[noreturn]] void rethrow_with_context(const Error& e, PlayerId q, StrategyIndex y) {
  throw Error(e.kind(), std::string(e.what()) + " (player " + std::to_string(q) + ", y-index " +
                            std::to_string(y) + ")");
}

// Leaf q: y ∈ U_{p,q}(z) iff y is an ε-best response against z alone.
void fill_leaf(const Game& game, const RootedTree& rooted, const UniformStrategySet& uset,
               PlayerId q, double epsilon, CandidateTables& tables) {
  const auto& a = game.payoff(q, *rooted.parent[q]);
  for (StrategyIndex z = 0; z < uset.size(); ++z) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(game.num_actions());
    v.noalias() += a * uset.at(z);
    const double threshold = v.maxCoeff() - epsilon - kBestResponseTolerance;
    for (StrategyIndex y = 0; y < uset.size(); ++y) {
      if (uset.at(y).dot(v) >= threshold) tables.insert(q, z, y);
    }
  }
}

struct RowOutcome {
  std::vector<std::pair<StrategyIndex, MembershipResult>> hits;  // by z
  SolveStats stats;
  std::exception_ptr error;
};

void fill_internal(const Game& game, const RootedTree& rooted, const UniformStrategySet& uset,
                   PlayerId q, const SolverConfig& config, CandidateTables& tables,
                   SolveStats& stats) {
  const int size = uset.size();
  std::vector<RowOutcome> rows(size);
  auto work = [&](StrategyIndex y) {
    RowOutcome& row = rows[y];
    try {
      const auto children = gather_child_candidates(game, rooted, uset, tables, q, y);
      if (has_empty(children)) return;
      for (StrategyIndex z = 0; z < size; ++z) {
        auto result =
            membership_with_children(game, rooted, uset, children, q, z, y, config, row.stats);
        if (result.extension) row.hits.emplace_back(z, std::move(result));
      }
    } catch (...) {
      row.error = std::current_exception();
    }
  };

  const int threads = std::max(1, std::min(config.thread_count, size));
  if (threads == 1) {
    for (StrategyIndex y = 0; y < size; ++y) work(y);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int y = next++; y < size; y = next++) work(y);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Merge in y order so serial and parallel runs agree.
  for (StrategyIndex y = 0; y < size; ++y) {
    auto& row = rows[y];
    if (row.error) {
      try {
        std::rethrow_exception(row.error);
      } catch (const Error& e) {
        rethrow_with_context(e, q, y);
      }
    }
    stats.merge(row.stats);
    for (auto& [z, result] : row.hits) {
      tables.insert(q, z, y, {std::move(result.extension->strategies), result.source});
    }
  }
}

}  // namespace

int default_lp_threshold(int num_actions, double epsilon) {
  const double raw = std::ceil(24.0 * std::log(static_cast<double>(num_actions)) /
                               (epsilon * epsilon));
  if (raw >= static_cast<double>(kNoLpThreshold)) return kNoLpThreshold;
  return std::max(2, static_cast<int>(raw));
}

int effective_lp_threshold(const SolverConfig& config, int num_actions) {
  return config.lp_threshold.value_or(default_lp_threshold(num_actions, config.epsilon));
}

void validate_config(const SolverConfig& config) {
  if (!(config.epsilon > 0.0) || config.epsilon > 1.0) {
    throw Error(ErrorKind::kInvalidEpsilon, "epsilon must lie in (0, 1]");
  }
  if (config.lp_threshold && *config.lp_threshold < 2) {
    throw Error(ErrorKind::kInvalidGame, "lp_threshold must be at least 2");
  }
  if (config.support_override && *config.support_override < 1) {
    throw Error(ErrorKind::kInvalidGame, "support size must be at least 1");
  }
  if (config.max_tries < 1 || config.exhaustive_cap == 0 || config.enumeration_cap == 0 ||
      config.thread_count < 1 || !(config.lp_tolerance > 0.0)) {
    throw Error(ErrorKind::kInvalidGame, "caps, tries, threads and tolerance must be positive");
  }
}

void SolveStats::merge(const SolveStats& other) {
  lp_calls += other.lp_calls;
  lp_feasible += other.lp_feasible;
  numerical_failures += other.numerical_failures;
  roundings += other.roundings;
  samples += other.samples;
  fallbacks += other.fallbacks;
  exhaustive_calls += other.exhaustive_calls;
  max_lp_residual = std::max(max_lp_residual, other.max_lp_residual);
}

CandidateTables::CandidateTables(int num_players, int set_size)
    : set_size_(set_size), bits_(num_players) {}

std::uint64_t CandidateTables::key(PlayerId q, StrategyIndex z, StrategyIndex y) const {
  const auto n = static_cast<std::uint64_t>(set_size_);
  return (static_cast<std::uint64_t>(q) * n + static_cast<std::uint64_t>(z)) * n +
         static_cast<std::uint64_t>(y);
}

bool CandidateTables::contains(PlayerId q, StrategyIndex z, StrategyIndex y) const {
  const auto& b = bits_[q];
  if (b.empty()) return false;
  return (b[z * words() + y / 64] >> (y % 64)) & 1U;
}

CandidateList CandidateTables::candidates(PlayerId q, StrategyIndex z) const {
  CandidateList out;
  const auto& b = bits_[q];
  if (b.empty()) return out;
  for (std::size_t w = 0; w < words(); ++w) {
    std::uint64_t word = b[z * words() + w];
    while (word) {
      out.push_back(static_cast<StrategyIndex>(w * 64 + std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

std::size_t CandidateTables::count(PlayerId q, StrategyIndex z) const {
  const auto& b = bits_[q];
  if (b.empty()) return 0;
  std::size_t total = 0;
  for (std::size_t w = 0; w < words(); ++w) total += std::popcount(b[z * words() + w]);
  return total;
}

const CandidateTables::StoredExtension* CandidateTables::extension(PlayerId q, StrategyIndex z,
                                                                   StrategyIndex y) const {
  auto it = extensions_.find(key(q, z, y));
  return it == extensions_.end() ? nullptr : &it->second;
}

void CandidateTables::insert(PlayerId q, StrategyIndex z, StrategyIndex y) {
  auto& b = bits_[q];
  if (b.empty()) b.assign(static_cast<std::size_t>(set_size_) * words(), 0);
  b[z * words() + y / 64] |= std::uint64_t{1} << (y % 64);
}

void CandidateTables::insert(PlayerId q, StrategyIndex z, StrategyIndex y, StoredExtension ext) {
  insert(q, z, y);
  extensions_[key(q, z, y)] = std::move(ext);
}

std::vector<ChildCandidates> gather_child_candidates(const Game& game, const RootedTree& rooted,
                                                     const UniformStrategySet& uset,
                                                     const CandidateTables& tables, PlayerId q,
                                                     StrategyIndex y) {
  std::vector<ChildCandidates> out;
  for (PlayerId c : rooted.children[q]) {
    ChildCandidates entry;
    entry.child = c;
    entry.candidates = tables.candidates(c, y);
    const auto& a = game.payoff(q, c);
    entry.payoffs.resize(game.num_actions(), static_cast<Eigen::Index>(entry.candidates.size()));
    for (std::size_t k = 0; k < entry.candidates.size(); ++k) {
      entry.payoffs.col(static_cast<Eigen::Index>(k)) = a * uset.at(entry.candidates[k]);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::optional<std::vector<StrategyIndex>> exhaustive_search_children(
    const std::vector<ChildCandidates>& children, const Eigen::VectorXd& parent_payoff,
    const Eigen::VectorXd& y, double epsilon, std::uint64_t cap) {
  const int m = static_cast<int>(y.size());
  const int d = static_cast<int>(children.size());
  if (has_empty(children)) return std::nullopt;

  // Gain of sticking with y over action j, contributed by each candidate:
  // (y − e_j)^T A_{q,c} x. The tuple works iff the summed gains plus the
  // parent's term reach −ε − tol for every j.
  std::vector<Eigen::MatrixXd> gains(d);
  Eigen::MatrixXd suffix_max = Eigen::MatrixXd::Zero(m, d + 1);
  for (int c = 0; c < d; ++c) {
    const auto& w = children[c].payoffs;
    gains[c] = Eigen::VectorXd::Ones(m) * (y.transpose() * w) - w;
  }
  for (int c = d - 1; c >= 0; --c) {
    suffix_max.col(c) = suffix_max.col(c + 1) + gains[c].rowwise().maxCoeff();
  }
  const Eigen::VectorXd need =
      (-epsilon - kBestResponseTolerance - y.dot(parent_payoff)) * Eigen::VectorXd::Ones(m) +
      parent_payoff;

  auto viable = [&](const Eigen::VectorXd& partial, int depth) {
    return ((partial + suffix_max.col(depth)).array() >= need.array() - kPruneSlack).all();
  };

  if (d == 0) {
    if ((need.array() <= 0.0).all()) return std::vector<StrategyIndex>{};
    return std::nullopt;
  }
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(m, d + 1);
  if (!viable(partial.col(0), 0)) return std::nullopt;

  std::vector<int> choice(d, -1);
  std::uint64_t visits = 0;
  int depth = 0;
  while (true) {
    const int width = static_cast<int>(children[depth].candidates.size());
    if (++choice[depth] == width) {
      if (depth == 0) return std::nullopt;
      --depth;
      continue;
    }
    if (++visits > cap) {
      throw Error(ErrorKind::kCapExceeded,
                  "exhaustive search exceeded " + std::to_string(cap) + " nodes");
    }
    partial.col(depth + 1) = partial.col(depth) + gains[depth].col(choice[depth]);
    if (depth + 1 == d) {
      if ((partial.col(d).array() >= need.array()).all()) {
        std::vector<StrategyIndex> out(d);
        for (int c = 0; c < d; ++c) out[c] = children[c].candidates[choice[c]];
        return out;
      }
      continue;
    }
    if (!viable(partial.col(depth + 1), depth + 1)) continue;
    ++depth;
    choice[depth] = -1;
  }
}

std::optional<Extension> exhaustive_membership(const Game& game, const RootedTree& rooted,
                                               const UniformStrategySet& uset,
                                               const CandidateTables& tables, PlayerId q,
                                               std::optional<StrategyIndex> z, StrategyIndex y,
                                               double epsilon, std::uint64_t cap) {
  const auto children = gather_child_candidates(game, rooted, uset, tables, q, y);
  const auto found = exhaustive_search_children(
      children, parent_payoff_of(game, rooted, uset, q, z), uset.at(y), epsilon, cap);
  if (!found) return std::nullopt;
  return Extension{rooted.children[q], *found};
}

MembershipResult membership_test(const Game& game, const RootedTree& rooted,
                                 const UniformStrategySet& uset, const CandidateTables& tables,
                                 PlayerId q, std::optional<StrategyIndex> z, StrategyIndex y,
                                 const SolverConfig& config, SolveStats* stats) {
  SolveStats local;
  const auto children = gather_child_candidates(game, rooted, uset, tables, q, y);
  auto result = membership_with_children(game, rooted, uset, children, q, z, y, config, local);
  if (stats) stats->merge(local);
  return result;
}

CandidateTables build_tables(const Game& game, const RootedTree& rooted,
                             const UniformStrategySet& uset, const SolverConfig& config,
                             SolveStats* stats) {
  CandidateTables tables(game.num_players(), uset.size());
  SolveStats local;
  for (PlayerId q : rooted.bottom_up) {
    if (q == rooted.root) continue;
    if (rooted.is_leaf(q)) {
      fill_leaf(game, rooted, uset, q, config.epsilon, tables);
    } else {
      fill_internal(game, rooted, uset, q, config, tables, local);
    }
  }
  if (stats) stats->merge(local);
  return tables;
}

RootChoice process_root(const Game& game, const RootedTree& rooted, const UniformStrategySet& uset,
                        const CandidateTables& tables, const SolverConfig& config,
                        SolveStats* stats) {
  const PlayerId r = rooted.root;
  SolveStats local;
  for (StrategyIndex y = 0; y < uset.size(); ++y) {
    std::vector<ChildCandidates> children;
    MembershipResult result;
    try {
      children = gather_child_candidates(game, rooted, uset, tables, r, y);
      result = membership_with_children(game, rooted, uset, children, r, std::nullopt, y, config,
                                        local);
    } catch (const Error& e) {
      if (stats) stats->merge(local);
      rethrow_with_context(e, r, y);
    }
    if (result.extension) {
      if (stats) stats->merge(local);
      return {y, std::move(*result.extension), result.source};
    }
  }
  if (stats) stats->merge(local);
  throw Error(ErrorKind::kNoEquilibriumFound,
              "no root strategy in U (support size " + std::to_string(uset.support()) +
                  ") extends to an equilibrium; completeness is only guaranteed at the "
                  "theoretical support size, where an ε/2-equilibrium exists inside U");
}

std::vector<StrategyIndex> backtrack_indices(const RootedTree& rooted, const CandidateTables& tables,
                                             const RootChoice& root,
                                             std::vector<std::string>* provenance) {
  std::vector<StrategyIndex> assigned(rooted.num_players(), -1);
  const PlayerId r = rooted.root;
  assigned[r] = root.y;
  if (root.extension.strategies.size() != rooted.children[r].size()) {
    throw Error(ErrorKind::kMissingExtension, "root extension does not cover the root's children");
  }
  for (std::size_t k = 0; k < rooted.children[r].size(); ++k) {
    assigned[rooted.children[r][k]] = root.extension.strategies[k];
  }
  if (provenance) {
    provenance->push_back("root " + std::to_string(r) + " plays U[" + std::to_string(root.y) +
                          "], extension via " + to_string(root.source));
  }

  // Preorder: a player's own strategy is fixed before its children's.
  std::vector<PlayerId> stack(rooted.children[r].rbegin(), rooted.children[r].rend());
  while (!stack.empty()) {
    const PlayerId q = stack.back();
    stack.pop_back();
    if (rooted.is_leaf(q)) continue;
    const PlayerId p = *rooted.parent[q];
    const auto* ext = tables.extension(q, assigned[p], assigned[q]);
    if (ext == nullptr || ext->strategies.size() != rooted.children[q].size()) {
      throw Error(ErrorKind::kMissingExtension,
                  "no extension for player " + std::to_string(q) + " at (z=" +
                      std::to_string(assigned[p]) + ", y=" + std::to_string(assigned[q]) + ")");
    }
    for (std::size_t k = 0; k < rooted.children[q].size(); ++k) {
      assigned[rooted.children[q][k]] = ext->strategies[k];
    }
    if (provenance) {
      provenance->push_back("player " + std::to_string(q) + " extension E(z=" +
                            std::to_string(assigned[p]) + ", y=" + std::to_string(assigned[q]) +
                            ") via " + to_string(ext->source));
    }
    stack.insert(stack.end(), rooted.children[q].rbegin(), rooted.children[q].rend());
  }
  for (PlayerId p = 0; p < rooted.num_players(); ++p) {
    if (assigned[p] < 0) {
      throw Error(ErrorKind::kMissingExtension, "player " + std::to_string(p) + " unassigned");
    }
  }
  return assigned;
}

Profile<double> backtrack(const RootedTree& rooted, const CandidateTables& tables,
                          const UniformStrategySet& uset, const RootChoice& root) {
  Profile<double> profile;
  for (StrategyIndex i : backtrack_indices(rooted, tables, root)) profile.emplace_back(uset.at(i));
  return profile;
}

SolveResult solve(const Game& game, const SolverConfig& config) {
  validate_config(config);
  const RootedTree rooted = validate_and_root(game, config.root);
  const int m = game.num_actions();
  const int b = config.support_override.value_or(
      support_size(m, game.num_players(), config.epsilon, config.sizing));
  const UniformStrategySet uset(m, b, config.enumeration_cap);

  SolveResult result;
  const auto report = check_normalized(game, config.epsilon);
  for (const auto& v : report.violations) {
    result.warnings.push_back("not normalized: " + describe(v));
  }

  const CandidateTables tables = build_tables(game, rooted, uset, config, &result.stats);
  const RootChoice root = process_root(game, rooted, uset, tables, config, &result.stats);

  auto& cert = result.certificate;
  result.indices = backtrack_indices(rooted, tables, root, &cert.provenance);
  for (StrategyIndex i : result.indices) cert.profile.emplace_back(uset.at(i));
  cert.epsilon = config.epsilon;
  cert.support_size = b;
  cert.seed = config.rng_seed;
  cert.regrets = regrets(game, cert.profile);
  if (cert.max_regret() > config.epsilon + kVerifyTolerance) {
    std::ostringstream msg;
    msg << "assembled profile has max regret " << cert.max_regret() << " > " << config.epsilon;
    throw Error(ErrorKind::kInternalSoundnessViolation, msg.str());
  }
  return result;
}

}  // namespace treenash
