#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace sbb {

/// Node identity, 1..n. Node 1 is the source.
struct NodeId
{
  int value = 0;

  friend auto operator<=>(NodeId, NodeId) = default;
};

inline constexpr NodeId kSource{1};

/// Simulation-side ground truth of which nodes the adversary controls.
using FaultOracle = std::set<NodeId>;

std::vector<NodeId> all_nodes(int n);
std::vector<NodeId> peers(int n);

struct SystemConfig
{
  int           n    = 0;
  int           t    = 0;
  int           c    = 0;  ///< bits per code symbol
  std::int64_t  D    = 0;  ///< bits per generation, c(n - 2t)
  std::int64_t  L    = 0;  ///< input length in bits
  std::uint64_t seed = 0;

  /// Fills D = c(n - 2t).
  static SystemConfig make(int n, int t, int c, std::int64_t L, std::uint64_t seed = 0);

  /// n >= 3t + 1, t >= 0, L >= 1. Throws ConfigError.
  void validate_model() const;
  /// validate_model() plus n <= 2^c - 1, D = c(n - 2t), L a positive multiple of D.
  void validate_coding() const;

  std::int64_t generations() const { return D > 0 ? L / D : 0; }

  /// Smallest c with 2^c - 1 >= n.
  static int min_symbol_width(int n);
};

std::string describe(SystemConfig const &config);

}  // namespace sbb
