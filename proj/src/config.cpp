#include "sbb/config.hpp"

#include "sbb/errors.hpp"
#include "sbb/galois_field.hpp"

#include <sstream>

namespace sbb {

std::vector<NodeId> all_nodes(int n)
{
  std::vector<NodeId> out;
  for (int i = 1; i <= n; ++i)
  {
    out.push_back(NodeId{i});
  }
  return out;
}

std::vector<NodeId> peers(int n)
{
  std::vector<NodeId> out;
  for (int i = 2; i <= n; ++i)
  {
    out.push_back(NodeId{i});
  }
  return out;
}

SystemConfig SystemConfig::make(int n, int t, int c, std::int64_t L, std::uint64_t seed)
{
  return SystemConfig{n, t, c, static_cast<std::int64_t>(c) * (n - 2 * t), L, seed};
}

void SystemConfig::validate_model() const
{
  if (t < 0)
  {
    throw ConfigError("t must be non-negative");
  }
  if (n < 3 * t + 1)
  {
    throw ConfigError("need n >= 3t + 1, got " + describe(*this));
  }
  if (L < 1)
  {
    throw ConfigError("L must be positive, got " + describe(*this));
  }
}

void SystemConfig::validate_coding() const
{
  validate_model();
  if (c < 1 || c > static_cast<int>(gf::kMaxWidth))
  {
    throw ConfigError("c out of range, got " + describe(*this));
  }
  if (static_cast<std::int64_t>(n) > (std::int64_t{1} << c) - 1)
  {
    throw ConfigError("need n <= 2^c - 1, got " + describe(*this));
  }
  if (D != static_cast<std::int64_t>(c) * (n - 2 * t))
  {
    throw ConfigError("need D = c(n - 2t), got " + describe(*this));
  }
  if (L % D != 0)
  {
    throw ConfigError("L must be a positive multiple of D, got " + describe(*this));
  }
}

int SystemConfig::min_symbol_width(int n)
{
  int c = 1;
  while ((1 << c) - 1 < n)
  {
    ++c;
  }
  return c;
}

std::string describe(SystemConfig const &config)
{
  std::ostringstream os;
  os << "n=" << config.n << " t=" << config.t << " c=" << config.c << " D=" << config.D << " L=" << config.L;
  return os.str();
}

}  // namespace sbb
