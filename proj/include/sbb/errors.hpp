#pragma once

#include <stdexcept>
#include <string>

namespace sbb {

/// Invalid parameters: field spec, system config, scenario file, formula inputs.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's precondition (wrong subset size, NULL position, ...).
class UsageError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Something the channel model forbids, e.g. a fault-free node sending a selective payload.
class ModelViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Internal bookkeeping invariant broken. Unreachable for fault-free nodes.
class InvariantViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

}  // namespace sbb
