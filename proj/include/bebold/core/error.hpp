#pragma once

#include <stdexcept>
#include <string>

namespace bebold {

/// Action outside the environment's action set.
class InvalidAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// step() called on an episode that already terminated.
class EpisodeFinished : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// API used against its contract (e.g. resetting a lifetime count table).
class Misuse : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Vector length does not match a network's input dimension.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Experiment configuration failed validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bebold
