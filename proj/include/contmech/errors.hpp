#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contmech {

/// Invalid construction parameter; `field()` names the offending input.
class ConstructionError : public std::invalid_argument {
public:
  ConstructionError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Two fields that must share a grid do not.
class GridMismatchError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A sampled map is not an embedding at the configured threshold.
class EmbeddingError : public std::domain_error {
public:
  EmbeddingError(const std::string& what, std::size_t node)
      : std::domain_error(what), node_(node) {}

  std::size_t node() const noexcept { return node_; }

private:
  std::size_t node_;
};

/// The flow reached a state where |phi_x| < eps_emb (or phi_x changed sign).
class SingularStateError : public std::runtime_error {
public:
  SingularStateError(double t, std::size_t node, double slope)
      : std::runtime_error("singular state at t=" + std::to_string(t) +
                           ", node " + std::to_string(node) +
                           ", oriented phi_x=" + std::to_string(slope)),
        t_(t), node_(node), slope_(slope) {}

  double time() const noexcept { return t_; }
  std::size_t node() const noexcept { return node_; }
  /// phi_x times the orientation; negative once the slope has flipped.
  double slope() const noexcept { return slope_; }

private:
  double t_;
  std::size_t node_;
  double slope_;
};

} // namespace contmech
