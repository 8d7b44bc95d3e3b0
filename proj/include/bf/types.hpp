#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bf {

using Position = std::vector<double>;
using LabelVector = std::vector<double>;

/// Stable id of an example in an ExampleStore. Ids are dense and never reused.
enum class ExampleId : std::uint32_t {};

/// Index of a node inside one BoundaryTree's node arena. The root is node 0.
enum class NodeIndex : std::uint32_t {};

constexpr std::size_t to_index(ExampleId id) noexcept { return static_cast<std::size_t>(id); }
constexpr std::size_t to_index(NodeIndex node) noexcept { return static_cast<std::size_t>(node); }

/// Child cap meaning "no limit" (k = infinity).
inline constexpr std::size_t kUnboundedChildren = std::numeric_limits<std::size_t>::max();

struct DataPoint {
  Position position;
  LabelVector label;
};

/// Raised for contract violations: dimension mismatches, non-finite input, misuse of state.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bf
