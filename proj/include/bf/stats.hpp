#pragma once

#include <cstdint>

namespace bf {

/// Cost counters for tree traversals. One metric comparison is one evaluation
/// of the position metric; path_length counts nodes expanded during descent.
struct QueryStats {
  std::uint64_t metric_comparisons = 0;
  std::uint64_t path_length = 0;

  QueryStats& operator+=(const QueryStats& other) noexcept {
    metric_comparisons += other.metric_comparisons;
    path_length += other.path_length;
    return *this;
  }
};

}  // namespace bf
