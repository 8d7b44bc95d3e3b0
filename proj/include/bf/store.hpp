#pragma once

#include <span>
#include <vector>

#include "bf/types.hpp"

namespace bf {

/// Append-only store holding the single copy of every example; trees keep ids
/// into it. Positions are packed row-major so the distance kernels can stream
/// over them.
///
/// Reads may run concurrently with each other. An append may reallocate, so it
/// must not overlap any read; the forest serialises appends outside its
/// parallel sections.
class ExampleStore {
 public:
  /// Store with explicit label vectors of length label_dim.
  ExampleStore(std::size_t dim, std::size_t label_dim);

  /// Store whose labels alias positions (retrieval).
  static ExampleStore aliasing_labels(std::size_t dim);

  ExampleId append(std::span<const double> position, std::span<const double> label);
  ExampleId append(const DataPoint& point) { return append(point.position, point.label); }
  /// Append to an aliasing store.
  ExampleId append(std::span<const double> position);

  std::span<const double> position(ExampleId id) const;
  std::span<const double> label(ExampleId id) const;
  DataPoint point(ExampleId id) const;

  /// Unchecked pointer to a stored position.
  const double* row(ExampleId id) const noexcept { return coords_.data() + to_index(id) * dim_; }

  /// All positions, row-major, size() * dim() values.
  std::span<const double> positions() const noexcept { return coords_; }

  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t label_dim() const noexcept { return labels_alias_ ? dim_ : label_dim_; }
  bool labels_alias_positions() const noexcept { return labels_alias_; }

  void reserve(std::size_t count);

 private:
  ExampleStore(std::size_t dim, std::size_t label_dim, bool alias);

  void check_id(ExampleId id) const;

  std::size_t dim_;
  std::size_t label_dim_;
  bool labels_alias_;
  std::size_t count_ = 0;
  std::vector<double> coords_;
  std::vector<double> labels_;
};

}  // namespace bf
