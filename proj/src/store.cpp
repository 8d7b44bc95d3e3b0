#include "bf/store.hpp"

#include <limits>
#include <string>

#include "bf/metric.hpp"

namespace bf {

ExampleStore::ExampleStore(std::size_t dim, std::size_t label_dim) : ExampleStore(dim, label_dim, false) {}

ExampleStore::ExampleStore(std::size_t dim, std::size_t label_dim, bool alias)
    : dim_(dim), label_dim_(alias ? 0 : label_dim), labels_alias_(alias) {
  if (dim == 0) throw Error("ExampleStore: dimensionality must be positive");
}

ExampleStore ExampleStore::aliasing_labels(std::size_t dim) { return ExampleStore(dim, 0, true); }

ExampleId ExampleStore::append(std::span<const double> position, std::span<const double> label) {
  if (position.size() != dim_) {
    throw Error("ExampleStore: position has " + std::to_string(position.size()) + " coordinates, expected " +
                std::to_string(dim_));
  }
  if (!labels_alias_ && label.size() != label_dim_) {
    throw Error("ExampleStore: label has " + std::to_string(label.size()) + " entries, expected " +
                std::to_string(label_dim_));
  }
  if (count_ >= std::numeric_limits<std::uint32_t>::max()) throw Error("ExampleStore: id space exhausted");
  require_finite(position, "ExampleStore: position");
  if (!labels_alias_) require_finite(label, "ExampleStore: label");

  coords_.insert(coords_.end(), position.begin(), position.end());
  if (!labels_alias_) labels_.insert(labels_.end(), label.begin(), label.end());
  return static_cast<ExampleId>(count_++);
}

ExampleId ExampleStore::append(std::span<const double> position) {
  if (!labels_alias_) throw Error("ExampleStore: label required for a store with explicit labels");
  return append(position, {});
}

void ExampleStore::check_id(ExampleId id) const {
  if (to_index(id) >= count_) throw Error("ExampleStore: unknown id " + std::to_string(to_index(id)));
}

std::span<const double> ExampleStore::position(ExampleId id) const {
  check_id(id);
  return std::span<const double>(coords_).subspan(to_index(id) * dim_, dim_);
}

std::span<const double> ExampleStore::label(ExampleId id) const {
  if (labels_alias_) return position(id);
  check_id(id);
  return std::span<const double>(labels_).subspan(to_index(id) * label_dim_, label_dim_);
}

DataPoint ExampleStore::point(ExampleId id) const {
  const auto pos = position(id);
  const auto lab = label(id);
  return DataPoint{Position(pos.begin(), pos.end()), LabelVector(lab.begin(), lab.end())};
}

void ExampleStore::reserve(std::size_t count) {
  coords_.reserve(count * dim_);
  if (!labels_alias_) labels_.reserve(count * label_dim_);
}

}  // namespace bf
