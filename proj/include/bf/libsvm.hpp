#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bf/eval.hpp"

namespace bf::io {

/// Rows of a LIBSVM sparse file: `label idx:val idx:val ...` with strictly
/// increasing 1-based indices.
struct SparseDataset {
  std::vector<double> labels;
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::pair<std::uint32_t, double>> entries;  // (0-based index, value)
  std::size_t max_index = 0;                              // 1-based; 0 if no entries

  std::size_t rows() const noexcept { return labels.size(); }
};

/// Parse errors carry "<source>:<line>: " prefixes.
SparseDataset parse_libsvm(std::istream& in, const std::string& source_name);
SparseDataset read_libsvm(const std::string& path);

struct DenseDataset {
  std::size_t dim = 0;
  std::vector<double> positions;  // row-major, rows() * dim
  std::vector<double> labels;     // raw label values, one per row

  std::size_t rows() const noexcept { return labels.size(); }
};

/// Dense copy with missing entries set to 0. dim defaults to the largest index.
DenseDataset densify(const SparseDataset& sparse, std::size_t dim = 0);

/// Sorted distinct label values, the class order used by to_classified.
std::vector<double> class_values(const std::vector<const DenseDataset*>& sets);

/// Maps raw labels onto 0..C-1 by position in `classes` (sorted ascending).
/// Throws if a label is not in the list.
ClassifiedSet to_classified(const DenseDataset& data, const std::vector<double>& classes);

/// Loaded classification file: dense positions, 0-based classes (mapping from
/// this file's own sorted label set), and the mapping itself.
struct LoadedClassification {
  ClassifiedSet set;
  std::vector<double> class_values;
};

LoadedClassification load_libsvm(const std::string& path, std::size_t dim = 0);

/// Writes non-zero entries with round-trip precision.
void write_libsvm(std::ostream& out, const DenseDataset& data);

/// Per-feature [min, max] from `reference`, applied to data in place.
/// Constant features map to 0.
void minmax_scale(DenseDataset& data, const DenseDataset& reference);

}  // namespace bf::io
