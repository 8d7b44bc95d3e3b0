#include "bf/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

namespace bf::io {

namespace {

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_index(std::string_view text, std::uint64_t& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in, const std::string& source_name) {
  SparseDataset data;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(source_name + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    double label = 0.0;
    if (!parse_double(tokens[0], label)) throw fail("non-numeric label '" + std::string(tokens[0]) + "'");

    std::uint64_t previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) throw fail("expected idx:val, got '" + std::string(tok) + "'");
      std::uint64_t index = 0;
      double value = 0.0;
      if (!parse_index(tok.substr(0, colon), index) || index == 0 ||
          index > std::numeric_limits<std::uint32_t>::max()) {
        throw fail("bad feature index in '" + std::string(tok) + "'");
      }
      if (!parse_double(tok.substr(colon + 1), value)) throw fail("bad feature value in '" + std::string(tok) + "'");
      if (index <= previous) throw fail("feature indices must be strictly increasing");
      previous = index;
      data.entries.emplace_back(static_cast<std::uint32_t>(index - 1), value);
      data.max_index = std::max<std::size_t>(data.max_index, index);
    }
    data.labels.push_back(label);
    data.row_offsets.push_back(data.entries.size());
  }
  if (in.bad()) throw Error(source_name + ": read error");
  return data;
}

SparseDataset read_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_libsvm(in, path);
}

DenseDataset densify(const SparseDataset& sparse, std::size_t dim) {
  DenseDataset dense;
  dense.dim = dim == 0 ? sparse.max_index : dim;
  if (dense.dim == 0) throw Error("dataset has no features");
  if (sparse.max_index > dense.dim) {
    throw Error("feature index " + std::to_string(sparse.max_index) + " exceeds declared dimension " +
                std::to_string(dense.dim));
  }
  dense.labels = sparse.labels;
  dense.positions.assign(sparse.rows() * dense.dim, 0.0);
  for (std::size_t r = 0; r < sparse.rows(); ++r) {
    for (std::size_t e = sparse.row_offsets[r]; e < sparse.row_offsets[r + 1]; ++e) {
      dense.positions[r * dense.dim + sparse.entries[e].first] = sparse.entries[e].second;
    }
  }
  return dense;
}

std::vector<double> class_values(const std::vector<const DenseDataset*>& sets) {
  std::vector<double> values;
  for (const auto* s : sets) values.insert(values.end(), s->labels.begin(), s->labels.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

ClassifiedSet to_classified(const DenseDataset& data, const std::vector<double>& classes) {
  ClassifiedSet set;
  set.dim = data.dim;
  set.positions = data.positions;
  set.n_classes = classes.size();
  set.classes.reserve(data.rows());
  for (double label : data.labels) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label) throw Error("label " + std::to_string(label) + " has no class index");
    set.classes.push_back(static_cast<std::size_t>(it - classes.begin()));
  }
  return set;
}

LoadedClassification load_libsvm(const std::string& path, std::size_t dim) {
  const DenseDataset dense = densify(read_libsvm(path), dim);
  LoadedClassification out;
  out.class_values = class_values({&dense});
  out.set = to_classified(dense, out.class_values);
  return out;
}

void write_libsvm(std::ostream& out, const DenseDataset& data) {
  char buffer[64];
  auto put = [&](double v) {
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
    out.write(buffer, ptr - buffer);
  };
  for (std::size_t r = 0; r < data.rows(); ++r) {
    put(data.labels[r]);
    for (std::size_t c = 0; c < data.dim; ++c) {
      const double v = data.positions[r * data.dim + c];
      if (v == 0.0) continue;
      out << ' ' << (c + 1) << ':';
      put(v);
    }
    out << '\n';
  }
}

void minmax_scale(DenseDataset& data, const DenseDataset& reference) {
  if (data.dim != reference.dim) throw Error("minmax_scale: dimension mismatch");
  const std::size_t dim = reference.dim;
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < reference.rows(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      lo[c] = std::min(lo[c], reference.positions[r * dim + c]);
      hi[c] = std::max(hi[c], reference.positions[r * dim + c]);
    }
  }
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      double& v = data.positions[r * dim + c];
      v = hi[c] > lo[c] ? (v - lo[c]) / (hi[c] - lo[c]) : 0.0;
    }
  }
}

}  // namespace bf::io
