#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string_view>
#include <vector>

#include "abmil/motif.hpp"
#include "abmil/seqcore.hpp"

namespace abmil {

using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BitVector = Eigen::Matrix<std::uint8_t, 1, Eigen::Dynamic>;

struct RowId {
  BagId bag;
  InstanceKey key;
  bool operator==(const RowId&) const = default;
};

/// Presence/absence of each column motif in each row sequence.
struct AttributeMatrix {
  MotifSet columns;
  std::vector<RowId> rows;
  BitMatrix cells;
  /// Empty, or one label per row.
  std::vector<Label> labels;

  Eigen::Index row_count() const { return cells.rows(); }
  Eigen::Index col_count() const { return cells.cols(); }
  bool labeled() const { return !labels.empty(); }
};

struct FeatureVector {
  MotifSet columns;
  BitVector bits;
};

/// Rows follow the group's bag-id order. Rows are labeled when every
/// member bag appears in `labels`. Throws std::invalid_argument for an
/// empty motif set.
AttributeMatrix encode_group(const RelationGroup& group, const MotifSet& motifs,
                             const std::map<BagId, Label>& labels = {});

FeatureVector encode_sequence(std::string_view seq, const MotifSet& motifs);

/// Row vector of motif presence, without the motif-set binding.
BitVector encode_bits(std::string_view seq, const std::vector<std::string>& motifs);

/// Number of zero cells.
std::size_t zero_count(const AttributeMatrix& m);

/// Fraction of zero cells. Throws std::invalid_argument for an empty matrix.
double sparsity(const AttributeMatrix& m);

/// Header `motifs<TAB>m1<TAB>m2...`, then `bag:key<TAB>b1<TAB>b2...` rows.
void write_matrix(std::ostream& out, const AttributeMatrix& m);

/// Hamming distance between equally sized bit rows.
template <typename DerivedA, typename DerivedB>
Eigen::Index hamming(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b) {
  return (a.derived().array() != b.derived().array()).count();
}

}  // namespace abmil
