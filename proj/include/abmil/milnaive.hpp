#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "abmil/classify.hpp"
#include "abmil/encode.hpp"
#include "abmil/motif.hpp"

namespace abmil {

/// Every instance of every labeled bag encoded against the union of the
/// per-group motif sets.
struct BagFeatureTable {
  AttributeMatrix matrix;
  std::vector<BagId> bag_order;
  std::map<BagId, std::pair<Eigen::Index, Eigen::Index>> bag_rows;  // [begin, end)
  std::map<InstanceKey, std::string> skipped_groups;                // key -> reason
};

/// Groups with fewer than two members or that cannot be mined (single
/// class with beta < 1) contribute no motifs; they are listed in
/// `skipped_groups`. Throws DataError when the union is empty.
BagFeatureTable build_union_table(const Dataset& db, const MotifParams& params,
                                  unsigned threads = 1);

enum class MilKind { SilVote, BagKnn };
std::string_view to_string(MilKind k);
/// "sil-vote" or "bag-knn".
MilKind parse_mil_kind(std::string_view name);

struct MilConfig {
  MilKind kind = MilKind::BagKnn;
  ClassifierSpec classifier;  // sil-vote only
};

/// Query rows encoded against the table's union motif list, in key order.
BitMatrix encode_query(const BagFeatureTable& table, const Bag& query);

/// Bag distance: smallest Hamming distance over all cross-bag instance pairs.
Eigen::Index bag_distance(const BitMatrix& a, const BitMatrix& b);

Label mil_predict(const BagFeatureTable& table, const Bag& query, const MilConfig& cfg);

}  // namespace abmil
