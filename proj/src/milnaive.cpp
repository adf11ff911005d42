#include "abmil/milnaive.hpp"

#include <limits>
#include <stdexcept>

#include "abmil/abclass.hpp"
#include "abmil/parallel.hpp"

namespace abmil {

std::string_view to_string(MilKind k) { return k == MilKind::SilVote ? "sil-vote" : "bag-knn"; }

MilKind parse_mil_kind(std::string_view name) {
  if (name == "sil-vote") return MilKind::SilVote;
  if (name == "bag-knn") return MilKind::BagKnn;
  throw std::invalid_argument("unknown MIL classifier '" + std::string(name) + "'");
}

BagFeatureTable build_union_table(const Dataset& db, const MotifParams& params, unsigned threads) {
  params.validate();
  const auto labels = label_map(db);
  std::vector<Bag> labeled;
  for (const auto& b : db.bags())
    if (b.label) labeled.push_back(b);
  if (labeled.empty()) throw DataError("no labeled bags");
  const Dataset learning(std::move(labeled), db.alphabet());
  const auto groups = relation_groups(learning);

  std::vector<std::optional<MotifSet>> mined(groups.size());
  std::vector<std::string> reasons(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t i) {
    if (groups[i].members.size() < 2) {
      reasons[i] = "group has 1 member";
      return;
    }
    try {
      mined[i] = extract_motifs(groups[i], labels, params);
    } catch (const DataError& e) {
      reasons[i] = e.what();
    }
  });

  BagFeatureTable t;
  std::vector<MotifSet> sets;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (mined[i])
      sets.push_back(std::move(*mined[i]));
    else
      t.skipped_groups.emplace(groups[i].key, reasons[i]);
  }
  if (sets.empty()) throw DataError("no relation group yielded motifs");
  t.matrix.columns = union_motifs(sets);
  if (t.matrix.columns.empty()) throw DataError("union motif list is empty");

  Eigen::Index rows = 0;
  for (const auto& b : learning.bags()) rows += static_cast<Eigen::Index>(b.instances.size());
  t.matrix.cells.resize(rows, static_cast<Eigen::Index>(t.matrix.columns.size()));
  Eigen::Index r = 0;
  for (const auto& b : learning.bags()) {
    const Eigen::Index begin = r;
    for (const auto& [key, seq] : b.instances) {
      t.matrix.rows.push_back({b.id, key});
      t.matrix.labels.push_back(*b.label);
      t.matrix.cells.row(r++) = encode_bits(seq, t.matrix.columns.motifs);
    }
    t.bag_order.push_back(b.id);
    t.bag_rows.emplace(b.id, std::make_pair(begin, r));
  }
  return t;
}

BitMatrix encode_query(const BagFeatureTable& table, const Bag& query) {
  BitMatrix q(static_cast<Eigen::Index>(query.instances.size()), table.matrix.col_count());
  Eigen::Index r = 0;
  for (const auto& [key, seq] : query.instances)
    q.row(r++) = encode_bits(seq, table.matrix.columns.motifs);
  return q;
}

Eigen::Index bag_distance(const BitMatrix& a, const BitMatrix& b) {
  Eigen::Index best = std::numeric_limits<Eigen::Index>::max();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) best = std::min(best, hamming(a.row(i), b.row(j)));
  return best;
}

Label mil_predict(const BagFeatureTable& table, const Bag& query, const MilConfig& cfg) {
  if (query.instances.empty()) throw DataError("query bag '" + query.id + "' is empty");
  const BitMatrix q = encode_query(table, query);

  if (cfg.kind == MilKind::SilVote) {
    const auto model = fit(cfg.classifier, table.matrix);
    PredictionVector pv;
    Eigen::Index r = 0;
    for (const auto& [key, seq] : query.instances)
      pv.entries.emplace(key, model.predict(BitVector(q.row(r++))));
    return aggregate_majority(pv);
  }

  std::optional<Label> nearest;
  Eigen::Index best = std::numeric_limits<Eigen::Index>::max();
  for (const auto& id : table.bag_order) {
    const auto [begin, end] = table.bag_rows.at(id);
    const BitMatrix rows = table.matrix.cells.middleRows(begin, end - begin);
    const auto d = bag_distance(q, rows);
    if (d < best) {
      best = d;
      nearest = table.matrix.labels[static_cast<std::size_t>(begin)];
    }
  }
  if (!nearest) throw DataError("feature table has no bags");
  return *nearest;
}

}  // namespace abmil
