#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "abmil/seqcore.hpp"

namespace abmil {

// ---- similarity measures ----------------------------------------------------

/// Number of distinct symbols present in both sequences.
int common_symbols(std::string_view a, std::string_view b);

/// Symmetric symbol-pair score table, e.g. an amino-acid substitution
/// matrix. File format: optional `#` comment lines, a header row of
/// symbols, then one row per symbol: `<symbol> <score>...`.
class SubstitutionTable {
 public:
  static SubstitutionTable read(std::istream& in);

  /// Throws DataError for symbols missing from the table.
  double operator()(char a, char b) const;
  const std::string& symbols() const { return symbols_; }

 private:
  std::string symbols_;
  std::array<int, 256> index_{};
  Eigen::MatrixXd scores_;
};

/// Linear-gap scoring for local alignment.
struct Scoring {
  double match = 2.0;
  double mismatch = -1.0;
  double gap = -1.0;
  std::optional<SubstitutionTable> table;  // replaces match/mismatch when set

  /// Requires match > 0, mismatch <= 0, gap < 0; throws std::invalid_argument.
  void validate() const;
  double pair(char a, char b) const {
    if (table) return (*table)(a, b);
    return a == b ? match : mismatch;
  }
};

/// Best local-alignment score (Smith-Waterman, cells floored at zero).
double local_align(std::string_view a, std::string_view b, const Scoring& scoring = {});

using SimilarityMeasure = std::function<double(std::string_view, std::string_view)>;

enum class MeasureKind { CommonSymbols, LocalAlign };
std::string_view to_string(MeasureKind k);
/// "common-symbols" or "local-align".
MeasureKind parse_measure_kind(std::string_view name);
SimilarityMeasure make_measure(MeasureKind kind, const Scoring& scoring = {});

// ---- similarity matrix ------------------------------------------------------

/// Scores of each query instance (columns) against the instance with the
/// same key in each labeled learning bag (rows). Cells where the bag lacks
/// the key are invalid.
struct SimilarityMatrix {
  std::vector<BagId> bags;
  std::vector<Label> labels;
  std::vector<InstanceKey> keys;
  Eigen::MatrixXd scores;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> valid;
};

SimilarityMatrix build_similarity_matrix(const Dataset& db, const Bag& query,
                                         const SimilarityMeasure& measure, unsigned threads = 1);

/// Grid layout: `bag label <key>...` header, `-` for invalid cells.
void write_similarity_matrix(std::ostream& out, const SimilarityMatrix& m);

// ---- aggregation ------------------------------------------------------------

struct SmsResult {
  Label label;
  double total_pos;
  double total_neg;
};

struct WamsResult {
  Label label;
  double avg_pos;
  double avg_neg;
};

struct ColumnMaxima {
  double pos;
  double neg;
};

/// Per-column best positive and best negative score over valid cells; a
/// side with no valid cell scores 0. Columns without any valid cell are
/// returned as nullopt.
template <typename DerivedS, typename DerivedV>
std::vector<std::optional<ColumnMaxima>> column_maxima(const Eigen::MatrixBase<DerivedS>& scores,
                                                       const Eigen::DenseBase<DerivedV>& valid,
                                                       std::span<const Label> labels) {
  if (scores.rows() != valid.rows() || scores.cols() != valid.cols() ||
      static_cast<std::size_t>(scores.rows()) != labels.size())
    throw std::invalid_argument("similarity matrix, mask and labels disagree in shape");
  std::vector<std::optional<ColumnMaxima>> out(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index k = 0; k < scores.cols(); ++k) {
    ColumnMaxima m{0.0, 0.0};
    bool any = false;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      if (!valid(i, k)) continue;
      any = true;
      const double s = static_cast<double>(scores(i, k));
      double& side = labels[static_cast<std::size_t>(i)] == Label::Positive ? m.pos : m.neg;
      if (s > side) side = s;
    }
    if (any) out[static_cast<std::size_t>(k)] = m;
  }
  return out;
}

/// Sum of maximum scores: each usable column adds its larger side maximum
/// to that side's total (ties count as positive); +1 iff total_pos >= total_neg.
template <typename DerivedS, typename DerivedV>
SmsResult sum_of_maximum_scores(const Eigen::MatrixBase<DerivedS>& scores,
                                const Eigen::DenseBase<DerivedV>& valid,
                                std::span<const Label> labels) {
  SmsResult r{Label::Positive, 0.0, 0.0};
  bool usable = false;
  for (const auto& col : column_maxima(scores, valid, labels)) {
    if (!col) continue;
    usable = true;
    if (col->pos >= col->neg)
      r.total_pos += col->pos;
    else
      r.total_neg += col->neg;
  }
  if (!usable) throw DataError("similarity matrix has no usable column");
  r.label = r.total_pos >= r.total_neg ? Label::Positive : Label::Negative;
  return r;
}

/// Weighted average of maximum scores. Column k contributes
/// weights(k) * max to the winning side; each side's total is divided by
/// the number of columns it won (0 when it won none).
template <typename DerivedS, typename DerivedV, typename DerivedW>
WamsResult weighted_average_of_maximum_scores(const Eigen::MatrixBase<DerivedS>& scores,
                                              const Eigen::DenseBase<DerivedV>& valid,
                                              std::span<const Label> labels,
                                              const Eigen::MatrixBase<DerivedW>& weights) {
  if (weights.size() != scores.cols())
    throw std::invalid_argument("one weight per query instance required");
  if ((weights.array() <= 0).any()) throw std::invalid_argument("weights must be positive");
  double total_pos = 0.0, total_neg = 0.0;
  std::size_t nb_pos = 0, nb_neg = 0;
  bool usable = false;
  const auto cols = column_maxima(scores, valid, labels);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (!cols[k]) continue;
    usable = true;
    const double w = static_cast<double>(weights(static_cast<Eigen::Index>(k)));
    if (cols[k]->pos >= cols[k]->neg) {
      total_pos += cols[k]->pos * w;
      ++nb_pos;
    } else {
      total_neg += cols[k]->neg * w;
      ++nb_neg;
    }
  }
  if (!usable) throw DataError("similarity matrix has no usable column");
  WamsResult r{Label::Positive, nb_pos ? total_pos / static_cast<double>(nb_pos) : 0.0,
               nb_neg ? total_neg / static_cast<double>(nb_neg) : 0.0};
  r.label = r.avg_pos >= r.avg_neg ? Label::Positive : Label::Negative;
  return r;
}

/// Positive weight per query key.
struct WeightVector {
  std::map<InstanceKey, double> weights;

  static WeightVector uniform(const std::vector<InstanceKey>& keys);
  /// `key <TAB> weight` lines; `#` comments allowed.
  static WeightVector read(std::istream& in);
  /// Weights in `keys` order; throws DataError for uncovered keys.
  Eigen::VectorXd ordered(const std::vector<InstanceKey>& keys) const;
};

SmsResult aggregate_sms(const SimilarityMatrix& m);
WamsResult aggregate_wams(const SimilarityMatrix& m, const WeightVector& w);
inline WamsResult aggregate_wams(const SimilarityMatrix& m) {
  return aggregate_wams(m, WeightVector::uniform(m.keys));
}

enum class Aggregator { Sms, Wams };
std::string_view to_string(Aggregator a);
/// "sms" or "wams".
Aggregator parse_aggregator(std::string_view name);

struct ABSimResult {
  Label label;
  SimilarityMatrix matrix;
  double total_pos;  // SMS totals or WAMS averages
  double total_neg;
};

ABSimResult absim_predict(const Dataset& db, const Bag& query, const SimilarityMeasure& measure,
                          Aggregator aggregator, const std::optional<WeightVector>& weights = {},
                          unsigned threads = 1);

}  // namespace abmil
