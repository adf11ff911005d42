#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "abmil/classify.hpp"
#include "abmil/motif.hpp"
#include "abmil/parallel.hpp"
#include "abmil/seqcore.hpp"

namespace abmil {

struct ABClassConfig {
  MotifParams params;
  ClassifierSpec classifier;
  std::size_t min_group_size = 2;

  void validate() const;
};

/// Per-instance predictions of one query bag. `entries` and `skipped`
/// partition the query keys.
struct PredictionVector {
  std::map<InstanceKey, Prediction> entries;
  std::map<InstanceKey, std::string> skipped;  // key -> reason
};

struct ABClassResult {
  Label label;
  PredictionVector pv;
  PhaseTimes times;  // extraction, fit + predict, aggregation
};

/// Majority vote over entry labels; ties go to the larger summed
/// confidence, then to -1. Throws DataError when `pv` has no entries.
Label aggregate_majority(const PredictionVector& pv);

/// Classifies `query` one relation at a time: for every query key, mine
/// motifs from the learning bags sharing that key, encode, fit a model and
/// predict the query instance. Unlabeled bags in `db` are ignored.
ABClassResult abclass_predict(const Dataset& db, const Bag& query, const ABClassConfig& cfg,
                              unsigned threads = 1);

/// Fraction of per-instance predictions equal to `truth`.
double successful_model_rate(const PredictionVector& pv, Label truth);
double successful_model_rate(const Dataset& db, const Bag& held_out, const ABClassConfig& cfg,
                             unsigned threads = 1);

/// key=value report: label, votes, skipped keys, phase timings.
void write_abclass_report(std::ostream& out, const ABClassResult& r, bool with_timing = true);

}  // namespace abmil
