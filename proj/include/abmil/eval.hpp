#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "abmil/abclass.hpp"
#include "abmil/absim.hpp"
#include "abmil/milnaive.hpp"
#include "abmil/parallel.hpp"

namespace abmil {

enum class Approach { ABClass, ABSim, Naive };
std::string_view to_string(Approach a);
/// "abclass", "absim" or "naive".
Approach parse_approach(std::string_view name);

struct ABSimConfig {
  MeasureKind measure = MeasureKind::LocalAlign;
  Scoring scoring;
  std::string scoring_source = "default";  // echoed in reports
  Aggregator aggregator = Aggregator::Sms;
  std::optional<WeightVector> weights;     // unit weights when unset
};

struct NaiveConfig {
  MotifParams params;
  MilConfig mil;
};

struct LooConfig {
  Approach approach = Approach::ABClass;
  ABClassConfig abclass;
  ABSimConfig absim;
  NaiveConfig naive;
  unsigned threads = 1;  // 0 = all cores
};

struct FoldRecord {
  BagId bag;
  Label truth;
  std::optional<Label> predicted;        // nullopt when skipped
  std::optional<double> success_rate;    // abclass only
  std::string skip_reason;
  PhaseTimes times;

  bool correct() const { return predicted && *predicted == truth; }
};

struct LooReport {
  std::vector<FoldRecord> folds;
  std::size_t evaluated = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;  // correct / evaluated
  PhaseTimes mean_times;  // averaged over evaluated folds
  LooConfig config;
};

/// Leave-one-out over the labeled bags of `db`. Folds whose training part
/// lacks a class, or whose prediction fails on data grounds, are recorded
/// as skipped with a reason. Throws DataError for fewer than 3 labeled bags.
LooReport run_loo(const Dataset& db, const LooConfig& cfg);

/// key=value echo of the configuration, one record per line.
void write_config(std::ostream& out, const LooConfig& cfg);
/// `accuracy=... correct=... evaluated=... folds=... skipped=...`
std::string summary_line(const LooReport& r);
/// Config echo, one `fold` record per bag, then `summary`.
void write_loo_report(std::ostream& out, const LooReport& r, bool with_timing = true);
/// Tab-separated, one row per fold, with a header row.
void write_loo_tsv(std::ostream& out, const LooReport& r, bool with_timing = true);

/// Planted-signal generator. Each key gets one motif per class, drawn from
/// a symbol set disjoint from the background symbols. Every instance is a
/// random background with its class motif written at a random offset; with
/// probability `noise_rate` the other class's motif is written instead.
/// Bags alternate +1, -1 starting with +1.
struct SyntheticSpec {
  std::size_t bags = 20;
  std::size_t keys = 10;
  std::size_t seq_len = 80;
  std::size_t motif_len = 8;
  double noise_rate = 0.0;
  std::uint64_t seed = 1;
};

inline constexpr std::string_view kSyntheticMotifSymbols = "CHMW";
inline constexpr std::string_view kSyntheticBackgroundSymbols = "ADEFGIKLNPQRSTVY";

Dataset gen_synthetic(const SyntheticSpec& spec);

}  // namespace abmil
