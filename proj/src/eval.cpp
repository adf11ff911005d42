#include "abmil/eval.hpp"

#include <array>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace abmil {

std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::ABClass: return "abclass";
    case Approach::ABSim: return "absim";
    case Approach::Naive: return "naive";
  }
  return "?";
}

Approach parse_approach(std::string_view name) {
  if (name == "abclass") return Approach::ABClass;
  if (name == "absim") return Approach::ABSim;
  if (name == "naive") return Approach::Naive;
  throw std::invalid_argument("unknown approach '" + std::string(name) + "'");
}

namespace {

struct FoldOutcome {
  Label label;
  std::optional<double> success_rate;
  PhaseTimes times;
};

FoldOutcome predict_fold(const Dataset& train, const Bag& held_out, const LooConfig& cfg) {
  switch (cfg.approach) {
    case Approach::ABClass: {
      const auto r = abclass_predict(train, held_out, cfg.abclass);
      return {r.label, successful_model_rate(r.pv, *held_out.label), r.times};
    }
    case Approach::ABSim: {
      FoldOutcome out{Label::Positive, std::nullopt, {}};
      Stopwatch sw;
      const auto m = build_similarity_matrix(
          train, held_out, make_measure(cfg.absim.measure, cfg.absim.scoring));
      out.times.model = sw.lap();
      if (cfg.absim.aggregator == Aggregator::Sms)
        out.label = aggregate_sms(m).label;
      else
        out.label = cfg.absim.weights ? aggregate_wams(m, *cfg.absim.weights).label
                                      : aggregate_wams(m).label;
      out.times.aggregation = sw.lap();
      return out;
    }
    case Approach::Naive: {
      FoldOutcome out{Label::Positive, std::nullopt, {}};
      Stopwatch sw;
      const auto table = build_union_table(train, cfg.naive.params);
      out.times.extraction = sw.lap();
      out.label = mil_predict(table, held_out, cfg.naive.mil);
      out.times.model = sw.lap();
      return out;
    }
  }
  throw std::invalid_argument("unknown approach");
}

}  // namespace

LooReport run_loo(const Dataset& db, const LooConfig& cfg) {
  std::vector<Bag> labeled;
  for (const auto& b : db.bags())
    if (b.label) labeled.push_back(b);
  if (labeled.size() < 3)
    throw DataError("fewer than 3 bags: leave-one-out needs at least 3 labeled bags, got " +
                    std::to_string(labeled.size()));
  if (cfg.approach == Approach::ABClass) cfg.abclass.validate();
  if (cfg.approach == Approach::Naive) cfg.naive.params.validate();
  if (cfg.approach == Approach::ABSim) cfg.absim.scoring.validate();
  const Dataset all(std::move(labeled), db.alphabet());

  LooReport report;
  report.config = cfg;
  report.folds.resize(all.size());
  parallel_for(all.size(), cfg.threads, [&](std::size_t i) {
    const Bag& held = all.bags()[i];
    FoldRecord& rec = report.folds[i];
    rec.bag = held.id;
    rec.truth = *held.label;
    const Dataset train = all.without(i);
    if (!train.has_both_classes()) {
      const Label missing =
          train.count(Label::Positive) == 0 ? Label::Positive : Label::Negative;
      rec.skip_reason = "training fold lacks class " + to_string(missing);
      return;
    }
    try {
      const auto out = predict_fold(train, held, cfg);
      rec.predicted = out.label;
      rec.success_rate = out.success_rate;
      rec.times = out.times;
    } catch (const DataError& e) {
      rec.skip_reason = e.what();
    }
  });

  for (const auto& f : report.folds) {
    if (!f.predicted) continue;
    ++report.evaluated;
    if (f.correct()) ++report.correct;
    report.mean_times += f.times;
  }
  if (report.evaluated > 0) {
    const double n = static_cast<double>(report.evaluated);
    report.accuracy = static_cast<double>(report.correct) / n;
    report.mean_times.extraction /= n;
    report.mean_times.model /= n;
    report.mean_times.aggregation /= n;
  }
  return report;
}

namespace {

std::string max_len_string(const MotifParams& p) {
  return p.max_len ? std::to_string(*p.max_len) : "inf";
}

void write_params(std::ostream& out, const MotifParams& p) {
  out << "config alpha=" << p.alpha << '\n'
      << "config beta=" << p.beta << '\n'
      << "config min_len=" << p.min_len << '\n'
      << "config max_len=" << max_len_string(p) << '\n';
}

void write_classifier(std::ostream& out, const ClassifierSpec& c) {
  out << "config classifier=" << to_string(c.kind) << '\n';
  if (c.kind == ClassifierKind::Knn) out << "config k=" << c.k << '\n';
}

}  // namespace

void write_config(std::ostream& out, const LooConfig& cfg) {
  out << "config approach=" << to_string(cfg.approach) << '\n';
  switch (cfg.approach) {
    case Approach::ABClass:
      write_params(out, cfg.abclass.params);
      write_classifier(out, cfg.abclass.classifier);
      out << "config min_group_size=" << cfg.abclass.min_group_size << '\n';
      break;
    case Approach::ABSim:
      out << "config measure=" << to_string(cfg.absim.measure) << '\n';
      if (cfg.absim.measure == MeasureKind::LocalAlign) {
        if (cfg.absim.scoring.table)
          out << "config scoring=table:" << cfg.absim.scoring_source << '\n';
        else
          out << "config match=" << cfg.absim.scoring.match << '\n'
              << "config mismatch=" << cfg.absim.scoring.mismatch << '\n';
        out << "config gap=" << cfg.absim.scoring.gap << '\n';
      }
      out << "config aggregator=" << to_string(cfg.absim.aggregator) << '\n';
      if (cfg.absim.aggregator == Aggregator::Wams)
        out << "config weights=" << (cfg.absim.weights ? "file" : "unit") << '\n';
      break;
    case Approach::Naive:
      write_params(out, cfg.naive.params);
      out << "config mil=" << to_string(cfg.naive.mil.kind) << '\n';
      if (cfg.naive.mil.kind == MilKind::SilVote) write_classifier(out, cfg.naive.mil.classifier);
      break;
  }
}

std::string summary_line(const LooReport& r) {
  std::ostringstream s;
  s << std::setprecision(10) << "accuracy=" << r.accuracy << " correct=" << r.correct
    << " evaluated=" << r.evaluated << " folds=" << r.folds.size()
    << " skipped=" << r.folds.size() - r.evaluated;
  return s.str();
}

void write_loo_report(std::ostream& out, const LooReport& r, bool with_timing) {
  const auto old = out.precision(10);
  write_config(out, r.config);
  for (const auto& f : r.folds) {
    out << "fold bag=" << f.bag << " true=" << to_string(f.truth);
    if (f.predicted) {
      out << " predicted=" << to_string(*f.predicted) << " correct=" << (f.correct() ? 1 : 0);
      if (f.success_rate) out << " success_rate=" << *f.success_rate;
      if (with_timing)
        out << " time_extraction=" << f.times.extraction << " time_model=" << f.times.model
            << " time_aggregation=" << f.times.aggregation;
    } else {
      out << " skipped=\"" << f.skip_reason << '"';
    }
    out << '\n';
  }
  out << "summary " << summary_line(r);
  if (with_timing)
    out << " mean_time_extraction=" << r.mean_times.extraction
        << " mean_time_model=" << r.mean_times.model
        << " mean_time_aggregation=" << r.mean_times.aggregation;
  out << '\n';
  out.precision(old);
}

void write_loo_tsv(std::ostream& out, const LooReport& r, bool with_timing) {
  const auto old = out.precision(10);
  out << "bag\ttrue\tpredicted\tcorrect\tsuccess_rate";
  if (with_timing) out << "\ttime_extraction\ttime_model\ttime_aggregation";
  out << '\n';
  for (const auto& f : r.folds) {
    out << f.bag << '\t' << to_string(f.truth) << '\t'
        << (f.predicted ? to_string(*f.predicted) : "NA") << '\t'
        << (f.predicted ? (f.correct() ? "1" : "0") : "NA") << '\t';
    if (f.success_rate)
      out << *f.success_rate;
    else
      out << "NA";
    if (with_timing)
      out << '\t' << f.times.extraction << '\t' << f.times.model << '\t' << f.times.aggregation;
    out << '\n';
  }
  out.precision(old);
}

// ---- synthetic data ---------------------------------------------------------

namespace {

std::string random_string(std::mt19937_64& rng, std::string_view symbols, std::size_t len) {
  std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1);
  std::string s(len, ' ');
  for (auto& c : s) c = symbols[pick(rng)];
  return s;
}

std::string padded(std::string_view prefix, std::size_t i, std::size_t n) {
  const auto width = std::to_string(n).size();
  auto num = std::to_string(i);
  return std::string(prefix) + std::string(width - num.size(), '0') + num;
}

}  // namespace

Dataset gen_synthetic(const SyntheticSpec& spec) {
  if (spec.bags < 2) throw std::invalid_argument("synthetic data needs at least 2 bags");
  if (spec.keys < 1) throw std::invalid_argument("synthetic data needs at least 1 key");
  if (spec.motif_len < 2) throw std::invalid_argument("signal motif length must be >= 2");
  if (spec.motif_len > spec.seq_len)
    throw std::invalid_argument("signal motif longer than the sequence");
  if (!(spec.noise_rate >= 0.0 && spec.noise_rate <= 1.0))
    throw std::invalid_argument("noise rate must lie in [0,1]");

  std::mt19937_64 rng(spec.seed);
  std::vector<std::array<std::string, 2>> motifs(spec.keys);
  for (auto& m : motifs) {
    m[0] = random_string(rng, kSyntheticMotifSymbols, spec.motif_len);
    do m[1] = random_string(rng, kSyntheticMotifSymbols, spec.motif_len);
    while (m[1] == m[0]);
  }

  std::bernoulli_distribution noisy(spec.noise_rate);
  std::uniform_int_distribution<std::size_t> offset(0, spec.seq_len - spec.motif_len);
  std::vector<Bag> bags;
  for (std::size_t b = 0; b < spec.bags; ++b) {
    Bag bag{padded("bag", b + 1, spec.bags), b % 2 == 0 ? Label::Positive : Label::Negative, {}};
    const int cls = b % 2 == 0 ? 0 : 1;
    for (std::size_t k = 0; k < spec.keys; ++k) {
      auto seq = random_string(rng, kSyntheticBackgroundSymbols, spec.seq_len);
      const bool flipped = noisy(rng);
      const auto& motif = motifs[k][flipped ? 1 - cls : cls];
      seq.replace(offset(rng), spec.motif_len, motif);
      bag.instances.emplace(padded("K", k + 1, spec.keys), std::move(seq));
    }
    bags.push_back(std::move(bag));
  }
  std::string alphabet(kSyntheticBackgroundSymbols);
  alphabet += kSyntheticMotifSymbols;
  return Dataset(std::move(bags), Alphabet(alphabet));
}

}  // namespace abmil
