#include "abmil/abclass.hpp"

#include <ostream>
#include <stdexcept>

#include "abmil/encode.hpp"

namespace abmil {

void ABClassConfig::validate() const {
  params.validate();
  if (min_group_size < 2) throw std::invalid_argument("min group size must be >= 2");
  if (classifier.kind == ClassifierKind::Knn && classifier.k < 1)
    throw std::invalid_argument("knn requires k >= 1");
}

Label aggregate_majority(const PredictionVector& pv) {
  if (pv.entries.empty()) throw DataError("no usable relation group for any query instance");
  std::size_t votes[2] = {0, 0};
  double conf[2] = {0.0, 0.0};
  for (const auto& [key, p] : pv.entries) {
    const int c = p.label == Label::Positive ? 0 : 1;
    ++votes[c];
    conf[c] += p.confidence;
  }
  if (votes[0] != votes[1]) return votes[0] > votes[1] ? Label::Positive : Label::Negative;
  if (conf[0] != conf[1]) return conf[0] > conf[1] ? Label::Positive : Label::Negative;
  return Label::Negative;
}

namespace {

struct KeyOutcome {
  std::optional<Prediction> prediction;
  std::string skip_reason;
  PhaseTimes times;
};

KeyOutcome classify_instance(const std::vector<const Bag*>& learning,
                             const std::map<BagId, Label>& labels, const InstanceKey& key,
                             const Sequence& seq, const ABClassConfig& cfg) {
  KeyOutcome out;
  RelationGroup group{key, {}};
  for (const Bag* b : learning) {
    auto it = b->instances.find(key);
    if (it != b->instances.end()) group.members.emplace(b->id, it->second);
  }
  if (group.members.size() < cfg.min_group_size) {
    out.skip_reason = "group has " + std::to_string(group.members.size()) + " member(s)";
    return out;
  }

  Stopwatch sw;
  MotifSet motifs;
  try {
    motifs = extract_motifs(group, labels, cfg.params);
  } catch (const DataError& e) {
    out.skip_reason = e.what();
    return out;
  }
  out.times.extraction = sw.lap();
  if (motifs.empty()) {
    out.skip_reason = "no motifs";
    return out;
  }

  const auto matrix = encode_group(group, motifs, labels);
  const auto model = fit(cfg.classifier, matrix);
  out.prediction = model.predict(encode_sequence(seq, motifs));
  out.times.model = sw.lap();
  return out;
}

}  // namespace

ABClassResult abclass_predict(const Dataset& db, const Bag& query, const ABClassConfig& cfg,
                              unsigned threads) {
  cfg.validate();
  if (!db.has_both_classes()) throw DataError("learning database must contain both classes");
  if (query.instances.empty()) throw DataError("query bag '" + query.id + "' is empty");

  std::vector<const Bag*> learning;
  for (const auto& b : db.bags())
    if (b.label) learning.push_back(&b);
  const auto labels = label_map(db);

  std::vector<std::pair<const InstanceKey*, const Sequence*>> items;
  for (const auto& [k, s] : query.instances) items.emplace_back(&k, &s);
  std::vector<KeyOutcome> outcomes(items.size());
  parallel_for(items.size(), threads, [&](std::size_t i) {
    outcomes[i] = classify_instance(learning, labels, *items[i].first, *items[i].second, cfg);
  });

  ABClassResult r{Label::Negative, {}, {}};
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& key = *items[i].first;
    if (outcomes[i].prediction)
      r.pv.entries.emplace(key, *outcomes[i].prediction);
    else
      r.pv.skipped.emplace(key, outcomes[i].skip_reason);
    r.times += outcomes[i].times;
  }
  Stopwatch sw;
  r.label = aggregate_majority(r.pv);
  r.times.aggregation = sw.lap();
  return r;
}

double successful_model_rate(const PredictionVector& pv, Label truth) {
  if (pv.entries.empty()) throw DataError("every query instance was skipped");
  std::size_t hits = 0;
  for (const auto& [k, p] : pv.entries)
    if (p.label == truth) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pv.entries.size());
}

double successful_model_rate(const Dataset& db, const Bag& held_out, const ABClassConfig& cfg,
                             unsigned threads) {
  if (!held_out.label) throw DataError("held-out bag '" + held_out.id + "' has no label");
  return successful_model_rate(abclass_predict(db, held_out, cfg, threads).pv, *held_out.label);
}

void write_abclass_report(std::ostream& out, const ABClassResult& r, bool with_timing) {
  out << "label=" << to_string(r.label) << '\n';
  for (const auto& [key, p] : r.pv.entries)
    out << "vote key=" << key << " label=" << to_string(p.label) << " confidence=" << p.confidence
        << '\n';
  for (const auto& [key, why] : r.pv.skipped) out << "skipped key=" << key << " reason=" << why << '\n';
  if (with_timing)
    out << "time extraction=" << r.times.extraction << " model=" << r.times.model
        << " aggregation=" << r.times.aggregation << '\n';
}

}  // namespace abmil
