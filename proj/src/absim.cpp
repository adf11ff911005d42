#include "abmil/absim.hpp"

#include <bitset>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "abmil/parallel.hpp"

namespace abmil {

int common_symbols(std::string_view a, std::string_view b) {
  std::bitset<256> sa, sb;
  for (unsigned char c : a) sa.set(c);
  for (unsigned char c : b) sb.set(c);
  return static_cast<int>((sa & sb).count());
}

SubstitutionTable SubstitutionTable::read(std::istream& in) {
  SubstitutionTable t;
  t.index_.fill(-1);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::string row_symbols;
  bool header = false;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok) || tok.front() == '#') continue;
    if (!header) {
      do {
        if (tok.size() != 1) throw DataError("substitution table: bad header symbol '" + tok + "'");
        const auto c = static_cast<unsigned char>(tok[0]);
        if (t.index_[c] >= 0) throw DataError("substitution table: duplicate symbol '" + tok + "'");
        t.index_[c] = static_cast<int>(t.symbols_.size());
        t.symbols_.push_back(tok[0]);
      } while (ss >> tok);
      header = true;
      continue;
    }
    if (tok.size() != 1) throw DataError("substitution table: bad row symbol '" + tok + "'");
    row_symbols.push_back(tok[0]);
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (vals.size() != t.symbols_.size())
      throw DataError(std::string("substitution table: row '") + tok + "' has wrong width");
    rows.push_back(std::move(vals));
  }
  const auto n = static_cast<Eigen::Index>(t.symbols_.size());
  if (n == 0) throw DataError("substitution table: missing header");
  if (row_symbols.size() != t.symbols_.size())
    throw DataError("substitution table: expected one row per header symbol");
  t.scores_.resize(n, n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int i = t.index_[static_cast<unsigned char>(row_symbols[r])];
    if (i < 0) throw DataError(std::string("substitution table: row symbol '") + row_symbols[r] +
                               "' missing from header");
    for (Eigen::Index j = 0; j < n; ++j) t.scores_(i, j) = rows[r][static_cast<std::size_t>(j)];
  }
  if (t.scores_ != t.scores_.transpose())
    throw DataError("substitution table is not symmetric");
  return t;
}

double SubstitutionTable::operator()(char a, char b) const {
  const int i = index_[static_cast<unsigned char>(a)];
  const int j = index_[static_cast<unsigned char>(b)];
  if (i < 0 || j < 0)
    throw DataError(std::string("substitution table has no entry for '") + a + "'/'" + b + "'");
  return scores_(i, j);
}

void Scoring::validate() const {
  if (!(gap < 0.0)) throw std::invalid_argument("gap penalty must be negative");
  if (table) return;
  if (!(match > 0.0)) throw std::invalid_argument("match score must be positive");
  if (!(mismatch <= 0.0)) throw std::invalid_argument("mismatch score must be <= 0");
}

double local_align(std::string_view a, std::string_view b, const Scoring& scoring) {
  scoring.validate();
  std::vector<double> prev(b.size() + 1, 0.0), cur(b.size() + 1, 0.0);
  double best = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = 0.0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      double h = prev[j - 1] + scoring.pair(a[i - 1], b[j - 1]);
      h = std::max(h, prev[j] + scoring.gap);
      h = std::max(h, cur[j - 1] + scoring.gap);
      h = std::max(h, 0.0);
      cur[j] = h;
      best = std::max(best, h);
    }
    std::swap(prev, cur);
  }
  return best;
}

std::string_view to_string(MeasureKind k) {
  return k == MeasureKind::CommonSymbols ? "common-symbols" : "local-align";
}

MeasureKind parse_measure_kind(std::string_view name) {
  if (name == "common-symbols") return MeasureKind::CommonSymbols;
  if (name == "local-align") return MeasureKind::LocalAlign;
  throw std::invalid_argument("unknown similarity measure '" + std::string(name) + "'");
}

SimilarityMeasure make_measure(MeasureKind kind, const Scoring& scoring) {
  if (kind == MeasureKind::CommonSymbols)
    return [](std::string_view a, std::string_view b) { return double(common_symbols(a, b)); };
  scoring.validate();
  return [scoring](std::string_view a, std::string_view b) { return local_align(a, b, scoring); };
}

SimilarityMatrix build_similarity_matrix(const Dataset& db, const Bag& query,
                                         const SimilarityMeasure& measure, unsigned threads) {
  SimilarityMatrix m;
  std::vector<const Bag*> rows;
  for (const auto& b : db.bags()) {
    if (!b.label) continue;
    rows.push_back(&b);
    m.bags.push_back(b.id);
    m.labels.push_back(*b.label);
  }
  std::vector<const Sequence*> qseqs;
  for (const auto& [k, s] : query.instances) {
    m.keys.push_back(k);
    qseqs.push_back(&s);
  }
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(m.keys.size());
  m.scores = Eigen::MatrixXd::Zero(nr, nc);
  m.valid.setConstant(nr, nc, false);

  parallel_for(rows.size() * m.keys.size(), threads, [&](std::size_t cell) {
    const auto i = static_cast<Eigen::Index>(cell / m.keys.size());
    const auto k = static_cast<Eigen::Index>(cell % m.keys.size());
    const auto& inst = rows[static_cast<std::size_t>(i)]->instances;
    auto it = inst.find(m.keys[static_cast<std::size_t>(k)]);
    if (it == inst.end()) return;
    m.scores(i, k) = measure(*qseqs[static_cast<std::size_t>(k)], it->second);
    m.valid(i, k) = true;
  });
  return m;
}

void write_similarity_matrix(std::ostream& out, const SimilarityMatrix& m) {
  out << "bag\tlabel";
  for (const auto& k : m.keys) out << '\t' << k;
  out << '\n';
  for (Eigen::Index i = 0; i < m.scores.rows(); ++i) {
    out << m.bags[static_cast<std::size_t>(i)] << '\t' << to_string(m.labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index k = 0; k < m.scores.cols(); ++k) {
      out << '\t';
      if (m.valid(i, k))
        out << m.scores(i, k);
      else
        out << '-';
    }
    out << '\n';
  }
}

WeightVector WeightVector::uniform(const std::vector<InstanceKey>& keys) {
  WeightVector w;
  for (const auto& k : keys) w.weights[k] = 1.0;
  return w;
}

WeightVector WeightVector::read(std::istream& in) {
  WeightVector w;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string key;
    double v;
    if (!(ss >> key) || key.front() == '#') continue;
    if (!(ss >> v)) throw DataError("weights line " + std::to_string(lineno) + ": missing weight");
    if (!(v > 0.0))
      throw DataError("weights line " + std::to_string(lineno) + ": weight must be positive");
    if (!w.weights.emplace(key, v).second)
      throw DataError("weights line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return w;
}

Eigen::VectorXd WeightVector::ordered(const std::vector<InstanceKey>& keys) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(keys.size()));
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto it = weights.find(keys[i]);
    if (it == weights.end()) throw DataError("no weight for query instance '" + keys[i] + "'");
    v(static_cast<Eigen::Index>(i)) = it->second;
  }
  return v;
}

SmsResult aggregate_sms(const SimilarityMatrix& m) {
  return sum_of_maximum_scores(m.scores, m.valid, m.labels);
}

WamsResult aggregate_wams(const SimilarityMatrix& m, const WeightVector& w) {
  return weighted_average_of_maximum_scores(m.scores, m.valid, m.labels, w.ordered(m.keys));
}

std::string_view to_string(Aggregator a) { return a == Aggregator::Sms ? "sms" : "wams"; }

Aggregator parse_aggregator(std::string_view name) {
  if (name == "sms") return Aggregator::Sms;
  if (name == "wams") return Aggregator::Wams;
  throw std::invalid_argument("unknown aggregator '" + std::string(name) + "'");
}

ABSimResult absim_predict(const Dataset& db, const Bag& query, const SimilarityMeasure& measure,
                          Aggregator aggregator, const std::optional<WeightVector>& weights,
                          unsigned threads) {
  if (!db.has_both_classes()) throw DataError("learning database must contain both classes");
  if (query.instances.empty()) throw DataError("query bag '" + query.id + "' is empty");
  ABSimResult r{Label::Positive, build_similarity_matrix(db, query, measure, threads), 0.0, 0.0};
  if (aggregator == Aggregator::Sms) {
    const auto s = aggregate_sms(r.matrix);
    r.label = s.label;
    r.total_pos = s.total_pos;
    r.total_neg = s.total_neg;
  } else {
    const auto s = weights ? aggregate_wams(r.matrix, *weights) : aggregate_wams(r.matrix);
    r.label = s.label;
    r.total_pos = s.avg_pos;
    r.total_neg = s.avg_neg;
  }
  return r;
}

}  // namespace abmil
