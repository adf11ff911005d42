#include "abmil/classify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace abmil {

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::NaiveBayes: return "naive-bayes";
    case ClassifierKind::Knn: return "knn";
    case ClassifierKind::DecisionTree: return "decision-tree";
  }
  return "?";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
  if (name == "naive-bayes") return ClassifierKind::NaiveBayes;
  if (name == "knn") return ClassifierKind::Knn;
  if (name == "decision-tree") return ClassifierKind::DecisionTree;
  throw std::invalid_argument("unknown classifier kind '" + std::string(name) + "'");
}

namespace {

using detail::ConstantModel;
using detail::KnnModel;
using detail::NaiveBayesModel;
using detail::TreeModel;
using detail::TreeNode;

int class_index(Label l) { return l == Label::Positive ? 0 : 1; }
Label index_label(int i) { return i == 0 ? Label::Positive : Label::Negative; }

// ---- naive Bayes ----------------------------------------------------------

NaiveBayesModel fit_nb(const BitMatrix& rows, const std::vector<Label>& labels) {
  NaiveBayesModel m;
  for (auto& o : m.ones) o = Eigen::VectorXi::Zero(rows.cols());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const int c = class_index(labels[static_cast<std::size_t>(r)]);
    ++m.count[c];
    m.ones[c] += rows.row(r).transpose().cast<int>();
  }
  return m;
}

Prediction predict_nb(const NaiveBayesModel& m, const BitVector& x) {
  const double n = static_cast<double>(m.count[0] + m.count[1]);
  double logp[2];
  for (int c = 0; c < 2; ++c) {
    const double nc = static_cast<double>(m.count[c]);
    double lp = std::log(nc / n);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double p1 = (m.ones[c](j) + 1.0) / (nc + 2.0);
      lp += std::log(x(j) ? p1 : 1.0 - p1);
    }
    logp[c] = lp;
  }
  const double hi = std::max(logp[0], logp[1]);
  const double e0 = std::exp(logp[0] - hi), e1 = std::exp(logp[1] - hi);
  const double post_pos = e0 / (e0 + e1);
  if (logp[0] > logp[1]) return {Label::Positive, post_pos};
  if (logp[1] > logp[0]) return {Label::Negative, 1.0 - post_pos};
  return {Label::Negative, 0.5};
}

// ---- k nearest neighbours -------------------------------------------------

Prediction predict_knn(const KnnModel& m, const BitVector& x) {
  const auto n = static_cast<std::size_t>(m.rows.rows());
  std::vector<Eigen::Index> dist(n);
  for (std::size_t r = 0; r < n; ++r) dist[r] = hamming(m.rows.row(static_cast<Eigen::Index>(r)), x);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.k), n);
  std::size_t votes[2] = {0, 0};
  // Inverse-distance weight; exact matches count as infinite weight and are
  // tallied separately.
  std::size_t exact[2] = {0, 0};
  double inv[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t r = order[i];
    const int c = class_index(m.labels[r]);
    ++votes[c];
    if (dist[r] == 0)
      ++exact[c];
    else
      inv[c] += 1.0 / static_cast<double>(dist[r]);
  }
  int winner;
  if (votes[0] != votes[1])
    winner = votes[0] > votes[1] ? 0 : 1;
  else if (exact[0] != exact[1])
    winner = exact[0] > exact[1] ? 0 : 1;
  else if (inv[0] != inv[1])
    winner = inv[0] > inv[1] ? 0 : 1;
  else
    winner = 1;
  return {index_label(winner), static_cast<double>(votes[winner]) / static_cast<double>(k)};
}

// ---- decision tree ----------------------------------------------------------

double entropy(std::size_t p, std::size_t n) {
  const double t = static_cast<double>(p + n);
  double h = 0.0;
  for (std::size_t c : {p, n}) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / t;
    h -= q * std::log2(q);
  }
  return h;
}

class TreeBuilder {
 public:
  TreeBuilder(const BitMatrix& rows, const std::vector<Label>& labels)
      : rows_(rows), labels_(labels) {}

  TreeModel build() {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(rows_.rows()));
    std::iota(all.begin(), all.end(), 0);
    grow(all);
    return std::move(tree_);
  }

 private:
  int grow(const std::vector<Eigen::Index>& idx) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::size_t p = 0, n = 0;
    for (auto r : idx) (labels_[static_cast<std::size_t>(r)] == Label::Positive ? p : n)++;
    tree_.nodes[id].positives = p;
    tree_.nodes[id].negatives = n;
    if (p == 0 || n == 0) return id;

    const double parent = entropy(p, n);
    int best = -1;
    double best_gain = -1.0;
    for (Eigen::Index j = 0; j < rows_.cols(); ++j) {
      std::size_t cnt[2][2] = {{0, 0}, {0, 0}};  // [value][class]
      for (auto r : idx)
        ++cnt[rows_(r, j) ? 1 : 0][labels_[static_cast<std::size_t>(r)] == Label::Positive ? 0 : 1];
      const std::size_t n0 = cnt[0][0] + cnt[0][1], n1 = cnt[1][0] + cnt[1][1];
      if (n0 == 0 || n1 == 0) continue;
      const double total = static_cast<double>(idx.size());
      const double gain = parent - (static_cast<double>(n0) / total) * entropy(cnt[0][0], cnt[0][1]) -
                          (static_cast<double>(n1) / total) * entropy(cnt[1][0], cnt[1][1]);
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) return id;  // identical rows with mixed labels

    std::vector<Eigen::Index> side[2];
    for (auto r : idx) side[rows_(r, best) ? 1 : 0].push_back(r);
    tree_.nodes[id].feature = best;
    const int left = grow(side[0]);
    const int right = grow(side[1]);
    tree_.nodes[id].child[0] = left;
    tree_.nodes[id].child[1] = right;
    return id;
  }

  const BitMatrix& rows_;
  const std::vector<Label>& labels_;
  TreeModel tree_;
};

Prediction predict_tree(const TreeModel& m, const BitVector& x) {
  const TreeNode* node = &m.nodes.at(0);
  while (node->feature >= 0) node = &m.nodes.at(node->child[x(node->feature) ? 1 : 0]);
  const double total = static_cast<double>(node->positives + node->negatives);
  if (node->positives > node->negatives)
    return {Label::Positive, (node->positives + 1.0) / (total + 2.0)};
  return {Label::Negative, (node->negatives + 1.0) / (total + 2.0)};
}

}  // namespace

TrainedModel fit(const ClassifierSpec& spec, const BitMatrix& rows, const std::vector<Label>& labels,
                 const std::vector<std::string>& columns) {
  if (rows.rows() == 0) throw std::invalid_argument("cannot fit a classifier on zero rows");
  if (static_cast<std::size_t>(rows.rows()) != labels.size())
    throw std::invalid_argument("training matrix is not labeled row by row");
  if (static_cast<std::size_t>(rows.cols()) != columns.size())
    throw std::invalid_argument("column names do not match matrix width");

  const bool one_class = std::all_of(labels.begin(), labels.end(),
                                     [&](Label l) { return l == labels.front(); });
  switch (spec.kind) {
    case ClassifierKind::Knn: {
      if (spec.k < 1) throw std::invalid_argument("knn requires k >= 1");
      return {spec.kind, columns, KnnModel{spec.k, rows, labels}};
    }
    case ClassifierKind::NaiveBayes:
      if (one_class) return {spec.kind, columns, ConstantModel{labels.front()}};
      return {spec.kind, columns, fit_nb(rows, labels)};
    case ClassifierKind::DecisionTree:
      if (one_class) return {spec.kind, columns, ConstantModel{labels.front()}};
      return {spec.kind, columns, TreeBuilder(rows, labels).build()};
  }
  throw std::invalid_argument("unknown classifier kind");
}

TrainedModel fit(const ClassifierSpec& spec, const AttributeMatrix& m) {
  if (!m.labeled()) throw std::invalid_argument("cannot fit on an unlabeled matrix");
  return fit(spec, m.cells, m.labels, m.columns.motifs);
}

Prediction TrainedModel::predict(const FeatureVector& v) const {
  if (v.columns.motifs != columns_)
    throw std::invalid_argument("feature vector was encoded against a different motif set");
  return predict(v.bits);
}

Prediction TrainedModel::predict(const BitVector& bits) const {
  if (static_cast<std::size_t>(bits.size()) != columns_.size())
    throw std::invalid_argument("feature vector length does not match the model");
  return std::visit(
      [&](const auto& s) -> Prediction {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantModel>)
          return {s.label, 1.0};
        else if constexpr (std::is_same_v<T, NaiveBayesModel>)
          return predict_nb(s, bits);
        else if constexpr (std::is_same_v<T, KnnModel>)
          return predict_knn(s, bits);
        else
          return predict_tree(s, bits);
      },
      state_);
}

// ---- serialization ----------------------------------------------------------

namespace {

constexpr std::string_view kMagic = "abmil-model";
constexpr int kVersion = 1;

std::string bits_string(const BitVector& v) {
  std::string s;
  for (Eigen::Index j = 0; j < v.size(); ++j) s.push_back(v(j) ? '1' : '0');
  return s;
}

BitVector parse_bits(const std::string& s, std::size_t width) {
  if (s.size() != width) throw DataError("model dump: bit row has wrong width");
  BitVector v(static_cast<Eigen::Index>(width));
  for (std::size_t j = 0; j < width; ++j) {
    if (s[j] != '0' && s[j] != '1') throw DataError("model dump: malformed bit row");
    v(static_cast<Eigen::Index>(j)) = s[j] == '1';
  }
  return v;
}

template <typename T>
T read_field(std::istream& in, std::string_view name) {
  std::string tag;
  T value{};
  if (!(in >> tag) || tag != name || !(in >> value))
    throw DataError("model dump: expected field '" + std::string(name) + "'");
  return value;
}

Label read_label(std::istream& in) {
  std::string tok;
  in >> tok;
  auto l = parse_label(tok);
  if (!l) throw DataError("model dump: bad label '" + tok + "'");
  return *l;
}

}  // namespace

void TrainedModel::save(std::ostream& out) const {
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << to_string(kind_) << '\n';
  out << "columns " << columns_.size() << '\n';
  for (const auto& c : columns_) out << c << '\n';
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantModel>) {
          out << "state constant\nlabel " << to_string(s.label) << '\n';
        } else if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          out << "state naive-bayes\n";
          for (int c = 0; c < 2; ++c) {
            out << "class " << to_string(index_label(c)) << ' ' << s.count[c];
            for (Eigen::Index j = 0; j < s.ones[c].size(); ++j) out << ' ' << s.ones[c](j);
            out << '\n';
          }
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          out << "state knn\nk " << s.k << "\nrows " << s.rows.rows() << '\n';
          for (Eigen::Index r = 0; r < s.rows.rows(); ++r)
            out << to_string(s.labels[static_cast<std::size_t>(r)]) << ' '
                << bits_string(s.rows.row(r)) << '\n';
        } else {
          out << "state decision-tree\nnodes " << s.nodes.size() << '\n';
          for (const auto& n : s.nodes)
            out << n.feature << ' ' << n.child[0] << ' ' << n.child[1] << ' ' << n.positives << ' '
                << n.negatives << '\n';
        }
      },
      state_);
}

TrainedModel TrainedModel::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic)
    throw DataError("not an abmil model dump");
  if (version != kVersion)
    throw DataError("unsupported model dump version " + std::to_string(version));
  const auto kind = parse_classifier_kind(read_field<std::string>(in, "kind"));
  const auto ncols = read_field<std::size_t>(in, "columns");
  std::vector<std::string> columns(ncols);
  for (auto& c : columns)
    if (!(in >> c)) throw DataError("model dump: truncated column list");

  const auto state = read_field<std::string>(in, "state");
  if (state == "constant") {
    std::string tag;
    in >> tag;
    return {kind, std::move(columns), ConstantModel{read_label(in)}};
  }
  if (state == "naive-bayes") {
    NaiveBayesModel m;
    for (int c = 0; c < 2; ++c) {
      std::string tag;
      in >> tag;
      if (tag != "class" || read_label(in) != index_label(c))
        throw DataError("model dump: malformed naive-bayes class line");
      in >> m.count[c];
      m.ones[c].resize(static_cast<Eigen::Index>(ncols));
      for (std::size_t j = 0; j < ncols; ++j) in >> m.ones[c](static_cast<Eigen::Index>(j));
    }
    if (!in) throw DataError("model dump: truncated naive-bayes state");
    return {kind, std::move(columns), std::move(m)};
  }
  if (state == "knn") {
    KnnModel m;
    m.k = read_field<int>(in, "k");
    const auto nrows = read_field<Eigen::Index>(in, "rows");
    m.rows.resize(nrows, static_cast<Eigen::Index>(ncols));
    for (Eigen::Index r = 0; r < nrows; ++r) {
      m.labels.push_back(read_label(in));
      std::string bits;
      in >> bits;
      m.rows.row(r) = parse_bits(bits, ncols);
    }
    return {kind, std::move(columns), std::move(m)};
  }
  if (state == "decision-tree") {
    TreeModel m;
    m.nodes.resize(read_field<std::size_t>(in, "nodes"));
    for (auto& n : m.nodes) in >> n.feature >> n.child[0] >> n.child[1] >> n.positives >> n.negatives;
    if (!in || m.nodes.empty()) throw DataError("model dump: truncated decision-tree state");
    return {kind, std::move(columns), std::move(m)};
  }
  throw DataError("model dump: unknown state '" + state + "'");
}

}  // namespace abmil
