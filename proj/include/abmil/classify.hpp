#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "abmil/encode.hpp"

namespace abmil {

enum class ClassifierKind { NaiveBayes, Knn, DecisionTree };

std::string_view to_string(ClassifierKind k);
/// "naive-bayes", "knn", "decision-tree"; throws std::invalid_argument.
ClassifierKind parse_classifier_kind(std::string_view name);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Knn;
  int k = 1;  // knn only
};

struct Prediction {
  Label label;
  double confidence;  // score of `label`; 0.5 is indifferent
  bool operator==(const Prediction&) const = default;
};

namespace detail {

struct ConstantModel {
  Label label;
};

// Bernoulli naive Bayes with add-one smoothing of the per-feature rates.
struct NaiveBayesModel {
  std::size_t count[2] = {0, 0};  // [positive, negative]
  Eigen::VectorXi ones[2];
};

struct KnnModel {
  int k = 1;
  BitMatrix rows;
  std::vector<Label> labels;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  int child[2] = {-1, -1};  // indexed by feature value
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

}  // namespace detail

/// A fitted classifier bound to the motif columns it was trained on.
class TrainedModel {
 public:
  using State = std::variant<detail::ConstantModel, detail::NaiveBayesModel, detail::KnnModel,
                             detail::TreeModel>;

  TrainedModel(ClassifierKind kind, std::vector<std::string> columns, State state)
      : kind_(kind), columns_(std::move(columns)), state_(std::move(state)) {}

  ClassifierKind kind() const { return kind_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const State& state() const { return state_; }
  bool is_constant() const { return std::holds_alternative<detail::ConstantModel>(state_); }

  /// Throws std::invalid_argument when `v` was encoded against other motifs.
  Prediction predict(const FeatureVector& v) const;
  /// Length-checked prediction on a raw bit row.
  Prediction predict(const BitVector& bits) const;

  /// Versioned line-oriented dump.
  void save(std::ostream& out) const;
  static TrainedModel load(std::istream& in);

 private:
  ClassifierKind kind_;
  std::vector<std::string> columns_;
  State state_;
};

/// Deterministic fit. Requires a labeled matrix. One-class data yields a
/// constant model for naive-bayes and decision-tree.
TrainedModel fit(const ClassifierSpec& spec, const AttributeMatrix& m);

/// Same, on bare rows; `columns` names the features.
TrainedModel fit(const ClassifierSpec& spec, const BitMatrix& rows, const std::vector<Label>& labels,
                 const std::vector<std::string>& columns);

inline Prediction predict(const TrainedModel& model, const FeatureVector& v) {
  return model.predict(v);
}

}  // namespace abmil
