#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abmil {

/// Raised for malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Label : int { Negative = -1, Positive = 1 };

inline Label flip(Label l) {
  return l == Label::Positive ? Label::Negative : Label::Positive;
}

/// "+1" / "-1".
std::string to_string(Label l);
std::optional<Label> parse_label(std::string_view token);

using Sequence = std::string;
using InstanceKey = std::string;
using BagId = std::string;

/// Finite ordered set of single-character symbols.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string_view symbols);

  static Alphabet infer(const std::vector<std::string_view>& sequences);

  bool contains(char c) const { return symbols_.count(c) != 0; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  std::string symbols() const { return {symbols_.begin(), symbols_.end()}; }

  /// Position of the first symbol not in the alphabet, or npos.
  std::size_t first_invalid(std::string_view seq) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::set<char> symbols_;
};

struct Bag {
  BagId id;
  std::optional<Label> label;
  std::map<InstanceKey, Sequence> instances;

  bool operator==(const Bag&) const = default;
};

class Dataset {
 public:
  Dataset() = default;
  /// Validates ids, instance counts and symbols; throws DataError.
  /// Class balance is checked by the learners, not here.
  Dataset(std::vector<Bag> bags, Alphabet alphabet);
  /// Alphabet inferred from the union of observed symbols.
  explicit Dataset(std::vector<Bag> bags);

  const std::vector<Bag>& bags() const { return bags_; }
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return bags_.size(); }

  const Bag* find(std::string_view id) const;
  std::size_t count(Label l) const;
  bool has_both_classes() const {
    return count(Label::Positive) > 0 && count(Label::Negative) > 0;
  }

  Dataset without(std::size_t index) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<Bag> bags_;
  Alphabet alphabet_;
};

/// All sequences across bags sharing one instance key.
struct RelationGroup {
  InstanceKey key;
  std::map<BagId, Sequence> members;

  bool operator==(const RelationGroup&) const = default;
};

/// One group per distinct key, keys sorted, members sorted by bag id.
std::vector<RelationGroup> relation_groups(const Dataset& db);

/// Group for a single key; only bags holding the key appear.
RelationGroup relation_group(const Dataset& db, const InstanceKey& key);

/// bag-id -> label for every labeled bag.
std::map<BagId, Label> label_map(const Dataset& db);

}  // namespace abmil
