#include "abmil/seqcore.hpp"

#include <set>

namespace abmil {

std::string to_string(Label l) { return l == Label::Positive ? "+1" : "-1"; }

std::optional<Label> parse_label(std::string_view token) {
  if (token == "+1" || token == "1") return Label::Positive;
  if (token == "-1") return Label::Negative;
  return std::nullopt;
}

Alphabet::Alphabet(std::string_view symbols) {
  for (char c : symbols) {
    if (!symbols_.insert(c).second)
      throw std::invalid_argument(std::string("duplicate alphabet symbol '") + c + "'");
  }
  if (symbols_.empty()) throw std::invalid_argument("empty alphabet");
}

Alphabet Alphabet::infer(const std::vector<std::string_view>& sequences) {
  Alphabet a;
  for (auto s : sequences) a.symbols_.insert(s.begin(), s.end());
  return a;
}

std::size_t Alphabet::first_invalid(std::string_view seq) const {
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (!contains(seq[i])) return i;
  return std::string_view::npos;
}

namespace {

Alphabet observed_alphabet(const std::vector<Bag>& bags) {
  std::vector<std::string_view> seqs;
  for (const auto& b : bags)
    for (const auto& [k, s] : b.instances) seqs.push_back(s);
  return Alphabet::infer(seqs);
}

}  // namespace

Dataset::Dataset(std::vector<Bag> bags, Alphabet alphabet)
    : bags_(std::move(bags)), alphabet_(std::move(alphabet)) {
  std::set<std::string_view> ids;
  for (const auto& b : bags_) {
    if (b.id.empty()) throw DataError("bag with empty id");
    if (!ids.insert(b.id).second) throw DataError("duplicate bag id '" + b.id + "'");
    if (b.instances.empty()) throw DataError("bag '" + b.id + "' has no instances");
    for (const auto& [key, seq] : b.instances) {
      if (key.empty()) throw DataError("bag '" + b.id + "' has an empty instance key");
      if (seq.empty())
        throw DataError("bag '" + b.id + "' instance '" + key + "' has an empty sequence");
      auto pos = alphabet_.first_invalid(seq);
      if (pos != std::string_view::npos)
        throw DataError("bag '" + b.id + "' instance '" + key + "': symbol '" +
                        seq[pos] + "' at position " + std::to_string(pos + 1) +
                        " is not in the alphabet");
    }
  }
}

Dataset::Dataset(std::vector<Bag> bags)
    : Dataset(bags, observed_alphabet(bags)) {}

const Bag* Dataset::find(std::string_view id) const {
  for (const auto& b : bags_)
    if (b.id == id) return &b;
  return nullptr;
}

std::size_t Dataset::count(Label l) const {
  std::size_t n = 0;
  for (const auto& b : bags_)
    if (b.label == l) ++n;
  return n;
}

Dataset Dataset::without(std::size_t index) const {
  Dataset d;
  d.alphabet_ = alphabet_;
  d.bags_.reserve(bags_.size());
  for (std::size_t i = 0; i < bags_.size(); ++i)
    if (i != index) d.bags_.push_back(bags_[i]);
  return d;
}

std::vector<RelationGroup> relation_groups(const Dataset& db) {
  std::map<InstanceKey, RelationGroup> groups;
  for (const auto& b : db.bags()) {
    for (const auto& [key, seq] : b.instances) {
      auto& g = groups[key];
      g.key = key;
      g.members.emplace(b.id, seq);
    }
  }
  std::vector<RelationGroup> out;
  out.reserve(groups.size());
  for (auto& [k, g] : groups) out.push_back(std::move(g));
  return out;
}

RelationGroup relation_group(const Dataset& db, const InstanceKey& key) {
  RelationGroup g{key, {}};
  for (const auto& b : db.bags()) {
    auto it = b.instances.find(key);
    if (it != b.instances.end()) g.members.emplace(b.id, it->second);
  }
  return g;
}

std::map<BagId, Label> label_map(const Dataset& db) {
  std::map<BagId, Label> out;
  for (const auto& b : db.bags())
    if (b.label) out.emplace(b.id, *b.label);
  return out;
}

}  // namespace abmil
