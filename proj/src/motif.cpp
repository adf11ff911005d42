#include "abmil/motif.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace abmil {

void MotifParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0,1]");
  if (min_len < 1) throw std::invalid_argument("min motif length must be >= 1");
  if (max_len && *max_len < min_len)
    throw std::invalid_argument("max motif length must be >= min motif length");
}

MotifParams setting_params(MotifSetting s) {
  switch (s) {
    case MotifSetting::S1: return {1.0, 0.5, 2, std::nullopt};
    case MotifSetting::S2: return {1.0, 1.0, 2, std::nullopt};
    case MotifSetting::S3: return {0.5, 1.0, 2, std::nullopt};
    case MotifSetting::S4: return {0.0, 1.0, 2, std::nullopt};
    case MotifSetting::S5: return {1.0, 0.0, 2, std::nullopt};
  }
  throw std::invalid_argument("unknown motif setting");
}

MotifParams setting_params(std::string_view name) {
  static constexpr std::string_view names[] = {"S1", "S2", "S3", "S4", "S5"};
  for (std::size_t i = 0; i < std::size(names); ++i)
    if (names[i] == name) return setting_params(static_cast<MotifSetting>(i));
  throw std::invalid_argument("unknown motif setting '" + std::string(name) + "'");
}

bool canonical_less(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

namespace {

struct Occurrence {
  std::uint32_t seq;
  std::uint32_t pos;
};

using Level = std::unordered_map<std::string_view, std::vector<Occurrence>>;

class Miner {
 public:
  Miner(std::vector<std::string_view> seqs, std::vector<int> cls, const MotifParams& p)
      : seqs_(std::move(seqs)), cls_(std::move(cls)), p_(p) {
    for (int c : cls_) ++n_[c];
  }

  std::vector<std::string> run() {
    Level level;
    for (std::uint32_t s = 0; s < seqs_.size(); ++s) {
      const auto sv = seqs_[s];
      for (std::size_t i = 0; i + p_.min_len <= sv.size(); ++i)
        level[sv.substr(i, p_.min_len)].push_back({s, static_cast<std::uint32_t>(i)});
    }

    std::vector<std::string> found;
    std::size_t len = p_.min_len;
    while (!level.empty()) {
      // Candidates that may still grow into a qualifying motif. A longer
      // string is a candidate only if both its prefix and suffix are open:
      // otherwise it is dead (no class reaches alpha) or contains a
      // qualifying proper substring.
      std::unordered_set<std::string_view> open;
      for (const auto& [w, occ] : level) {
        auto [c0, c1] = support(occ);
        if (qualifies(c0, c1)) {
          found.emplace_back(w);
        } else if (alive(c0, c1)) {
          open.insert(w);
        }
      }
      if (p_.max_len && len >= *p_.max_len) break;

      Level next;
      for (const auto& w : open) {
        for (const auto& o : level.at(w)) {
          const auto sv = seqs_[o.seq];
          if (o.pos + len >= sv.size()) continue;
          auto ext = sv.substr(o.pos, len + 1);
          if (!open.count(ext.substr(1))) continue;
          next[ext].push_back(o);
        }
      }
      level = std::move(next);
      ++len;
    }
    std::sort(found.begin(), found.end(), canonical_less);
    return found;
  }

 private:
  std::pair<std::size_t, std::size_t> support(const std::vector<Occurrence>& occ) const {
    std::size_t c[2] = {0, 0};
    std::uint32_t last = UINT32_MAX;
    for (const auto& o : occ) {
      if (o.seq == last) continue;
      last = o.seq;
      ++c[cls_[o.seq]];
    }
    return {c[0], c[1]};
  }

  bool frequent(std::size_t count, int cls) const {
    // Absent classes have a vacuous rate of zero.
    if (n_[cls] == 0) return p_.alpha <= 0.0;
    return static_cast<double>(count) >= p_.alpha * static_cast<double>(n_[cls]);
  }
  bool rare(std::size_t count, int cls) const {
    if (n_[cls] == 0) return true;
    return static_cast<double>(count) <= p_.beta * static_cast<double>(n_[cls]);
  }
  bool qualifies(std::size_t c0, std::size_t c1) const {
    return (frequent(c0, 0) && rare(c1, 1)) || (frequent(c1, 1) && rare(c0, 0));
  }
  bool alive(std::size_t c0, std::size_t c1) const { return frequent(c0, 0) || frequent(c1, 1); }

  std::vector<std::string_view> seqs_;
  std::vector<int> cls_;
  MotifParams p_;
  std::size_t n_[2] = {0, 0};
};

}  // namespace

MotifSet extract_motifs(const RelationGroup& group, const std::map<BagId, Label>& labels,
                        const MotifParams& params) {
  params.validate();
  std::vector<std::string_view> seqs;
  std::vector<int> cls;
  bool seen[2] = {false, false};
  for (const auto& [bag, seq] : group.members) {
    auto it = labels.find(bag);
    if (it == labels.end())
      throw DataError("group '" + group.key + "': bag '" + bag + "' has no label");
    const int c = it->second == Label::Positive ? 0 : 1;
    seen[c] = true;
    seqs.push_back(seq);
    cls.push_back(c);
  }
  if (seqs.empty()) throw DataError("group '" + group.key + "' is empty");
  if (!(seen[0] && seen[1]) && params.beta < 1.0)
    throw DataError("group '" + group.key + "': cannot discriminate a single-class group");

  MotifSet out;
  out.params = params;
  out.source_key = group.key;
  out.motifs = Miner(std::move(seqs), std::move(cls), params).run();
  return out;
}

MotifSet union_motifs(const std::vector<MotifSet>& sets) {
  if (sets.empty()) throw std::invalid_argument("union of an empty list of motif sets");
  MotifSet out;
  out.params = sets.front().params;
  out.source_key = std::string(kUnionSource);
  std::set<std::string_view> seen;
  for (const auto& s : sets)
    for (const auto& m : s.motifs)
      if (seen.insert(m).second) out.motifs.push_back(m);
  return out;
}

void write_motifs(std::ostream& out, const MotifSet& set) {
  for (const auto& m : set.motifs) out << m << '\n';
}

MotifSet read_motifs(std::istream& in) {
  MotifSet s;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) s.motifs.push_back(line);
  }
  return s;
}

}  // namespace abmil
