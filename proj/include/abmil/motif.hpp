#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abmil/seqcore.hpp"

namespace abmil {

/// Thresholds for discriminative motif mining.
///
/// A substring w qualifies for class F when at least `alpha` of the F
/// sequences contain it and at most `beta` of the other sequences do.
/// Length bounds are inclusive; `max_len == nullopt` means unbounded.
struct MotifParams {
  double alpha = 1.0;
  double beta = 0.5;
  std::size_t min_len = 2;
  std::optional<std::size_t> max_len;

  void validate() const;
  bool operator==(const MotifParams&) const = default;
};

enum class MotifSetting { S1, S2, S3, S4, S5 };

/// S1 (1, .5), S2 (1, 1), S3 (.5, 1), S4 (0, 1), S5 (1, 0).
MotifParams setting_params(MotifSetting s);
/// Accepts "S1".."S5"; throws std::invalid_argument otherwise.
MotifParams setting_params(std::string_view name);

inline constexpr std::string_view kUnionSource = "union";

struct MotifSet {
  std::vector<std::string> motifs;
  MotifParams params;
  std::string source_key;

  std::size_t size() const { return motifs.size(); }
  bool empty() const { return motifs.empty(); }
  bool operator==(const MotifSet&) const = default;
};

/// Length first, then lexicographic.
bool canonical_less(std::string_view a, std::string_view b);

/// Minimal discriminative motifs of a relation group.
///
/// Rates count each sequence once. The result is the union over both
/// classes of qualifying substrings with no qualifying proper substring
/// (of length >= min_len), sorted canonically. Throws DataError when the
/// group holds a single class and beta < 1, or when a member is unlabeled.
MotifSet extract_motifs(const RelationGroup& group, const std::map<BagId, Label>& labels,
                        const MotifParams& params);

/// Deduplicated union; keeps first-appearance order so per-group column
/// blocks stay contiguous.
MotifSet union_motifs(const std::vector<MotifSet>& sets);

/// One motif per line.
void write_motifs(std::ostream& out, const MotifSet& set);
MotifSet read_motifs(std::istream& in);

}  // namespace abmil
