#pragma once

#include "abmil/seqcore.hpp"

namespace abmil::testing {

// Four labeled bags of two positional instances each, plus one query bag.
inline Dataset running_example() {
  std::vector<Bag> bags = {
      {"B1", Label::Positive, {{"1", "ABMSCD"}, {"2", "EFNOGH"}}},
      {"B2", Label::Positive, {{"1", "EABZQCD"}, {"2", "CCGHDDEF"}}},
      {"B3", Label::Negative, {{"1", "CDXYZ"}, {"2", "GHWXY"}}},
      {"B4", Label::Negative, {{"1", "ABIJYZ"}, {"2", "EFYRTAB"}}},
  };
  return Dataset(std::move(bags));
}

inline Bag running_query() { return {"Q", std::nullopt, {{"1", "ABWXCD"}, {"2", "EFXYGHN"}}}; }

inline Dataset flipped(const Dataset& db) {
  std::vector<Bag> bags = db.bags();
  for (auto& b : bags)
    if (b.label) b.label = flip(*b.label);
  return Dataset(std::move(bags), db.alphabet());
}

}  // namespace abmil::testing
