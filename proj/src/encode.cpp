#include "abmil/encode.hpp"

#include <ostream>
#include <stdexcept>

namespace abmil {

BitVector encode_bits(std::string_view seq, const std::vector<std::string>& motifs) {
  BitVector v(static_cast<Eigen::Index>(motifs.size()));
  for (std::size_t c = 0; c < motifs.size(); ++c)
    v(static_cast<Eigen::Index>(c)) = seq.find(motifs[c]) != std::string_view::npos ? 1 : 0;
  return v;
}

AttributeMatrix encode_group(const RelationGroup& group, const MotifSet& motifs,
                             const std::map<BagId, Label>& labels) {
  if (motifs.empty())
    throw std::invalid_argument("cannot encode group '" + group.key + "' with an empty motif set");
  AttributeMatrix m;
  m.columns = motifs;
  m.cells.resize(static_cast<Eigen::Index>(group.members.size()),
                 static_cast<Eigen::Index>(motifs.size()));
  bool all_labeled = true;
  Eigen::Index r = 0;
  for (const auto& [bag, seq] : group.members) {
    m.rows.push_back({bag, group.key});
    m.cells.row(r++) = encode_bits(seq, motifs.motifs);
    auto it = labels.find(bag);
    if (it == labels.end())
      all_labeled = false;
    else
      m.labels.push_back(it->second);
  }
  if (!all_labeled) m.labels.clear();
  return m;
}

FeatureVector encode_sequence(std::string_view seq, const MotifSet& motifs) {
  if (motifs.empty()) throw std::invalid_argument("cannot encode against an empty motif set");
  return {motifs, encode_bits(seq, motifs.motifs)};
}

std::size_t zero_count(const AttributeMatrix& m) {
  return static_cast<std::size_t>((m.cells.array() == 0).count());
}

double sparsity(const AttributeMatrix& m) {
  if (m.cells.size() == 0) throw std::invalid_argument("sparsity of an empty matrix");
  return static_cast<double>(zero_count(m)) / static_cast<double>(m.cells.size());
}

void write_matrix(std::ostream& out, const AttributeMatrix& m) {
  out << "motifs";
  for (const auto& c : m.columns.motifs) out << '\t' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < m.cells.rows(); ++r) {
    const auto& id = m.rows[static_cast<std::size_t>(r)];
    out << id.bag << ':' << id.key;
    for (Eigen::Index c = 0; c < m.cells.cols(); ++c) out << '\t' << int(m.cells(r, c));
    out << '\n';
  }
}

}  // namespace abmil
