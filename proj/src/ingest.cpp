#include "abmil/ingest.hpp"

#include <fstream>
#include <sstream>

namespace abmil {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) out.emplace_back(trim(field));
  return out;
}

void check_symbols(const Bag& bag, const Alphabet& alphabet, const std::string& source) {
  for (const auto& [key, seq] : bag.instances) {
    auto pos = alphabet.first_invalid(seq);
    if (pos != std::string_view::npos)
      throw DataError(source + ": record '" + key + "': symbol '" + seq[pos] +
                      "' at position " + std::to_string(pos + 1) +
                      " is not in the alphabet");
  }
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw DataError("cannot open manifest " + manifest.string());
  const fs::path base = manifest.parent_path();

  std::vector<ManifestEntry> entries;
  std::set<BagId> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_tabs(std::string(t));
    const std::string where = manifest.string() + ":" + std::to_string(lineno);
    if (fields.size() != 3)
      throw DataError(where + ": expected 3 tab-separated fields, got " +
                      std::to_string(fields.size()));
    ManifestEntry e;
    e.id = fields[0];
    if (e.id.empty()) throw DataError(where + ": empty bag id");
    if (fields[1] != "?") {
      e.label = parse_label(fields[1]);
      if (!e.label) throw DataError(where + ": invalid label '" + fields[1] + "'");
    }
    e.path = fs::path(fields[2]).is_absolute() ? fs::path(fields[2]) : base / fields[2];
    if (!fs::exists(e.path)) throw DataError(where + ": no such file " + e.path.string());
    if (!seen.insert(e.id).second) throw DataError(where + ": duplicate bag id '" + e.id + "'");
    entries.push_back(std::move(e));
  }
  return entries;
}

Bag read_fasta_bag(std::istream& in, BagId id, const std::string& source_name) {
  Bag bag{std::move(id), std::nullopt, {}};
  std::string line, key, body;
  std::size_t lineno = 0, header_line = 0;
  bool in_record = false;

  auto flush = [&] {
    if (!in_record) return;
    if (body.empty())
      throw DataError(source_name + ":" + std::to_string(header_line) + ": record '" + key +
                      "' has an empty sequence");
    if (!bag.instances.emplace(key, body).second)
      throw DataError(source_name + ":" + std::to_string(header_line) +
                      ": duplicate record key '" + key + "'");
    body.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.front() == '>') {
      flush();
      auto header = trim(std::string_view(line).substr(1));
      key = std::string(header.substr(0, header.find_first_of(" \t")));
      if (key.empty())
        throw DataError(source_name + ":" + std::to_string(lineno) + ": empty record header");
      header_line = lineno;
      in_record = true;
      continue;
    }
    auto t = trim(line);
    if (t.empty()) continue;
    if (!in_record)
      throw DataError(source_name + ":" + std::to_string(lineno) +
                      ": sequence data before the first '>' header");
    for (char c : t)
      if (c != ' ' && c != '\t' && c != '\r') body.push_back(c);
  }
  flush();
  if (bag.instances.empty()) throw DataError(source_name + ": no FASTA records");
  return bag;
}

namespace {

Bag load_bag_file(const fs::path& path, BagId id) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_fasta_bag(in, std::move(id), path.string());
}

}  // namespace

Dataset load_dataset(const fs::path& manifest, const std::optional<Alphabet>& alphabet) {
  std::vector<Bag> bags;
  for (auto& e : read_manifest(manifest)) {
    Bag b = load_bag_file(e.path, e.id);
    b.label = e.label;
    if (alphabet) check_symbols(b, *alphabet, e.path.string());
    bags.push_back(std::move(b));
  }
  if (bags.empty()) throw DataError(manifest.string() + ": manifest lists no bags");
  return alphabet ? Dataset(std::move(bags), *alphabet) : Dataset(std::move(bags));
}

Bag load_query_bag(const fs::path& path, const std::optional<Alphabet>& alphabet) {
  if (!fs::exists(path)) throw DataError("no such file " + path.string());
  Bag b = load_bag_file(path, path.stem().string());
  if (alphabet) check_symbols(b, *alphabet, path.string());
  return b;
}

void write_fasta(std::ostream& out, const Bag& bag, std::size_t line_width) {
  for (const auto& [key, seq] : bag.instances) {
    out << '>' << key << '\n';
    for (std::size_t i = 0; i < seq.size(); i += line_width)
      out << seq.substr(i, line_width) << '\n';
  }
}

fs::path write_dataset(const Dataset& db, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path manifest = dir / "manifest.tsv";
  std::ofstream m(manifest);
  if (!m) throw DataError("cannot write " + manifest.string());
  m << "# bag-id\tlabel\tpath\n";
  for (const auto& b : db.bags()) {
    const std::string file = b.id + ".fasta";
    std::ofstream f(dir / file);
    if (!f) throw DataError("cannot write " + (dir / file).string());
    write_fasta(f, b);
    m << b.id << '\t' << (b.label ? to_string(*b.label) : "?") << '\t' << file << '\n';
  }
  return manifest;
}

}  // namespace abmil
