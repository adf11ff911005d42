#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "abmil/seqcore.hpp"

namespace abmil {

struct ManifestEntry {
  BagId id;
  std::optional<Label> label;  // nullopt for "?"
  std::filesystem::path path;  // resolved against the manifest directory
};

/// Tab-separated `bag-id  label  path` rows; `#` starts a comment line.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

/// Parses FASTA records into a bag. The header token up to the first
/// whitespace is the instance key; body whitespace is dropped.
Bag read_fasta_bag(std::istream& in, BagId id, const std::string& source_name);

Dataset load_dataset(const std::filesystem::path& manifest,
                     const std::optional<Alphabet>& alphabet = std::nullopt);

/// Unlabeled bag named after the file stem.
Bag load_query_bag(const std::filesystem::path& path,
                   const std::optional<Alphabet>& alphabet = std::nullopt);

void write_fasta(std::ostream& out, const Bag& bag, std::size_t line_width = 60);

/// Writes `manifest.tsv` plus one `<bag-id>.fasta` per bag into `dir`.
/// Returns the manifest path.
std::filesystem::path write_dataset(const Dataset& db, const std::filesystem::path& dir);

}  // namespace abmil
