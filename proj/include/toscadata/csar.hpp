#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "toscadata/model.hpp"

namespace toscadata {

inline constexpr const char* kToscaMetaPath = "TOSCA-Metadata/TOSCA.meta";

struct CsarArchive {
  std::string entry_definitions;
  std::map<std::string, Bytes> files;  // excludes TOSCA.meta
  std::map<std::string, std::string> metadata;

  bool operator==(const CsarArchive&) const = default;
};

/// Zip archive with stored entries in sorted order and a fixed timestamp,
/// so equal inputs give equal bytes.
Bytes pack_csar(const std::string& entry, const std::map<std::string, Bytes>& files);

/// Accepts stored and deflated entries.
CsarArchive unpack_csar(const Bytes& archive);

bool looks_like_zip(std::string_view data);

/// Packs every regular file below `dir`. With no entry given, the single
/// top-level .yaml/.yml file is used.
Bytes pack_directory(const std::filesystem::path& dir, std::string entry = {});

/// Writes the archive's files (and TOSCA.meta) below `dir`.
void unpack_to_directory(const CsarArchive& archive, const std::filesystem::path& dir);

std::map<std::string, Bytes> read_tree(const std::filesystem::path& dir);

}  // namespace toscadata
