#pragma once

#include <filesystem>
#include <string>

#include "toscadata/parser.hpp"

namespace toscadata::testing {

inline std::filesystem::path fixture(const std::string& relative) {
  return std::filesystem::path(TOSCADATA_FIXTURES) / relative;
}

inline ServiceTemplate load_fixture(const std::string& relative) {
  return load_template(fixture(relative));
}

inline std::string read_fixture(const std::string& relative) {
  return read_text_file(fixture(relative));
}

/// Fresh empty directory below the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("toscadata-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace toscadata::testing
