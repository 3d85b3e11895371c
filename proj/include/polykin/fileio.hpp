#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace polykin {

/// File that cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] std::string read_file(const std::filesystem::path& p);

/// Writes to a temporary sibling and renames it over p.
void write_file_atomic(const std::filesystem::path& p, const std::string& content);

}  // namespace polykin
