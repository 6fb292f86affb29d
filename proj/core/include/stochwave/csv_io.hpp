#pragma once

#include <filesystem>
#include <string>

namespace stochwave {

/// Writes content to path atomically: temp file in the same directory, then
/// rename. The target is never left partially written. Throws IoError.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// Shortest round-trip decimal with up to 17 significant digits ("%.17g").
std::string format_g17(double x);

}  // namespace stochwave
