#include "stochwave/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "stochwave/errors.hpp"

namespace stochwave {

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (path.has_parent_path() && !fs::exists(dir, ec)) {
    throw IoError("output directory does not exist: " + dir.string());
  }
  std::random_device rd;
  fs::path tmp = dir / (path.filename().string() + ".tmp" +
                        std::to_string(rd() % 1000000));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename temporary file onto " + path.string());
  }
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace stochwave
