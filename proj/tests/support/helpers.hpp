#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "mifade/fading.hpp"
#include "mifade/media.hpp"

namespace mifade::test {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline fading::PathSegment segment(std::string_view medium, double mean, double variance,
                                   fading::LengthDistribution d = fading::LengthDistribution::uniform) {
  fading::PathSegment s;
  s.medium = media::builtin_catalog().at(medium);
  s.mean_length = mean;
  s.length_variance = variance;
  s.distribution = d;
  return s;
}

/// Soil followed by copper, the mixed path used by several checks.
inline fading::PathModel soil_copper_path() {
  fading::PathModel p;
  p.segments = {segment("soil", 10.0, 1.0), segment("copper", 3e-4, 1e-9)};
  return p;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("mifade-test-" + std::string(tag) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace mifade::test
