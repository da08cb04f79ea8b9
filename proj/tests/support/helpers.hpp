#pragma once

#include <cstddef>
#include <filesystem>
#include <unistd.h>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "wum/features.hpp"
#include "wum/sessionizer.hpp"

namespace testing_util {

inline oracle::Matrix to_rows(const wum::DenseMatrix& m) {
  oracle::Matrix out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  }
  return out;
}

inline wum::DenseMatrix from_rows(const oracle::Matrix& rows) {
  wum::DenseMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

inline wum::Session make_session(std::vector<wum::UrlId> urls, std::uint32_t user = 1,
                                 std::uint32_t ordinal = 1) {
  wum::Session s;
  s.user = {user, user};
  s.ordinal = ordinal;
  s.raw_requests = std::move(urls);
  return wum::dedup_session(std::move(s));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("wum_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
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
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_util
