#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "mbofs/doc_term_matrix.hpp"
#include "mbofs/rng.hpp"

namespace testutil {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static std::atomic<int> n{0};
    path = std::filesystem::temp_directory_path() /
           ("mbofs_test_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

// Random nonnegative matrix with roughly `density` nonzeros and balanced labels.
inline mbofs::DocTermMatrix random_matrix(std::size_t rows, std::size_t cols, int classes, double density,
                                          std::uint64_t seed) {
  auto rng = mbofs::RngStream(seed).child("test-matrix");
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<int> labels(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    labels[r] = static_cast<int>(r % static_cast<std::size_t>(classes));
    for (std::size_t c = 0; c < cols; ++c)
      if (rng.uniform01() < density)
        dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 0.05 + rng.uniform01();
  }
  return mbofs::make_doc_term_matrix(dense, labels);
}

}  // namespace testutil
