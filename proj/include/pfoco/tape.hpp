#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "pfoco/problems.hpp"

namespace pfoco {

// Binary round tape for the matrix-completion family, so that independent
// implementations can replay the exact same stream. All fields are
// little-endian:
//
//   char[8]  magic "PFOCOTAP"
//   u32      version (1)
//   u32      reserved (0)
//   u64 m, u64 n, f64 k, u64 b, u64 T, u64 seed
//   f64[m*n] target M, row-major
//   T times:
//     u64[b]   revealed entries as row-major linear indices i*n + j, ascending
//     f64[m*n] G^t, row-major
struct RoundTape {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  double k = 1.0;
  std::uint64_t b = 1;
  std::uint64_t seed = 0;
  Eigen::MatrixXd target;
  std::vector<MatrixCompletionRound> rounds;

  std::uint64_t horizon() const { return rounds.size(); }
  MatrixCompletionInstance instance() const;
};

RoundTape record_tape(const MatrixCompletionInstance& instance, std::uint64_t T, Rng& rng);

void write_tape(const std::filesystem::path& path, const RoundTape& tape);
RoundTape read_tape(const std::filesystem::path& path);

}  // namespace pfoco
