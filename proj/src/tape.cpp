#include "pfoco/tape.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "pfoco/error.hpp"

namespace pfoco {

namespace {

static_assert(std::endian::native == std::endian::little, "tape I/O assumes a little-endian host");

constexpr std::array<char, 8> kMagic = {'P', 'F', 'O', 'C', 'O', 'T', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is, const char* what) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw Error(fmt::format("tape: truncated while reading {}", what));
  }
  return value;
}

void put_matrix_row_major(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) put<double>(os, m(i, j));
}

Eigen::MatrixXd get_matrix_row_major(std::istream& is, Eigen::Index rows, Eigen::Index cols,
                                     const char* what) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = get<double>(is, what);
  return m;
}

}  // namespace

MatrixCompletionInstance RoundTape::instance() const {
  return MatrixCompletionInstance::from_target(target, k, static_cast<Eigen::Index>(b), seed);
}

RoundTape record_tape(const MatrixCompletionInstance& instance, std::uint64_t T, Rng& rng) {
  RoundTape tape;
  tape.m = static_cast<std::uint64_t>(instance.rows());
  tape.n = static_cast<std::uint64_t>(instance.cols());
  tape.k = instance.radius();
  tape.b = static_cast<std::uint64_t>(instance.revealed());
  tape.seed = instance.seed();
  tape.target = instance.target();
  tape.rounds.reserve(T);
  for (std::uint64_t t = 0; t < T; ++t) tape.rounds.push_back(instance.draw_round(rng));
  return tape;
}

void write_tape(const std::filesystem::path& path, const RoundTape& tape) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(fmt::format("tape: cannot open '{}' for writing", path.string()));
  os.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, 0);
  put<std::uint64_t>(os, tape.m);
  put<std::uint64_t>(os, tape.n);
  put<double>(os, tape.k);
  put<std::uint64_t>(os, tape.b);
  put<std::uint64_t>(os, tape.horizon());
  put<std::uint64_t>(os, tape.seed);
  put_matrix_row_major(os, tape.target);
  const auto m = static_cast<Eigen::Index>(tape.m);
  const auto n = static_cast<Eigen::Index>(tape.n);
  for (const auto& r : tape.rounds) {
    if (r.entries.size() != tape.b) throw Error("tape: round has the wrong number of entries");
    std::vector<std::uint64_t> row_major;
    row_major.reserve(r.entries.size());
    for (Eigen::Index idx : r.entries) {
      const Eigen::Index i = idx % m, j = idx / m;
      row_major.push_back(static_cast<std::uint64_t>(i * n + j));
    }
    std::sort(row_major.begin(), row_major.end());
    for (std::uint64_t v : row_major) put<std::uint64_t>(os, v);
    put_matrix_row_major(os, r.constraint);
  }
  if (!os) throw Error(fmt::format("tape: write to '{}' failed", path.string()));
}

RoundTape read_tape(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(fmt::format("tape: cannot open '{}'", path.string()));
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(fmt::format("tape: '{}' is not a round tape", path.string()));
  }
  const auto version = get<std::uint32_t>(is, "version");
  if (version != kVersion) throw Error(fmt::format("tape: unsupported version {}", version));
  get<std::uint32_t>(is, "reserved");
  RoundTape tape;
  tape.m = get<std::uint64_t>(is, "m");
  tape.n = get<std::uint64_t>(is, "n");
  tape.k = get<double>(is, "k");
  tape.b = get<std::uint64_t>(is, "b");
  const auto T = get<std::uint64_t>(is, "T");
  tape.seed = get<std::uint64_t>(is, "seed");
  if (tape.m == 0 || tape.n == 0 || tape.b == 0 || tape.b > tape.m * tape.n) {
    throw Error("tape: invalid header");
  }
  const auto m = static_cast<Eigen::Index>(tape.m);
  const auto n = static_cast<Eigen::Index>(tape.n);
  tape.target = get_matrix_row_major(is, m, n, "target");
  tape.rounds.reserve(T);
  for (std::uint64_t t = 0; t < T; ++t) {
    MatrixCompletionRound r;
    r.entries.reserve(tape.b);
    for (std::uint64_t e = 0; e < tape.b; ++e) {
      const auto v = get<std::uint64_t>(is, "entry index");
      if (v >= tape.m * tape.n) throw Error(fmt::format("tape: entry index {} out of range", v));
      const auto i = static_cast<Eigen::Index>(v / tape.n), j = static_cast<Eigen::Index>(v % tape.n);
      r.entries.push_back(i + j * m);
    }
    std::sort(r.entries.begin(), r.entries.end());
    r.constraint = get_matrix_row_major(is, m, n, "constraint matrix");
    tape.rounds.push_back(std::move(r));
  }
  return tape;
}

}  // namespace pfoco
