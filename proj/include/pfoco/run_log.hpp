#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pfoco/functions.hpp"
#include "pfoco/point.hpp"

namespace pfoco {

struct RoundRecord {
  std::size_t t = 0;
  double f_val = 0.0;
  double g_val = 0.0;
  double lambda = 0.0;
  std::uint64_t x_hash = 0;
};

struct RunLog {
  std::vector<RoundRecord> records;
  // Populated only when requested by the driver options.
  std::vector<Point> iterates;
  // Number of contains() checks that passed (logged and inner iterates).
  std::size_t feasibility_checks = 0;
  double sum_lambda_sq = 0.0;
  double final_lambda = 0.0;
};

// Online source of rounds. next() must not be called before the decision
// for that round has been logged.
class RoundStream {
 public:
  virtual ~RoundStream() = default;
  virtual std::optional<RoundFunctions> next() = 0;
};

// Replays a pre-sampled sequence.
class ReplayStream final : public RoundStream {
 public:
  explicit ReplayStream(std::span<const RoundFunctions> rounds) : rounds_(rounds) {}
  std::optional<RoundFunctions> next() override {
    if (pos_ >= rounds_.size()) return std::nullopt;
    return rounds_[pos_++];
  }

 private:
  std::span<const RoundFunctions> rounds_;
  std::size_t pos_ = 0;
};

struct FeasibilityOptions {
  bool enabled = true;
  double tol = 1e-8;
};

}  // namespace pfoco
