#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcyl {

enum class Errc {
  kZeroDirection,
  kDimensionMismatch,
  kInvalidRegion,
  kOutOfRange,
  kContainmentViolation,
  kSeparationTooSmall,
  kIntensityOrder,
  kNotContained,
  kVacancyUndefined,
  kResolutionTooCoarse,
  kWindowTooSmall,
  kBudgetExceeded,
  kHypothesisViolated,
  kInvariantViolated,
  kParse,
  kIo,
};

std::string_view errc_name(Errc code);

// Precondition failures and broken invariants are reported through this one
// exception type; `code()` tells the caller which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace pcyl
