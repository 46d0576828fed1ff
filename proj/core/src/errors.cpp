#include "pcyl/errors.hpp"

namespace pcyl {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kZeroDirection: return "ZeroDirection";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kInvalidRegion: return "InvalidRegion";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kContainmentViolation: return "ContainmentViolation";
    case Errc::kSeparationTooSmall: return "SeparationTooSmall";
    case Errc::kIntensityOrder: return "IntensityOrder";
    case Errc::kNotContained: return "NotContained";
    case Errc::kVacancyUndefined: return "VacancyUndefined";
    case Errc::kResolutionTooCoarse: return "ResolutionTooCoarse";
    case Errc::kWindowTooSmall: return "WindowTooSmall";
    case Errc::kBudgetExceeded: return "BudgetExceeded";
    case Errc::kHypothesisViolated: return "HypothesisViolated";
    case Errc::kInvariantViolated: return "InvariantViolated";
    case Errc::kParse: return "Parse";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pcyl
