#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace szl {

/// Failure categories raised by the numerical pipeline.
enum class ErrorKind {
  kInvalidArgument,
  kNotInTube,
  kDegenerateBoundary,
  kTubeTooWide,
  kNotStarShaped,
  kGridTooCoarse,
  kGridTooSmall,
  kBasisTooSmall,
  kFlatCrossing,
  kComplexProfile,
  kBasisOverflow,
  kAliasedKernel,
  kNonHermitian,
  kIllConditionedFit,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNotInTube: return "NotInTube";
    case ErrorKind::kDegenerateBoundary: return "DegenerateBoundary";
    case ErrorKind::kTubeTooWide: return "TubeTooWide";
    case ErrorKind::kNotStarShaped: return "NotStarShaped";
    case ErrorKind::kGridTooCoarse: return "GridTooCoarse";
    case ErrorKind::kGridTooSmall: return "GridTooSmall";
    case ErrorKind::kBasisTooSmall: return "BasisTooSmall";
    case ErrorKind::kFlatCrossing: return "FlatCrossing";
    case ErrorKind::kComplexProfile: return "ComplexProfile";
    case ErrorKind::kBasisOverflow: return "BasisOverflow";
    case ErrorKind::kAliasedKernel: return "AliasedKernel";
    case ErrorKind::kNonHermitian: return "NonHermitian";
    case ErrorKind::kIllConditionedFit: return "IllConditionedFit";
    case ErrorKind::kConfig: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace szl
