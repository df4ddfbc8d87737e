#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cavishift {

/// Every failure the library reports. The harness serializes the variant
/// name, so keep names stable.
enum class ErrorKind {
  DomainError,
  LossOfAccuracy,
  NoConvergence,
  DegenerateStep,
  RankOverflow,
  QuadratureSuspect,
  SingularContrast,
  RegionCollapse,
  DegenerateDenominator,
  NearSingularOperator,
  BadCurve,
  PoleOfSymbol,
  SpuriousRoot,
  ZeroSensitivity,
  TieAmbiguity,
  PoleOfDenominator,
  ValidityViolation,
  UnstableRoot,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::LossOfAccuracy: return "LossOfAccuracy";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateStep: return "DegenerateStep";
    case ErrorKind::RankOverflow: return "RankOverflow";
    case ErrorKind::QuadratureSuspect: return "QuadratureSuspect";
    case ErrorKind::SingularContrast: return "SingularContrast";
    case ErrorKind::RegionCollapse: return "RegionCollapse";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NearSingularOperator: return "NearSingularOperator";
    case ErrorKind::BadCurve: return "BadCurve";
    case ErrorKind::PoleOfSymbol: return "PoleOfSymbol";
    case ErrorKind::SpuriousRoot: return "SpuriousRoot";
    case ErrorKind::ZeroSensitivity: return "ZeroSensitivity";
    case ErrorKind::TieAmbiguity: return "TieAmbiguity";
    case ErrorKind::PoleOfDenominator: return "PoleOfDenominator";
    case ErrorKind::ValidityViolation: return "ValidityViolation";
    case ErrorKind::UnstableRoot: return "UnstableRoot";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& context)
      : std::runtime_error(std::string(to_string(kind)) + ": " + context),
        kind_(kind),
        context_(context) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string context_;
};

}  // namespace cavishift
