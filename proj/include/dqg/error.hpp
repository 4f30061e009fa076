#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dqg {

enum class Errc {
  NotHermitian,
  NoConvergence,
  NotPositive,
  NoSolution,
  NonUnique,
  ShapeMismatch,
  SpaceMismatch,
  NotBlockPermutation,
  NotFound,
  NotUnique,
  ScaleInconsistent,
  FormulaMismatch,
  NotStarRep,
  CenterNotSplit,
  ProjectionDefect,
  RouteDisagreement,
  NotProjection,
  NotAGroup,
  Unverified,
  InvalidInput,
  TooLarge,
  Parse,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dqg
