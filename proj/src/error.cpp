#include "dqg/error.hpp"

namespace dqg {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotPositive: return "NotPositive";
    case Errc::NoSolution: return "NoSolution";
    case Errc::NonUnique: return "NonUnique";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::SpaceMismatch: return "SpaceMismatch";
    case Errc::NotBlockPermutation: return "NotBlockPermutation";
    case Errc::NotFound: return "NotFound";
    case Errc::NotUnique: return "NotUnique";
    case Errc::ScaleInconsistent: return "ScaleInconsistent";
    case Errc::FormulaMismatch: return "FormulaMismatch";
    case Errc::NotStarRep: return "NotStarRep";
    case Errc::CenterNotSplit: return "CenterNotSplit";
    case Errc::ProjectionDefect: return "ProjectionDefect";
    case Errc::RouteDisagreement: return "RouteDisagreement";
    case Errc::NotProjection: return "NotProjection";
    case Errc::NotAGroup: return "NotAGroup";
    case Errc::Unverified: return "Unverified";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace dqg
