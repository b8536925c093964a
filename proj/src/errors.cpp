#include <pjb/errors.hpp>

namespace pjb {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::pole_proximity: return "PoleProximity";
    case errc::degree_too_large: return "DegreeTooLarge";
    case errc::ill_conditioned: return "IllConditioned";
    case errc::tail_too_short: return "TailTooShort";
    case errc::not_a_factor: return "NotAFactor";
    case errc::not_invariant: return "NotInvariant";
    case errc::no_match: return "NoMatch";
    case errc::size_budget_exceeded: return "SizeBudgetExceeded";
    case errc::not_a_submodule: return "NotASubmodule";
    case errc::not_doubly_commuting: return "NotDoublyCommuting";
    case errc::reconstruction_mismatch: return "ReconstructionMismatch";
    case errc::not_reducing: return "NotReducing";
    case errc::degree_budget: return "DegreeBudget";
    case errc::not_rank_one: return "NotRankOne";
    case errc::truncation_inconclusive: return "TruncationInconclusive";
    case errc::ambient_mismatch: return "AmbientMismatch";
    case errc::precondition: return "Precondition";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

error::error(errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace pjb
