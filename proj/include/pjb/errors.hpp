#pragma once

#include <stdexcept>
#include <string>

namespace pjb {

/// Failure categories surfaced by the toolkit. The CLI reports them by name.
enum class errc {
  pole_proximity,
  degree_too_large,
  ill_conditioned,
  tail_too_short,
  not_a_factor,
  not_invariant,
  no_match,
  size_budget_exceeded,
  not_a_submodule,
  not_doubly_commuting,
  reconstruction_mismatch,
  not_reducing,
  degree_budget,
  not_rank_one,
  truncation_inconclusive,
  ambient_mismatch,
  precondition,
  parse_error,
};

const char* to_string(errc code) noexcept;

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what);

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

}  // namespace pjb
