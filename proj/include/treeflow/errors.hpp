#pragma once

#include <stdexcept>
#include <string>

namespace treeflow {

// Failure classes surfaced to callers. Anything not listed here is a plain
// std::invalid_argument (caller misuse) or std::logic_error (internal bug).
enum class Errc {
  TruncationExceeded,   // query reaches past the materialized horizon
  CycleDetected,        // edge incidence contains a cycle
  MultipleParents,      // some edge has two incoming edges
  UnrootedWithoutAncestors,
  NoAncestor,           // rooted tree, walked past the root edge
  NotAChain,
  NotRooted,
  NotUnrooted,
  LeafPresent,
  InvalidSpec,          // malformed tree/weight spec or config
  InvalidExponent,      // p outside [1, inf)
  NonPositiveWeight,
  ZeroFunction,
  NoViolation,
  CriterionMet,         // negative certificate asked for, but quantity decays
  CriterionNotMet,      // witness asked for, but no usable step count
  SupportNormalizationFailed,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace treeflow
