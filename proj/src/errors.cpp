#include "treeflow/errors.hpp"

namespace treeflow {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::TruncationExceeded: return "TruncationExceeded";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::MultipleParents: return "MultipleParents";
    case Errc::UnrootedWithoutAncestors: return "UnrootedWithoutAncestors";
    case Errc::NoAncestor: return "NoAncestor";
    case Errc::NotAChain: return "NotAChain";
    case Errc::NotRooted: return "NotRooted";
    case Errc::NotUnrooted: return "NotUnrooted";
    case Errc::LeafPresent: return "LeafPresent";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::InvalidExponent: return "InvalidExponent";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::ZeroFunction: return "ZeroFunction";
    case Errc::NoViolation: return "NoViolation";
    case Errc::CriterionMet: return "CriterionMet";
    case Errc::CriterionNotMet: return "CriterionNotMet";
    case Errc::SupportNormalizationFailed: return "SupportNormalizationFailed";
  }
  return "UnknownError";
}

}  // namespace treeflow
