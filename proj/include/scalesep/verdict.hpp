#pragma once

#include <string>

namespace scalesep {

/// Outcome of a conditional lemma or criterion check. `not_applicable` means
/// the hypothesis failed (no claim is made); `inconclusive` means the scale
/// requested by the schedule is not resolvable on this grid.
enum class VerdictStatus { pass, fail, not_applicable, inconclusive };

inline const char* to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::pass: return "pass";
        case VerdictStatus::fail: return "fail";
        case VerdictStatus::not_applicable: return "not-applicable";
        case VerdictStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

}  // namespace scalesep
