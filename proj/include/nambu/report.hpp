#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nambu {

enum class Verdict { Pass, Fail, Unsupported };

std::string to_string(Verdict v);

/// Failure evidence: the slot assignment and/or point that re-produces the
/// nonzero residual when replayed in isolation.
struct Witness {
    std::string slots;                    // e.g. "f=(x1,x2) g=(x1,x2,x3^2)"
    std::vector<double> point;            // empty for identity-level failures
    std::string detail;
};

/// Result record for one verification battery.  Deterministic given
/// (structure, seed, flags); failing reports always carry a witness.
struct CheckReport {
    std::string name;        // stable machine id, e.g. "filippov.direct"
    std::string property;    // the identity or statement verified
    Verdict verdict = Verdict::Unsupported;
    std::string mode;        // "exact" or "sampled"
    long cases = 0;          // assignments or sample points examined
    std::string residual;    // max residual ("0" in exact mode on pass)
    std::optional<Witness> witness;
    std::uint64_t seed = 0;
    double elapsed_ms = 0;   // excluded from deterministic streams by default
    std::vector<std::string> notes;

    bool passed() const { return verdict == Verdict::Pass; }

    /// One-line record; timing is only included when `with_timing`.
    std::string to_line(bool with_timing = false) const;
    std::string to_json(bool with_timing = false) const;
};

}  // namespace nambu
