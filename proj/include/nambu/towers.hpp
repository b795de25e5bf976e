#pragma once

#include "nambu/report.hpp"
#include "nambu/structure.hpp"

#include <optional>

namespace nambu {

enum class TowerKind { Projective, Direct };

/// Finite tower of structures with linear linking maps.  Projective towers
/// carry surjections delta_i: level i+1 -> level i (full row rank, n_i x
/// n_{i+1}); direct towers carry injections eps_i: level i -> level i+1
/// (full column rank, n_{i+1} x n_i).  All levels share the order r.
class TowerSpec {
public:
    TowerSpec(TowerKind kind, std::vector<NambuStructure> levels, std::vector<RatMat> links);

    TowerKind kind() const { return kind_; }
    int depth() const { return static_cast<int>(levels_.size()); }
    const NambuStructure& level(int i) const { return levels_[static_cast<std::size_t>(i - 1)]; }
    const RatMat& link(int i) const { return links_[static_cast<std::size_t>(i - 1)]; }

    /// Composite link between non-adjacent levels; for projective towers
    /// maps level j down to level i (i < j), for direct towers level i up
    /// to level j.
    RatMat composite_link(int i, int j) const;

private:
    TowerKind kind_;
    std::vector<NambuStructure> levels_;
    std::vector<RatMat> links_;
};

/// Compatible family of per-level points.  Projective points populate every
/// level; direct points exist from their entry level upward.
struct TowerPoint {
    std::vector<std::optional<std::vector<Rat>>> levels;
    int entry_level = 1;

    const std::vector<Rat>& at(int i) const;
};

/// Builds the compatible family by pushing a top-level point down.
TowerPoint projective_point(const TowerSpec& T, const std::vector<Rat>& top);
/// Builds the compatible family from an entry-level point upward.
TowerPoint direct_point(const TowerSpec& T, const std::vector<Rat>& x, int entry_level);

/// Level-pair conditions: the covector pullback maps the lower restriction
/// span into the upper one, and the anchors intertwine through the links as
/// exact polynomial identities.
CheckReport check_projective_compat(const TowerSpec& T);
CheckReport check_direct_compat(const TowerSpec& T);

struct ProjectiveClassification {
    bool regular = false;
    bool mixed = false;  // theorem violation: levels disagree
    std::vector<int> ranks;
};

ProjectiveClassification classify_tower_point_projective(const TowerSpec& T,
                                                         const TowerPoint& p);

struct DirectClassification {
    int stratum = 0;  // minimal k with all levels >= k regular; 0 if none
    bool monotone = true;  // regularity persists upward (violation -> false)
    std::vector<int> ranks;  // per level from the entry level
};

DirectClassification classify_tower_point_direct(const TowerSpec& T, const TowerPoint& p);

/// Bracket of cylinder functions pulled back from `level`: evaluates there
/// and re-evaluates the pullbacks on every higher level, requiring exact
/// agreement.  Returns the common value.
Rat limit_bracket_eval(const TowerSpec& T, int level, const std::vector<ScalarField>& gs,
                       const TowerPoint& p);

/// Example towers used by the batteries and the file format.
TowerSpec canonical_projective_tower(int levels, int base_n = 3, int r = 3);
TowerSpec scaled_projective_tower(int levels);           // x1-scaled at every level
TowerSpec squared_coefficient_direct_tower(int levels);  // sum of squares of the new coords

}  // namespace nambu
