#pragma once

#include <set>
#include <string>
#include <vector>

#include "facsca/ca.hpp"

namespace facsca::facs {

enum class Region { Cheeks, EyeLids, EyeBrows, Eyes, LipPart1, LipPart2 };

/// One facial region: its ordered AU codes and lattice dimension M.
/// len(au_list) == M for every region; AU lists are disjoint across regions.
struct RegionSpec {
    Region region;
    std::string name;
    std::vector<int> au_list;
    int lattice_dim;
};

/// The six regions in declaration order (Cheeks M=1 .. LipPart2 M=6).
const std::vector<RegionSpec>& region_table();

const RegionSpec& region_spec(Region region);

/// Canonical pattern segment order: EyeLids, EyeBrows, Eyes, Cheeks,
/// LipPart1, LipPart2.
const std::vector<Region>& canonical_region_order();

/// Region owning an AU code; throws for codes outside the region tables.
Region region_of_au(int au);

bool is_known_au(int au);
const std::vector<int>& all_aus(); // sorted union of every region's list

/// Ordered per-region diagonal bit segments; the expression signature.
struct RulePattern {
    struct Segment {
        Region region;
        std::vector<uint8_t> bits; // length = region lattice_dim
    };
    std::vector<Segment> segments; // always all six, canonical order

    bool operator==(const RulePattern& other) const;

    /// AUs encoded by the set bits.
    std::set<int> active_aus() const;
    int bit_count() const;
};

enum class RenderMode { Canonical, PaperCompat };

/// One-hot M x M rule matrix for an AU: cell (k,k) active where k is the
/// AU's index in the region's ordered list. Throws when the AU is foreign
/// to the region.
ca::Lattice au_rule_matrix(const RegionSpec& region, int au);

/// OR of the per-AU rule matrices for every active AU of the region.
ca::Lattice region_rule_matrix(const RegionSpec& region, const std::set<int>& active_aus);

/// Diagonal bits of the region's combined rule matrix; all-zero for the
/// empty (neutral) set.
std::vector<uint8_t> region_segment(const RegionSpec& region, const std::set<int>& active_aus);

/// Pattern with all six canonical segments. Throws when any AU is unknown.
RulePattern synthesize_pattern(const std::set<int>& active_aus);

/// Canonical mode renders all six segments, each terminated by '$'.
/// PaperCompat renders EyeLids, EyeBrows, Eyes, Cheeks, then only the
/// non-zero lip segments (LipPart1's zero segment when both are zero),
/// matching the printed pattern strings.
std::string render_pattern(const RulePattern& pattern, RenderMode mode);

/// Inverse of the canonical rendering. Throws a parse error naming the
/// byte offset on wrong segment count, wrong segment length, or non-bit
/// characters.
RulePattern parse_pattern(const std::string& text);

enum class Label {
    Happiness,
    Sadness,
    Angry,
    Disgust,
    Fear,
    Surprise,
    Contempt,
    Frustration,
    Confusion,
    Neutral,
    Unknown
};

const std::string& to_string(Label label);
Label label_from_string(const std::string& name); // throws on unknown names
const std::vector<Label>& all_expression_labels(); // the ten, no Unknown

/// One expression template: unbraced AUs are mandatory, each braced group
/// needs at least one member active.
struct ExpressionDef {
    Label label;
    std::set<int> mandatory;
    std::vector<std::set<int>> alt_groups;

    /// mandatory plus every alternative member.
    std::set<int> universe() const;
};

/// The ten expression templates in table row order, Neutral last.
const std::vector<ExpressionDef>& expression_table();

/// Every AU set of the form mandatory + one non-empty subset per group.
/// Neutral expands to the single empty set.
std::vector<std::set<int>> expand_expression(const ExpressionDef& def);

struct Classification {
    Label label;
    RulePattern pattern; // pattern of the observed AU set
    int overlap = 0;     // |template universe ∩ observed| of the winner
};

/// Deterministic classification of an observed AU set. A template matches
/// when its mandatory set is contained in the observation and every
/// alternative group intersects it; the winner shares the most AUs with
/// the observation, ties resolved by table row order. The empty set is
/// Neutral; a non-empty set matching nothing is Unknown.
Classification classify_au_set(const std::set<int>& observed);

/// Expanded pattern database: one (expression name, canonical pattern)
/// entry per expansion, sorted by (name, pattern).
std::vector<std::pair<std::string, std::string>> pattern_database();

} // namespace facsca::facs
