#include "facsca/facs.hpp"

#include <algorithm>
#include <map>

#include "facsca/error.hpp"

namespace facsca::facs {

const std::vector<RegionSpec>& region_table() {
    static const std::vector<RegionSpec> table = {
        {Region::Cheeks, "cheeks", {6}, 1},
        {Region::EyeLids, "eyelids", {5, 7}, 2},
        {Region::EyeBrows, "eyebrows", {1, 2, 4}, 3},
        {Region::Eyes, "eyes", {43, 61, 63, 64}, 4},
        {Region::LipPart1, "lippart1", {10, 16, 25, 26, 27}, 5},
        {Region::LipPart2, "lippart2", {12, 15, 20, 23, 24, 28}, 6},
    };
    return table;
}

const RegionSpec& region_spec(Region region) {
    for (const auto& spec : region_table())
        if (spec.region == region) return spec;
    throw Error(errc::domain, "unknown region");
}

const std::vector<Region>& canonical_region_order() {
    static const std::vector<Region> order = {Region::EyeLids, Region::EyeBrows,
                                              Region::Eyes,    Region::Cheeks,
                                              Region::LipPart1, Region::LipPart2};
    return order;
}

namespace {

const std::map<int, Region>& au_region_map() {
    static const std::map<int, Region> m = [] {
        std::map<int, Region> out;
        for (const auto& spec : region_table())
            for (int au : spec.au_list) out.emplace(au, spec.region);
        return out;
    }();
    return m;
}

std::string valid_au_codes() {
    std::string s;
    for (int au : all_aus()) {
        if (!s.empty()) s += ",";
        s += std::to_string(au);
    }
    return s;
}

} // namespace

Region region_of_au(int au) {
    auto it = au_region_map().find(au);
    if (it == au_region_map().end())
        throw Error(errc::domain, "unknown AU code " + std::to_string(au) +
                                      "; valid codes: " + valid_au_codes());
    return it->second;
}

bool is_known_au(int au) { return au_region_map().count(au) > 0; }

const std::vector<int>& all_aus() {
    static const std::vector<int> aus = [] {
        std::vector<int> out;
        for (const auto& [au, region] : au_region_map()) out.push_back(au);
        return out;
    }();
    return aus;
}

bool RulePattern::operator==(const RulePattern& other) const {
    if (segments.size() != other.segments.size()) return false;
    for (size_t i = 0; i < segments.size(); ++i)
        if (segments[i].region != other.segments[i].region ||
            segments[i].bits != other.segments[i].bits)
            return false;
    return true;
}

std::set<int> RulePattern::active_aus() const {
    std::set<int> aus;
    for (const auto& seg : segments) {
        const auto& spec = region_spec(seg.region);
        for (size_t k = 0; k < seg.bits.size(); ++k)
            if (seg.bits[k]) aus.insert(spec.au_list[k]);
    }
    return aus;
}

int RulePattern::bit_count() const {
    int n = 0;
    for (const auto& seg : segments)
        for (uint8_t b : seg.bits) n += b;
    return n;
}

ca::Lattice au_rule_matrix(const RegionSpec& region, int au) {
    auto it = std::find(region.au_list.begin(), region.au_list.end(), au);
    if (it == region.au_list.end())
        throw Error(errc::domain, "AU " + std::to_string(au) + " does not belong to region " +
                                      region.name);
    const int k = static_cast<int>(it - region.au_list.begin());
    ca::Lattice lattice(region.lattice_dim);
    lattice.set(k, k, 1);
    return lattice;
}

ca::Lattice region_rule_matrix(const RegionSpec& region, const std::set<int>& active_aus) {
    ca::Lattice lattice(region.lattice_dim);
    for (int au : active_aus) {
        const ca::Lattice one = au_rule_matrix(region, au);
        for (int r = 0; r < lattice.dim(); ++r)
            for (int c = 0; c < lattice.dim(); ++c)
                if (one.at(r, c)) lattice.set(r, c, 1);
    }
    return lattice;
}

std::vector<uint8_t> region_segment(const RegionSpec& region, const std::set<int>& active_aus) {
    return ca::diagonal_bits(region_rule_matrix(region, active_aus));
}

RulePattern synthesize_pattern(const std::set<int>& active_aus) {
    for (int au : active_aus) region_of_au(au); // reject unknown codes up front
    RulePattern pattern;
    for (Region region : canonical_region_order()) {
        const auto& spec = region_spec(region);
        std::set<int> own;
        for (int au : active_aus)
            if (region_of_au(au) == region) own.insert(au);
        pattern.segments.push_back({region, region_segment(spec, own)});
    }
    return pattern;
}

std::string render_pattern(const RulePattern& pattern, RenderMode mode) {
    std::string out;
    auto emit = [&out](const RulePattern::Segment& seg) {
        out += ca::bits_to_string(seg.bits);
        out += '$';
    };
    if (mode == RenderMode::Canonical) {
        for (const auto& seg : pattern.segments) emit(seg);
        return out;
    }
    const RulePattern::Segment* lip1 = nullptr;
    const RulePattern::Segment* lip2 = nullptr;
    for (const auto& seg : pattern.segments) {
        if (seg.region == Region::LipPart1) { lip1 = &seg; continue; }
        if (seg.region == Region::LipPart2) { lip2 = &seg; continue; }
        emit(seg);
    }
    auto non_zero = [](const RulePattern::Segment* seg) {
        return seg && std::any_of(seg->bits.begin(), seg->bits.end(),
                                  [](uint8_t b) { return b != 0; });
    };
    if (non_zero(lip1)) emit(*lip1);
    if (non_zero(lip2)) emit(*lip2);
    if (!non_zero(lip1) && !non_zero(lip2) && lip1) emit(*lip1);
    return out;
}

RulePattern parse_pattern(const std::string& text) {
    RulePattern pattern;
    size_t pos = 0;
    for (Region region : canonical_region_order()) {
        const auto& spec = region_spec(region);
        std::vector<uint8_t> bits;
        bits.reserve(static_cast<size_t>(spec.lattice_dim));
        for (int i = 0; i < spec.lattice_dim; ++i, ++pos) {
            if (pos >= text.size())
                throw Error(errc::format, "pattern truncated at offset " + std::to_string(pos) +
                                              ": expected bit for segment " + spec.name);
            const char ch = text[pos];
            if (ch != '0' && ch != '1')
                throw Error(errc::format, "invalid character '" + std::string(1, ch) +
                                              "' at offset " + std::to_string(pos));
            bits.push_back(ch == '1');
        }
        if (pos >= text.size() || text[pos] != '$')
            throw Error(errc::format, "expected '$' at offset " + std::to_string(pos));
        ++pos;
        pattern.segments.push_back({region, std::move(bits)});
    }
    if (pos != text.size())
        throw Error(errc::format, "trailing data at offset " + std::to_string(pos));
    return pattern;
}

const std::string& to_string(Label label) {
    static const std::vector<std::string> names = {
        "Happiness", "Sadness",     "Angry",     "Disgust", "Fear",   "Surprise",
        "Contempt",  "Frustration", "Confusion", "Neutral", "Unknown"};
    return names[static_cast<size_t>(label)];
}

Label label_from_string(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Label::Unknown); ++i)
        if (to_string(static_cast<Label>(i)) == name) return static_cast<Label>(i);
    throw Error(errc::domain, "unknown expression label: " + name);
}

const std::vector<Label>& all_expression_labels() {
    static const std::vector<Label> labels = {
        Label::Happiness, Label::Sadness,     Label::Angry,     Label::Disgust,
        Label::Fear,      Label::Surprise,    Label::Contempt,  Label::Frustration,
        Label::Confusion, Label::Neutral};
    return labels;
}

std::set<int> ExpressionDef::universe() const {
    std::set<int> all = mandatory;
    for (const auto& group : alt_groups) all.insert(group.begin(), group.end());
    return all;
}

const std::vector<ExpressionDef>& expression_table() {
    static const std::vector<ExpressionDef> table = {
        {Label::Happiness, {6}, {{12, 16, 25, 26}}},
        {Label::Sadness, {7, 63}, {{1, 4}, {15, 25, 28}}},
        {Label::Angry, {7}, {{2, 4}, {16, 23, 24, 25, 26}}},
        {Label::Disgust, {10, 61}, {}},
        {Label::Fear, {}, {{1, 4}, {5, 7}, {20, 25, 26}}},
        {Label::Surprise, {5}, {{1, 2}, {26, 27}}},
        {Label::Contempt, {4, 6}, {{10, 24}}},
        {Label::Frustration, {2, 28}, {{43, 64}}},
        {Label::Confusion, {1, 5, 25}, {}},
        {Label::Neutral, {}, {}},
    };
    return table;
}

std::vector<std::set<int>> expand_expression(const ExpressionDef& def) {
    std::vector<std::set<int>> expansions = {def.mandatory};
    for (const auto& group : def.alt_groups) {
        const std::vector<int> members(group.begin(), group.end());
        std::vector<std::set<int>> grown;
        const unsigned subsets = 1u << members.size();
        for (const auto& base : expansions) {
            for (unsigned bits = 1; bits < subsets; ++bits) { // non-empty choices only
                std::set<int> next = base;
                for (size_t i = 0; i < members.size(); ++i)
                    if (bits & (1u << i)) next.insert(members[i]);
                grown.push_back(std::move(next));
            }
        }
        expansions = std::move(grown);
    }
    return expansions;
}

Classification classify_au_set(const std::set<int>& observed) {
    for (int au : observed) region_of_au(au);
    if (observed.empty())
        return {Label::Neutral, synthesize_pattern({}), 0};

    const ExpressionDef* best = nullptr;
    int best_overlap = -1;
    for (const auto& def : expression_table()) {
        if (def.label == Label::Neutral) continue; // matches only the empty set
        const bool mandatory_ok = std::includes(observed.begin(), observed.end(),
                                                def.mandatory.begin(), def.mandatory.end());
        if (!mandatory_ok) continue;
        bool groups_ok = true;
        for (const auto& group : def.alt_groups) {
            bool hit = false;
            for (int au : group)
                if (observed.count(au)) { hit = true; break; }
            if (!hit) { groups_ok = false; break; }
        }
        if (!groups_ok) continue;
        int overlap = 0;
        for (int au : def.universe())
            if (observed.count(au)) ++overlap;
        if (overlap > best_overlap) { // ties keep the earlier table row
            best = &def;
            best_overlap = overlap;
        }
    }
    if (!best) return {Label::Unknown, synthesize_pattern(observed), 0};
    return {best->label, synthesize_pattern(observed), best_overlap};
}

std::vector<std::pair<std::string, std::string>> pattern_database() {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& def : expression_table()) {
        for (const auto& aus : expand_expression(def))
            rows.emplace_back(to_string(def.label),
                              render_pattern(synthesize_pattern(aus), RenderMode::Canonical));
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

} // namespace facsca::facs
