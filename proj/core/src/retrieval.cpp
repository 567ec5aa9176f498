#include "facsca/retrieval.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "facsca/error.hpp"

namespace facsca::retrieval {

ShotIndex ShotIndex::build(std::vector<pipeline::ShotRecord> records) {
    ShotIndex index;
    index.records = std::move(records);
    index.pattern_db = facs::pattern_database();
    for (const auto& record : index.records)
        index.pools[facs::to_string(record.shot_expression)].push_back(record.shot_id);
    return index;
}

const pipeline::ShotRecord* ShotIndex::find(const std::string& shot_id) const {
    for (const auto& record : records)
        if (record.shot_id == shot_id) return &record;
    return nullptr;
}

std::string serialize_index(const ShotIndex& index) {
    nlohmann::ordered_json j;
    j["version"] = index.version;
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& record : index.records) records.push_back(record.to_json());
    j["records"] = std::move(records);
    nlohmann::ordered_json pools; // std::map keeps label names sorted
    for (const auto& [label, ids] : index.pools) pools[label] = ids;
    j["pools"] = std::move(pools);
    nlohmann::ordered_json db = nlohmann::ordered_json::array();
    for (const auto& [name, pattern] : index.pattern_db)
        db.push_back(nlohmann::ordered_json{{"expression", name}, {"pattern", pattern}});
    j["pattern_db"] = std::move(db);
    return j.dump(2) + "\n";
}

ShotIndex parse_index(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(errc::integrity, origin + ": index corrupt at byte " +
                                         std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("version"))
        throw Error(errc::integrity, origin + ": index has no version field");
    const int version = doc["version"].get<int>();
    if (version > 1)
        throw Error(errc::integrity, origin + ": index version " + std::to_string(version) +
                                         " is newer than supported 1");
    ShotIndex index;
    index.version = version;
    try {
        for (const auto& item : doc.at("records"))
            index.records.push_back(pipeline::ShotRecord::from_json(item));
        for (const auto& [label, ids] : doc.at("pools").items()) {
            facs::label_from_string(label); // validate
            index.pools[label] = ids.get<std::vector<std::string>>();
        }
        for (const auto& item : doc.at("pattern_db"))
            index.pattern_db.emplace_back(item.at("expression").get<std::string>(),
                                          item.at("pattern").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::integrity, origin + ": malformed index: " + e.what());
    }
    // The pools must partition the records by shot expression.
    size_t pooled = 0;
    for (const auto& [label, ids] : index.pools) {
        pooled += ids.size();
        for (const auto& id : ids) {
            const auto* record = index.find(id);
            if (!record || facs::to_string(record->shot_expression) != label)
                throw Error(errc::integrity,
                            origin + ": pool " + label + " does not match record " + id);
        }
    }
    if (pooled != index.records.size())
        throw Error(errc::integrity, origin + ": pools do not cover all records");
    return index;
}

void save_index(const ShotIndex& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write index: " + path);
    const std::string text = serialize_index(index);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error(errc::io, "short write: " + path);
}

ShotIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io, "cannot open index: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_index(text, path);
}

int longest_label_run(const std::vector<facs::Label>& labels, facs::Label target) {
    int best = 0, run = 0;
    for (facs::Label label : labels) {
        run = label == target ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

QueryResult query_by_label(const ShotIndex& index, facs::Label label) {
    QueryResult result;
    result.label = label;
    auto pool = index.pools.find(facs::to_string(label));
    if (pool == index.pools.end()) return result;
    for (const auto& shot_id : pool->second) {
        const auto* record = index.find(shot_id);
        if (!record || record->failed) continue;
        result.hits.push_back(
            {shot_id, longest_label_run(record->frame_labels, label), record->shot_expression});
    }
    std::sort(result.hits.begin(), result.hits.end(),
              [](const QueryResult::Hit& a, const QueryResult::Hit& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.shot_id < b.shot_id;
              });
    return result;
}

namespace {

int hamming(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return std::numeric_limits<int>::max();
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

} // namespace

QueryResult query_by_aus(const ShotIndex& index, const std::set<int>& aus, int fuzzy_hamming) {
    facs::Classification cls = facs::classify_au_set(aus);
    if (cls.label == facs::Label::Unknown && fuzzy_hamming > 0) {
        const std::string probe = facs::render_pattern(cls.pattern, facs::RenderMode::Canonical);
        int best = fuzzy_hamming + 1;
        const std::string* best_label = nullptr;
        for (const auto& [name, pattern] : index.pattern_db) {
            const int d = hamming(probe, pattern);
            if (d < best) { // the db is sorted, so ties keep the first row
                best = d;
                best_label = &name;
            }
        }
        if (best_label) return query_by_label(index, facs::label_from_string(*best_label));
    }
    return query_by_label(index, cls.label);
}

Metrics evaluate(const ShotIndex& index, const QueryResult& result,
                 const std::map<std::string, facs::Label>& truth, double beta) {
    Metrics m;
    std::set<std::string> retrieved;
    for (const auto& hit : result.hits) {
        if (!index.find(hit.shot_id))
            throw Error(errc::domain, "result names unknown shot " + hit.shot_id);
        retrieved.insert(hit.shot_id);
    }
    long total = 0;
    for (const auto& record : index.records) {
        if (record.failed) continue;
        auto it = truth.find(record.shot_id);
        if (it == truth.end())
            throw Error(errc::domain, "truth does not label shot " + record.shot_id);
        ++total;
        const bool relevant = it->second == result.label;
        const bool hit = retrieved.count(record.shot_id) > 0;
        if (hit && relevant) ++m.tp;
        else if (hit) ++m.fp;
        else if (relevant) ++m.fn;
        else ++m.tn;
    }
    if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / (m.tp + m.fp);
    else m.precision_defined = false;
    if (m.tp + m.fn > 0) m.recall = static_cast<double>(m.tp) / (m.tp + m.fn);
    else m.recall_defined = false;
    const double b2 = beta * beta;
    const double denom = b2 * m.precision + m.recall;
    if (denom > 0) m.f_measure = (1.0 + b2) * m.precision * m.recall / denom;
    else m.f_defined = false;
    m.accuracy = total > 0 ? static_cast<double>(m.tp + m.tn) / static_cast<double>(total) : 0.0;
    return m;
}

} // namespace facsca::retrieval
