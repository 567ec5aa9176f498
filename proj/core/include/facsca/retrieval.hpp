#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "facsca/facs.hpp"
#include "facsca/pipeline.hpp"

namespace facsca::retrieval {

/// Persisted classification results: all shot records, the per-expression
/// pools and the expanded pattern database. Every non-failed record sits in
/// exactly the pool of its shot expression; failed records pool under
/// Unknown and are never returned by queries.
struct ShotIndex {
    int version = 1;
    std::vector<pipeline::ShotRecord> records;
    std::map<std::string, std::vector<std::string>> pools; // label name -> shot ids
    std::vector<std::pair<std::string, std::string>> pattern_db;

    static ShotIndex build(std::vector<pipeline::ShotRecord> records);
    const pipeline::ShotRecord* find(const std::string& shot_id) const;

    bool operator==(const ShotIndex& other) const = default;
};

/// Canonical serialization: fixed key order, version first; byte-stable.
std::string serialize_index(const ShotIndex& index);
ShotIndex parse_index(const std::string& text, const std::string& origin);

void save_index(const ShotIndex& index, const std::string& path);
ShotIndex load_index(const std::string& path); // refuses future versions

struct QueryResult {
    facs::Label label = facs::Label::Neutral;
    struct Hit {
        std::string shot_id;
        int score = 0; // longest run of the query label over the shot's frame labels
        facs::Label shot_expression = facs::Label::Neutral;
    };
    std::vector<Hit> hits; // descending score, ties by ascending shot_id
};

int longest_label_run(const std::vector<facs::Label>& labels, facs::Label target);

QueryResult query_by_label(const ShotIndex& index, facs::Label label);

/// Classify the AU set, then query its label. When classification says
/// Unknown and fuzzy_hamming > 0, fall back to the nearest pattern in the
/// database within that Hamming distance.
QueryResult query_by_aus(const ShotIndex& index, const std::set<int>& aus,
                         int fuzzy_hamming = 0);

struct Metrics {
    double precision = 0, recall = 0, f_measure = 0, accuracy = 0;
    long tp = 0, fp = 0, fn = 0, tn = 0;
    bool precision_defined = true, recall_defined = true, f_defined = true;
};

/// Retrieval metrics against ground truth; truth must label every
/// non-failed indexed shot. Zero denominators yield 0 with the defined
/// flag cleared.
Metrics evaluate(const ShotIndex& index, const QueryResult& result,
                 const std::map<std::string, facs::Label>& truth, double beta = 1.0);

} // namespace facsca::retrieval
