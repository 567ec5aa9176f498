// facsca: FACS action-unit rule patterns over 2D cellular automata, with
// expression-indexed shot retrieval. One subcommand per pipeline phase.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "facsca/ca.hpp"
#include "facsca/config.hpp"
#include "facsca/error.hpp"
#include "facsca/facs.hpp"
#include "facsca/fixtures.hpp"
#include "facsca/pipeline.hpp"
#include "facsca/pnm.hpp"
#include "facsca/retrieval.hpp"

namespace {

using namespace facsca;

Config load_config(const std::string& path) {
    if (!path.empty()) return Config::load_file(path);
    if (const char* env = std::getenv("FACSCA_CONFIG"); env && *env)
        return Config::load_file(env);
    return Config{};
}

std::string mask_to_text(const ca::DependencyMask& mask) {
    std::string out;
    for (int r = 0; r < 3; ++r) {
        if (r) out += ' ';
        for (int c = 0; c < 3; ++c) out += mask.grid[r][c] ? '1' : '0';
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error(errc::io, "short write: " + path);
}

std::set<int> parse_au_csv(const std::string& csv) {
    std::set<int> aus;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        try {
            size_t used = 0;
            const int au = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            aus.insert(au);
        } catch (const std::exception&) {
            throw Error(errc::args, "bad AU code in --aus: " + item);
        }
    }
    return aus;
}

int cmd_rules(const std::string& out_path) {
    std::string text;
    const auto rules = ca::enumerate_rules();
    for (size_t n = 0; n < rules.size(); ++n)
        text += std::to_string(n) + ": " + mask_to_text(rules[n]) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    return 0;
}

int cmd_build_patterns(const std::string& out_path, const std::string& mode) {
    std::string text;
    if (mode == "canonical") {
        for (const auto& [name, pattern] : facs::pattern_database())
            text += name + "\t" + pattern + "\n";
    } else {
        // Human-oriented dump in the printed-pattern style.
        std::vector<std::pair<std::string, std::string>> rows;
        for (const auto& def : facs::expression_table())
            for (const auto& aus : facs::expand_expression(def))
                rows.emplace_back(facs::to_string(def.label),
                                  facs::render_pattern(facs::synthesize_pattern(aus),
                                                       facs::RenderMode::PaperCompat));
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        for (const auto& [name, pattern] : rows) text += name + "\t" + pattern + "\n";
    }
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    return 0;
}

int cmd_train(const std::string& gallery, const std::string& models_dir, const Config& cfg) {
    const auto models = pipeline::train_models(gallery, cfg);
    models.save(models_dir);
    char line[256];
    std::snprintf(line, sizeof line,
                  "trained: gallery=%zu identities=%zu components=%d phi=%.12g fusion=%s\n",
                  models.eigen.identities.size(),
                  [&] {
                      std::set<std::string> ids(models.eigen.identities.begin(),
                                                models.eigen.identities.end());
                      return ids.size();
                  }(),
                  models.eigen.component_count(), models.eigen.phi,
                  models.has_fusion() ? "yes" : "no");
    std::cout << line;
    return 0;
}

int cmd_ingest(const std::string& manifest_path, const std::string& models_dir,
               const std::string& index_path, const Config& cfg) {
    const auto manifest = pipeline::ShotManifest::load(manifest_path);
    std::optional<pipeline::Models> models;
    const bool all_bypass = std::all_of(manifest.shots.begin(), manifest.shots.end(),
                                        [](const auto& s) { return s.aus.has_value(); });
    if (!all_bypass) {
        if (models_dir.empty())
            throw Error(errc::args, "--models is required unless every shot carries aus");
        models = pipeline::Models::load(models_dir, cfg);
    }
    const auto records = pipeline::ingest(manifest, models ? &*models : nullptr, cfg);
    for (const auto& record : records) std::cout << record.to_json().dump() << "\n";
    if (!index_path.empty())
        retrieval::save_index(retrieval::ShotIndex::build(records), index_path);
    return 0;
}

int cmd_query(const std::string& index_path, const std::string& aus_csv,
              const std::string& probe_path, const std::string& models_dir, const Config& cfg) {
    const auto index = retrieval::load_index(index_path);
    const int fuzzy = cfg.get_int("retrieval.fuzzy_hamming");
    retrieval::QueryResult result;
    if (!probe_path.empty()) {
        if (models_dir.empty())
            throw Error(errc::args, "--models is required for image probes");
        const auto models = pipeline::Models::load(models_dir, cfg);
        const auto frame = vision::load_image(probe_path);
        const auto analysis = pipeline::analyze_frame(frame, 0, models, cfg);
        const std::set<int> aus =
            analysis.faces.empty() ? std::set<int>{} : analysis.faces.front().aus;
        result = retrieval::query_by_aus(index, aus, fuzzy);
    } else {
        result = retrieval::query_by_aus(index, parse_au_csv(aus_csv), fuzzy);
    }
    std::cout << "# query label: " << facs::to_string(result.label) << "\n";
    for (const auto& hit : result.hits)
        std::cout << hit.shot_id << "\t" << hit.score << "\t"
                  << facs::to_string(hit.shot_expression) << "\n";
    return 0;
}

int cmd_eval(const std::string& index_path, const std::string& truth_path,
             const std::string& out_path, const Config& cfg) {
    const auto index = retrieval::load_index(index_path);
    const auto truth = pipeline::ShotManifest::load(truth_path).truth_labels();
    if (truth.empty()) throw Error(errc::args, "truth manifest carries no labels");
    const double beta = cfg.get_double("eval.beta");

    std::map<std::string, facs::Label> truth_map(truth.begin(), truth.end());
    nlohmann::ordered_json per_label;
    std::string table = "label         tp  fp  fn  tn  precision  recall  f_measure  accuracy\n";
    double sum_p = 0, sum_r = 0, sum_f = 0;
    int label_count = 0;
    long correct = 0, total = 0;
    for (const auto& record : index.records) {
        if (record.failed) continue;
        ++total;
        auto it = truth_map.find(record.shot_id);
        if (it != truth_map.end() && it->second == record.shot_expression) ++correct;
    }
    for (facs::Label label : facs::all_expression_labels()) {
        const bool present =
            std::any_of(truth_map.begin(), truth_map.end(),
                        [&](const auto& kv) { return kv.second == label; });
        if (!present) continue;
        const auto result = retrieval::query_by_label(index, label);
        const auto m = retrieval::evaluate(index, result, truth_map, beta);
        char row[256];
        std::snprintf(row, sizeof row, "%-12s %3ld %3ld %3ld %3ld     %.4f  %.4f     %.4f    %.4f\n",
                      facs::to_string(label).c_str(), m.tp, m.fp, m.fn, m.tn, m.precision,
                      m.recall, m.f_measure, m.accuracy);
        table += row;
        per_label[facs::to_string(label)] = {{"tp", m.tp},
                                             {"fp", m.fp},
                                             {"fn", m.fn},
                                             {"tn", m.tn},
                                             {"precision", m.precision},
                                             {"recall", m.recall},
                                             {"f_measure", m.f_measure},
                                             {"accuracy", m.accuracy},
                                             {"defined", m.f_defined}};
        sum_p += m.precision;
        sum_r += m.recall;
        sum_f += m.f_measure;
        ++label_count;
    }
    const double overall = total ? static_cast<double>(correct) / static_cast<double>(total) : 0;
    char footer[256];
    std::snprintf(footer, sizeof footer,
                  "macro: precision=%.4f recall=%.4f f_measure=%.4f\noverall_accuracy: %.4f\n",
                  sum_p / label_count, sum_r / label_count, sum_f / label_count, overall);
    table += footer;
    std::cout << table;
    if (!out_path.empty()) {
        nlohmann::ordered_json report;
        report["beta"] = beta;
        report["per_label"] = std::move(per_label);
        report["macro"] = {{"precision", sum_p / label_count},
                           {"recall", sum_r / label_count},
                           {"f_measure", sum_f / label_count}};
        report["overall_accuracy"] = overall;
        write_text(out_path, report.dump(2) + "\n");
    }
    return 0;
}

int cmd_fixtures(const std::string& out_dir, const std::string& kind, int shots, int frames,
                 const Config& cfg) {
    const int chip = cfg.get_int("chip.size");
    std::filesystem::create_directories(out_dir);
    if (kind == "gallery" || kind == "all")
        fixtures::write_au_gallery(out_dir + "/au_templates", chip);
    if (kind == "faces" || kind == "all")
        fixtures::write_identity_faces(out_dir + "/faces", 2, 2, chip);
    if (kind == "corpus" || kind == "all")
        fixtures::write_bypass_corpus(out_dir, shots, frames);
    if (kind == "scene" || kind == "all")
        vision::save_image(fixtures::synthetic_face_scene(160, 120, 80, 60, 20, 26),
                           out_dir + "/scene.ppm");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FACS rule-pattern engine and expression-indexed shot retrieval"};
    app.require_subcommand(0, 1);
    app.option_defaults()->always_capture_default(true); // --help shows defaults

    std::string config_path;
    app.add_option("--config", config_path,
                   "key=value config file (falls back to $FACSCA_CONFIG)");
    bool print_config = false;
    app.add_flag("--print-config", print_config, "print the effective config and exit");

    auto* rules = app.add_subcommand("rules", "dump the 512-rule dependency table");
    std::string rules_out;
    rules->add_option("--out", rules_out, "write to a file instead of stdout");

    auto* build = app.add_subcommand("build-patterns", "expand the expression pattern database");
    std::string build_out, build_mode = "canonical";
    build->add_option("--out", build_out, "output file (stdout when omitted)");
    build->add_option("--mode", build_mode, "canonical|paper")
        ->check(CLI::IsMember({"canonical", "paper"}));

    auto* train = app.add_subcommand("train", "fit models from a gallery directory");
    std::string train_gallery, train_models_dir;
    train->add_option("--gallery", train_gallery, "directory with faces/ and au_templates/")
        ->required();
    train->add_option("--models", train_models_dir, "output model directory")->required();

    auto* ingest = app.add_subcommand("ingest", "classify manifest shots into an index");
    std::string ingest_manifest, ingest_models, ingest_index;
    ingest->add_option("--manifest", ingest_manifest, "shot manifest JSON")->required();
    ingest->add_option("--models", ingest_models, "model directory (vision-mode shots)");
    ingest->add_option("--index", ingest_index, "write the shot index here");

    auto* query = app.add_subcommand("query", "retrieve shots by expression");
    std::string query_index, query_aus, query_probe, query_models;
    query->add_option("--index", query_index, "shot index path")->required();
    query->add_option("--aus", query_aus, "comma-separated AU codes");
    query->add_option("--probe", query_probe, "probe frame image (PGM/PPM)");
    query->add_option("--models", query_models, "model directory for image probes");

    auto* eval = app.add_subcommand("eval", "score the index against ground truth");
    std::string eval_index, eval_truth, eval_out;
    eval->add_option("--index", eval_index, "shot index path")->required();
    eval->add_option("--truth", eval_truth, "manifest with ground-truth labels")->required();
    eval->add_option("--out", eval_out, "write the JSON report here");

    auto* fixtures_cmd = app.add_subcommand("fixtures", "generate synthetic test inputs");
    std::string fixtures_out, fixtures_kind = "all";
    int fixtures_shots = 2, fixtures_frames = 10;
    fixtures_cmd->add_option("--out", fixtures_out, "output directory")->required();
    fixtures_cmd->add_option("--kind", fixtures_kind, "gallery|faces|corpus|scene|all")
        ->check(CLI::IsMember({"gallery", "faces", "corpus", "scene", "all"}));
    fixtures_cmd->add_option("--shots", fixtures_shots, "corpus shots per expression");
    fixtures_cmd->add_option("--frames", fixtures_frames, "corpus frames per shot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "ERROR ARGS: " << e.what() << "\n";
        return 2;
    }

    try {
        const Config cfg = load_config(config_path);
        if (print_config) {
            std::cout << cfg.echo();
            return 0;
        }
        if (rules->parsed()) return cmd_rules(rules_out);
        if (build->parsed()) return cmd_build_patterns(build_out, build_mode);
        if (train->parsed()) return cmd_train(train_gallery, train_models_dir, cfg);
        if (ingest->parsed()) return cmd_ingest(ingest_manifest, ingest_models, ingest_index, cfg);
        if (query->parsed()) {
            if (query_aus.empty() == query_probe.empty())
                throw Error(errc::args, "query needs exactly one of --aus or --probe");
            return cmd_query(query_index, query_aus, query_probe, query_models, cfg);
        }
        if (eval->parsed()) return cmd_eval(eval_index, eval_truth, eval_out, cfg);
        if (fixtures_cmd->parsed())
            return cmd_fixtures(fixtures_out, fixtures_kind, fixtures_shots, fixtures_frames,
                                cfg);
        std::cout << app.help();
        return 0;
    } catch (const Error& e) {
        std::cerr << "ERROR " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ERROR INTERNAL: " << e.what() << "\n";
        return 1;
    }
}
