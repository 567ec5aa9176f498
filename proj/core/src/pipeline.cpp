#include "facsca/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>

#include "facsca/error.hpp"
#include "facsca/pnm.hpp"

namespace fs = std::filesystem;

namespace facsca::pipeline {

namespace {

std::vector<std::string> sorted_pgm_paths(const std::string& dir) {
    std::vector<std::string> paths;
    if (!fs::is_directory(dir)) throw Error(errc::io, "not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    return paths;
}

// `alice_2.pgm` -> alice; `bob.pgm` -> bob.
std::string identity_of_stem(const std::string& stem) {
    const auto underscore = stem.rfind('_');
    if (underscore == std::string::npos || underscore + 1 == stem.size()) return stem;
    const std::string suffix = stem.substr(underscore + 1);
    if (std::all_of(suffix.begin(), suffix.end(), [](char c) { return std::isdigit(c); }))
        return stem.substr(0, underscore);
    return stem;
}

} // namespace

void Models::save(const std::string& dir) const {
    fs::create_directories(dir);
    features::model_io::save_eigen(eigen, dir + "/eigen.pife");
    features::model_io::save_au_gallery(au_gallery, dir + "/au_gallery.pife");
    if (has_fusion()) {
        features::model_io::save_2dpca(face_2dpca, dir + "/face_2dpca.pife");
        features::model_io::save_fld(fld_2dpca, dir + "/fld_2dpca.pife");
        features::model_io::save_fld(fld_gabor, dir + "/fld_gabor.pife");
        features::model_io::save_fused_gallery(fused_gallery, dir + "/fused_gallery.pife");
    }
}

Models Models::load(const std::string& dir, const Config& cfg) {
    Models models;
    models.eigen = features::model_io::load_eigen(dir + "/eigen.pife");
    models.au_gallery = features::model_io::load_au_gallery(dir + "/au_gallery.pife");
    if (fs::exists(dir + "/fused_gallery.pife")) {
        models.face_2dpca = features::model_io::load_2dpca(dir + "/face_2dpca.pife");
        models.fld_2dpca = features::model_io::load_fld(dir + "/fld_2dpca.pife");
        models.fld_gabor = features::model_io::load_fld(dir + "/fld_gabor.pife");
        models.fused_gallery = features::model_io::load_fused_gallery(dir + "/fused_gallery.pife");
    }
    models.gabor = features::GaborBank::from_config(cfg);
    return models;
}

Models train_models(const std::string& gallery_dir, const Config& cfg) {
    Models models;
    models.gabor = features::GaborBank::from_config(cfg);

    std::vector<vision::Image> chips;
    std::vector<std::string> identities;
    for (const auto& path : sorted_pgm_paths(gallery_dir + "/faces")) {
        chips.push_back(vision::load_image(path));
        identities.push_back(identity_of_stem(fs::path(path).stem().string()));
    }
    if (chips.size() < 2)
        throw Error(errc::domain, "face gallery needs at least 2 chips in " + gallery_dir +
                                      "/faces");
    models.eigen = features::fit_eigenmodel(chips, identities, cfg.get_int("eigen.components"),
                                  cfg.get_double("eigen.phi_scale"),
                                  cfg.get_double("eigen.tau_scale"),
                                  cfg.get_double("eigen.phi_override"),
                                  cfg.get_double("eigen.tau_override"));

    models.au_gallery =
        features::build_au_gallery(gallery_dir + "/au_templates", cfg.get_int("twodpca.components"));

    // Fusion models need at least two identities with two samples each.
    std::map<std::string, int> counts;
    for (const auto& id : identities) ++counts[id];
    const bool fusible = counts.size() >= 2 &&
                         std::all_of(counts.begin(), counts.end(),
                                     [](const auto& kv) { return kv.second >= 2; });
    if (!fusible) {
        std::cerr << "note: fusion models skipped (need >=2 identities with >=2 samples each); "
                     "recognition falls back to the eigenface path\n";
        return models;
    }

    models.face_2dpca = features::fit_2dpca(chips, cfg.get_int("twodpca.components"));
    std::vector<Eigen::VectorXd> feats_2dpca, feats_gabor;
    for (const auto& chip : chips) {
        feats_2dpca.push_back(
            features::flatten(features::features_2dpca(models.face_2dpca, chip)));
        feats_gabor.push_back(features::gabor_features(models.gabor, chip));
    }
    const double lambda = cfg.get_double("fld.lambda");
    models.fld_2dpca = features::fit_fld(feats_2dpca, identities, lambda);
    models.fld_gabor = features::fit_fld(feats_gabor, identities, lambda);

    for (size_t i = 0; i < chips.size(); ++i) {
        models.fused_gallery.identities.push_back(identities[i]);
        models.fused_gallery.vectors.push_back(features::fuse_features(
            feats_2dpca[i], feats_gabor[i], models.fld_2dpca, models.fld_gabor));
    }
    std::vector<double> dists;
    for (size_t i = 0; i < models.fused_gallery.vectors.size(); ++i)
        for (size_t j = i + 1; j < models.fused_gallery.vectors.size(); ++j)
            dists.push_back(
                (models.fused_gallery.vectors[i] - models.fused_gallery.vectors[j]).norm());
    std::sort(dists.begin(), dists.end());
    const double median =
        dists.empty() ? 0.0
                      : (dists.size() % 2 ? dists[dists.size() / 2]
                                          : 0.5 * (dists[dists.size() / 2 - 1] +
                                                   dists[dists.size() / 2]));
    const double phi_override = cfg.get_double("eigen.phi_override");
    models.fused_gallery.phi =
        phi_override >= 0 ? phi_override : cfg.get_double("eigen.phi_scale") * median;
    return models;
}

namespace {

struct Recognized {
    bool known = false;
    std::string identity;
};

Recognized recognize_face(const vision::Image& chip, const Models& models, const Config& cfg) {
    const std::string mode = cfg.get("recognize.features");
    if (mode != "eigen" && mode != "fused")
        throw Error(errc::config, "recognize.features must be eigen or fused, got " + mode);
    if (mode == "fused" && models.has_fusion()) {
        const Eigen::VectorXd fused = features::fuse_features(
            features::flatten(features::features_2dpca(models.face_2dpca, chip)),
            features::gabor_features(models.gabor, chip), models.fld_2dpca, models.fld_gabor);
        double best = std::numeric_limits<double>::infinity();
        size_t best_i = 0;
        for (size_t i = 0; i < models.fused_gallery.vectors.size(); ++i) {
            const double d = (models.fused_gallery.vectors[i] - fused).norm();
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        if (!models.fused_gallery.vectors.empty() && best < models.fused_gallery.phi)
            return {true, models.fused_gallery.identities[best_i]};
        return {};
    }
    const auto result = features::recognize(models.eigen, chip);
    if (result.gallery_index) return {true, result.identity};
    return {};
}

std::set<int> extract_aus(const vision::Image& face_chip, const Models& models) {
    const vision::RegionChips chips = vision::crop_regions(face_chip);
    std::set<int> aus;
    for (const auto& spec : facs::region_table()) {
        const Eigen::VectorXd feat =
            features::region_features(models.au_gallery, spec.region, chips.of(spec.region));
        const int au = features::match_au(spec, feat, models.au_gallery);
        if (au != features::kNeutralCode) aus.insert(au);
    }
    return aus;
}

} // namespace

FrameAnalysis analyze_frame(const vision::Image& frame, int frame_index, const Models& models,
                            const Config& cfg) {
    if (!models.eigen.fitted()) throw Error(errc::state, "models are not fitted");
    FrameAnalysis analysis;
    analysis.frame_index = frame_index;
    const vision::DetectParams params = vision::DetectParams::from_config(cfg);
    const vision::Image gray = vision::to_gray(frame);
    const int chip_size = cfg.get_int("chip.size");
    for (const vision::FaceBox& box : vision::detect_faces(frame, params)) {
        const vision::Image chip = vision::extract_face_chip(gray, box, chip_size);
        const Recognized who = recognize_face(chip, models, cfg);
        if (!who.known) continue; // not in the key face database: ignored
        FaceResult face;
        face.box = box;
        face.identity = who.identity;
        face.aus = extract_aus(chip, models);
        face.pattern = facs::synthesize_pattern(face.aus);
        face.label = facs::classify_au_set(face.aus).label;
        face.annotation =
            analysis.faces.empty() ? 1 : (face.label == analysis.faces.front().label ? 1 : 0);
        analysis.faces.push_back(std::move(face));
    }
    return analysis;
}

FrameAnalysis analyze_frame_bypass(int frame_index, const std::set<int>& aus) {
    FrameAnalysis analysis;
    analysis.frame_index = frame_index;
    FaceResult face;
    face.identity = "annotated";
    face.aus = aus;
    face.pattern = facs::synthesize_pattern(aus);
    face.label = facs::classify_au_set(aus).label;
    face.annotation = 1;
    analysis.faces.push_back(std::move(face));
    return analysis;
}

ShotRecord aggregate_shot(const std::string& shot_id,
                          const std::vector<FrameAnalysis>& analyses,
                          std::vector<int> key_face_refs) {
    if (analyses.empty())
        throw Error(errc::domain, "shot " + shot_id + " has no frame analyses");
    ShotRecord record;
    record.shot_id = shot_id;
    record.frame_count = static_cast<int>(analyses.size());
    record.key_face_refs = std::move(key_face_refs);
    for (const auto& analysis : analyses) {
        const facs::Label label =
            analysis.faces.empty() ? facs::Label::Neutral : analysis.faces.front().label;
        record.frame_labels.push_back(label);
        const facs::RulePattern pattern = analysis.faces.empty()
                                              ? facs::synthesize_pattern({})
                                              : analysis.faces.front().pattern;
        record.frame_patterns.push_back(
            facs::render_pattern(pattern, facs::RenderMode::Canonical));
        for (const auto& face : analysis.faces)
            record.or_annotation = record.or_annotation | face.annotation;
    }
    // Modal label; ties keep the label seen first.
    std::map<facs::Label, int> counts;
    for (facs::Label label : record.frame_labels) ++counts[label];
    int best = -1;
    for (facs::Label label : record.frame_labels) {
        const int count = counts[label];
        if (count > best) {
            best = count;
            record.shot_expression = label;
        }
    }
    return record;
}

ShotManifest ShotManifest::parse(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(errc::format, origin + ": manifest parse error at byte " +
                                      std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_array()) throw Error(errc::format, origin + ": manifest must be a JSON array");
    ShotManifest manifest;
    std::set<std::string> seen_ids;
    for (const auto& item : doc) {
        ShotEntry entry;
        if (!item.contains("shot_id") || !item["shot_id"].is_string())
            throw Error(errc::format, origin + ": every shot needs a string shot_id");
        entry.shot_id = item["shot_id"].get<std::string>();
        if (!seen_ids.insert(entry.shot_id).second)
            throw Error(errc::format, origin + ": duplicate shot_id " + entry.shot_id);
        if (item.contains("frames"))
            for (const auto& f : item["frames"]) entry.frames.push_back(f.get<std::string>());
        if (item.contains("label"))
            entry.truth = facs::label_from_string(item["label"].get<std::string>());
        if (item.contains("aus")) {
            std::vector<std::set<int>> frames_aus;
            for (const auto& frame : item["aus"]) {
                std::set<int> aus;
                for (const auto& au : frame) aus.insert(au.get<int>());
                frames_aus.push_back(std::move(aus));
            }
            entry.aus = std::move(frames_aus);
            if (!entry.frames.empty() && entry.frames.size() != entry.aus->size())
                throw Error(errc::format, origin + ": shot " + entry.shot_id +
                                              " has mismatched frames and aus lengths");
        }
        if (entry.frames.empty() && !entry.aus)
            throw Error(errc::format,
                        origin + ": shot " + entry.shot_id + " has neither frames nor aus");
        manifest.shots.push_back(std::move(entry));
    }
    return manifest;
}

ShotManifest ShotManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io, "cannot open manifest: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ShotManifest manifest = parse(text, path);
    // Relative frame paths are anchored at the manifest's directory.
    const fs::path base = fs::path(path).parent_path();
    for (auto& shot : manifest.shots)
        for (auto& frame : shot.frames)
            if (!fs::path(frame).is_absolute()) frame = (base / frame).string();
    return manifest;
}

std::map<std::string, facs::Label> ShotManifest::truth_labels() const {
    std::map<std::string, facs::Label> truth;
    for (const auto& shot : shots)
        if (shot.truth) truth[shot.shot_id] = *shot.truth;
    return truth;
}

namespace {

ShotRecord ingest_one(const ShotEntry& entry, const Models* models, const Config& cfg) {
    std::vector<FrameAnalysis> analyses;
    std::vector<int> key_refs;
    if (entry.aus) {
        // AU-bypass: annotations stand in for detection and recognition.
        for (size_t i = 0; i < entry.aus->size(); ++i)
            analyses.push_back(analyze_frame_bypass(static_cast<int>(i), (*entry.aus)[i]));
        // Key faces by AU-set novelty: a frame is new when its AU set
        // differs from every key face so far.
        std::vector<const std::set<int>*> key_sets;
        for (size_t i = 0; i < entry.aus->size(); ++i) {
            const std::set<int>& aus = (*entry.aus)[i];
            bool novel = true;
            for (const auto* seen : key_sets)
                if (*seen == aus) {
                    novel = false;
                    break;
                }
            if (novel) {
                key_refs.push_back(static_cast<int>(i));
                key_sets.push_back(&aus);
            }
        }
    } else {
        if (!models) throw Error(errc::state, "shot " + entry.shot_id +
                                                  " needs models (no AU annotations)");
        const int chip_size = cfg.get_int("chip.size");
        std::vector<vision::Image> first_chips;
        std::vector<int> first_chip_frames;
        for (size_t i = 0; i < entry.frames.size(); ++i) {
            const vision::Image frame = vision::load_image(entry.frames[i]);
            FrameAnalysis analysis = analyze_frame(frame, static_cast<int>(i), *models, cfg);
            if (!analysis.faces.empty()) {
                const vision::Image gray = vision::to_gray(frame);
                first_chips.push_back(
                    vision::extract_face_chip(gray, analysis.faces.front().box, chip_size));
                first_chip_frames.push_back(static_cast<int>(i));
            }
            analyses.push_back(std::move(analysis));
        }
        if (!first_chips.empty())
            for (int k : features::extract_key_faces(first_chips, models->eigen,
                                                     models->eigen.tau))
                key_refs.push_back(first_chip_frames[static_cast<size_t>(k)]);
    }
    return aggregate_shot(entry.shot_id, analyses, std::move(key_refs));
}

} // namespace

std::vector<ShotRecord> ingest(const ShotManifest& manifest, const Models* models,
                               const Config& cfg) {
    std::vector<ShotRecord> records;
    for (const auto& entry : manifest.shots) {
        try {
            records.push_back(ingest_one(entry, models, cfg));
        } catch (const Error& e) {
            ShotRecord failed;
            failed.shot_id = entry.shot_id;
            failed.failed = true;
            failed.error = e.what();
            failed.shot_expression = facs::Label::Unknown;
            records.push_back(std::move(failed));
        }
    }
    return records;
}

nlohmann::ordered_json ShotRecord::to_json() const {
    nlohmann::ordered_json j;
    j["shot_id"] = shot_id;
    j["frame_count"] = frame_count;
    j["shot_expression"] = facs::to_string(shot_expression);
    j["or_annotation"] = or_annotation;
    j["key_face_refs"] = key_face_refs;
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (facs::Label label : frame_labels) labels.push_back(facs::to_string(label));
    j["frame_labels"] = std::move(labels);
    j["frame_patterns"] = frame_patterns;
    j["failed"] = failed;
    j["error"] = error;
    return j;
}

ShotRecord ShotRecord::from_json(const nlohmann::json& j) {
    ShotRecord record;
    record.shot_id = j.at("shot_id").get<std::string>();
    record.frame_count = j.at("frame_count").get<int>();
    record.shot_expression = facs::label_from_string(j.at("shot_expression").get<std::string>());
    record.or_annotation = j.at("or_annotation").get<int>();
    record.key_face_refs = j.at("key_face_refs").get<std::vector<int>>();
    for (const auto& name : j.at("frame_labels"))
        record.frame_labels.push_back(facs::label_from_string(name.get<std::string>()));
    record.frame_patterns = j.at("frame_patterns").get<std::vector<std::string>>();
    record.failed = j.at("failed").get<bool>();
    record.error = j.at("error").get<std::string>();
    return record;
}

} // namespace facsca::pipeline
