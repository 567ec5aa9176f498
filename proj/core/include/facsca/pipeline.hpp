#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "facsca/au_match.hpp"
#include "facsca/config.hpp"
#include "facsca/detect.hpp"
#include "facsca/eigenfaces.hpp"
#include "facsca/facs.hpp"
#include "facsca/fld.hpp"
#include "facsca/gabor.hpp"
#include "facsca/model_io.hpp"

namespace facsca::pipeline {

/// Everything the analysis path needs. The fusion members are optional:
/// they exist only when the training gallery had at least two identities
/// with two samples each.
struct Models {
    features::EigenModel eigen;
    features::AuTemplateGallery au_gallery;
    features::TwoDPcaModel face_2dpca;
    features::FldModel fld_2dpca;
    features::FldModel fld_gabor;
    features::model_io::FusedGallery fused_gallery;
    features::GaborBank gabor;

    bool has_fusion() const {
        return fld_2dpca.fitted() && fld_gabor.fitted() && fused_gallery.fitted();
    }

    void save(const std::string& dir) const;
    static Models load(const std::string& dir, const Config& cfg);
};

/// Fit all models from a gallery directory laid out as
///   <dir>/faces/<identity>[_<n>].pgm
///   <dir>/au_templates/<region>_<au|neutral>.pgm
Models train_models(const std::string& gallery_dir, const Config& cfg);

struct FaceResult {
    vision::FaceBox box;
    std::string identity; // recognized name; "annotated" for bypass frames
    std::set<int> aus;
    facs::RulePattern pattern;
    facs::Label label = facs::Label::Neutral;
    int annotation = 1; // 1 when this face agrees with the frame's first face
};

struct FrameAnalysis {
    int frame_index = 0;
    std::vector<FaceResult> faces;
};

/// Detect, recognize, extract AUs per region and classify every face of a
/// frame. Faces the recognizer rejects are ignored. The first face (by
/// descending box score) carries annotation 1; later faces carry 1 only
/// when they share its expression.
FrameAnalysis analyze_frame(const vision::Image& frame, int frame_index, const Models& models,
                            const Config& cfg);

/// AU-bypass analysis: the annotated AU set stands in for the vision stack.
FrameAnalysis analyze_frame_bypass(int frame_index, const std::set<int>& aus);

struct ShotRecord {
    std::string shot_id;
    int frame_count = 0;
    std::vector<int> key_face_refs;          // frame indices
    std::vector<facs::Label> frame_labels;   // first face per frame, Neutral if none
    std::vector<std::string> frame_patterns; // canonical pattern per frame
    facs::Label shot_expression = facs::Label::Neutral;
    int or_annotation = 0;
    bool failed = false;
    std::string error;

    nlohmann::ordered_json to_json() const;
    static ShotRecord from_json(const nlohmann::json& j);

    bool operator==(const ShotRecord& other) const = default;
};

/// Shot label = modal frame label, ties broken by earliest first
/// occurrence; or_annotation = OR over every face's annotation bit.
ShotRecord aggregate_shot(const std::string& shot_id,
                          const std::vector<FrameAnalysis>& analyses,
                          std::vector<int> key_face_refs);

struct ShotEntry {
    std::string shot_id;
    std::vector<std::string> frames;
    std::optional<facs::Label> truth;
    std::optional<std::vector<std::set<int>>> aus; // bypass annotations per frame
};

/// JSON manifest: [{"shot_id", "frames", "label"?, "aus"?}, ...].
/// Relative frame paths resolve against the manifest's directory. Bypass
/// shots may omit frame paths; their frame count is the aus length.
struct ShotManifest {
    std::vector<ShotEntry> shots;

    static ShotManifest load(const std::string& path);
    static ShotManifest parse(const std::string& text, const std::string& origin);

    std::map<std::string, facs::Label> truth_labels() const;
};

/// One record per manifest shot, in manifest order. A failing shot is
/// recorded as failed (expression Unknown) without affecting the others.
/// `models` may be null when every shot carries AU annotations.
std::vector<ShotRecord> ingest(const ShotManifest& manifest, const Models* models,
                               const Config& cfg);

} // namespace facsca::pipeline
