#pragma once

#include <set>
#include <string>

#include "facsca/facs.hpp"
#include "facsca/image.hpp"

namespace facsca::fixtures {

/// Skin-toned ellipse with two dark eye dots and a dark mouth bar on a
/// light background; the shape detect_faces is built to find.
vision::Image synthetic_face_scene(int width, int height, int cx, int cy, int rx, int ry);

/// Placement of one region crop within a face chip, mirroring the fixed
/// crop layout. Cheeks splits into left and right column ranges; the other
/// regions span the full width (right range empty).
struct RegionLayout {
    int row_lo = 0, row_hi = 0;
    int left_col_lo = 0, left_col_hi = 0;
    int right_col_lo = 0, right_col_hi = 0; // equal when the region is not split
    int crop_width() const { return (left_col_hi - left_col_lo) + (right_col_hi - right_col_lo); }
    int crop_height() const { return row_hi - row_lo; }
};
RegionLayout region_layout(facs::Region region, int chip_size);

/// Deterministic template chip for one (region, AU) pair at the crop
/// layout size: a bright band per AU inside the region's exclusive rows,
/// a fixed fill in rows shared with a neighboring region, and a uniform
/// neutral chip. au 0 means the neutral template.
vision::Image au_template_chip(facs::Region region, int au, int chip_size);

/// Gray face chip whose region crops reproduce the AU template chips, so
/// the analysis path recovers exactly this AU set. At most one AU per
/// region (per-region template matching returns a single AU).
vision::Image face_chip_with_aus(const std::set<int>& aus, int chip_size);

/// Distinct deterministic face chip per identity; the sample index adds a
/// small brightness shift.
vision::Image identity_chip(int identity_index, int sample_index, int size);

/// Writes <dir>/<region>_<au|neutral>.pgm for every table entry.
void write_au_gallery(const std::string& dir, int chip_size);

/// Writes <dir>/id<k>_<n>.pgm identity chips.
void write_identity_faces(const std::string& dir, int identities, int samples_each, int size);

/// Writes an AU-bypass manifest covering the ten expressions:
/// shots_per_label shots each of frames_per_shot noise-free frames, with
/// ground-truth labels. Returns the manifest path.
std::string write_bypass_corpus(const std::string& dir, int shots_per_label,
                                int frames_per_shot);

} // namespace facsca::fixtures
