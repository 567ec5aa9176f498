#pragma once

#include <vector>

#include "facsca/config.hpp"
#include "facsca/facs.hpp"
#include "facsca/image.hpp"
#include "facsca/skin.hpp"

namespace facsca::vision {

/// Face bounding box; score is the fraction of skin pixels inside it.
struct FaceBox {
    int x = 0, y = 0, w = 0, h = 0;
    double score = 0.0;

    bool operator==(const FaceBox& other) const = default;
};

struct DetectParams {
    SkinThresholds skin;
    double min_area_frac = 0.002;
    double aspect_min = 0.8;
    double aspect_max = 2.2;
    int binarize_lo = 30;
    int binarize_hi = 120;

    static DetectParams from_config(const Config& cfg);
};

/// Connected component of a mask (4-connectivity), with its bounding box.
struct Component {
    int x = 0, y = 0, w = 0, h = 0;
    int area = 0;
};

std::vector<Component> connected_components(const Mask& mask);

/// Skin-component candidates filtered by area and aspect ratio, validated
/// by dark features: the binarized luminance inside the upper box half must
/// hold at least two dark blobs (eyes) and the lower half at least one
/// (mouth). Sorted by descending score.
std::vector<FaceBox> detect_faces(const Image& image, const DetectParams& params);

/// Crop the box out of the grayscale frame and resample to size x size.
Image extract_face_chip(const Image& gray, const FaceBox& box, int size);

/// Per-region crops of a normalized face chip, fixed fractional layout.
struct RegionChips {
    Image eyebrows;  // rows 10..25%
    Image eyelids;   // rows 25..35%
    Image eyes;      // rows 30..45%
    Image cheeks;    // rows 45..65%, left 0..40% and right 60..100% columns side by side
    Image lip_part1; // rows 65..80%
    Image lip_part2; // rows 75..95%

    const Image& of(facs::Region region) const;
};

/// Throws a size error for chips smaller than 24x24.
RegionChips crop_regions(const Image& face_chip);

} // namespace facsca::vision
