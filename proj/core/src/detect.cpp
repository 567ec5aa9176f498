#include "facsca/detect.hpp"

#include <algorithm>

#include "facsca/error.hpp"

namespace facsca::vision {

DetectParams DetectParams::from_config(const Config& cfg) {
    DetectParams p;
    p.skin = SkinThresholds::from_config(cfg);
    p.min_area_frac = cfg.get_double("detect.min_area_frac");
    p.aspect_min = cfg.get_double("detect.aspect_min");
    p.aspect_max = cfg.get_double("detect.aspect_max");
    p.binarize_lo = cfg.get_int("detect.binarize_lo");
    p.binarize_hi = cfg.get_int("detect.binarize_hi");
    return p;
}

std::vector<Component> connected_components(const Mask& mask) {
    std::vector<Component> components;
    std::vector<uint8_t> seen(mask.bits.size(), 0);
    std::vector<std::pair<int, int>> stack;
    for (int y0 = 0; y0 < mask.height; ++y0) {
        for (int x0 = 0; x0 < mask.width; ++x0) {
            const size_t i0 = static_cast<size_t>(y0) * mask.width + x0;
            if (!mask.bits[i0] || seen[i0]) continue;
            Component comp{x0, y0, 1, 1, 0};
            int max_x = x0, max_y = y0;
            stack.clear();
            stack.emplace_back(x0, y0);
            seen[i0] = 1;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                ++comp.area;
                comp.x = std::min(comp.x, x);
                comp.y = std::min(comp.y, y);
                max_x = std::max(max_x, x);
                max_y = std::max(max_y, y);
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = x + dx[k], ny = y + dy[k];
                    if (nx < 0 || nx >= mask.width || ny < 0 || ny >= mask.height) continue;
                    const size_t ni = static_cast<size_t>(ny) * mask.width + nx;
                    if (mask.bits[ni] && !seen[ni]) {
                        seen[ni] = 1;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            comp.w = max_x - comp.x + 1;
            comp.h = max_y - comp.y + 1;
            components.push_back(comp);
        }
    }
    return components;
}

namespace {

int count_dark_blobs(const Mask& dark, int x, int y, int w, int h) {
    if (w < 1 || h < 1) return 0;
    Mask sub(w, h);
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < w; ++col) sub.set(col, row, dark.at(x + col, y + row));
    return static_cast<int>(connected_components(sub).size());
}

} // namespace

std::vector<FaceBox> detect_faces(const Image& image, const DetectParams& params) {
    if (image.channels != Channels::RGB8)
        throw Error(errc::domain, "face detection needs an RGB8 image");
    const Mask skin = skin_mask_combined(image, params.skin);
    const Image gray = to_gray(image);

    std::vector<FaceBox> boxes;
    const double min_area = params.min_area_frac * image.width * image.height;
    for (const Component& comp : connected_components(skin)) {
        if (comp.area < min_area) continue;
        const double aspect = static_cast<double>(comp.h) / comp.w;
        if (aspect < params.aspect_min || aspect > params.aspect_max) continue;

        // Dark-feature validation inside the candidate box.
        std::vector<uint8_t> samples;
        samples.reserve(static_cast<size_t>(comp.w) * comp.h);
        for (int y = comp.y; y < comp.y + comp.h; ++y)
            for (int x = comp.x; x < comp.x + comp.w; ++x)
                samples.push_back(gray.gray_at(x, y));
        const int threshold = otsu_threshold(samples, params.binarize_lo, params.binarize_hi);
        const Mask dark = binarize(gray, threshold);
        const int upper_h = comp.h / 2;
        const int eyes = count_dark_blobs(dark, comp.x, comp.y, comp.w, upper_h);
        const int mouth =
            count_dark_blobs(dark, comp.x, comp.y + upper_h, comp.w, comp.h - upper_h);
        if (eyes < 2 || mouth < 1) continue;

        int skin_in_box = 0;
        for (int y = comp.y; y < comp.y + comp.h; ++y)
            for (int x = comp.x; x < comp.x + comp.w; ++x) skin_in_box += skin.at(x, y);
        FaceBox box;
        box.x = comp.x;
        box.y = comp.y;
        box.w = comp.w;
        box.h = comp.h;
        box.score = static_cast<double>(skin_in_box) / (static_cast<double>(comp.w) * comp.h);
        boxes.push_back(box);
    }
    std::stable_sort(boxes.begin(), boxes.end(),
                     [](const FaceBox& a, const FaceBox& b) { return a.score > b.score; });
    return boxes;
}

Image extract_face_chip(const Image& gray, const FaceBox& box, int size) {
    if (gray.channels != Channels::Gray8)
        throw Error(errc::domain, "face chip extraction needs a Gray8 frame");
    return resize_gray(crop(gray, box.x, box.y, box.w, box.h), size, size);
}

const Image& RegionChips::of(facs::Region region) const {
    switch (region) {
        case facs::Region::Cheeks: return cheeks;
        case facs::Region::EyeLids: return eyelids;
        case facs::Region::EyeBrows: return eyebrows;
        case facs::Region::Eyes: return eyes;
        case facs::Region::LipPart1: return lip_part1;
        case facs::Region::LipPart2: return lip_part2;
    }
    throw Error(errc::domain, "unknown region");
}

namespace {

Image row_band(const Image& chip, double lo, double hi, double col_lo = 0.0,
               double col_hi = 1.0) {
    const int y0 = static_cast<int>(lo * chip.height);
    const int y1 = static_cast<int>(hi * chip.height);
    const int x0 = static_cast<int>(col_lo * chip.width);
    const int x1 = static_cast<int>(col_hi * chip.width);
    return crop(chip, x0, y0, x1 - x0, y1 - y0);
}

Image hconcat(const Image& left, const Image& right) {
    Image out = Image::gray(left.width + right.width, left.height);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < left.width; ++x) out.set_gray(x, y, left.gray_at(x, y));
        for (int x = 0; x < right.width; ++x)
            out.set_gray(left.width + x, y, right.gray_at(x, y));
    }
    return out;
}

} // namespace

RegionChips crop_regions(const Image& face_chip) {
    if (face_chip.channels != Channels::Gray8)
        throw Error(errc::domain, "region cropping needs a Gray8 face chip");
    if (face_chip.width < 24 || face_chip.height < 24)
        throw Error(errc::domain, "face chip must be at least 24x24, got " +
                                      std::to_string(face_chip.width) + "x" +
                                      std::to_string(face_chip.height));
    RegionChips chips{
        .eyebrows = row_band(face_chip, 0.10, 0.25),
        .eyelids = row_band(face_chip, 0.25, 0.35),
        .eyes = row_band(face_chip, 0.30, 0.45),
        .cheeks = hconcat(row_band(face_chip, 0.45, 0.65, 0.0, 0.40),
                          row_band(face_chip, 0.45, 0.65, 0.60, 1.0)),
        .lip_part1 = row_band(face_chip, 0.65, 0.80),
        .lip_part2 = row_band(face_chip, 0.75, 0.95),
    };
    return chips;
}

} // namespace facsca::vision
