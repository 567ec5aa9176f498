#include "facsca/fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "facsca/error.hpp"
#include "facsca/pnm.hpp"

namespace fs = std::filesystem;

namespace facsca::fixtures {

vision::Image synthetic_face_scene(int width, int height, int cx, int cy, int rx, int ry) {
    vision::Image img = vision::Image::rgb(width, height, 200, 200, 200);
    auto paint_ellipse = [&](int ecx, int ecy, double erx, double ery, uint8_t r, uint8_t g,
                             uint8_t b) {
        const int x0 = std::max(0, static_cast<int>(ecx - erx - 1));
        const int x1 = std::min(width - 1, static_cast<int>(ecx + erx + 1));
        const int y0 = std::max(0, static_cast<int>(ecy - ery - 1));
        const int y1 = std::min(height - 1, static_cast<int>(ecy + ery + 1));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = (x - ecx) / erx;
                const double dy = (y - ecy) / ery;
                if (dx * dx + dy * dy <= 1.0) img.set_rgb(x, y, r, g, b);
            }
        }
    };
    paint_ellipse(cx, cy, rx, ry, 224, 160, 128); // skin tone
    const double eye_r = std::max(1.0, rx / 6.0);
    paint_ellipse(cx - rx / 2, cy - ry / 3, eye_r, eye_r, 20, 20, 20);
    paint_ellipse(cx + rx / 2, cy - ry / 3, eye_r, eye_r, 20, 20, 20);
    // Mouth bar, narrower than the ellipse at that height so the skin
    // component stays connected around it.
    const int mouth_half_h = std::max(1, ry / 8);
    for (int y = cy + ry / 3; y <= cy + ry / 3 + mouth_half_h; ++y)
        for (int x = cx - rx / 2; x <= cx + rx / 2; ++x)
            if (y >= 0 && y < height && x >= 0 && x < width) img.set_rgb(x, y, 30, 10, 10);
    return img;
}

RegionLayout region_layout(facs::Region region, int chip_size) {
    auto row = [&](double f) { return static_cast<int>(f * chip_size); };
    RegionLayout layout;
    layout.left_col_lo = 0;
    layout.left_col_hi = chip_size;
    layout.right_col_lo = layout.right_col_hi = chip_size;
    switch (region) {
        case facs::Region::EyeBrows:
            layout.row_lo = row(0.10);
            layout.row_hi = row(0.25);
            break;
        case facs::Region::EyeLids:
            layout.row_lo = row(0.25);
            layout.row_hi = row(0.35);
            break;
        case facs::Region::Eyes:
            layout.row_lo = row(0.30);
            layout.row_hi = row(0.45);
            break;
        case facs::Region::Cheeks:
            layout.row_lo = row(0.45);
            layout.row_hi = row(0.65);
            layout.left_col_lo = 0;
            layout.left_col_hi = row(0.40);
            layout.right_col_lo = row(0.60);
            layout.right_col_hi = chip_size;
            break;
        case facs::Region::LipPart1:
            layout.row_lo = row(0.65);
            layout.row_hi = row(0.80);
            break;
        case facs::Region::LipPart2:
            layout.row_lo = row(0.75);
            layout.row_hi = row(0.95);
            break;
    }
    return layout;
}

namespace {

constexpr uint8_t kOverlapFill = 64;
constexpr uint8_t kNeutralFill = 32;
constexpr uint8_t kBandValue = 255;
constexpr uint8_t kFaceFill = 100;

// Local rows a region shares with its neighbor (eyelids/eyes and the two
// lip parts overlap); band patterns must stay out of them.
struct ExclusiveRows {
    int lo = 0, hi = 0; // [lo, hi) local to the region crop
};

ExclusiveRows exclusive_rows(facs::Region region, int chip_size) {
    auto row = [&](double f) { return static_cast<int>(f * chip_size); };
    const RegionLayout layout = region_layout(region, chip_size);
    const int h = layout.crop_height();
    switch (region) {
        case facs::Region::EyeLids: return {0, row(0.30) - layout.row_lo};
        case facs::Region::Eyes: return {row(0.35) - layout.row_lo, h};
        case facs::Region::LipPart1: return {0, row(0.75) - layout.row_lo};
        case facs::Region::LipPart2: return {row(0.80) - layout.row_lo, h};
        default: return {0, h};
    }
}

} // namespace

vision::Image au_template_chip(facs::Region region, int au, int chip_size) {
    const auto& spec = facs::region_spec(region);
    const RegionLayout layout = region_layout(region, chip_size);
    const ExclusiveRows excl = exclusive_rows(region, chip_size);
    vision::Image chip = vision::Image::gray(layout.crop_width(), layout.crop_height(),
                                             kOverlapFill);
    const uint8_t base = au == 0 ? kNeutralFill : 0;
    for (int y = excl.lo; y < excl.hi; ++y)
        for (int x = 0; x < chip.width; ++x) chip.set_gray(x, y, base);
    if (au != 0) {
        const auto it = std::find(spec.au_list.begin(), spec.au_list.end(), au);
        if (it == spec.au_list.end())
            throw Error(errc::domain, "AU " + std::to_string(au) + " not in region " + spec.name);
        const int i = static_cast<int>(it - spec.au_list.begin());
        const int m = static_cast<int>(spec.au_list.size());
        const int span = excl.hi - excl.lo;
        const int band_lo = excl.lo + i * span / m;
        const int band_hi = excl.lo + (i + 1) * span / m;
        for (int y = band_lo; y < band_hi; ++y)
            for (int x = 0; x < chip.width; ++x) chip.set_gray(x, y, kBandValue);
    }
    return chip;
}

vision::Image face_chip_with_aus(const std::set<int>& aus, int chip_size) {
    vision::Image face = vision::Image::gray(chip_size, chip_size, kFaceFill);
    for (const auto& spec : facs::region_table()) {
        int region_au = 0;
        for (int au : aus) {
            if (facs::region_of_au(au) != spec.region) continue;
            if (region_au != 0)
                throw Error(errc::domain, "face fixture supports at most one AU per region; " +
                                              spec.name + " got " + std::to_string(region_au) +
                                              " and " + std::to_string(au));
            region_au = au;
        }
        const vision::Image tmpl = au_template_chip(spec.region, region_au, chip_size);
        const RegionLayout layout = region_layout(spec.region, chip_size);
        const int left_w = layout.left_col_hi - layout.left_col_lo;
        for (int y = 0; y < tmpl.height; ++y) {
            for (int x = 0; x < tmpl.width; ++x) {
                const int dest_x =
                    x < left_w ? layout.left_col_lo + x : layout.right_col_lo + (x - left_w);
                face.set_gray(dest_x, layout.row_lo + y, tmpl.gray_at(x, y));
            }
        }
    }
    return face;
}

vision::Image identity_chip(int identity_index, int sample_index, int size) {
    vision::Image chip = vision::Image::gray(size, size);
    const int variant = identity_index % 4;
    const int tier = identity_index / 4;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            int v = 0;
            switch (variant) {
                case 0: v = 4 * x; break;
                case 1: v = 4 * y; break;
                case 2: v = 2 * (x + y); break;
                default: v = 255 - 4 * ((x + y) % 64); break;
            }
            v = (v + 16 * tier + 3 * sample_index) & 0xff;
            chip.set_gray(x, y, static_cast<uint8_t>(v));
        }
    }
    return chip;
}

void write_au_gallery(const std::string& dir, int chip_size) {
    fs::create_directories(dir);
    for (const auto& spec : facs::region_table()) {
        vision::save_image(au_template_chip(spec.region, 0, chip_size),
                           dir + "/" + spec.name + "_neutral.pgm");
        for (int au : spec.au_list)
            vision::save_image(au_template_chip(spec.region, au, chip_size),
                               dir + "/" + spec.name + "_" + std::to_string(au) + ".pgm");
    }
}

void write_identity_faces(const std::string& dir, int identities, int samples_each, int size) {
    fs::create_directories(dir);
    for (int k = 0; k < identities; ++k)
        for (int s = 1; s <= samples_each; ++s)
            vision::save_image(identity_chip(k, s, size),
                               dir + "/id" + std::to_string(k) + "_" + std::to_string(s) + ".pgm");
}

std::string write_bypass_corpus(const std::string& dir, int shots_per_label,
                                int frames_per_shot) {
    fs::create_directories(dir);
    nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
    for (const auto& def : facs::expression_table()) {
        // Prefer expansions the classifier maps back to this expression;
        // Confusion has none (its template is a transversal of Fear's
        // groups), so its shots keep the dominated AU set.
        std::vector<std::set<int>> expansions;
        for (const auto& aus : facs::expand_expression(def))
            if (facs::classify_au_set(aus).label == def.label) expansions.push_back(aus);
        if (expansions.empty()) expansions = facs::expand_expression(def);
        for (int s = 0; s < shots_per_label; ++s) {
            const auto& aus = expansions[static_cast<size_t>(s) % expansions.size()];
            std::string name = facs::to_string(def.label);
            std::transform(name.begin(), name.end(), name.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            nlohmann::ordered_json shot;
            shot["shot_id"] = name + "_" + (s < 10 ? "0" : "") + std::to_string(s);
            shot["frames"] = nlohmann::ordered_json::array();
            shot["label"] = facs::to_string(def.label);
            nlohmann::ordered_json frames_aus = nlohmann::ordered_json::array();
            for (int f = 0; f < frames_per_shot; ++f)
                frames_aus.push_back(std::vector<int>(aus.begin(), aus.end()));
            shot["aus"] = std::move(frames_aus);
            manifest.push_back(std::move(shot));
        }
    }
    const std::string path = dir + "/manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write manifest: " + path);
    out << manifest.dump(2) << "\n";
    return path;
}

} // namespace facsca::fixtures
