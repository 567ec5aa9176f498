#include "facsca/skin.hpp"

#include <algorithm>
#include <cmath>

#include "facsca/error.hpp"

namespace facsca::vision {

SkinThresholds SkinThresholds::from_config(const Config& cfg) {
    SkinThresholds t;
    t.rgb_r_min = cfg.get_int("skin.rgb.r_min");
    t.rgb_g_min = cfg.get_int("skin.rgb.g_min");
    t.rgb_b_min = cfg.get_int("skin.rgb.b_min");
    t.rgb_spread_min = cfg.get_int("skin.rgb.spread_min");
    t.rgb_rg_gap_min = cfg.get_int("skin.rgb.rg_gap_min");
    t.cb_min = cfg.get_double("skin.ycbcr.cb_min");
    t.cb_max = cfg.get_double("skin.ycbcr.cb_max");
    t.cr_min = cfg.get_double("skin.ycbcr.cr_min");
    t.cr_max = cfg.get_double("skin.ycbcr.cr_max");
    t.h_max_low = cfg.get_double("skin.hsi.h_max_low");
    t.h_min_high = cfg.get_double("skin.hsi.h_min_high");
    t.s_min = cfg.get_double("skin.hsi.s_min");
    t.s_max = cfg.get_double("skin.hsi.s_max");
    t.i_min = cfg.get_double("skin.hsi.i_min");
    return t;
}

bool rgb_is_skin(uint8_t r, uint8_t g, uint8_t b, const SkinThresholds& t) {
    const int maxc = std::max({r, g, b});
    const int minc = std::min({r, g, b});
    return r > t.rgb_r_min && g > t.rgb_g_min && b > t.rgb_b_min &&
           maxc - minc > t.rgb_spread_min && std::abs(r - g) > t.rgb_rg_gap_min &&
           r > g && r > b;
}

bool ycbcr_is_skin(uint8_t r, uint8_t g, uint8_t b, const SkinThresholds& t) {
    // BT.601 full-range conversion.
    const double cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
    const double cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
    return cb >= t.cb_min && cb <= t.cb_max && cr >= t.cr_min && cr <= t.cr_max;
}

bool hsi_is_skin(uint8_t r, uint8_t g, uint8_t b, const SkinThresholds& t) {
    const double sum = static_cast<double>(r) + g + b;
    const double intensity = sum / (3.0 * 255.0);
    if (intensity <= t.i_min) return false;
    const double minc = std::min({r, g, b});
    const double saturation = sum == 0 ? 0.0 : 1.0 - 3.0 * minc / sum;
    if (saturation < t.s_min || saturation > t.s_max) return false;
    const double num = 0.5 * ((r - g) + (static_cast<double>(r) - b));
    const double den = std::sqrt(static_cast<double>(r - g) * (r - g) +
                                 (static_cast<double>(r) - b) * (static_cast<double>(g) - b));
    if (den < 1e-12) return false; // achromatic: hue undefined
    double hue = std::acos(std::clamp(num / den, -1.0, 1.0)) * 180.0 / M_PI;
    if (b > g) hue = 360.0 - hue;
    return hue <= t.h_max_low || hue >= t.h_min_high;
}

namespace {

template <typename Predicate>
Mask mask_by(const Image& image, Predicate&& predicate) {
    if (image.channels != Channels::RGB8)
        throw Error(errc::domain, "skin detection needs an RGB8 image");
    Mask mask(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            uint8_t r, g, b;
            image.rgb_at(x, y, r, g, b);
            mask.set(x, y, predicate(r, g, b) ? 1 : 0);
        }
    }
    return mask;
}

} // namespace

Mask skin_mask_rgb(const Image& image, const SkinThresholds& t) {
    return mask_by(image, [&](uint8_t r, uint8_t g, uint8_t b) { return rgb_is_skin(r, g, b, t); });
}

Mask skin_mask_ycbcr(const Image& image, const SkinThresholds& t) {
    return mask_by(image,
                   [&](uint8_t r, uint8_t g, uint8_t b) { return ycbcr_is_skin(r, g, b, t); });
}

Mask skin_mask_hsi(const Image& image, const SkinThresholds& t) {
    return mask_by(image, [&](uint8_t r, uint8_t g, uint8_t b) { return hsi_is_skin(r, g, b, t); });
}

Mask skin_mask_combined(const Image& image, const SkinThresholds& t) {
    return mask_by(image, [&](uint8_t r, uint8_t g, uint8_t b) {
        return rgb_is_skin(r, g, b, t) || ycbcr_is_skin(r, g, b, t) || hsi_is_skin(r, g, b, t);
    });
}

} // namespace facsca::vision
