#pragma once

#include "facsca/config.hpp"
#include "facsca/image.hpp"

namespace facsca::vision {

/// Per-rule thresholds, normally taken from the `skin.*` config keys.
struct SkinThresholds {
    int rgb_r_min = 95;
    int rgb_g_min = 40;
    int rgb_b_min = 20;
    int rgb_spread_min = 15;
    int rgb_rg_gap_min = 15;
    double cb_min = 77, cb_max = 127;
    double cr_min = 133, cr_max = 173;
    double h_max_low = 50, h_min_high = 340;
    double s_min = 0.10, s_max = 0.70;
    double i_min = 40.0 / 255.0;

    static SkinThresholds from_config(const Config& cfg);
};

bool rgb_is_skin(uint8_t r, uint8_t g, uint8_t b, const SkinThresholds& t);
bool ycbcr_is_skin(uint8_t r, uint8_t g, uint8_t b, const SkinThresholds& t);
bool hsi_is_skin(uint8_t r, uint8_t g, uint8_t b, const SkinThresholds& t);

Mask skin_mask_rgb(const Image& image, const SkinThresholds& t);
Mask skin_mask_ycbcr(const Image& image, const SkinThresholds& t);
Mask skin_mask_hsi(const Image& image, const SkinThresholds& t);

/// Pixelwise OR of the three masks; a pixel is skin when any rule says so.
Mask skin_mask_combined(const Image& image, const SkinThresholds& t);

} // namespace facsca::vision
