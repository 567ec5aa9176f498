#pragma once

#include <cstdint>
#include <vector>

namespace facsca::vision {

enum class Channels { Gray8, RGB8 };

/// 8-bit image, row-major, interleaved samples for RGB8.
struct Image {
    int width = 0;
    int height = 0;
    Channels channels = Channels::Gray8;
    std::vector<uint8_t> data;

    static Image gray(int width, int height, uint8_t fill = 0);
    static Image rgb(int width, int height, uint8_t r = 0, uint8_t g = 0, uint8_t b = 0);

    int channel_count() const { return channels == Channels::Gray8 ? 1 : 3; }
    size_t index(int x, int y) const;

    uint8_t gray_at(int x, int y) const;          // Gray8 only
    void set_gray(int x, int y, uint8_t v);       // Gray8 only
    void rgb_at(int x, int y, uint8_t& r, uint8_t& g, uint8_t& b) const;
    void set_rgb(int x, int y, uint8_t r, uint8_t g, uint8_t b);

    bool operator==(const Image& other) const = default;
};

/// Per-pixel binary mask; 1 marks the predicate holding at the pixel.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    Mask() = default;
    Mask(int w, int h) : width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {}

    uint8_t at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x]; }
    void set(int x, int y, uint8_t v) { bits[static_cast<size_t>(y) * width + x] = v; }
    int popcount() const;

    bool operator==(const Mask& other) const = default;
};

/// BT.601 luminance, rounded to the nearest integer per pixel.
Image to_gray(const Image& image);

/// Marks pixels strictly darker than the threshold (the dark facial
/// features, not the background).
Mask binarize(const Image& gray, int threshold);

/// Otsu's threshold over the histogram of the given samples; ties pick the
/// lowest threshold. Returns `lo` for empty input.
int otsu_threshold(const std::vector<uint8_t>& samples, int lo, int hi);

/// Bilinear resample of a Gray8 image.
Image resize_gray(const Image& gray, int out_width, int out_height);

/// Axis-aligned crop; the rectangle must lie inside the image.
Image crop(const Image& image, int x, int y, int w, int h);

} // namespace facsca::vision
