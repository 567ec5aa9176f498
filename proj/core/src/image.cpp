#include "facsca/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "facsca/error.hpp"

namespace facsca::vision {

Image Image::gray(int width, int height, uint8_t fill) {
    if (width < 1 || height < 1) throw Error(errc::domain, "image dimensions must be positive");
    Image img;
    img.width = width;
    img.height = height;
    img.channels = Channels::Gray8;
    img.data.assign(static_cast<size_t>(width) * height, fill);
    return img;
}

Image Image::rgb(int width, int height, uint8_t r, uint8_t g, uint8_t b) {
    if (width < 1 || height < 1) throw Error(errc::domain, "image dimensions must be positive");
    Image img;
    img.width = width;
    img.height = height;
    img.channels = Channels::RGB8;
    img.data.resize(static_cast<size_t>(width) * height * 3);
    for (size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] = r;
        img.data[i + 1] = g;
        img.data[i + 2] = b;
    }
    return img;
}

size_t Image::index(int x, int y) const {
    return (static_cast<size_t>(y) * width + x) * channel_count();
}

uint8_t Image::gray_at(int x, int y) const {
    if (channels != Channels::Gray8) throw Error(errc::domain, "gray_at on non-gray image");
    return data[index(x, y)];
}

void Image::set_gray(int x, int y, uint8_t v) {
    if (channels != Channels::Gray8) throw Error(errc::domain, "set_gray on non-gray image");
    data[index(x, y)] = v;
}

void Image::rgb_at(int x, int y, uint8_t& r, uint8_t& g, uint8_t& b) const {
    if (channels != Channels::RGB8) throw Error(errc::domain, "rgb_at on non-RGB image");
    const size_t i = index(x, y);
    r = data[i];
    g = data[i + 1];
    b = data[i + 2];
}

void Image::set_rgb(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
    if (channels != Channels::RGB8) throw Error(errc::domain, "set_rgb on non-RGB image");
    const size_t i = index(x, y);
    data[i] = r;
    data[i + 1] = g;
    data[i + 2] = b;
}

int Mask::popcount() const {
    int n = 0;
    for (uint8_t b : bits) n += b;
    return n;
}

Image to_gray(const Image& image) {
    if (image.channels == Channels::Gray8) return image;
    Image gray = Image::gray(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            uint8_t r, g, b;
            image.rgb_at(x, y, r, g, b);
            const long v = std::lround(0.299 * r + 0.587 * g + 0.114 * b);
            gray.set_gray(x, y, static_cast<uint8_t>(std::clamp(v, 0L, 255L)));
        }
    }
    return gray;
}

Mask binarize(const Image& gray, int threshold) {
    if (gray.channels != Channels::Gray8) throw Error(errc::domain, "binarize needs Gray8 input");
    Mask mask(gray.width, gray.height);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x)
            mask.set(x, y, gray.gray_at(x, y) < threshold ? 1 : 0);
    return mask;
}

int otsu_threshold(const std::vector<uint8_t>& samples, int lo, int hi) {
    if (samples.empty()) return lo;
    std::array<long, 256> hist{};
    for (uint8_t s : samples) ++hist[s];
    const double total = static_cast<double>(samples.size());
    double sum_all = 0;
    for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];

    double best_var = -1.0;
    int best_t = 0;
    double weight_bg = 0, sum_bg = 0;
    for (int t = 0; t < 256; ++t) {
        weight_bg += hist[t];
        if (weight_bg == 0) continue;
        const double weight_fg = total - weight_bg;
        if (weight_fg == 0) break;
        sum_bg += static_cast<double>(t) * hist[t];
        const double mean_bg = sum_bg / weight_bg;
        const double mean_fg = (sum_all - sum_bg) / weight_fg;
        const double var = weight_bg * weight_fg * (mean_bg - mean_fg) * (mean_bg - mean_fg);
        if (var > best_var) { // strict: ties keep the lowest threshold
            best_var = var;
            best_t = t + 1; // feature pixels are those strictly below the threshold
        }
    }
    return std::clamp(best_t, lo, hi);
}

Image resize_gray(const Image& gray, int out_width, int out_height) {
    if (gray.channels != Channels::Gray8) throw Error(errc::domain, "resize needs Gray8 input");
    if (out_width < 1 || out_height < 1)
        throw Error(errc::domain, "resize target must be positive");
    Image out = Image::gray(out_width, out_height);
    const double sx = static_cast<double>(gray.width) / out_width;
    const double sy = static_cast<double>(gray.height) / out_height;
    for (int y = 0; y < out_height; ++y) {
        const double src_y = std::clamp((y + 0.5) * sy - 0.5, 0.0, gray.height - 1.0);
        const int y0 = static_cast<int>(src_y);
        const int y1 = std::min(y0 + 1, gray.height - 1);
        const double fy = src_y - y0;
        for (int x = 0; x < out_width; ++x) {
            const double src_x = std::clamp((x + 0.5) * sx - 0.5, 0.0, gray.width - 1.0);
            const int x0 = static_cast<int>(src_x);
            const int x1 = std::min(x0 + 1, gray.width - 1);
            const double fx = src_x - x0;
            const double top = gray.gray_at(x0, y0) * (1 - fx) + gray.gray_at(x1, y0) * fx;
            const double bottom = gray.gray_at(x0, y1) * (1 - fx) + gray.gray_at(x1, y1) * fx;
            const long v = std::lround(top * (1 - fy) + bottom * fy);
            out.set_gray(x, y, static_cast<uint8_t>(std::clamp(v, 0L, 255L)));
        }
    }
    return out;
}

Image crop(const Image& image, int x, int y, int w, int h) {
    if (x < 0 || y < 0 || w < 1 || h < 1 || x + w > image.width || y + h > image.height)
        throw Error(errc::domain, "crop rectangle outside image bounds");
    Image out;
    out.width = w;
    out.height = h;
    out.channels = image.channels;
    const int ch = image.channel_count();
    out.data.resize(static_cast<size_t>(w) * h * ch);
    for (int row = 0; row < h; ++row) {
        const auto* src = image.data.data() + image.index(x, y + row);
        std::copy(src, src + static_cast<size_t>(w) * ch,
                  out.data.begin() + static_cast<size_t>(row) * w * ch);
    }
    return out;
}

} // namespace facsca::vision
