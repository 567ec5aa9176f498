#include "facsca/pnm.hpp"

#include <fstream>
#include <sstream>

#include "facsca/error.hpp"

namespace facsca::vision {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in, const std::string& origin) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) return token;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    if (token.empty()) throw Error(errc::format, origin + ": truncated header");
    return token;
}

int parse_header_int(std::istream& in, const std::string& origin, const char* what,
                     int min, int max) {
    const std::string token = next_token(in, origin);
    try {
        size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        if (value < min || value > max)
            throw Error(errc::format, origin + ": " + what + " out of range: " + token);
        return value;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(errc::format, origin + ": bad " + std::string(what) + ": " + token);
    }
}

} // namespace

Image decode_pnm(std::istream& in, const std::string& origin) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) throw Error(errc::format, origin + ": truncated header");
    Channels channels;
    if (magic[0] == 'P' && magic[1] == '5')
        channels = Channels::Gray8;
    else if (magic[0] == 'P' && magic[1] == '6')
        channels = Channels::RGB8;
    else
        throw Error(errc::format, origin + ": unsupported magic \"" +
                                      std::string(magic, 2) + "\" (want P5 or P6)");

    const int width = parse_header_int(in, origin, "width", 1, 1 << 20);
    const int height = parse_header_int(in, origin, "height", 1, 1 << 20);
    // next_token consumes the single whitespace byte that separates the
    // maxval from the raster, so the stream now sits on pixel data.
    const int maxval = parse_header_int(in, origin, "maxval", 1, 65535);
    if (maxval != 255)
        throw Error(errc::format, origin + ": only 8-bit maxval 255 is supported, got " +
                                      std::to_string(maxval));

    Image img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    const size_t n = static_cast<size_t>(width) * height * img.channel_count();
    img.data.resize(n);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
        throw Error(errc::format, origin + ": truncated raster (expected " + std::to_string(n) +
                                      " bytes, got " + std::to_string(in.gcount()) + ")");
    return img;
}

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io, "cannot open image: " + path);
    return decode_pnm(in, path);
}

void encode_pnm(const Image& image, std::ostream& out) {
    out << (image.channels == Channels::Gray8 ? "P5" : "P6") << "\n"
        << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data.data()),
              static_cast<std::streamsize>(image.data.size()));
}

void save_image(const Image& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write image: " + path);
    encode_pnm(image, out);
    out.flush();
    if (!out) throw Error(errc::io, "short write: " + path);
}

} // namespace facsca::vision
