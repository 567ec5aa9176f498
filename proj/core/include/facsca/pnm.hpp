#pragma once

#include <iosfwd>
#include <string>

#include "facsca/image.hpp"

namespace facsca::vision {

/// Binary PGM (P5) and PPM (P6), 8-bit, max value 255. Samples are
/// preserved exactly; any other magic is a format error.
Image load_image(const std::string& path);
Image decode_pnm(std::istream& in, const std::string& origin);

void save_image(const Image& image, const std::string& path);
void encode_pnm(const Image& image, std::ostream& out);

} // namespace facsca::vision
