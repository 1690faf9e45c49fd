#pragma once

#include <string>

#include "evopatch/imaging.hpp"

namespace evopatch::imaging {

// Pixels only; the caller attaches landmark and metadata. 8-bit PNG
// (grayscale or RGB; RGB goes through luminance conversion) and binary PGM
// (P5, maxval 255) are accepted.
GrayImage load_gray_image(const std::string& path);

void write_png_gray(const GrayImage& img, const std::string& path);
void write_pgm(const GrayImage& img, const std::string& path);

} // namespace evopatch::imaging
