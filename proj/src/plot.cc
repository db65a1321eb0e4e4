// src/plot.cc

// Copyright 2026  sfvoc authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sfvoc/plot.h"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>

#include "sfvoc/error.h"

namespace sfvoc {

namespace {

// Dark blue -> purple -> orange -> pale yellow.
constexpr std::array<std::array<double, 3>, 5> kPalette = {{
    {0.0, 0.0, 0.02},
    {0.23, 0.06, 0.44},
    {0.71, 0.21, 0.47},
    {0.98, 0.55, 0.04},
    {0.99, 1.0, 0.64},
}};

std::array<uint8_t, 3> ColorAt(double u) {
  u = std::clamp(u, 0.0, 1.0) * (kPalette.size() - 1);
  const size_t i = std::min(static_cast<size_t>(u), kPalette.size() - 2);
  const double t = u - static_cast<double>(i);
  std::array<uint8_t, 3> rgb;
  for (int c = 0; c < 3; ++c) {
    const double v = kPalette[i][c] + t * (kPalette[i + 1][c] - kPalette[i][c]);
    rgb[c] = static_cast<uint8_t>(std::lround(255.0 * v));
  }
  return rgb;
}

}  // namespace

RgbImage RenderSpectrogram(const Tensor &amplitude, double dynamic_range_db) {
  SFVOC_CHECK(amplitude.shape.size() == 2 && amplitude.size() > 0,
              ErrorCode::kShapeMismatch, "spectrogram plot needs a non-empty matrix");
  SFVOC_CHECK(dynamic_range_db > 0, ErrorCode::kInvalidArgument,
              "dynamic range must be positive");
  const int64_t frames = amplitude.rows(), bins = amplitude.cols();
  std::vector<double> db(amplitude.size());
  double top = -1e300;
  for (int64_t i = 0; i < amplitude.size(); ++i) {
    db[i] = 20.0 * std::log10(std::max(amplitude.data[i], 1e-10));
    top = std::max(top, db[i]);
  }
  RgbImage img;
  img.width = static_cast<int>(frames);
  img.height = static_cast<int>(bins);
  img.pixels.resize(static_cast<size_t>(img.width) * img.height * 3);
  for (int64_t f = 0; f < frames; ++f) {
    for (int64_t k = 0; k < bins; ++k) {
      const double u = 1.0 + (db[f * bins + k] - top) / dynamic_range_db;
      const auto rgb = ColorAt(u);
      const int64_t y = bins - 1 - k;
      uint8_t *px = &img.pixels[(y * img.width + f) * 3];
      px[0] = rgb[0];
      px[1] = rgb[1];
      px[2] = rgb[2];
    }
  }
  return img;
}

void WritePng(const std::string &path, const RgbImage &image) {
  SFVOC_CHECK(image.width > 0 && image.height > 0 &&
                  image.pixels.size() ==
                      static_cast<size_t>(image.width) * image.height * 3,
              ErrorCode::kInvalidArgument, "malformed image");
  std::unique_ptr<FILE, int (*)(FILE *)> fp(std::fopen(path.c_str(), "wb"),
                                            &std::fclose);
  SFVOC_CHECK(fp != nullptr, ErrorCode::kIo, "cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  SFVOC_CHECK(png != nullptr, ErrorCode::kIo, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kIo, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "libpng failed while writing " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y)
    png_write_row(png, const_cast<png_bytep>(
                           &image.pixels[static_cast<size_t>(y) * image.width * 3]));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void PlotSpectrogram(const Waveform &wave, const StftConfig &cfg,
                     const std::string &path) {
  WritePng(path, RenderSpectrogram(Stft(wave, cfg).amplitude));
}

void PlotSpectrogram(const SpectralPair &spec, const std::string &path) {
  WritePng(path, RenderSpectrogram(spec.amplitude));
}

}  // namespace sfvoc
