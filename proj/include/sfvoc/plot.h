// include/sfvoc/plot.h

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

#ifndef SFVOC_PLOT_H_
#define SFVOC_PLOT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sfvoc/stft.h"

namespace sfvoc {

struct RgbImage {
  int width = 0, height = 0;
  std::vector<uint8_t> pixels;  // row-major RGB, top row first
};

// Log-amplitude heatmap of an F x N amplitude matrix: time runs left to
// right, frequency bottom to top.  Values are shown in dB, clipped to
// `dynamic_range_db` below the maximum.
RgbImage RenderSpectrogram(const Tensor &amplitude, double dynamic_range_db = 80.0);

void WritePng(const std::string &path, const RgbImage &image);

void PlotSpectrogram(const Waveform &wave, const StftConfig &cfg,
                     const std::string &path);
void PlotSpectrogram(const SpectralPair &spec, const std::string &path);

}  // namespace sfvoc

#endif  // SFVOC_PLOT_H_
