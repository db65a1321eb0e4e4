// include/sfvoc/evaluation.h

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

#ifndef SFVOC_EVALUATION_H_
#define SFVOC_EVALUATION_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sfvoc/excitation.h"
#include "sfvoc/mel.h"
#include "sfvoc/stft.h"

namespace sfvoc {

inline constexpr double kLasFloor = 1e-5;
inline constexpr int kMcdOrder = 24;

// RMSE in dB between 20*log10(max(A, floor)) matrices of equal shape.
double LasRmseFromAmplitudes(const Tensor &a, const Tensor &b,
                             double floor = kLasFloor);
// Both waveforms are trimmed to the shorter length first.
double LasRmse(const Waveform &a, const Waveform &b, const StftConfig &cfg);

// Orthonormal DCT-II of one log-mel frame, coefficients 1..order.
std::vector<double> MelCepstrum(std::span<const double> log_mel, int order = kMcdOrder);
// (10 * sqrt(2) / ln 10) * mean over frames of the cepstral L2 distance.
double McdFromLogMel(const Tensor &a, const Tensor &b, int order = kMcdOrder);
double Mcd(const Waveform &a, const Waveform &b, const StftConfig &stft,
           const MelConfig &mel);

// RMSE of 1200 * log2(a / b) over frames voiced in both; nullopt if none are.
std::optional<double> F0RmseCents(const F0Sequence &a, const F0Sequence &b);
// Percentage of frames whose voicing decisions disagree.
double VuvErrorPercent(const F0Sequence &a, const F0Sequence &b);

double RealTimeFactor(double generation_seconds, double audio_seconds);

struct UtteranceMetrics {
  std::string id;
  double las_rmse_db = 0;
  double mcd_db = 0;
  std::optional<double> f0_rmse_cents;
  double vuv_error_pct = 0;
  double rtf = 0;
};

struct MetricReport {
  std::vector<UtteranceMetrics> utterances;
  UtteranceMetrics mean;  // id "mean"; f0 averaged over utterances that have it
  double generation_seconds = 0;
  double audio_seconds = 0;
};

// Fills `mean` from the utterance rows and the totals.
void FinalizeReport(MetricReport *report);
std::string ReportCsv(const MetricReport &report);
nlohmann::json ReportJson(const MetricReport &report);

}  // namespace sfvoc

#endif  // SFVOC_EVALUATION_H_
