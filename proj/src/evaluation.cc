// src/evaluation.cc

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

#include "sfvoc/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sfvoc/error.h"

namespace sfvoc {

namespace {

Waveform Trimmed(const Waveform &w, int64_t n) {
  Waveform out = w;
  out.samples.resize(n);
  return out;
}

}  // namespace

double LasRmseFromAmplitudes(const Tensor &a, const Tensor &b, double floor) {
  SFVOC_CHECK(a.shape == b.shape && a.size() > 0, ErrorCode::kShapeMismatch,
              "LAS-RMSE needs equal non-empty spectra, got " + ShapeString(a.shape) +
                  " and " + ShapeString(b.shape));
  double acc = 0;
  for (int64_t i = 0; i < a.size(); ++i) {
    const double d = 20.0 * std::log10(std::max(a.data[i], floor)) -
                     20.0 * std::log10(std::max(b.data[i], floor));
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double LasRmse(const Waveform &a, const Waveform &b, const StftConfig &cfg) {
  const int64_t n = std::min(a.size(), b.size());
  SFVOC_CHECK(n > 0, ErrorCode::kInvalidArgument, "LAS-RMSE of an empty waveform");
  return LasRmseFromAmplitudes(Stft(Trimmed(a, n), cfg).amplitude,
                               Stft(Trimmed(b, n), cfg).amplitude);
}

std::vector<double> MelCepstrum(std::span<const double> log_mel, int order) {
  const int64_t m = static_cast<int64_t>(log_mel.size());
  SFVOC_CHECK(order >= 1 && order < m, ErrorCode::kInvalidArgument,
              "cepstral order must be below the number of mel bands");
  const double scale = std::sqrt(2.0 / static_cast<double>(m));
  std::vector<double> c(order);
  for (int n = 1; n <= order; ++n) {
    double acc = 0;
    for (int64_t k = 0; k < m; ++k)
      acc += log_mel[k] * std::cos(std::numbers::pi * n * (k + 0.5) / m);
    c[n - 1] = scale * acc;
  }
  return c;
}

double McdFromLogMel(const Tensor &a, const Tensor &b, int order) {
  SFVOC_CHECK(a.shape == b.shape && a.shape.size() == 2 && a.rows() > 0,
              ErrorCode::kShapeMismatch,
              "MCD needs equal non-empty log-mel matrices, got " +
                  ShapeString(a.shape) + " and " + ShapeString(b.shape));
  const double k = 10.0 * std::numbers::sqrt2 / std::numbers::ln10;
  double total = 0;
  for (int64_t f = 0; f < a.rows(); ++f) {
    const std::vector<double> ca = MelCepstrum(a.row(f), order);
    const std::vector<double> cb = MelCepstrum(b.row(f), order);
    double d = 0;
    for (int i = 0; i < order; ++i) d += (ca[i] - cb[i]) * (ca[i] - cb[i]);
    total += std::sqrt(d);
  }
  return k * total / static_cast<double>(a.rows());
}

double Mcd(const Waveform &a, const Waveform &b, const StftConfig &stft,
           const MelConfig &mel) {
  const int64_t n = std::min(a.size(), b.size());
  SFVOC_CHECK(n > 0, ErrorCode::kInvalidArgument, "MCD of an empty waveform");
  return McdFromLogMel(ComputeMelSpectrogram(Trimmed(a, n), stft, mel).values,
                       ComputeMelSpectrogram(Trimmed(b, n), stft, mel).values);
}

std::optional<double> F0RmseCents(const F0Sequence &a, const F0Sequence &b) {
  SFVOC_CHECK(a.size() == b.size(), ErrorCode::kShapeMismatch,
              "F0 sequences differ in length");
  double acc = 0;
  int64_t count = 0;
  for (int64_t t = 0; t < a.size(); ++t) {
    if (a.values[t] > 0 && b.values[t] > 0) {
      const double cents = 1200.0 * std::log2(a.values[t] / b.values[t]);
      acc += cents * cents;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return std::sqrt(acc / static_cast<double>(count));
}

double VuvErrorPercent(const F0Sequence &a, const F0Sequence &b) {
  SFVOC_CHECK(a.size() == b.size() && a.size() > 0, ErrorCode::kShapeMismatch,
              "V/UV error needs equal non-empty F0 sequences");
  int64_t wrong = 0;
  for (int64_t t = 0; t < a.size(); ++t)
    wrong += (a.values[t] > 0) != (b.values[t] > 0);
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(a.size());
}

double RealTimeFactor(double generation_seconds, double audio_seconds) {
  SFVOC_CHECK(audio_seconds > 0, ErrorCode::kInvalidArgument,
              "real-time factor needs a positive audio duration");
  SFVOC_CHECK(generation_seconds >= 0, ErrorCode::kInvalidArgument,
              "negative generation time");
  return generation_seconds / audio_seconds;
}

void FinalizeReport(MetricReport *report) {
  SFVOC_CHECK(!report->utterances.empty(), ErrorCode::kInvalidArgument,
              "metric report has no utterances");
  UtteranceMetrics &m = report->mean;
  m = UtteranceMetrics{};
  m.id = "mean";
  double f0_sum = 0;
  int f0_count = 0;
  for (const UtteranceMetrics &u : report->utterances) {
    m.las_rmse_db += u.las_rmse_db;
    m.mcd_db += u.mcd_db;
    m.vuv_error_pct += u.vuv_error_pct;
    if (u.f0_rmse_cents) {
      f0_sum += *u.f0_rmse_cents;
      ++f0_count;
    }
  }
  const double n = static_cast<double>(report->utterances.size());
  m.las_rmse_db /= n;
  m.mcd_db /= n;
  m.vuv_error_pct /= n;
  if (f0_count > 0) m.f0_rmse_cents = f0_sum / f0_count;
  m.rtf = RealTimeFactor(report->generation_seconds, report->audio_seconds);
}

std::string ReportCsv(const MetricReport &report) {
  std::string out = "id,las_rmse_db,mcd_db,f0_rmse_cents,vuv_error_pct,rtf\n";
  auto row = [&](const UtteranceMetrics &u) {
    char f0[32] = "";
    if (u.f0_rmse_cents) std::snprintf(f0, sizeof(f0), "%.6f", *u.f0_rmse_cents);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%s,%.6f,%.6f\n", u.id.c_str(),
                  u.las_rmse_db, u.mcd_db, f0, u.vuv_error_pct, u.rtf);
    out += buf;
  };
  for (const UtteranceMetrics &u : report.utterances) row(u);
  row(report.mean);
  return out;
}

nlohmann::json ReportJson(const MetricReport &report) {
  auto obj = [](const UtteranceMetrics &u) {
    nlohmann::json j = {{"id", u.id},
                        {"las_rmse_db", u.las_rmse_db},
                        {"mcd_db", u.mcd_db},
                        {"vuv_error_pct", u.vuv_error_pct},
                        {"rtf", u.rtf}};
    j["f0_rmse_cents"] = u.f0_rmse_cents ? nlohmann::json(*u.f0_rmse_cents)
                                         : nlohmann::json(nullptr);
    return j;
  };
  nlohmann::json j;
  j["utterances"] = nlohmann::json::array();
  for (const UtteranceMetrics &u : report.utterances) j["utterances"].push_back(obj(u));
  j["mean"] = obj(report.mean);
  j["generation_seconds"] = report.generation_seconds;
  j["audio_seconds"] = report.audio_seconds;
  j["pesq"] = "external - not computed";
  j["visqol"] = "external - not computed";
  return j;
}

}  // namespace sfvoc
