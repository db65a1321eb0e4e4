// src/corpus.cc

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

#include "sfvoc/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "sfvoc/error.h"
#include "sfvoc/wav.h"

namespace sfvoc {

namespace {

// Two-pole resonator normalised to roughly unit peak gain.
class Resonator {
 public:
  void Set(double hz, double bandwidth, int sr) {
    const double r = std::exp(-std::numbers::pi * bandwidth / sr);
    a1_ = 2 * r * std::cos(2 * std::numbers::pi * hz / sr);
    a2_ = -r * r;
    gain_ = 1 - r;
  }
  double Tick(double x) {
    const double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a1_ = 0, a2_ = 0, gain_ = 1, y1_ = 0, y2_ = 0;
};

enum class SegmentKind { kVoiced, kNoise, kPause };

struct Segment {
  SegmentKind kind;
  int64_t begin, end;
  double f0_start = 0, f0_end = 0;
  double formants[3] = {0, 0, 0};
};

}  // namespace

SyntheticUtterance SynthesizeUtterance(double seconds, uint64_t seed,
                                       const StftConfig &stft) {
  SFVOC_CHECK(seconds > 0, ErrorCode::kInvalidArgument, "duration must be positive");
  const int sr = stft.sample_rate;
  int64_t n = static_cast<int64_t>(std::llround(seconds * sr));
  n -= n % stft.frame_shift;
  SFVOC_CHECK(n > 0, ErrorCode::kInvalidArgument, "duration shorter than one frame");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto range = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };

  std::vector<Segment> plan;
  int64_t pos = static_cast<int64_t>(range(0.03, 0.08) * sr);
  plan.push_back({SegmentKind::kPause, 0, std::min(pos, n)});
  bool voiced_next = true;
  while (pos < n) {
    Segment s;
    s.begin = pos;
    if (voiced_next) {
      s.kind = SegmentKind::kVoiced;
      s.end = pos + static_cast<int64_t>(range(0.15, 0.4) * sr);
      s.f0_start = range(100.0, 220.0);
      s.f0_end = s.f0_start * range(0.75, 1.3);
      s.formants[0] = range(300, 800);
      s.formants[1] = range(900, 2200);
      s.formants[2] = range(2400, 3200);
    } else {
      s.kind = uni(rng) < 0.6 ? SegmentKind::kNoise : SegmentKind::kPause;
      s.end = pos + static_cast<int64_t>(range(0.04, 0.12) * sr);
    }
    s.end = std::min(s.end, n);
    plan.push_back(s);
    pos = s.end;
    voiced_next = !voiced_next;
  }

  std::vector<double> x(n, 0.0), f0_sample(n, 0.0);
  Resonator formant[3];
  Resonator hiss;
  hiss.Set(4500, 2500, sr);
  double phase = 0;
  const double nyquist = sr / 2.0;
  const int64_t fade = sr / 100;
  for (const Segment &s : plan) {
    if (s.kind == SegmentKind::kVoiced)
      for (int i = 0; i < 3; ++i) formant[i].Set(s.formants[i], 60 + 40 * i, sr);
    const int64_t len = s.end - s.begin;
    for (int64_t t = s.begin; t < s.end; ++t) {
      const int64_t rel = t - s.begin;
      const double env = std::min({1.0, static_cast<double>(rel + 1) / fade,
                                   static_cast<double>(len - rel) / fade});
      double v = 0;
      if (s.kind == SegmentKind::kVoiced) {
        const double u = len > 1 ? static_cast<double>(rel) / (len - 1) : 0.0;
        const double hz = s.f0_start + (s.f0_end - s.f0_start) * u;
        f0_sample[t] = hz;
        phase = std::fmod(phase + 2 * std::numbers::pi * hz / sr, 2 * std::numbers::pi);
        double src = 0;
        for (int k = 1; k * hz < nyquist; ++k) src += std::sin(k * phase) / k;
        double y = src;
        for (Resonator &r : formant) y = r.Tick(y) * 4.0 + 0.3 * y;
        v = env * y;
      } else if (s.kind == SegmentKind::kNoise) {
        v = env * 0.3 * hiss.Tick(gauss(rng));
      } else {
        v = 1e-4 * gauss(rng);
      }
      x[t] = v;
    }
  }
  double peak = 0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0)
    for (double &v : x) v *= 0.5 / peak;

  SyntheticUtterance utt;
  utt.wave.samples = std::move(x);
  utt.wave.sample_rate = sr;
  const int64_t frames = n / stft.frame_shift;
  utt.f0.values.resize(frames);
  for (int64_t f = 0; f < frames; ++f)
    utt.f0.values[f] = f0_sample[f * stft.frame_shift + stft.frame_shift / 2];
  return utt;
}

std::vector<std::string> WriteSyntheticCorpus(const std::string &dir, int count,
                                              double seconds, uint64_t seed,
                                              const StftConfig &stft) {
  SFVOC_CHECK(count >= 1, ErrorCode::kInvalidArgument, "corpus needs >= 1 utterance");
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "utt_%03d", i);
    const std::string base = (std::filesystem::path(dir) / name).string();
    SyntheticUtterance u = SynthesizeUtterance(seconds, seed * 1000003ULL + i, stft);
    WriteWav(base + ".wav", u.wave);
    WriteF0Text(base + ".f0", u.f0);
    paths.push_back(base + ".wav");
  }
  return paths;
}

void WriteF0Text(const std::string &path, const F0Sequence &f0) {
  std::ofstream os(path);
  SFVOC_CHECK(os.good(), ErrorCode::kIo, "cannot write " + path);
  char buf[64];
  for (double v : f0.values) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    os << buf;
  }
}

F0Sequence ReadF0Text(const std::string &path) {
  std::ifstream is(path);
  SFVOC_CHECK(is.good(), ErrorCode::kIo, "cannot open " + path);
  F0Sequence f0;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    double hz;
    if (!(ls >> hz)) {
      std::string rest;
      SFVOC_CHECK(!(std::istringstream(line) >> rest), ErrorCode::kCorrupt,
                  path + ":" + std::to_string(lineno) + ": expected a frequency");
      continue;
    }
    SFVOC_CHECK(std::isfinite(hz) && hz >= 0, ErrorCode::kCorrupt,
                path + ":" + std::to_string(lineno) + ": invalid frequency");
    f0.values.push_back(hz);
  }
  return f0;
}

}  // namespace sfvoc
