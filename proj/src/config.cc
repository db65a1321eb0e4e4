// src/config.cc

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

#include "sfvoc/config.h"

#include <fstream>
#include <set>
#include <type_traits>

#include "sfvoc/error.h"

namespace sfvoc {

using nlohmann::json;

namespace {

std::string WindowName(WindowType w) {
  return w == WindowType::kHannPeriodic ? "hann" : "rectangular";
}

WindowType ParseWindow(const std::string &name) {
  if (name == "hann") return WindowType::kHannPeriodic;
  if (name == "rectangular") return WindowType::kRectangular;
  throw Error(ErrorCode::kConfig, "unknown window type '" + name + "'");
}

template <class V, class C> void Fields(V &v, C &c);

class JsonWriter {
 public:
  template <class T>
  void operator()(const char *key, const T &value) {
    if constexpr (std::is_same_v<T, WindowType>) {
      out_[key] = WindowName(value);
    } else if constexpr (std::is_same_v<T, AblationMode>) {
      out_[key] = AblationName(value);
    } else if constexpr (std::is_same_v<T, StftConfig>) {
      JsonWriter sub;
      Fields(sub, value);
      out_[key] = sub.out_;
    } else {
      out_[key] = value;
    }
  }
  json out_ = json::object();
};

class JsonReader {
 public:
  JsonReader(const json &j, std::string section) : j_(j), section_(std::move(section)) {
    SFVOC_CHECK(j.is_object(), ErrorCode::kConfig,
                "config section '" + section_ + "' must be an object");
  }

  template <class T>
  void operator()(const char *key, T &value) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    const std::string where = section_ + "." + key;
    try {
      if constexpr (std::is_same_v<T, WindowType>) {
        value = ParseWindow(it->template get<std::string>());
      } else if constexpr (std::is_same_v<T, AblationMode>) {
        value = ParseAblation(it->template get<std::string>());
      } else if constexpr (std::is_same_v<T, StftConfig>) {
        JsonReader sub(*it, where);
        Fields(sub, value);
        sub.Finish();
      } else if constexpr (std::is_integral_v<T>) {
        SFVOC_CHECK(it->is_number_integer() || it->is_number_unsigned(),
                    ErrorCode::kConfig, where + " must be an integer");
        value = it->template get<T>();
      } else {
        value = it->template get<T>();
      }
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kConfig, where + ": " + e.what());
    }
  }

  void Finish() const {
    for (const auto &[key, unused] : j_.items())
      SFVOC_CHECK(seen_.count(key), ErrorCode::kConfig,
                  "unknown config key '" + section_ + "." + key + "'");
  }

 private:
  const json &j_;
  std::string section_;
  std::set<std::string> seen_;
};

template <class V, class C>
  requires std::is_same_v<std::remove_const_t<C>, StftConfig>
void StftFields(V &v, C &c) {
  v("frame_length", c.frame_length);
  v("frame_shift", c.frame_shift);
  v("fft_size", c.fft_size);
  v("sample_rate", c.sample_rate);
  v("window", c.window);
}

template <class V, class C>
void Fields(V &v, C &c) {
  using T = std::remove_const_t<C>;
  if constexpr (std::is_same_v<T, StftConfig>) {
    StftFields(v, c);
  } else if constexpr (std::is_same_v<T, MelConfig>) {
    v("num_mels", c.num_mels);
    v("fmin", c.fmin);
    v("fmax", c.fmax);
    v("log_floor", c.log_floor);
  } else if constexpr (std::is_same_v<T, ExcitationConfig>) {
    v("alpha", c.alpha);
    v("sigma", c.sigma);
    v("sample_rate", c.sample_rate);
    v("rng_seed", c.rng_seed);
  } else if constexpr (std::is_same_v<T, FilterConfig>) {
    v("num_blocks", c.num_blocks);
    v("hidden_dim", c.hidden_dim);
    v("kernel_size", c.kernel_size);
    v("ffn_ratio", c.ffn_ratio);
    v("spec_bins", c.spec_bins);
    v("mel_bins", c.mel_bins);
  } else if constexpr (std::is_same_v<T, MpdConfig>) {
    v("periods", c.periods);
    v("channels", c.channels);
    v("strides", c.strides);
    v("kernel", c.kernel);
    v("leaky_slope", c.leaky_slope);
  } else if constexpr (std::is_same_v<T, MrdConfig>) {
    v("base", c.base);
    v("channels", c.channels);
    v("leaky_slope", c.leaky_slope);
  } else if constexpr (std::is_same_v<T, LossWeights>) {
    v("lambda_mrd", c.lambda_mrd);
    v("lambda_mel", c.lambda_mel);
  } else if constexpr (std::is_same_v<T, TrainConfig>) {
    v("learning_rate", c.learning_rate);
    v("beta1", c.beta1);
    v("beta2", c.beta2);
    v("weight_decay", c.weight_decay);
    v("lr_decay_per_epoch", c.lr_decay_per_epoch);
    v("batch_size", c.batch_size);
    v("segment_frames", c.segment_frames);
    v("max_steps", c.max_steps);
    v("seed", c.seed);
    v("ablation", c.ablation);
    v("checkpoint_every", c.checkpoint_every);
    v("f0_predictor_steps", c.f0_predictor_steps);
    v("f0_predictor_learning_rate", c.f0_predictor_learning_rate);
  } else if constexpr (std::is_same_v<T, F0PredictorConfig>) {
    v("kernel_sizes", c.kernel_sizes);
    v("conv_channels", c.conv_channels);
    v("head_hidden", c.head_hidden);
    v("mel_bins", c.mel_bins);
    v("contour_scale_hz", c.contour_scale_hz);
    v("threshold", c.threshold);
  } else if constexpr (std::is_same_v<T, DataConfig>) {
    v("wav_dir", c.wav_dir);
    v("feature_dir", c.feature_dir);
    v("ckpt_dir", c.ckpt_dir);
    v("f0_import", c.f0_import);
  } else {
    static_assert(sizeof(T) == 0, "no field list for this type");
  }
}

template <class C>
json ToJson(const C &c) {
  JsonWriter w;
  Fields(w, c);
  return w.out_;
}

template <class C>
void FromJson(const json &j, const std::string &section, C *c) {
  JsonReader r(j, section);
  Fields(r, *c);
  r.Finish();
}

}  // namespace

std::string AblationName(AblationMode mode) {
  return mode == AblationMode::kFullExcitation ? "full" : "noise";
}

AblationMode ParseAblation(const std::string &name) {
  if (name == "full") return AblationMode::kFullExcitation;
  if (name == "noise") return AblationMode::kNoiseOnly;
  throw Error(ErrorCode::kConfig,
              "ablation must be 'full' or 'noise', got '" + name + "'");
}

void VocoderConfig::Validate() const {
  stft.Validate();
  mel.Validate(stft.sample_rate);
  excitation.Validate();
  filter.Validate();
  mpd.Validate();
  mrd.Validate();
  loss.Validate();
  SFVOC_CHECK(excitation.sample_rate == stft.sample_rate, ErrorCode::kConfig,
              "excitation and stft sample rates differ");
  SFVOC_CHECK(filter.spec_bins == stft.num_bins(), ErrorCode::kConfig,
              "filter.spec_bins must equal fft_size / 2 + 1 = " +
                  std::to_string(stft.num_bins()));
  SFVOC_CHECK(filter.mel_bins == mel.num_mels, ErrorCode::kConfig,
              "filter.mel_bins must equal mel.num_mels");
  SFVOC_CHECK(mrd.base == stft, ErrorCode::kConfig,
              "mrd.base must equal the analysis stft configuration");
}

void TrainConfig::Validate() const {
  SFVOC_CHECK(learning_rate > 0 && lr_decay_per_epoch > 0 && lr_decay_per_epoch <= 1,
              ErrorCode::kConfig, "learning rate and decay must be positive");
  SFVOC_CHECK(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && weight_decay >= 0,
              ErrorCode::kConfig, "invalid AdamW hyperparameters");
  SFVOC_CHECK(batch_size >= 1 && segment_frames >= 1 && max_steps >= 0 &&
                  checkpoint_every >= 1,
              ErrorCode::kConfig, "batch, segment, step counts must be positive");
  SFVOC_CHECK(f0_predictor_steps >= 0 && f0_predictor_learning_rate > 0,
              ErrorCode::kConfig, "invalid f0 predictor training settings");
}

void DataConfig::Validate() const {
  SFVOC_CHECK(f0_import == "extract" || f0_import == "sidecar", ErrorCode::kConfig,
              "data.f0_import must be 'extract' or 'sidecar'");
}

void ProjectConfig::Validate() const {
  vocoder.Validate();
  train.Validate();
  f0_predictor.Validate();
  data.Validate();
  SFVOC_CHECK(f0_predictor.mel_bins == vocoder.mel.num_mels, ErrorCode::kConfig,
              "f0_predictor.mel_bins must equal mel.num_mels");
  const int min_frames =
      (2 * vocoder.stft.frame_length + vocoder.stft.frame_shift - 1) /
      vocoder.stft.frame_shift;
  SFVOC_CHECK(train.segment_frames >= min_frames, ErrorCode::kConfig,
              "train.segment_frames must cover twice the frame length (" +
                  std::to_string(min_frames) + " frames)");
}

ProjectConfig PresetConfig(const std::string &name) {
  ProjectConfig c;
  c.vocoder.mrd.base = c.vocoder.stft;
  if (name == "full") return c;
  SFVOC_CHECK(name == "desk", ErrorCode::kConfig,
              "unknown preset '" + name + "' (expected full or desk)");
  c.vocoder.filter.hidden_dim = 48;
  c.vocoder.filter.num_blocks = 3;
  c.vocoder.mpd.channels = {4, 8, 16, 32, 32};
  c.vocoder.mrd.channels = 4;
  c.train.batch_size = 1;
  c.train.segment_frames = 32;
  c.train.checkpoint_every = 500;
  c.f0_predictor.conv_channels = 32;
  c.f0_predictor.head_hidden = 32;
  c.train.f0_predictor_steps = 600;
  return c;
}

json VocoderConfigToJson(const VocoderConfig &c) {
  return json{{"stft", ToJson(c.stft)},         {"mel", ToJson(c.mel)},
              {"excitation", ToJson(c.excitation)}, {"filter", ToJson(c.filter)},
              {"mpd", ToJson(c.mpd)},           {"mrd", ToJson(c.mrd)},
              {"loss", ToJson(c.loss)}};
}

VocoderConfig VocoderConfigFromJson(const json &j) {
  VocoderConfig c;
  SFVOC_CHECK(j.is_object(), ErrorCode::kConfig, "vocoder config must be an object");
  for (const auto &[key, value] : j.items()) {
    if (key == "stft") FromJson(value, key, &c.stft);
    else if (key == "mel") FromJson(value, key, &c.mel);
    else if (key == "excitation") FromJson(value, key, &c.excitation);
    else if (key == "filter") FromJson(value, key, &c.filter);
    else if (key == "mpd") FromJson(value, key, &c.mpd);
    else if (key == "mrd") FromJson(value, key, &c.mrd);
    else if (key == "loss") FromJson(value, key, &c.loss);
    else throw Error(ErrorCode::kConfig, "unknown config section '" + key + "'");
  }
  return c;
}

json TrainConfigToJson(const TrainConfig &c) { return ToJson(c); }

TrainConfig TrainConfigFromJson(const json &j) {
  TrainConfig c;
  FromJson(j, "train", &c);
  return c;
}

json F0PredictorConfigToJson(const F0PredictorConfig &c) { return ToJson(c); }

F0PredictorConfig F0PredictorConfigFromJson(const json &j) {
  F0PredictorConfig c;
  FromJson(j, "f0_predictor", &c);
  return c;
}

json ProjectConfigToJson(const ProjectConfig &c) {
  json j = VocoderConfigToJson(c.vocoder);
  j["train"] = ToJson(c.train);
  j["f0_predictor"] = ToJson(c.f0_predictor);
  j["data"] = ToJson(c.data);
  return j;
}

ProjectConfig ProjectConfigFromJson(const json &j, const ProjectConfig &base) {
  SFVOC_CHECK(j.is_object(), ErrorCode::kConfig, "config must be a JSON object");
  ProjectConfig c = base;
  if (j.contains("preset")) {
    SFVOC_CHECK(j["preset"].is_string(), ErrorCode::kConfig, "preset must be a string");
    c = PresetConfig(j["preset"].get<std::string>());
  }
  for (const auto &[key, value] : j.items()) {
    if (key == "preset") continue;
    else if (key == "stft") FromJson(value, key, &c.vocoder.stft);
    else if (key == "mel") FromJson(value, key, &c.vocoder.mel);
    else if (key == "excitation") FromJson(value, key, &c.vocoder.excitation);
    else if (key == "filter") FromJson(value, key, &c.vocoder.filter);
    else if (key == "mpd") FromJson(value, key, &c.vocoder.mpd);
    else if (key == "mrd") FromJson(value, key, &c.vocoder.mrd);
    else if (key == "loss") FromJson(value, key, &c.vocoder.loss);
    else if (key == "train") FromJson(value, key, &c.train);
    else if (key == "f0_predictor") FromJson(value, key, &c.f0_predictor);
    else if (key == "data") FromJson(value, key, &c.data);
    else throw Error(ErrorCode::kConfig, "unknown config section '" + key + "'");
  }
  c.Validate();
  return c;
}

ProjectConfig LoadProjectConfig(const std::string &path) {
  std::ifstream is(path);
  SFVOC_CHECK(is.good(), ErrorCode::kIo, "cannot open config " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfig, path + ": " + e.what());
  }
  return ProjectConfigFromJson(j);
}

}  // namespace sfvoc
