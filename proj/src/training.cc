// src/training.cc

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

#include "sfvoc/training.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "sfvoc/checkpoint.h"
#include "sfvoc/discriminators.h"
#include "sfvoc/error.h"
#include "sfvoc/losses.h"
#include "sfvoc/neural_filter.h"

namespace sfvoc {

namespace {

constexpr char kCheckpointFormat[] = "sfvoc-vocoder";

uint64_t Mix(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Tensor RowSlice(const Tensor &m, int64_t first, int64_t count) {
  const int64_t cols = m.cols();
  return Tensor({count, cols},
                std::vector<double>(m.data.begin() + first * cols,
                                    m.data.begin() + (first + count) * cols));
}

Tensor TargetMel(std::span<const double> samples, const Tensor &fb,
                 const VocoderConfig &cfg) {
  NoGradGuard no_grad;
  Tensor wave({static_cast<int64_t>(samples.size())},
              std::vector<double>(samples.begin(), samples.end()));
  return LogMel(StftMagnitude(Constant(std::move(wave)), cfg.stft), fb,
                cfg.mel.log_floor)
      .value();
}

Var PredictedMel(const Var &wave, const Tensor &fb, const VocoderConfig &cfg) {
  return LogMel(StftMagnitude(wave, cfg.stft), fb, cfg.mel.log_floor);
}

}  // namespace

void CheckUtterance(const Utterance &u, const VocoderConfig &cfg) {
  const int64_t frames = u.f0.size();
  SFVOC_CHECK(u.wave.sample_rate == cfg.stft.sample_rate, ErrorCode::kRateMismatch,
              u.id + ": sample rate " + std::to_string(u.wave.sample_rate));
  SFVOC_CHECK(frames >= 1 && u.wave.size() == frames * cfg.stft.frame_shift,
              ErrorCode::kShapeMismatch,
              u.id + ": " + std::to_string(u.wave.size()) + " samples do not match " +
                  std::to_string(frames) + " F0 frames");
  SFVOC_CHECK(u.mel.num_frames() == frames && u.mel.num_mels() == cfg.mel.num_mels,
              ErrorCode::kShapeMismatch,
              u.id + ": mel is " + ShapeString(u.mel.values.shape) + ", expected " +
                  std::to_string(frames) + " frames");
  u.f0.Validate(cfg.stft.sample_rate);
}

Waveform MakeExcitation(const F0Sequence &f0, const VocoderConfig &cfg,
                        AblationMode mode, uint64_t seed) {
  ExcitationConfig ec = cfg.excitation;
  ec.rng_seed = seed;
  const PointF0 point = UpsampleF0(f0, cfg.stft.frame_shift);
  return mode == AblationMode::kFullExcitation ? ProduceExcitation(point, ec)
                                               : ProduceNoiseExcitation(point, ec);
}

GeneratorOutput Generate(const Waveform &excitation, const Tensor &mel,
                         const ParameterStore &params, const VocoderConfig &cfg) {
  const SpectralPair e = Stft(excitation, cfg.stft);
  SFVOC_CHECK(e.num_frames() == mel.rows(), ErrorCode::kShapeMismatch,
              "excitation has " + std::to_string(e.num_frames()) +
                  " frames but mel has " + std::to_string(mel.rows()));
  FilterOutput f = FilterForward(Constant(e.amplitude), Constant(e.phase),
                                 Constant(mel), params, cfg.filter);
  GeneratorOutput out;
  out.wave = IstftOp(f.amplitude, f.phase, cfg.stft);
  out.amplitude = f.amplitude;
  out.phase = f.phase;
  return out;
}

Waveform Synthesize(const F0Sequence &f0, const MelSpectrogram &mel,
                    const ParameterStore &params, const VocoderConfig &cfg,
                    AblationMode mode) {
  SFVOC_CHECK(f0.size() == mel.num_frames(), ErrorCode::kShapeMismatch,
              "F0 has " + std::to_string(f0.size()) + " frames, mel has " +
                  std::to_string(mel.num_frames()));
  NoGradGuard no_grad;
  const Waveform e = MakeExcitation(f0, cfg, mode, cfg.excitation.rng_seed);
  GeneratorOutput g = Generate(e, mel.values, params, cfg);
  Waveform w;
  w.samples = g.wave.value().data;
  w.sample_rate = cfg.stft.sample_rate;
  return w;
}

double LearningRateAt(const TrainConfig &cfg, int64_t epoch) {
  return cfg.learning_rate * std::pow(cfg.lr_decay_per_epoch, static_cast<double>(epoch));
}

std::string StepReportCsvHeader() {
  return "step,lr,loss_g,loss_d,mel_loss,mpd_adv_g,mpd_fm,mrd_adv_g,mrd_fm,"
         "mpd_adv_d,mrd_adv_d";
}

std::string StepReportCsvRow(const StepReport &r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%lld,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g",
                static_cast<long long>(r.step), r.learning_rate, r.loss_g, r.loss_d,
                r.mel_loss, r.mpd_adv_g, r.mpd_fm, r.mrd_adv_g, r.mrd_fm, r.mpd_adv_d,
                r.mrd_adv_d);
  return buf;
}

Trainer::Trainer(VocoderConfig vocoder, TrainConfig train, std::vector<Utterance> data)
    : vocoder_(std::move(vocoder)),
      train_(std::move(train)),
      data_(std::move(data)),
      optimizer_(AdamWConfig{train_.beta1, train_.beta2, 1e-8, train_.weight_decay}) {
  vocoder_.Validate();
  train_.Validate();
  SFVOC_CHECK(!data_.empty(), ErrorCode::kInvalidArgument,
              "training needs at least one utterance");
  const int64_t min_samples = 2 * vocoder_.stft.frame_length;
  for (const Utterance &u : data_) {
    CheckUtterance(u, vocoder_);
    SFVOC_CHECK(std::min<int64_t>(u.f0.size(), train_.segment_frames) *
                        vocoder_.stft.frame_shift >= min_samples,
                ErrorCode::kInvalidArgument,
                u.id + " is too short for the resolution discriminator");
  }
  InitFilterParameters(vocoder_.filter, Mix(train_.seed, 1), &params_);
  InitMpdParameters(vocoder_.mpd, Mix(train_.seed, 2), &params_);
  InitMrdParameters(vocoder_.mrd, Mix(train_.seed, 3), &params_);
  filterbank_ = MelFilterbank(vocoder_.stft, vocoder_.mel);
}

int64_t Trainer::StepsPerEpoch() const {
  const int64_t n = static_cast<int64_t>(data_.size());
  return (n + train_.batch_size - 1) / train_.batch_size;
}

double Trainer::CurrentLearningRate() const {
  return LearningRateAt(train_, step_ / StepsPerEpoch());
}

std::vector<Trainer::Crop> Trainer::SampleBatch(int64_t step) const {
  const int64_t spe = StepsPerEpoch();
  const int64_t epoch = step / spe, pos = step % spe;
  std::vector<size_t> order(data_.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(Mix(train_.seed, Mix(0x0e90c4, epoch)));
  std::shuffle(order.begin(), order.end(), shuffle_rng);

  std::vector<Crop> crops;
  for (int b = 0; b < train_.batch_size; ++b) {
    const Utterance &u = data_[order[(pos * train_.batch_size + b) % order.size()]];
    const uint64_t key = Mix(Mix(train_.seed, step), b);
    std::mt19937_64 rng(key);
    const int64_t frames = u.f0.size();
    const int64_t len = std::min<int64_t>(frames, train_.segment_frames);
    std::uniform_int_distribution<int64_t> start(0, frames - len);
    crops.push_back({&u, start(rng), len, Mix(key, 0x5eed)});
  }
  return crops;
}

void Trainer::FailNonFinite(const std::string &what) const {
  std::string detail;
  if (!dump_dir_.empty()) {
    std::filesystem::create_directories(dump_dir_);
    const std::string path =
        dump_dir_ + "/nonfinite_step_" + std::to_string(step_);
    try {
      Save(path);
      detail = "; state dumped to " + path;
    } catch (const Error &e) {
      detail = std::string("; state dump failed: ") + e.what();
    }
  }
  throw Error(ErrorCode::kNonFinite, what + " at step " + std::to_string(step_ + 1) +
                                         detail);
}

StepReport Trainer::Step() {
  const double lr = CurrentLearningRate();
  const std::vector<Crop> crops = SampleBatch(step_);
  const double inv_batch = 1.0 / static_cast<double>(crops.size());
  const int ws = vocoder_.stft.frame_shift;

  struct Item {
    Var real;
    Tensor target_mel;
    GeneratorOutput fake;
  };
  std::vector<Item> items;
  for (const Crop &c : crops) {
    Item it;
    const auto first = c.utt->wave.samples.begin() + c.first_frame * ws;
    Tensor real({c.num_frames * ws}, std::vector<double>(first, first + c.num_frames * ws));
    it.target_mel = TargetMel(real.data, filterbank_, vocoder_);
    it.real = Constant(std::move(real));
    F0Sequence f0;
    f0.values.assign(c.utt->f0.values.begin() + c.first_frame,
                     c.utt->f0.values.begin() + c.first_frame + c.num_frames);
    const Waveform e = MakeExcitation(f0, vocoder_, train_.ablation, c.noise_seed);
    it.fake = Generate(e, RowSlice(c.utt->mel.values, c.first_frame, c.num_frames),
                       params_, vocoder_);
    items.push_back(std::move(it));
  }

  StepReport rep;
  rep.learning_rate = lr;

  // Discriminator update; the generated waveforms enter as constants.
  params_.ZeroGrad("mpd/");
  params_.ZeroGrad("mrd/");
  for (const Item &it : items) {
    const Var fake = Detach(it.fake.wave);
    const SubLosses mpd = DiscriminatorSubLosses(MpdForward(it.real, params_, vocoder_.mpd),
                                                 MpdForward(fake, params_, vocoder_.mpd));
    const SubLosses mrd = DiscriminatorSubLosses(MrdForward(it.real, params_, vocoder_.mrd),
                                                 MrdForward(fake, params_, vocoder_.mrd));
    const Var loss = DiscriminatorObjective(mpd, mrd, vocoder_.loss);
    if (!std::isfinite(loss.item())) FailNonFinite("discriminator loss is non-finite");
    rep.loss_d += loss.item() * inv_batch;
    rep.mpd_adv_d += SumValues(mpd.adv) * inv_batch;
    rep.mrd_adv_d += SumValues(mrd.adv) * inv_batch;
    Backward(Scale(loss, inv_batch));
  }
  optimizer_.Step(&params_, "mpd/", lr);
  optimizer_.Step(&params_, "mrd/", lr);
  if (phase_hook_) phase_hook_("discriminator");

  // Generator update against the refreshed, frozen discriminators.
  params_.SetRequiresGrad("mpd/", false);
  params_.SetRequiresGrad("mrd/", false);
  params_.ZeroGrad("generator/");
  try {
    for (const Item &it : items) {
      DiscriminatorOutputs mpd_real, mrd_real;
      {
        NoGradGuard no_grad;
        mpd_real = MpdForward(it.real, params_, vocoder_.mpd);
        mrd_real = MrdForward(it.real, params_, vocoder_.mrd);
      }
      const SubLosses mpd =
          GeneratorSubLosses(mpd_real, MpdForward(it.fake.wave, params_, vocoder_.mpd));
      const SubLosses mrd =
          GeneratorSubLosses(mrd_real, MrdForward(it.fake.wave, params_, vocoder_.mrd));
      const Var mel = MelLoss(PredictedMel(it.fake.wave, filterbank_, vocoder_),
                              Constant(it.target_mel));
      const Var loss = GeneratorObjective(mpd, mrd, mel, vocoder_.loss);
      if (!std::isfinite(loss.item())) FailNonFinite("generator loss is non-finite");
      rep.loss_g += loss.item() * inv_batch;
      rep.mel_loss += mel.item() * inv_batch;
      rep.mpd_adv_g += SumValues(mpd.adv) * inv_batch;
      rep.mpd_fm += SumValues(mpd.fm) * inv_batch;
      rep.mrd_adv_g += SumValues(mrd.adv) * inv_batch;
      rep.mrd_fm += SumValues(mrd.fm) * inv_batch;
      Backward(Scale(loss, inv_batch));
    }
  } catch (...) {
    params_.SetRequiresGrad("mpd/", true);
    params_.SetRequiresGrad("mrd/", true);
    throw;
  }
  params_.SetRequiresGrad("mpd/", true);
  params_.SetRequiresGrad("mrd/", true);
  optimizer_.Step(&params_, "generator/", lr);
  if (!params_.AllFinite()) FailNonFinite("parameters became non-finite");
  if (phase_hook_) phase_hook_("generator");

  ++step_;
  rep.step = step_;
  return rep;
}

double Trainer::EvalMelLoss() const {
  NoGradGuard no_grad;
  double total = 0;
  for (const Utterance &u : data_) {
    const Waveform e =
        MakeExcitation(u.f0, vocoder_, train_.ablation, vocoder_.excitation.rng_seed);
    GeneratorOutput g = Generate(e, u.mel.values, params_, vocoder_);
    const Tensor target = TargetMel(u.wave.samples, filterbank_, vocoder_);
    total += MelLoss(PredictedMel(g.wave, filterbank_, vocoder_), Constant(target)).item();
  }
  return total / static_cast<double>(data_.size());
}

void Trainer::Save(const std::string &path) const {
  Container c;
  c.meta["format"] = kCheckpointFormat;
  c.meta["step"] = step_;
  c.meta["vocoder"] = VocoderConfigToJson(vocoder_);
  c.meta["train"] = TrainConfigToJson(train_);
  for (const auto &[name, node] : params_.entries()) c.arrays["param/" + name] = node->value;
  optimizer_.Save(&c);
  WriteContainer(path, c);
}

namespace {

Container ReadVocoderContainer(const std::string &path) {
  Container c = ReadContainer(path);
  SFVOC_CHECK(c.meta.value("format", std::string()) == kCheckpointFormat,
              ErrorCode::kCorrupt, path + " is not a vocoder checkpoint");
  SFVOC_CHECK(c.meta.contains("vocoder") && c.meta.contains("step"),
              ErrorCode::kCorrupt, path + " lacks configuration metadata");
  return c;
}

}  // namespace

void Trainer::Load(const std::string &path) {
  const Container c = ReadVocoderContainer(path);
  const VocoderConfig stored = VocoderConfigFromJson(c.meta["vocoder"]);
  SFVOC_CHECK(stored == vocoder_, ErrorCode::kConfigMismatch,
              path + " was trained with a different vocoder configuration");
  int64_t params_seen = 0;
  for (const auto &[key, t] : c.arrays) {
    if (!key.starts_with("param/")) continue;
    const std::string name = key.substr(6);
    SFVOC_CHECK(params_.Contains(name), ErrorCode::kConfigMismatch,
                path + " has unexpected parameter " + name);
    ++params_seen;
  }
  SFVOC_CHECK(params_seen == static_cast<int64_t>(params_.entries().size()),
              ErrorCode::kConfigMismatch, path + " is missing parameters");
  for (const auto &[name, node] : params_.entries()) {
    const Tensor &t = c.arrays.at("param/" + name);
    SFVOC_CHECK(t.shape == node->value.shape, ErrorCode::kConfigMismatch,
                "parameter " + name + " has shape " + ShapeString(t.shape));
    node->value = t;
  }
  optimizer_.Load(c);
  step_ = c.meta["step"].get<int64_t>();
}

std::string SaveCheckpointDir(const Trainer &trainer, const std::string &dir) {
  std::filesystem::create_directories(dir);
  const std::string name = "step_" + std::to_string(trainer.step());
  const std::string path = (std::filesystem::path(dir) / name).string();
  trainer.Save(path);
  const std::string pointer = (std::filesystem::path(dir) / "latest").string();
  {
    std::ofstream os(pointer + ".tmp", std::ios::trunc);
    SFVOC_CHECK(os.good(), ErrorCode::kIo, "cannot write " + pointer);
    os << name << "\n";
  }
  std::filesystem::rename(pointer + ".tmp", pointer);
  return path;
}

std::optional<std::string> LatestCheckpoint(const std::string &dir) {
  const std::filesystem::path pointer = std::filesystem::path(dir) / "latest";
  std::ifstream is(pointer);
  if (!is.good()) return std::nullopt;
  std::string name;
  is >> name;
  SFVOC_CHECK(!name.empty() && name.find('/') == std::string::npos, ErrorCode::kCorrupt,
              pointer.string() + " does not name a checkpoint");
  return (std::filesystem::path(dir) / name).string();
}

LoadedVocoder LoadVocoder(const std::string &path) {
  const Container c = ReadVocoderContainer(path);
  LoadedVocoder v;
  v.config = VocoderConfigFromJson(c.meta["vocoder"]);
  v.config.Validate();
  if (c.meta.contains("train")) v.train = TrainConfigFromJson(c.meta["train"]);
  v.step = c.meta["step"].get<int64_t>();
  for (const auto &[key, t] : c.arrays)
    if (key.starts_with("param/")) v.params.Add(key.substr(6), t);
  // Fail early if the generator is incomplete.
  ParameterStore expected;
  InitFilterParameters(v.config.filter, 0, &expected);
  for (const auto &[name, node] : expected.entries()) {
    SFVOC_CHECK(v.params.Contains(name), ErrorCode::kConfigMismatch,
                path + " lacks generator parameter " + name);
    SFVOC_CHECK(v.params.Get(name).shape() == node->value.shape,
                ErrorCode::kConfigMismatch, "parameter " + name + " has wrong shape");
  }
  return v;
}

}  // namespace sfvoc
