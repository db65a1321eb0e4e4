// src/losses.cc

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

#include "sfvoc/losses.h"

#include "sfvoc/error.h"

namespace sfvoc {

namespace {

Var SumVars(const std::vector<Var> &terms) {
  Var total = Constant(Tensor::Scalar(0.0));
  for (const Var &t : terms) total = Add(total, t);
  return total;
}

void CheckScalars(const std::vector<Var> &terms) {
  for (const Var &t : terms)
    SFVOC_CHECK(t.size() == 1, ErrorCode::kShapeMismatch,
                "sub-loss must be a scalar, got " + ShapeString(t.shape()));
}

}  // namespace

void LossWeights::Validate() const {
  SFVOC_CHECK(lambda_mrd >= 0 && lambda_mel >= 0, ErrorCode::kInvalidArgument,
              "loss weights must be non-negative");
}

Var AdvLossGenerator(const Var &fake_score) { return HingeBelowOne(fake_score); }

Var AdvLossDiscriminator(const Var &real_score, const Var &fake_score) {
  return Add(HingeBelowOne(real_score), HingeAboveMinusOne(fake_score));
}

Var FeatureMatching(const std::vector<Var> &real, const std::vector<Var> &fake) {
  SFVOC_CHECK(real.size() == fake.size(), ErrorCode::kShapeMismatch,
              "feature lists differ in length: " + std::to_string(real.size()) +
                  " vs " + std::to_string(fake.size()));
  std::vector<Var> terms;
  for (size_t i = 0; i < real.size(); ++i) {
    SFVOC_CHECK(real[i].shape() == fake[i].shape(), ErrorCode::kShapeMismatch,
                "feature " + std::to_string(i) + " shapes differ: " +
                    ShapeString(real[i].shape()) + " vs " +
                    ShapeString(fake[i].shape()));
    terms.push_back(MeanAbsDiff(real[i], fake[i]));
  }
  return SumVars(terms);
}

Var MelLoss(const Var &predicted, const Var &target) {
  SFVOC_CHECK(predicted.shape() == target.shape(), ErrorCode::kShapeMismatch,
              "mel shapes differ: " + ShapeString(predicted.shape()) + " vs " +
                  ShapeString(target.shape()));
  return MeanAbsDiff(predicted, target);
}

Var GeneratorObjective(const SubLosses &mpd, const SubLosses &mrd, const Var &mel,
                       const LossWeights &w) {
  w.Validate();
  SFVOC_CHECK(mpd.adv.size() == mpd.fm.size() && mrd.adv.size() == mrd.fm.size(),
              ErrorCode::kShapeMismatch,
              "generator objective needs one fm term per adversarial term");
  for (const SubLosses *s : {&mpd, &mrd}) {
    CheckScalars(s->adv);
    CheckScalars(s->fm);
  }
  Var mpd_sum = Add(SumVars(mpd.adv), SumVars(mpd.fm));
  Var mrd_sum = Add(SumVars(mrd.adv), SumVars(mrd.fm));
  return Add(Add(mpd_sum, Scale(mrd_sum, w.lambda_mrd)),
             Scale(Reshape(mel, {}), w.lambda_mel));
}

Var DiscriminatorObjective(const SubLosses &mpd, const SubLosses &mrd,
                           const LossWeights &w) {
  w.Validate();
  CheckScalars(mpd.adv);
  CheckScalars(mrd.adv);
  return Add(SumVars(mpd.adv), Scale(SumVars(mrd.adv), w.lambda_mrd));
}

SubLosses GeneratorSubLosses(const DiscriminatorOutputs &real,
                             const DiscriminatorOutputs &fake) {
  SFVOC_CHECK(real.size() == fake.size(), ErrorCode::kShapeMismatch,
              "real/fake discriminator outputs differ in count");
  SubLosses out;
  for (size_t i = 0; i < fake.size(); ++i) {
    out.adv.push_back(AdvLossGenerator(fake[i].score));
    out.fm.push_back(FeatureMatching(real[i].features, fake[i].features));
  }
  return out;
}

SubLosses DiscriminatorSubLosses(const DiscriminatorOutputs &real,
                                 const DiscriminatorOutputs &fake) {
  SFVOC_CHECK(real.size() == fake.size(), ErrorCode::kShapeMismatch,
              "real/fake discriminator outputs differ in count");
  SubLosses out;
  for (size_t i = 0; i < fake.size(); ++i)
    out.adv.push_back(AdvLossDiscriminator(real[i].score, fake[i].score));
  return out;
}

double SumValues(const std::vector<Var> &terms) {
  double s = 0;
  for (const Var &t : terms) s += t.item();
  return s;
}

}  // namespace sfvoc
