// include/sfvoc/losses.h

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

#ifndef SFVOC_LOSSES_H_
#define SFVOC_LOSSES_H_

#include <vector>

#include "sfvoc/discriminators.h"
#include "sfvoc/ops.h"

namespace sfvoc {

struct LossWeights {
  double lambda_mrd = 1.0;
  double lambda_mel = 45.0;

  void Validate() const;
  bool operator==(const LossWeights &) const = default;
};

// mean(max(0, 1 - fake))
Var AdvLossGenerator(const Var &fake_score);
// mean(max(0, 1 - real)) + mean(max(0, 1 + fake))
Var AdvLossDiscriminator(const Var &real_score, const Var &fake_score);
// Sum over layers of mean |real - fake|.  Layer lists must be congruent.
Var FeatureMatching(const std::vector<Var> &real, const std::vector<Var> &fake);
// (1 / (F * M)) * sum |predicted - target|
Var MelLoss(const Var &predicted, const Var &target);

// Per-sub-discriminator loss terms; `fm` is empty on the discriminator side.
struct SubLosses {
  std::vector<Var> adv;
  std::vector<Var> fm;
};

// sum_i (adv_i + fm_i) over MPD + lambda_mrd * sum_j (adv_j + fm_j) over MRD
// + lambda_mel * mel.
Var GeneratorObjective(const SubLosses &mpd, const SubLosses &mrd, const Var &mel,
                       const LossWeights &w);
// sum_i adv_i over MPD + lambda_mrd * sum_j adv_j over MRD.
Var DiscriminatorObjective(const SubLosses &mpd, const SubLosses &mrd,
                           const LossWeights &w);

SubLosses GeneratorSubLosses(const DiscriminatorOutputs &real,
                             const DiscriminatorOutputs &fake);
SubLosses DiscriminatorSubLosses(const DiscriminatorOutputs &real,
                                 const DiscriminatorOutputs &fake);

double SumValues(const std::vector<Var> &terms);

}  // namespace sfvoc

#endif  // SFVOC_LOSSES_H_
