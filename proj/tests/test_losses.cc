// tests/test_losses.cc

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

#include <cmath>
#include <random>

#include "doctest.h"
#include "sfvoc/error.h"
#include "sfvoc/losses.h"
#include "test_util.h"

namespace sfvoc {
namespace {

constexpr double kExact = 1e-12;

Var V(std::vector<double> v) {
  const int64_t n = static_cast<int64_t>(v.size());
  return Constant(Tensor({n}, std::move(v)));
}

Var S(double v) { return Constant(Tensor::Scalar(v)); }

SubLosses Uniform(size_t count, double adv, double fm) {
  SubLosses s;
  for (size_t i = 0; i < count; ++i) {
    s.adv.push_back(S(adv));
    s.fm.push_back(S(fm));
  }
  return s;
}

TEST_CASE("generator hinge examples") {
  CHECK(AdvLossGenerator(V({0, 0, 0})).item() == doctest::Approx(1).epsilon(kExact));
  CHECK(AdvLossGenerator(V({1, 2.5, 7})).item() == 0.0);
  CHECK(AdvLossGenerator(V({-1, 3})).item() == doctest::Approx(1).epsilon(kExact));
}

TEST_CASE("discriminator hinge examples") {
  CHECK(AdvLossDiscriminator(V({1}), V({-1})).item() == 0.0);
  CHECK(std::abs(AdvLossDiscriminator(V({0}), V({0})).item() - 2) < kExact);
  CHECK(std::abs(AdvLossDiscriminator(V({-1}), V({1})).item() - 4) < kExact);
}

TEST_CASE("feature matching examples") {
  const std::vector<Var> a{V({1, 2}), V({3, -4, 5})};
  CHECK(FeatureMatching(a, a).item() == 0.0);
  CHECK(std::abs(FeatureMatching({V({1, 2})}, {V({0, 0})}).item() - 1.5) < kExact);
  CHECK(std::abs(FeatureMatching({V({1, 2}), V({0.5, -0.5})},
                                 {V({0, 0}), V({0, 0})}).item() - 2.0) < kExact);
  CHECK_THROWS_AS(FeatureMatching({V({1, 2})}, {V({1, 2, 3})}), Error);
  CHECK_THROWS_AS(FeatureMatching({V({1, 2})}, {V({1, 2}), V({1})}), Error);
}

TEST_CASE("mel loss examples") {
  const Tensor m({2, 3}, {0.5, -1, 2, 3, 4, -5});
  CHECK(MelLoss(Constant(m), Constant(m)).item() == 0.0);
  Tensor shifted = m;
  for (double &v : shifted.data) v += 1;
  CHECK(std::abs(MelLoss(Constant(shifted), Constant(m)).item() - 1) < kExact);
  const Tensor d({2, 3}, {1, -2, 3, 0, 0, 0});
  CHECK(std::abs(MelLoss(Constant(d), Constant(Tensor({2, 3}))).item() - 1) < kExact);
  CHECK_THROWS_AS(MelLoss(Constant(m), Constant(Tensor({3, 2}))), Error);
}

TEST_CASE("generator objective arithmetic") {
  const LossWeights w;
  CHECK(std::abs(GeneratorObjective(Uniform(5, 1, 1), Uniform(3, 1, 1), S(0.1), w)
                     .item() - 20.5) < kExact);
  LossWeights zero{0.0, 0.0};
  CHECK(std::abs(GeneratorObjective(Uniform(5, 0.25, 0.5), Uniform(3, 9, 9), S(7), zero)
                     .item() - 5 * 0.75) < kExact);
  CHECK(GeneratorObjective(Uniform(5, 0, 0), Uniform(3, 0, 0), S(0), w).item() == 0.0);
  SubLosses ragged = Uniform(5, 1, 1);
  ragged.fm.pop_back();
  CHECK_THROWS_AS(GeneratorObjective(ragged, Uniform(3, 1, 1), S(0), w), Error);
  CHECK_THROWS_AS(GeneratorObjective(Uniform(5, 1, 1), Uniform(3, 1, 1), S(0),
                                     LossWeights{-1, 45}),
                  Error);
}

TEST_CASE("discriminator objective arithmetic") {
  const LossWeights w;
  CHECK(std::abs(DiscriminatorObjective(Uniform(5, 1, 0), Uniform(3, 1, 0), w).item() -
                 8) < kExact);
  CHECK(std::abs(DiscriminatorObjective(Uniform(5, 2, 0), Uniform(3, 4, 0),
                                        LossWeights{0.0, 45})
                     .item() - 10) < kExact);
  CHECK(DiscriminatorObjective(Uniform(5, 0, 0), Uniform(3, 0, 0), w).item() == 0.0);
  CHECK(std::abs(DiscriminatorObjective(Uniform(5, 1, 0), Uniform(3, 2, 0),
                                        LossWeights{0.5, 45})
                     .item() - 8) < kExact);
}

TEST_CASE("generator objective is affine in each sub-loss") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 3);
  const LossWeights w{0.7, 45};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> vals(17);
    for (double &v : vals) v = u(rng);
    auto build = [&](const std::vector<double> &x) {
      SubLosses mpd, mrd;
      for (int i = 0; i < 5; ++i) {
        mpd.adv.push_back(S(x[i]));
        mpd.fm.push_back(S(x[5 + i]));
      }
      for (int j = 0; j < 3; ++j) {
        mrd.adv.push_back(S(x[10 + j]));
        mrd.fm.push_back(S(x[13 + j]));
      }
      return GeneratorObjective(mpd, mrd, S(x[16]), w).item();
    };
    const double base = build(vals);
    for (int k = 0; k < 17; ++k) {
      const double coeff = k < 10 ? 1.0 : k < 16 ? w.lambda_mrd : w.lambda_mel;
      std::vector<double> bumped = vals;
      bumped[k] += 1.0;
      CHECK(std::abs(build(bumped) - base - coeff) < 1e-10);
    }
  }
}

TEST_CASE("losses are non-negative and vanish at their minimizers") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Tensor a = testing::RandomTensor({4, 3}, rng, 3.0);
    const Tensor b = testing::RandomTensor({4, 3}, rng, 3.0);
    CHECK(AdvLossGenerator(Constant(a)).item() >= 0);
    CHECK(AdvLossDiscriminator(Constant(a), Constant(b)).item() >= 0);
    CHECK(FeatureMatching({Constant(a)}, {Constant(b)}).item() > 0);
    CHECK(MelLoss(Constant(a), Constant(b)).item() > 0);
  }
}

TEST_CASE("mel loss is symmetric and obeys the triangle inequality") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int64_t f = 1 + trial % 7, m = 1 + trial % 5;
    const Var a = Constant(testing::RandomTensor({f, m}, rng));
    const Var b = Constant(testing::RandomTensor({f, m}, rng));
    const Var c = Constant(testing::RandomTensor({f, m}, rng));
    const double ab = MelLoss(a, b).item(), ba = MelLoss(b, a).item();
    CHECK(ab == ba);
    CHECK(MelLoss(a, c).item() <= ab + MelLoss(b, c).item() + 1e-12);
  }
}

TEST_CASE("hinge gradients match finite differences") {
  std::mt19937_64 rng(4);
  // Keep samples away from the hinge kinks.
  Tensor r({6}, {-0.3, 0.2, 1.6, 2.1, -1.4, 0.7});
  Tensor f({6}, {-1.7, -0.4, 0.3, 1.2, -2.2, 0.9});
  Var real(r, true), fake(f, true);
  const Tensor t = testing::RandomTensor({6}, rng);
  Var target = Constant(t);
  auto loss = [&] {
    return Add(Add(AdvLossDiscriminator(real, fake), AdvLossGenerator(fake)),
               Add(FeatureMatching({real}, {fake}), MelLoss(fake, target)));
  };
  const auto res = testing::GradCheck(loss, {{"real", real}, {"fake", fake}}, 6, 1e-6);
  CHECK(res.max_rel_error < 1e-6);
}

}  // namespace
}  // namespace sfvoc
