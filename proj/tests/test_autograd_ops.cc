// tests/test_autograd_ops.cc

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
#include <numbers>
#include <random>

#include "doctest.h"
#include "sfvoc/error.h"
#include "sfvoc/mel.h"
#include "sfvoc/ops.h"
#include "test_util.h"

namespace sfvoc {
namespace {

using testing::GradCheck;
using testing::RandomTensor;

constexpr double kTol = 1e-6;

// Scalar probe of an arbitrary-shaped output: <y, R> for a fixed random R.
Var Probe(const Var &y, uint64_t seed = 99) {
  std::mt19937_64 rng(seed);
  return Sum(Mul(y, Constant(RandomTensor(y.shape(), rng))));
}

Var Param(const Shape &shape, std::mt19937_64 &rng, double scale = 1.0) {
  return Var(RandomTensor(shape, rng, scale), true);
}

void ExpectGrad(const std::function<Var()> &f,
                const std::vector<std::pair<std::string, Var>> &inputs,
                double tol = kTol) {
  const auto r = GradCheck(f, inputs, 16, 1e-6);
  INFO("worst group: " << r.worst_group << " rel error " << r.max_rel_error);
  CHECK(r.max_rel_error < tol);
}

TEST_CASE("elementwise op gradients") {
  std::mt19937_64 rng(1);
  Var a = Param({3, 4}, rng), b = Param({3, 4}, rng);
  Var pos = Var(Tensor({3, 4}, std::vector<double>(12, 0.0)), true);
  for (int i = 0; i < 12; ++i) pos.mutable_value().data[i] = 0.5 + 0.1 * i;
  ExpectGrad([&] { return Probe(Add(a, b)); }, {{"a", a}, {"b", b}});
  ExpectGrad([&] { return Probe(Sub(a, b)); }, {{"a", a}, {"b", b}});
  ExpectGrad([&] { return Probe(Mul(a, b)); }, {{"a", a}, {"b", b}});
  ExpectGrad([&] { return Probe(Scale(a, -2.5)); }, {{"a", a}});
  ExpectGrad([&] { return Probe(AddScalar(a, 0.7)); }, {{"a", a}});
  ExpectGrad([&] { return Probe(Exp(a)); }, {{"a", a}});
  ExpectGrad([&] { return Probe(Log(pos)); }, {{"pos", pos}});
  ExpectGrad([&] { return Probe(Abs(a)); }, {{"a", a}});
  ExpectGrad([&] { return Probe(Relu(a)); }, {{"a", a}});
  ExpectGrad([&] { return Probe(LeakyRelu(a, 0.1)); }, {{"a", a}});
  ExpectGrad([&] { return Probe(Gelu(a)); }, {{"a", a}});
  ExpectGrad([&] { return Probe(Sigmoid(a)); }, {{"a", a}});
  ExpectGrad([&] { return Probe(Atan2(a, b)); }, {{"a", a}, {"b", b}});
}

TEST_CASE("reduction and loss op gradients") {
  std::mt19937_64 rng(2);
  Var a = Param({5, 3}, rng), b = Param({5, 3}, rng, 2.0);
  ExpectGrad([&] { return Sum(Mul(a, a)); }, {{"a", a}});
  ExpectGrad([&] { return Mean(Exp(a)); }, {{"a", a}});
  ExpectGrad([&] { return MeanAbsDiff(a, b); }, {{"a", a}, {"b", b}});
  ExpectGrad([&] { return HingeBelowOne(b); }, {{"b", b}});
  ExpectGrad([&] { return HingeAboveMinusOne(b); }, {{"b", b}});
  Tensor targets({5, 3});
  for (int i = 0; i < 15; ++i) targets.data[i] = i % 2;
  ExpectGrad([&] { return BceWithLogits(a, targets); }, {{"a", a}});
}

TEST_CASE("loss op values") {
  const Var s = Constant(Tensor({2}, {-1.0, 3.0}));
  CHECK(HingeBelowOne(s).item() == 1.0);
  CHECK(HingeAboveMinusOne(s).item() == doctest::Approx(2.0));  // (0 + 4) / 2
  CHECK(MeanAbsDiff(Constant(Tensor({2}, {1.0, 2.0})), Constant(Tensor({2}))).item() ==
        1.5);
  // BCE oracle: -[y log s(z) + (1 - y) log(1 - s(z))]
  const double z = 0.3;
  const double expect = -std::log(1.0 / (1.0 + std::exp(-z)));
  CHECK(BceWithLogits(Constant(Tensor({1}, {z})), Tensor({1}, {1.0})).item() ==
        doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("shape op gradients and values") {
  std::mt19937_64 rng(3);
  Var x = Param({4, 6}, rng), y = Param({4, 2}, rng);
  ExpectGrad([&] { return Probe(Reshape(x, {2, 12})); }, {{"x", x}});
  ExpectGrad([&] { return Probe(SliceCols(x, 1, 4)); }, {{"x", x}});
  ExpectGrad([&] { return Probe(ConcatCols({x, y, x})); }, {{"x", x}, {"y", y}});
  const Var c = ConcatCols({x, y});
  CHECK(c.shape() == Shape{4, 8});
  CHECK(c.value().at(2, 6) == y.value().at(2, 0));
  CHECK(SliceCols(c, 6, 8).value() == y.value());
}

TEST_CASE("linear and layer norm") {
  std::mt19937_64 rng(4);
  Var x = Param({5, 3}, rng), w = Param({3, 4}, rng), b = Param({4}, rng);
  ExpectGrad([&] { return Probe(Linear(x, w, b)); }, {{"x", x}, {"w", w}, {"b", b}});
  const Var out = Linear(x, w, b);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 4; ++c) {
      double acc = b.value().data[c];
      for (int k = 0; k < 3; ++k) acc += x.value().at(r, k) * w.value().at(k, c);
      CHECK(out.value().at(r, c) == doctest::Approx(acc).epsilon(1e-14));
    }

  Var h = Param({4, 6}, rng), g = Param({6}, rng), be = Param({6}, rng);
  ExpectGrad([&] { return Probe(LayerNorm(h, g, be, 1e-6)); },
             {{"h", h}, {"gamma", g}, {"beta", be}});
  const Var ln = LayerNorm(h, Constant(Tensor({6}, 1.0)), Constant(Tensor({6})), 1e-6);
  for (int r = 0; r < 4; ++r) {
    double mean = 0, var = 0;
    for (int c = 0; c < 6; ++c) mean += ln.value().at(r, c) / 6;
    for (int c = 0; c < 6; ++c) var += std::pow(ln.value().at(r, c) - mean, 2) / 6;
    CHECK(std::abs(mean) < 1e-12);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("depthwise conv matches a direct loop and has correct gradients") {
  std::mt19937_64 rng(5);
  Var x = Param({7, 3}, rng), w = Param({5, 3}, rng), b = Param({3}, rng);
  ExpectGrad([&] { return Probe(DepthwiseConv1d(x, w, b)); },
             {{"x", x}, {"w", w}, {"b", b}});
  const Var y = DepthwiseConv1d(x, w, b);
  for (int f = 0; f < 7; ++f)
    for (int c = 0; c < 3; ++c) {
      double acc = b.value().data[c];
      for (int k = 0; k < 5; ++k) {
        const int src = f + k - 2;
        if (src >= 0 && src < 7) acc += w.value().at(k, c) * x.value().at(src, c);
      }
      CHECK(y.value().at(f, c) == doctest::Approx(acc).epsilon(1e-14));
    }
  ExpectGrad([&] { return Probe(Im2Col1d(x, 3)); }, {{"x", x}});
  CHECK(Im2Col1d(x, 3).shape() == Shape{7, 9});
}

TEST_CASE("global response normalization") {
  std::mt19937_64 rng(6);
  Var h = Param({6, 4}, rng), g = Param({4}, rng), b = Param({4}, rng);
  ExpectGrad([&] { return Probe(Grn(h, g, b, 1e-6)); },
             {{"h", h}, {"gamma", g}, {"beta", b}});

  // Direct evaluation of the formula.
  const Var y = Grn(h, g, b, 1e-6);
  std::vector<double> norm(4, 0.0);
  for (int c = 0; c < 4; ++c) {
    for (int f = 0; f < 6; ++f) norm[c] += h.value().at(f, c) * h.value().at(f, c);
    norm[c] = std::sqrt(norm[c]);
  }
  const double mean = (norm[0] + norm[1] + norm[2] + norm[3]) / 4;
  for (int f = 0; f < 6; ++f)
    for (int c = 0; c < 4; ++c) {
      const double x = h.value().at(f, c);
      const double expect =
          g.value().data[c] * x * norm[c] / (mean + 1e-6) + b.value().data[c] + x;
      CHECK(y.value().at(f, c) == doctest::Approx(expect).epsilon(1e-13));
    }

  const Var zero_params = Grn(h, Constant(Tensor({4})), Constant(Tensor({4})), 1e-6);
  CHECK(zero_params.value() == h.value());
  const Var zeros = Grn(Constant(Tensor({6, 4})), g, Constant(Tensor({4})), 1e-6);
  for (double v : zeros.value().data) CHECK(v == 0.0);

  // The normalized ratio is scale invariant: with beta = 0 the output scales
  // linearly with the input (up to the epsilon).
  Tensor scaled = h.value();
  for (double &v : scaled.data) v *= 3.7;
  const Var ys = Grn(Constant(scaled), g, Constant(Tensor({4})), 0.0);
  const Var y0 = Grn(h, g, Constant(Tensor({4})), 0.0);
  for (int i = 0; i < 24; ++i)
    CHECK(ys.value().data[i] == doctest::Approx(3.7 * y0.value().data[i]).epsilon(1e-12));
}

TEST_CASE("conv2d matches a direct loop and has correct gradients") {
  std::mt19937_64 rng(7);
  for (const Conv2dSpec spec :
       {Conv2dSpec{3, 1, 1, 1, 1, 0}, Conv2dSpec{5, 1, 3, 1, 2, 0},
        Conv2dSpec{3, 3, 1, 2, 1, 1}, Conv2dSpec{3, 5, 2, 2, 1, 2}}) {
    const int h = 9, w = 7, cin = 2, cout = 3;
    Var x = Param({h, w, cin}, rng);
    Var k = Param({spec.kernel_h * spec.kernel_w * cin, cout}, rng);
    Var b = Param({cout}, rng);
    ExpectGrad([&] { return Probe(Conv2d(x, k, b, spec)); },
               {{"x", x}, {"w", k}, {"b", b}});
    const Var y = Conv2d(x, k, b, spec);
    const int64_t ho = ConvOutSize(h, spec.kernel_h, spec.stride_h, spec.pad_h);
    const int64_t wo = ConvOutSize(w, spec.kernel_w, spec.stride_w, spec.pad_w);
    REQUIRE(y.shape() == Shape{ho, wo, cout});
    for (int64_t oy = 0; oy < ho; ++oy)
      for (int64_t ox = 0; ox < wo; ++ox)
        for (int o = 0; o < cout; ++o) {
          double acc = b.value().data[o];
          for (int i = 0; i < spec.kernel_h; ++i)
            for (int j = 0; j < spec.kernel_w; ++j)
              for (int c = 0; c < cin; ++c) {
                const int64_t sy = oy * spec.stride_h + i - spec.pad_h;
                const int64_t sx = ox * spec.stride_w + j - spec.pad_w;
                if (sy < 0 || sy >= h || sx < 0 || sx >= w) continue;
                const int64_t row = (i * spec.kernel_w + j) * cin + c;
                acc += x.value().data[(sy * w + sx) * cin + c] * k.value().at(row, o);
              }
          CHECK(y.value().data[(oy * wo + ox) * cout + o] ==
                doctest::Approx(acc).epsilon(1e-13));
        }
  }
}

TEST_CASE("period fold") {
  std::mt19937_64 rng(8);
  Var x = Param({11}, rng);
  ExpectGrad([&] { return Probe(PeriodFold(x, 3)); }, {{"x", x}});
  const Var f = PeriodFold(Constant(Tensor({7}, {0, 1, 2, 3, 4, 5, 6})), 2);
  CHECK(f.shape() == Shape{4, 2, 1});
  // Right reflect pad: x7 := x5.
  CHECK(f.value().data == std::vector<double>{0, 1, 2, 3, 4, 5, 6, 5});
}

TEST_CASE("spectral op gradients") {
  const StftConfig cfg{16, 4, 16, 16000};
  std::mt19937_64 rng(9);
  Var x = Param({64}, rng, 0.5);
  ExpectGrad([&] { return Probe(StftMagnitude(x, cfg)); }, {{"x", x}});
  // Non-multiple length exercises the right shortfall padding.
  Var x2 = Param({61}, rng, 0.5);
  ExpectGrad([&] { return Probe(StftMagnitude(x2, cfg)); }, {{"x2", x2}});

  Var amp = Var(RandomTensor({16, 9}, rng), true), ph = Param({16, 9}, rng, 2.0);
  for (double &v : amp.mutable_value().data) v = std::abs(v) + 0.1;
  ExpectGrad([&] { return Probe(IstftOp(amp, ph, cfg)); }, {{"amp", amp}, {"phase", ph}});

  const Tensor fb = MelFilterbank(cfg, MelConfig{4, 0.0, 8000.0, 1e-5});
  ExpectGrad([&] { return Probe(LogMel(amp, fb, 1e-5)); }, {{"amp", amp}});

  // Forward values agree with the plain signal path.
  Waveform w;
  w.samples = x.value().data;
  const SpectralPair s = Stft(w, cfg);
  CHECK(StftMagnitude(x, cfg).value() == s.amplitude);
  const Waveform back = Istft(s, cfg);
  const Var back_op = IstftOp(Constant(s.amplitude), Constant(s.phase), cfg);
  for (int i = 0; i < 64; ++i)
    CHECK(back_op.value().data[i] == doctest::Approx(back.samples[i]).epsilon(1e-14));
}

TEST_CASE("autograd bookkeeping") {
  std::mt19937_64 rng(10);
  Var a = Param({3}, rng);
  // A variable used twice accumulates both contributions.
  a.node()->ZeroGrad();
  Backward(Sum(Mul(a, a)));
  for (int i = 0; i < 3; ++i) CHECK(a.grad().data[i] == doctest::Approx(2 * a.value().data[i]));

  {
    NoGradGuard guard;
    CHECK_FALSE(GradEnabled());
    const Var y = Exp(a);
    CHECK_FALSE(y.requires_grad());
  }
  CHECK(GradEnabled());
  CHECK(Exp(a).requires_grad());
  CHECK_FALSE(Exp(Detach(a)).requires_grad());
  CHECK_THROWS_AS(Add(a, Constant(Tensor({4}))), Error);
}

}  // namespace
}  // namespace sfvoc
