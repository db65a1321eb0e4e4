// src/ops.cc

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

#include "sfvoc/ops.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfvoc/error.h"

namespace sfvoc {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;
using ConstMapVec = Eigen::Map<const Eigen::VectorXd>;
using MapVec = Eigen::Map<Eigen::VectorXd>;

ConstMapMat AsMat(const Tensor &t, int64_t rows, int64_t cols) {
  return ConstMapMat(t.data.data(), rows, cols);
}
MapMat AsMat(Tensor &t, int64_t rows, int64_t cols) {
  return MapMat(t.data.data(), rows, cols);
}

void CheckSameShape(const Var &a, const Var &b, const char *op) {
  SFVOC_CHECK(a.shape() == b.shape(), ErrorCode::kShapeMismatch,
              std::string(op) + ": shapes " + ShapeString(a.shape()) + " and " +
                  ShapeString(b.shape()));
}

void CheckMatrix(const Var &a, const char *op) {
  SFVOC_CHECK(a.shape().size() == 2, ErrorCode::kShapeMismatch,
              std::string(op) + ": expected a matrix, got " +
                  ShapeString(a.shape()));
}

// Applies f elementwise; df(x, y) is the local derivative.
template <typename F, typename DF>
Var Unary(const Var &a, F f, DF df) {
  Tensor out(a.shape());
  const auto &x = a.value().data;
  for (size_t i = 0; i < x.size(); ++i) out.data[i] = f(x[i]);
  return MakeResult(std::move(out), {a}, [df](Node &self) {
    Tensor *ga = GradIfTracked(self, 0);
    if (!ga) return;
    const auto &x = self.parents[0]->value.data;
    const auto &y = self.value.data;
    const auto &g = self.grad.data;
    for (size_t i = 0; i < x.size(); ++i) ga->data[i] += g[i] * df(x[i], y[i]);
  });
}

}  // namespace

Var Add(const Var &a, const Var &b) {
  CheckSameShape(a, b, "Add");
  Tensor out(a.shape());
  for (int64_t i = 0; i < out.size(); ++i)
    out.data[i] = a.value().data[i] + b.value().data[i];
  return MakeResult(std::move(out), {a, b}, [](Node &self) {
    for (size_t p = 0; p < 2; ++p)
      if (Tensor *g = GradIfTracked(self, p))
        for (int64_t i = 0; i < g->size(); ++i) g->data[i] += self.grad.data[i];
  });
}

Var Sub(const Var &a, const Var &b) {
  CheckSameShape(a, b, "Sub");
  Tensor out(a.shape());
  for (int64_t i = 0; i < out.size(); ++i)
    out.data[i] = a.value().data[i] - b.value().data[i];
  return MakeResult(std::move(out), {a, b}, [](Node &self) {
    if (Tensor *g = GradIfTracked(self, 0))
      for (int64_t i = 0; i < g->size(); ++i) g->data[i] += self.grad.data[i];
    if (Tensor *g = GradIfTracked(self, 1))
      for (int64_t i = 0; i < g->size(); ++i) g->data[i] -= self.grad.data[i];
  });
}

Var Mul(const Var &a, const Var &b) {
  CheckSameShape(a, b, "Mul");
  Tensor out(a.shape());
  for (int64_t i = 0; i < out.size(); ++i)
    out.data[i] = a.value().data[i] * b.value().data[i];
  return MakeResult(std::move(out), {a, b}, [](Node &self) {
    const auto &av = self.parents[0]->value.data;
    const auto &bv = self.parents[1]->value.data;
    if (Tensor *g = GradIfTracked(self, 0))
      for (int64_t i = 0; i < g->size(); ++i)
        g->data[i] += self.grad.data[i] * bv[i];
    if (Tensor *g = GradIfTracked(self, 1))
      for (int64_t i = 0; i < g->size(); ++i)
        g->data[i] += self.grad.data[i] * av[i];
  });
}

Var Scale(const Var &a, double s) {
  return Unary(a, [s](double x) { return s * x; },
               [s](double, double) { return s; });
}

Var AddScalar(const Var &a, double s) {
  return Unary(a, [s](double x) { return x + s; },
               [](double, double) { return 1.0; });
}

Var Exp(const Var &a) {
  return Unary(a, [](double x) { return std::exp(x); },
               [](double, double y) { return y; });
}

Var Log(const Var &a) {
  return Unary(a, [](double x) { return std::log(x); },
               [](double x, double) { return 1.0 / x; });
}

Var Abs(const Var &a) {
  return Unary(a, [](double x) { return std::abs(x); },
               [](double x, double) {
                 return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
               });
}

Var Relu(const Var &a) {
  return Unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var LeakyRelu(const Var &a, double slope) {
  return Unary(a, [slope](double x) { return x > 0.0 ? x : slope * x; },
               [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Var Gelu(const Var &a) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return Unary(
      a, [](double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); },
      [](double x, double) {
        return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) +
               x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
      });
}

Var Sigmoid(const Var &a) {
  return Unary(
      a,
      [](double x) {
        return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                        : std::exp(x) / (1.0 + std::exp(x));
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var Atan2(const Var &y, const Var &x) {
  CheckSameShape(y, x, "Atan2");
  Tensor out(y.shape());
  for (int64_t i = 0; i < out.size(); ++i) {
    double p = std::atan2(y.value().data[i], x.value().data[i]);
    if (p <= -std::numbers::pi) p = std::numbers::pi;
    out.data[i] = p;
  }
  return MakeResult(std::move(out), {y, x}, [](Node &self) {
    const auto &yv = self.parents[0]->value.data;
    const auto &xv = self.parents[1]->value.data;
    Tensor *gy = GradIfTracked(self, 0);
    Tensor *gx = GradIfTracked(self, 1);
    for (size_t i = 0; i < yv.size(); ++i) {
      const double r2 = yv[i] * yv[i] + xv[i] * xv[i];
      if (r2 == 0.0) continue;
      const double g = self.grad.data[i];
      if (gy) gy->data[i] += g * xv[i] / r2;
      if (gx) gx->data[i] -= g * yv[i] / r2;
    }
  });
}

Var Sum(const Var &a) {
  double s = 0.0;
  for (double v : a.value().data) s += v;
  return MakeResult(Tensor::Scalar(s), {a}, [](Node &self) {
    Tensor *g = GradIfTracked(self, 0);
    const double d = self.grad.data[0];
    for (double &v : g->data) v += d;
  });
}

Var Mean(const Var &a) {
  SFVOC_CHECK(a.size() > 0, ErrorCode::kShapeMismatch, "Mean of empty tensor");
  return Scale(Sum(a), 1.0 / a.size());
}

Var MeanAbsDiff(const Var &a, const Var &b) {
  CheckSameShape(a, b, "MeanAbsDiff");
  SFVOC_CHECK(a.size() > 0, ErrorCode::kShapeMismatch,
              "MeanAbsDiff of empty tensors");
  const auto &av = a.value().data;
  const auto &bv = b.value().data;
  double s = 0.0;
  for (size_t i = 0; i < av.size(); ++i) s += std::abs(av[i] - bv[i]);
  const double n = static_cast<double>(av.size());
  return MakeResult(Tensor::Scalar(s / n), {a, b}, [n](Node &self) {
    const auto &av = self.parents[0]->value.data;
    const auto &bv = self.parents[1]->value.data;
    const double g = self.grad.data[0] / n;
    Tensor *ga = GradIfTracked(self, 0);
    Tensor *gb = GradIfTracked(self, 1);
    for (size_t i = 0; i < av.size(); ++i) {
      const double d = av[i] - bv[i];
      const double sgn = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
      if (ga) ga->data[i] += g * sgn;
      if (gb) gb->data[i] -= g * sgn;
    }
  });
}

Var HingeBelowOne(const Var &a) { return Mean(Relu(AddScalar(Scale(a, -1.0), 1.0))); }

Var HingeAboveMinusOne(const Var &a) { return Mean(Relu(AddScalar(a, 1.0))); }

Var BceWithLogits(const Var &logits, const Tensor &targets) {
  SFVOC_CHECK(logits.shape() == targets.shape, ErrorCode::kShapeMismatch,
              "BceWithLogits: target shape mismatch");
  const auto &z = logits.value().data;
  double s = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    // max(z, 0) - z * y + log(1 + exp(-|z|))
    s += std::max(z[i], 0.0) - z[i] * targets.data[i] +
         std::log1p(std::exp(-std::abs(z[i])));
  }
  const double n = static_cast<double>(z.size());
  return MakeResult(Tensor::Scalar(s / n), {logits}, [targets, n](Node &self) {
    Tensor *g = GradIfTracked(self, 0);
    const auto &z = self.parents[0]->value.data;
    const double d = self.grad.data[0] / n;
    for (size_t i = 0; i < z.size(); ++i) {
      const double p = z[i] >= 0.0 ? 1.0 / (1.0 + std::exp(-z[i]))
                                   : std::exp(z[i]) / (1.0 + std::exp(z[i]));
      g->data[i] += d * (p - targets.data[i]);
    }
  });
}

Var Reshape(const Var &a, Shape shape) {
  SFVOC_CHECK(NumElements(shape) == a.size(), ErrorCode::kShapeMismatch,
              "Reshape " + ShapeString(a.shape()) + " -> " + ShapeString(shape));
  Tensor out(std::move(shape), a.value().data);
  return MakeResult(std::move(out), {a}, [](Node &self) {
    Tensor *g = GradIfTracked(self, 0);
    for (int64_t i = 0; i < g->size(); ++i) g->data[i] += self.grad.data[i];
  });
}

Var Linear(const Var &x, const Var &w, const Var &b) {
  CheckMatrix(x, "Linear");
  CheckMatrix(w, "Linear");
  const int64_t rows = x.shape()[0], in = x.shape()[1], out_dim = w.shape()[1];
  SFVOC_CHECK(w.shape()[0] == in, ErrorCode::kShapeMismatch,
              "Linear: input " + ShapeString(x.shape()) + " vs weight " +
                  ShapeString(w.shape()));
  const bool has_bias = b.defined();
  if (has_bias)
    SFVOC_CHECK(b.size() == out_dim, ErrorCode::kShapeMismatch,
                "Linear: bias size mismatch");
  Tensor out({rows, out_dim});
  AsMat(out, rows, out_dim).noalias() =
      AsMat(x.value(), rows, in) * AsMat(w.value(), in, out_dim);
  if (has_bias) {
    auto om = AsMat(out, rows, out_dim);
    om.rowwise() += ConstMapVec(b.value().data.data(), out_dim).transpose();
  }
  std::vector<Var> inputs{x, w};
  if (has_bias) inputs.push_back(b);
  return MakeResult(std::move(out), inputs, [rows, in, out_dim, has_bias](Node &self) {
    const auto g = AsMat(self.grad, rows, out_dim);
    if (Tensor *gx = GradIfTracked(self, 0))
      AsMat(*gx, rows, in).noalias() +=
          g * AsMat(self.parents[1]->value, in, out_dim).transpose();
    if (Tensor *gw = GradIfTracked(self, 1))
      AsMat(*gw, in, out_dim).noalias() +=
          AsMat(self.parents[0]->value, rows, in).transpose() * g;
    if (has_bias)
      if (Tensor *gb = GradIfTracked(self, 2))
        MapVec(gb->data.data(), out_dim) += g.colwise().sum().transpose();
  });
}

Var SliceCols(const Var &x, int64_t begin, int64_t end) {
  CheckMatrix(x, "SliceCols");
  const int64_t rows = x.shape()[0], cols = x.shape()[1];
  SFVOC_CHECK(0 <= begin && begin <= end && end <= cols,
              ErrorCode::kShapeMismatch, "SliceCols: range out of bounds");
  const int64_t width = end - begin;
  Tensor out({rows, width});
  for (int64_t r = 0; r < rows; ++r)
    std::copy_n(x.value().data.begin() + r * cols + begin, width,
                out.data.begin() + r * width);
  return MakeResult(std::move(out), {x}, [rows, cols, begin, width](Node &self) {
    Tensor *g = GradIfTracked(self, 0);
    for (int64_t r = 0; r < rows; ++r)
      for (int64_t c = 0; c < width; ++c)
        g->data[r * cols + begin + c] += self.grad.data[r * width + c];
  });
}

Var ConcatCols(const std::vector<Var> &parts) {
  SFVOC_CHECK(!parts.empty(), ErrorCode::kShapeMismatch, "ConcatCols: no inputs");
  const int64_t rows = parts[0].shape().at(0);
  std::vector<int64_t> offsets;
  int64_t total = 0;
  for (const Var &p : parts) {
    CheckMatrix(p, "ConcatCols");
    SFVOC_CHECK(p.shape()[0] == rows, ErrorCode::kShapeMismatch,
                "ConcatCols: row count mismatch");
    offsets.push_back(total);
    total += p.shape()[1];
  }
  Tensor out({rows, total});
  for (size_t i = 0; i < parts.size(); ++i) {
    const int64_t w = parts[i].shape()[1];
    for (int64_t r = 0; r < rows; ++r)
      std::copy_n(parts[i].value().data.begin() + r * w, w,
                  out.data.begin() + r * total + offsets[i]);
  }
  return MakeResult(std::move(out), parts, [rows, total, offsets](Node &self) {
    for (size_t i = 0; i < offsets.size(); ++i) {
      Tensor *g = GradIfTracked(self, i);
      if (!g) continue;
      const int64_t w = g->shape[1];
      for (int64_t r = 0; r < rows; ++r)
        for (int64_t c = 0; c < w; ++c)
          g->data[r * w + c] += self.grad.data[r * total + offsets[i] + c];
    }
  });
}

Var LayerNorm(const Var &x, const Var &gamma, const Var &beta, double eps) {
  CheckMatrix(x, "LayerNorm");
  const int64_t rows = x.shape()[0], cols = x.shape()[1];
  SFVOC_CHECK(gamma.size() == cols && beta.size() == cols,
              ErrorCode::kShapeMismatch, "LayerNorm: affine size mismatch");
  Tensor out({rows, cols});
  Tensor normed({rows, cols});
  Tensor inv_std({rows});
  const auto &xv = x.value().data;
  for (int64_t r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (int64_t c = 0; c < cols; ++c) mean += xv[r * cols + c];
    mean /= cols;
    double var = 0.0;
    for (int64_t c = 0; c < cols; ++c) {
      const double d = xv[r * cols + c] - mean;
      var += d * d;
    }
    var /= cols;
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std.data[r] = is;
    for (int64_t c = 0; c < cols; ++c) {
      const double n = (xv[r * cols + c] - mean) * is;
      normed.data[r * cols + c] = n;
      out.data[r * cols + c] = gamma.value().data[c] * n + beta.value().data[c];
    }
  }
  return MakeResult(
      std::move(out), {x, gamma, beta},
      [rows, cols, normed = std::move(normed), inv_std = std::move(inv_std)](Node &self) {
        const auto &g = self.grad.data;
        const auto &gam = self.parents[1]->value.data;
        Tensor *gx = GradIfTracked(self, 0);
        Tensor *gg = GradIfTracked(self, 1);
        Tensor *gb = GradIfTracked(self, 2);
        std::vector<double> dn(cols);
        for (int64_t r = 0; r < rows; ++r) {
          double mean_dn = 0.0, mean_dn_n = 0.0;
          for (int64_t c = 0; c < cols; ++c) {
            const int64_t i = r * cols + c;
            if (gg) gg->data[c] += g[i] * normed.data[i];
            if (gb) gb->data[c] += g[i];
            dn[c] = g[i] * gam[c];
            mean_dn += dn[c];
            mean_dn_n += dn[c] * normed.data[i];
          }
          if (!gx) continue;
          mean_dn /= cols;
          mean_dn_n /= cols;
          for (int64_t c = 0; c < cols; ++c) {
            const int64_t i = r * cols + c;
            gx->data[i] += inv_std.data[r] *
                           (dn[c] - mean_dn - normed.data[i] * mean_dn_n);
          }
        }
      });
}

Var DepthwiseConv1d(const Var &x, const Var &w, const Var &b) {
  CheckMatrix(x, "DepthwiseConv1d");
  CheckMatrix(w, "DepthwiseConv1d");
  const int64_t frames = x.shape()[0], ch = x.shape()[1];
  const int64_t kernel = w.shape()[0];
  SFVOC_CHECK(w.shape()[1] == ch && b.size() == ch && kernel % 2 == 1,
              ErrorCode::kShapeMismatch,
              "DepthwiseConv1d: weight " + ShapeString(w.shape()) +
                  " incompatible with input " + ShapeString(x.shape()));
  const int64_t pad = kernel / 2;
  Tensor out({frames, ch});
  const auto &xv = x.value().data;
  const auto &wv = w.value().data;
  for (int64_t f = 0; f < frames; ++f) {
    double *o = out.data.data() + f * ch;
    for (int64_t c = 0; c < ch; ++c) o[c] = b.value().data[c];
    for (int64_t k = 0; k < kernel; ++k) {
      const int64_t src = f + k - pad;
      if (src < 0 || src >= frames) continue;
      const double *xi = xv.data() + src * ch;
      const double *wk = wv.data() + k * ch;
      for (int64_t c = 0; c < ch; ++c) o[c] += wk[c] * xi[c];
    }
  }
  return MakeResult(std::move(out), {x, w, b}, [frames, ch, kernel, pad](Node &self) {
    const auto &g = self.grad.data;
    const auto &xv = self.parents[0]->value.data;
    const auto &wv = self.parents[1]->value.data;
    Tensor *gx = GradIfTracked(self, 0);
    Tensor *gw = GradIfTracked(self, 1);
    Tensor *gb = GradIfTracked(self, 2);
    for (int64_t f = 0; f < frames; ++f) {
      const double *go = g.data() + f * ch;
      if (gb)
        for (int64_t c = 0; c < ch; ++c) gb->data[c] += go[c];
      for (int64_t k = 0; k < kernel; ++k) {
        const int64_t src = f + k - pad;
        if (src < 0 || src >= frames) continue;
        if (gx) {
          double *gxi = gx->data.data() + src * ch;
          const double *wk = wv.data() + k * ch;
          for (int64_t c = 0; c < ch; ++c) gxi[c] += go[c] * wk[c];
        }
        if (gw) {
          double *gwk = gw->data.data() + k * ch;
          const double *xi = xv.data() + src * ch;
          for (int64_t c = 0; c < ch; ++c) gwk[c] += go[c] * xi[c];
        }
      }
    }
  });
}

Var Im2Col1d(const Var &x, int kernel) {
  CheckMatrix(x, "Im2Col1d");
  SFVOC_CHECK(kernel >= 1 && kernel % 2 == 1, ErrorCode::kInvalidArgument,
              "Im2Col1d: kernel must be odd");
  const int64_t frames = x.shape()[0], ch = x.shape()[1];
  const int64_t pad = kernel / 2;
  Tensor out({frames, kernel * ch});
  for (int64_t f = 0; f < frames; ++f)
    for (int64_t k = 0; k < kernel; ++k) {
      const int64_t src = f + k - pad;
      if (src < 0 || src >= frames) continue;
      std::copy_n(x.value().data.begin() + src * ch, ch,
                  out.data.begin() + f * kernel * ch + k * ch);
    }
  return MakeResult(std::move(out), {x}, [frames, ch, kernel, pad](Node &self) {
    Tensor *g = GradIfTracked(self, 0);
    for (int64_t f = 0; f < frames; ++f)
      for (int64_t k = 0; k < kernel; ++k) {
        const int64_t src = f + k - pad;
        if (src < 0 || src >= frames) continue;
        for (int64_t c = 0; c < ch; ++c)
          g->data[src * ch + c] += self.grad.data[f * kernel * ch + k * ch + c];
      }
  });
}

Var Grn(const Var &x, const Var &gamma, const Var &beta, double eps) {
  CheckMatrix(x, "Grn");
  const int64_t frames = x.shape()[0], ch = x.shape()[1];
  SFVOC_CHECK(gamma.size() == ch && beta.size() == ch, ErrorCode::kShapeMismatch,
              "Grn: affine size mismatch");
  const auto &xv = x.value().data;
  std::vector<double> norm(ch, 0.0);
  for (int64_t f = 0; f < frames; ++f)
    for (int64_t c = 0; c < ch; ++c) norm[c] += xv[f * ch + c] * xv[f * ch + c];
  double mean = 0.0;
  for (double &v : norm) {
    v = std::sqrt(v);
    mean += v;
  }
  mean /= ch;
  const double denom = mean + eps;
  std::vector<double> ratio(ch);
  for (int64_t c = 0; c < ch; ++c) ratio[c] = norm[c] / denom;

  Tensor out({frames, ch});
  const auto &gv = gamma.value().data;
  const auto &bv = beta.value().data;
  for (int64_t f = 0; f < frames; ++f)
    for (int64_t c = 0; c < ch; ++c) {
      const double v = xv[f * ch + c];
      out.data[f * ch + c] = gv[c] * v * ratio[c] + bv[c] + v;
    }
  return MakeResult(
      std::move(out), {x, gamma, beta},
      [frames, ch, norm, ratio, denom](Node &self) {
        const auto &g = self.grad.data;
        const auto &xv = self.parents[0]->value.data;
        const auto &gv = self.parents[1]->value.data;
        Tensor *gx = GradIfTracked(self, 0);
        Tensor *gg = GradIfTracked(self, 1);
        Tensor *gb = GradIfTracked(self, 2);
        std::vector<double> d_ratio(ch, 0.0);
        for (int64_t f = 0; f < frames; ++f)
          for (int64_t c = 0; c < ch; ++c) {
            const int64_t i = f * ch + c;
            if (gg) gg->data[c] += g[i] * xv[i] * ratio[c];
            if (gb) gb->data[c] += g[i];
            d_ratio[c] += g[i] * gv[c] * xv[i];
          }
        if (!gx) return;
        // ratio_c = norm_c / (mean(norm) + eps)
        double cross = 0.0;
        for (int64_t c = 0; c < ch; ++c) cross += d_ratio[c] * norm[c];
        cross /= ch * denom * denom;
        std::vector<double> d_norm(ch);
        for (int64_t c = 0; c < ch; ++c) d_norm[c] = d_ratio[c] / denom - cross;
        for (int64_t f = 0; f < frames; ++f)
          for (int64_t c = 0; c < ch; ++c) {
            const int64_t i = f * ch + c;
            double d = g[i] * (1.0 + gv[c] * ratio[c]);
            if (norm[c] > 0.0) d += d_norm[c] * xv[i] / norm[c];
            gx->data[i] += d;
          }
      });
}

int64_t ConvOutSize(int64_t in, int kernel, int stride, int pad) {
  return (in + 2 * pad - kernel) / stride + 1;
}

Var Conv2d(const Var &x, const Var &w, const Var &b, const Conv2dSpec &s) {
  SFVOC_CHECK(x.shape().size() == 3, ErrorCode::kShapeMismatch,
              "Conv2d: input must be [H, W, C], got " + ShapeString(x.shape()));
  const int64_t h = x.shape()[0], wd = x.shape()[1], cin = x.shape()[2];
  const int64_t patch = static_cast<int64_t>(s.kernel_h) * s.kernel_w * cin;
  SFVOC_CHECK(w.shape().size() == 2 && w.shape()[0] == patch,
              ErrorCode::kShapeMismatch,
              "Conv2d: weight " + ShapeString(w.shape()) + " vs patch " +
                  std::to_string(patch));
  const int64_t cout = w.shape()[1];
  SFVOC_CHECK(b.size() == cout, ErrorCode::kShapeMismatch,
              "Conv2d: bias size mismatch");
  const int64_t ho = ConvOutSize(h, s.kernel_h, s.stride_h, s.pad_h);
  const int64_t wo = ConvOutSize(wd, s.kernel_w, s.stride_w, s.pad_w);
  SFVOC_CHECK(ho >= 1 && wo >= 1, ErrorCode::kShapeMismatch,
              "Conv2d: input " + ShapeString(x.shape()) +
                  " too small for the kernel");
  const int64_t positions = ho * wo;

  Tensor cols({positions, patch});
  const auto &xv = x.value().data;
  for (int64_t oh = 0; oh < ho; ++oh)
    for (int64_t ow = 0; ow < wo; ++ow) {
      double *dst = cols.data.data() + (oh * wo + ow) * patch;
      for (int i = 0; i < s.kernel_h; ++i) {
        const int64_t ih = oh * s.stride_h - s.pad_h + i;
        for (int j = 0; j < s.kernel_w; ++j) {
          const int64_t iw = ow * s.stride_w - s.pad_w + j;
          double *d = dst + (static_cast<int64_t>(i) * s.kernel_w + j) * cin;
          if (ih < 0 || ih >= h || iw < 0 || iw >= wd) continue;
          std::copy_n(xv.data() + (ih * wd + iw) * cin, cin, d);
        }
      }
    }

  Tensor out({ho, wo, cout});
  auto om = AsMat(out, positions, cout);
  om.noalias() = AsMat(cols, positions, patch) * AsMat(w.value(), patch, cout);
  om.rowwise() += ConstMapVec(b.value().data.data(), cout).transpose();

  return MakeResult(
      std::move(out), {x, w, b},
      [s, h, wd, cin, ho, wo, cout, patch, positions,
       cols = std::move(cols)](Node &self) {
        const auto g = AsMat(self.grad, positions, cout);
        if (Tensor *gw = GradIfTracked(self, 1))
          AsMat(*gw, patch, cout).noalias() +=
              AsMat(cols, positions, patch).transpose() * g;
        if (Tensor *gb = GradIfTracked(self, 2))
          MapVec(gb->data.data(), cout) += g.colwise().sum().transpose();
        Tensor *gx = GradIfTracked(self, 0);
        if (!gx) return;
        RowMat dcols = g * AsMat(self.parents[1]->value, patch, cout).transpose();
        for (int64_t oh = 0; oh < ho; ++oh)
          for (int64_t ow = 0; ow < wo; ++ow) {
            const double *src = dcols.data() + (oh * wo + ow) * patch;
            for (int i = 0; i < s.kernel_h; ++i) {
              const int64_t ih = oh * s.stride_h - s.pad_h + i;
              if (ih < 0 || ih >= h) continue;
              for (int j = 0; j < s.kernel_w; ++j) {
                const int64_t iw = ow * s.stride_w - s.pad_w + j;
                if (iw < 0 || iw >= wd) continue;
                const double *d = src + (static_cast<int64_t>(i) * s.kernel_w + j) * cin;
                double *gxi = gx->data.data() + (ih * wd + iw) * cin;
                for (int64_t c = 0; c < cin; ++c) gxi[c] += d[c];
              }
            }
          }
      });
}

Var PeriodFold(const Var &x, int period) {
  SFVOC_CHECK(period >= 1, ErrorCode::kInvalidArgument, "period must be >= 1");
  SFVOC_CHECK(x.shape().size() == 1 && x.size() >= 1, ErrorCode::kShapeMismatch,
              "PeriodFold expects a non-empty 1-D waveform");
  const int64_t t = x.size();
  const int64_t rows = (t + period - 1) / period;
  const int64_t total = rows * period;
  std::vector<int64_t> src(total);
  for (int64_t i = 0; i < total; ++i) {
    int64_t j = i;
    if (j >= t) j = t >= 2 ? 2 * (t - 1) - j : 0;
    src[i] = std::max<int64_t>(j, 0);
  }
  Tensor out({rows, period, 1});
  for (int64_t i = 0; i < total; ++i) out.data[i] = x.value().data[src[i]];
  return MakeResult(std::move(out), {x}, [src = std::move(src)](Node &self) {
    Tensor *g = GradIfTracked(self, 0);
    if (!g) return;
    for (size_t i = 0; i < src.size(); ++i) g->data[src[i]] += self.grad.data[i];
  });
}

Var StftMagnitude(const Var &x, const StftConfig &cfg) {
  SFVOC_CHECK(x.shape().size() == 1, ErrorCode::kShapeMismatch,
              "StftMagnitude expects a 1-D waveform");
  ComplexSpectrogram spec = StftComplex(x.value().data, cfg);
  Tensor out({spec.num_frames, spec.num_bins});
  for (size_t i = 0; i < spec.data.size(); ++i) out.data[i] = std::abs(spec.data[i]);
  return MakeResult(std::move(out), {x}, [cfg, spec = std::move(spec)](Node &self) {
    Tensor *gx = GradIfTracked(self, 0);
    const int64_t t = gx->size();
    const std::vector<int64_t> src = PaddedSourceIndex(t, cfg);
    const std::vector<double> win = MakeWindow(cfg);
    const Fft &fft = GetFft(cfg.fft_size);
    std::vector<Complex> buf(cfg.fft_size);
    for (int64_t f = 0; f < spec.num_frames; ++f) {
      std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
      for (int64_t k = 0; k < spec.num_bins; ++k) {
        const Complex c = spec.at(f, k);
        const double mag = std::abs(c);
        if (mag == 0.0) continue;
        buf[k] = self.grad.data[f * spec.num_bins + k] * std::conj(c) / mag;
      }
      fft.Transform(buf, false);
      const int64_t start = f * cfg.frame_shift;
      for (int n = 0; n < cfg.frame_length; ++n)
        gx->data[src[start + n]] += win[n] * buf[n].real();
    }
  });
}

Var IstftOp(const Var &amplitude, const Var &phase, const StftConfig &cfg) {
  CheckSameShape(amplitude, phase, "IstftOp");
  CheckMatrix(amplitude, "IstftOp");
  const int64_t frames = amplitude.shape()[0], bins = amplitude.shape()[1];
  SFVOC_CHECK(bins == cfg.num_bins(), ErrorCode::kShapeMismatch,
              "IstftOp: " + std::to_string(bins) + " bins, config expects " +
                  std::to_string(cfg.num_bins()));
  ComplexSpectrogram spec;
  spec.num_frames = frames;
  spec.num_bins = bins;
  spec.data.resize(frames * bins);
  const auto &av = amplitude.value().data;
  const auto &pv = phase.value().data;
  for (size_t i = 0; i < spec.data.size(); ++i)
    spec.data[i] = Complex(av[i] * std::cos(pv[i]), av[i] * std::sin(pv[i]));
  std::vector<double> wave = IstftComplex(spec, cfg);
  const int64_t length = static_cast<int64_t>(wave.size());
  Tensor out({length}, std::move(wave));
  return MakeResult(std::move(out), {amplitude, phase},
                    [cfg, frames, bins](Node &self) {
    const std::vector<double> win = MakeWindow(cfg);
    const std::vector<double> env = WindowEnvelope(frames, cfg);
    const int64_t left = cfg.edge_pad();
    std::vector<double> d_ola(env.size(), 0.0);
    for (size_t t = 0; t < self.grad.data.size(); ++t)
      d_ola[left + t] = self.grad.data[t] / env[left + t];
    const Fft &fft = GetFft(cfg.fft_size);
    const double inv_n = 1.0 / cfg.fft_size;
    std::vector<double> dbuf(cfg.fft_size, 0.0);
    std::vector<Complex> spec(bins);
    const auto &av = self.parents[0]->value.data;
    const auto &pv = self.parents[1]->value.data;
    Tensor *ga = GradIfTracked(self, 0);
    Tensor *gp = GradIfTracked(self, 1);
    for (int64_t f = 0; f < frames; ++f) {
      const int64_t start = f * cfg.frame_shift;
      for (int n = 0; n < cfg.frame_length; ++n)
        dbuf[n] = d_ola[start + n] * win[n];
      fft.Rfft(dbuf, spec);
      for (int64_t k = 0; k < bins; ++k) {
        const bool edge = (k == 0 || k == bins - 1);
        const double c = edge ? inv_n : 2.0 * inv_n;
        const double d_re = c * spec[k].real();
        const double d_im = edge ? 0.0 : c * spec[k].imag();
        const int64_t i = f * bins + k;
        const double cs = std::cos(pv[i]), sn = std::sin(pv[i]);
        if (ga) ga->data[i] += d_re * cs + d_im * sn;
        if (gp) gp->data[i] += av[i] * (-d_re * sn + d_im * cs);
      }
    }
  });
}

Var LogMel(const Var &amplitude, const Tensor &filterbank, double floor) {
  CheckMatrix(amplitude, "LogMel");
  const int64_t frames = amplitude.shape()[0], bins = amplitude.shape()[1];
  const int64_t mels = filterbank.rows();
  SFVOC_CHECK(filterbank.cols() == bins, ErrorCode::kShapeMismatch,
              "LogMel: filterbank/bin mismatch");
  Tensor energy({frames, mels});
  AsMat(energy, frames, mels).noalias() =
      AsMat(amplitude.value(), frames, bins) *
      AsMat(filterbank, mels, bins).transpose();
  Tensor out({frames, mels});
  for (int64_t i = 0; i < out.size(); ++i)
    out.data[i] = std::log(std::max(energy.data[i], floor));
  return MakeResult(std::move(out), {amplitude},
                    [frames, bins, mels, floor, filterbank,
                     energy = std::move(energy)](Node &self) {
    Tensor d_energy({frames, mels});
    for (int64_t i = 0; i < d_energy.size(); ++i)
      if (energy.data[i] > floor)
        d_energy.data[i] = self.grad.data[i] / energy.data[i];
    Tensor *ga = GradIfTracked(self, 0);
    AsMat(*ga, frames, bins).noalias() +=
        AsMat(d_energy, frames, mels) * AsMat(filterbank, mels, bins);
  });
}

}  // namespace sfvoc
