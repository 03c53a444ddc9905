// Copyright 2026 The PartPrior Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "partprior/dense_crf.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "partprior/errors.hpp"
#include "partprior/weak_supervision.hpp"

namespace partprior {

LabelGrid argmax_labels(const ProbMap& probs) {
  LabelGrid labels(probs.width(), probs.height(), 0);
  const int ch = probs.channels();
  for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
    const double* p = probs.pixel(i);
    int best = 0;
    for (int c = 1; c < ch; ++c)
      if (p[c] > p[best]) best = c;  // ties keep the lowest index
    labels[i] = static_cast<std::uint8_t>(best);
  }
  return labels;
}

namespace {

// exp(-d^2 / (2 theta^2)) for every |d| one axis or color channel can
// produce. The Gaussian factorizes over axes/channels, so a pairwise
// kernel value is a handful of L1-resident table loads; this matches
// the fused single-exp formula to a couple of ulps.
std::vector<double> gaussian_table(int extent, double theta) {
  std::vector<double> t(static_cast<std::size_t>(extent));
  const double inv = 1.0 / (2.0 * theta * theta);
  for (int d = 0; d < extent; ++d)
    t[static_cast<std::size_t>(d)] =
        std::exp(-static_cast<double>(d) * d * inv);
  return t;
}

// Neighbourhood radius with a guaranteed truncation error bound: every
// excluded pair contributes at most w*exp(-r^2/(2 theta^2)), so keeping
// the per-pixel excluded mass under kTruncationBudget bounds the
// message error by the same amount.
constexpr double kTruncationBudget = 1e-7;

int truncation_radius(double w, double theta, std::size_t n_pixels,
                      int max_radius) {
  if (w <= 0.0) return 0;
  const double per_pair =
      kTruncationBudget / (w * static_cast<double>(n_pixels));
  if (per_pair >= 1.0) return 0;
  const double r = theta * std::sqrt(-2.0 * std::log(per_pair));
  if (r >= static_cast<double>(max_radius)) return max_radius;
  return static_cast<int>(std::ceil(r));
}

struct PassContext {
  int width;
  int height;
  int window;
  const std::uint8_t* rgb;
  const double* ax;
  const double* ay;
  const double* gx;
  const double* gy;
  const double* cl;  // 256-entry color table
  double w_app;
  double w_smooth;
};

// One symmetric message sweep: msg_i(l) += k_ij q_j(l) for all j != i.
// S is the padded channel stride (pad lanes hold zeros), compile-time
// so the per-pair label loop flattens into vector FMAs.
template <int S>
void pass_messages(const PassContext& ctx, const double* q, double* msg) {
  const int width = ctx.width, height = ctx.height, window = ctx.window;
  for (int yi = 0; yi < height; ++yi) {
    for (int xi = 0; xi < width; ++xi) {
      const std::size_t i = static_cast<std::size_t>(yi) * width + xi;
      const std::uint8_t* ci = ctx.rgb + i * 3;
      const int ri = ci[0], gi = ci[1], bi = ci[2];

      double qi[S], acc[S];
      for (int l = 0; l < S; ++l) {
        qi[l] = q[i * S + l];
        acc[l] = 0.0;
      }

      const int y_end = std::min(height - 1, yi + window);
      for (int yj = yi; yj <= y_end; ++yj) {
        const double row_app =
            ctx.w_app * ctx.ay[static_cast<std::size_t>(yj - yi)];
        const double row_smooth =
            ctx.w_smooth * ctx.gy[static_cast<std::size_t>(yj - yi)];
        const int xj_begin = (yj == yi) ? xi + 1 : std::max(0, xi - window);
        const int xj_end = std::min(width - 1, xi + window);
        const std::size_t row_base = static_cast<std::size_t>(yj) * width;
        const std::uint8_t* crow = ctx.rgb + (row_base + xj_begin) * 3;
        const double* qrow = q + (row_base + xj_begin) * S;
        double* mrow = msg + (row_base + xj_begin) * S;

        for (int xj = xj_begin; xj <= xj_end;
             ++xj, crow += 3, qrow += S, mrow += S) {
          const int adx = xj > xi ? xj - xi : xi - xj;
          const int dr = ri - crow[0], dg = gi - crow[1], db = bi - crow[2];
          const double k =
              row_app * ctx.ax[static_cast<std::size_t>(adx)] *
                  ctx.cl[static_cast<std::size_t>(dr < 0 ? -dr : dr)] *
                  ctx.cl[static_cast<std::size_t>(dg < 0 ? -dg : dg)] *
                  ctx.cl[static_cast<std::size_t>(db < 0 ? -db : db)] +
              row_smooth * ctx.gx[static_cast<std::size_t>(adx)];
          for (int l = 0; l < S; ++l) {
            acc[l] += k * qrow[l];
            mrow[l] += k * qi[l];
          }
        }
      }
      for (int l = 0; l < S; ++l) msg[i * S + l] += acc[l];
    }
  }
}

void pass_messages_generic(const PassContext& ctx, const double* q,
                           double* msg, int stride) {
  const int width = ctx.width, height = ctx.height, window = ctx.window;
  const std::size_t s = static_cast<std::size_t>(stride);
  std::vector<double> acc(s);
  for (int yi = 0; yi < height; ++yi) {
    for (int xi = 0; xi < width; ++xi) {
      const std::size_t i = static_cast<std::size_t>(yi) * width + xi;
      const std::uint8_t* ci = ctx.rgb + i * 3;
      const int ri = ci[0], gi = ci[1], bi = ci[2];
      const double* qi = q + i * s;
      std::fill(acc.begin(), acc.end(), 0.0);

      const int y_end = std::min(height - 1, yi + window);
      for (int yj = yi; yj <= y_end; ++yj) {
        const double row_app =
            ctx.w_app * ctx.ay[static_cast<std::size_t>(yj - yi)];
        const double row_smooth =
            ctx.w_smooth * ctx.gy[static_cast<std::size_t>(yj - yi)];
        const int xj_begin = (yj == yi) ? xi + 1 : std::max(0, xi - window);
        const int xj_end = std::min(width - 1, xi + window);
        const std::size_t row_base = static_cast<std::size_t>(yj) * width;
        for (int xj = xj_begin; xj <= xj_end; ++xj) {
          const std::size_t j = row_base + xj;
          const int adx = xj > xi ? xj - xi : xi - xj;
          const std::uint8_t* cj = ctx.rgb + j * 3;
          const int dr = std::abs(ri - cj[0]), dg = std::abs(gi - cj[1]),
                    db = std::abs(bi - cj[2]);
          const double k =
              row_app * ctx.ax[static_cast<std::size_t>(adx)] *
                  ctx.cl[static_cast<std::size_t>(dr)] *
                  ctx.cl[static_cast<std::size_t>(dg)] *
                  ctx.cl[static_cast<std::size_t>(db)] +
              row_smooth * ctx.gx[static_cast<std::size_t>(adx)];
          for (std::size_t l = 0; l < s; ++l) {
            acc[l] += k * q[j * s + l];
            msg[j * s + l] += k * qi[l];
          }
        }
      }
      for (std::size_t l = 0; l < s; ++l) msg[i * s + l] += acc[l];
    }
  }
}

}  // namespace

ProbMap meanfield_refine(const ProbMap& unary, const RgbImage& image,
                         const CrfParams& params) {
  if (unary.width() != image.width() || unary.height() != image.height())
    throw_error(ErrorKind::dimension_mismatch,
                "unary and image dimensions disagree");
  if (params.theta_alpha <= 0.0 || params.theta_beta <= 0.0 ||
      params.theta_gamma <= 0.0)
    throw_error(ErrorKind::invalid_config, "kernel widths must be positive");
  if (params.w_app < 0.0 || params.w_smooth < 0.0 || params.iterations < 0)
    throw_error(ErrorKind::invalid_config,
                "kernel weights and iteration count must be nonnegative");

  // With no pairwise term every update reduces to softmax(log unary),
  // i.e. the unary itself; returned as-is so the identity is exact.
  if (params.iterations == 0 || (params.w_app == 0.0 && params.w_smooth == 0.0))
    return unary;

  const int width = unary.width();
  const int height = unary.height();
  const int labels = unary.channels();
  const std::size_t n = unary.pixel_count();
  const int stride = labels <= 4 ? 4 : (labels <= 8 ? 8 : labels);

  const std::vector<double> ax = gaussian_table(width, params.theta_alpha);
  const std::vector<double> ay = gaussian_table(height, params.theta_alpha);
  const std::vector<double> gx = gaussian_table(width, params.theta_gamma);
  const std::vector<double> gy = gaussian_table(height, params.theta_gamma);
  const std::vector<double> cl = gaussian_table(256, params.theta_beta);

  const int max_radius = std::max(width, height);
  int window = max_radius;
  if (params.truncated) {
    const int r_app =
        truncation_radius(params.w_app, params.theta_alpha, n, max_radius);
    const int r_smooth =
        truncation_radius(params.w_smooth, params.theta_gamma, n, max_radius);
    window = std::max(r_app, r_smooth);
  }

  PassContext ctx{width,     height,    window,    image.data().data(),
                  ax.data(), ay.data(), gx.data(), gy.data(),
                  cl.data(), params.w_app, params.w_smooth};

  // Negative log unaries, computed once.
  std::vector<double> log_unary(n * static_cast<std::size_t>(labels));
  for (std::size_t i = 0; i < n; ++i) {
    const double* u = unary.pixel(i);
    for (int l = 0; l < labels; ++l)
      log_unary[i * static_cast<std::size_t>(labels) + l] =
          std::log(std::clamp(u[l], kProbClamp, 1.0));
  }

  // Pixel-major padded buffers; pad lanes stay zero throughout.
  std::vector<double> q(n * static_cast<std::size_t>(stride), 0.0);
  std::vector<double> msg(n * static_cast<std::size_t>(stride));
  for (std::size_t i = 0; i < n; ++i) {
    const double* u = unary.pixel(i);
    for (int l = 0; l < labels; ++l) q[i * stride + l] = u[l];
  }

  std::vector<double> z(static_cast<std::size_t>(labels));
  for (int iter = 0; iter < params.iterations; ++iter) {
    std::fill(msg.begin(), msg.end(), 0.0);
    switch (stride) {
      case 4: pass_messages<4>(ctx, q.data(), msg.data()); break;
      case 8: pass_messages<8>(ctx, q.data(), msg.data()); break;
      default: pass_messages_generic(ctx, q.data(), msg.data(), stride);
    }

    // Update: under Potts compatibility the label-independent part of
    // the pairwise energy cancels in the softmax, leaving
    // Q_new(l) ~ unary(l) * exp(message(l)).
    for (std::size_t i = 0; i < n; ++i) {
      double zmax = -1e300;
      for (int l = 0; l < labels; ++l) {
        z[static_cast<std::size_t>(l)] =
            log_unary[i * static_cast<std::size_t>(labels) + l] +
            msg[i * stride + l];
        zmax = std::max(zmax, z[static_cast<std::size_t>(l)]);
      }
      double sum = 0.0;
      for (int l = 0; l < labels; ++l) {
        z[static_cast<std::size_t>(l)] = std::exp(z[static_cast<std::size_t>(l)] - zmax);
        sum += z[static_cast<std::size_t>(l)];
      }
      for (int l = 0; l < labels; ++l)
        q[i * stride + l] = z[static_cast<std::size_t>(l)] / sum;
    }
  }

  ProbMap out(width, height, labels);
  for (std::size_t i = 0; i < n; ++i)
    for (int l = 0; l < labels; ++l) out.pixel(i)[l] = q[i * stride + l];
  return out;
}

}  // namespace partprior
