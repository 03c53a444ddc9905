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

#pragma once

// Naive mean-field reference: O(N^2) double loop, fused single-exp
// kernels, explicit Potts energy with the label-constant term kept in.
// Deliberately shares no code with the production message passing.

#include <algorithm>
#include <cmath>
#include <vector>

#include "partprior/dense_crf.hpp"

namespace oracle {

inline partprior::ProbMap naive_meanfield(const partprior::ProbMap& unary,
                                          const partprior::RgbImage& image,
                                          const partprior::CrfParams& params) {
  using partprior::ProbMap;
  const int width = unary.width();
  const int height = unary.height();
  const int labels = unary.channels();
  const std::size_t n = unary.pixel_count();

  ProbMap q = unary;
  if (params.iterations == 0) return q;

  std::vector<double> neg_log_u(n * static_cast<std::size_t>(labels));
  for (std::size_t i = 0; i < n; ++i)
    for (int l = 0; l < labels; ++l)
      neg_log_u[i * labels + l] =
          -std::log(std::clamp(unary.pixel(i)[l], 1e-12, 1.0));

  const double inv_alpha = 1.0 / (2.0 * params.theta_alpha * params.theta_alpha);
  const double inv_beta = 1.0 / (2.0 * params.theta_beta * params.theta_beta);
  const double inv_gamma = 1.0 / (2.0 * params.theta_gamma * params.theta_gamma);

  ProbMap next = q;
  std::vector<double> message(static_cast<std::size_t>(labels));
  for (int iter = 0; iter < params.iterations; ++iter) {
    for (int yi = 0; yi < height; ++yi) {
      for (int xi = 0; xi < width; ++xi) {
        const std::size_t i = static_cast<std::size_t>(yi) * width + xi;
        std::fill(message.begin(), message.end(), 0.0);

        for (int yj = 0; yj < height; ++yj) {
          for (int xj = 0; xj < width; ++xj) {
            const std::size_t j = static_cast<std::size_t>(yj) * width + xj;
            if (j == i) continue;  // no self-message
            const double d2 = static_cast<double>(xi - xj) * (xi - xj) +
                              static_cast<double>(yi - yj) * (yi - yj);
            double c2 = 0.0;
            for (int ch = 0; ch < 3; ++ch) {
              const double dc = static_cast<double>(image.at(xi, yi, ch)) -
                                static_cast<double>(image.at(xj, yj, ch));
              c2 += dc * dc;
            }
            const double k =
                params.w_app * std::exp(-d2 * inv_alpha - c2 * inv_beta) +
                params.w_smooth * std::exp(-d2 * inv_gamma);
            for (int l = 0; l < labels; ++l)
              message[static_cast<std::size_t>(l)] += k * q.pixel(j)[l];
          }
        }

        double total = 0.0;
        for (int l = 0; l < labels; ++l)
          total += message[static_cast<std::size_t>(l)];

        // E(l) = -log u(l) + sum_{l' != l} m(l'), then softmax of -E.
        double emin = 1e300;
        std::vector<double> energy(static_cast<std::size_t>(labels));
        for (int l = 0; l < labels; ++l) {
          energy[static_cast<std::size_t>(l)] =
              neg_log_u[i * labels + l] +
              (total - message[static_cast<std::size_t>(l)]);
          emin = std::min(emin, energy[static_cast<std::size_t>(l)]);
        }
        double zsum = 0.0;
        for (int l = 0; l < labels; ++l) {
          energy[static_cast<std::size_t>(l)] =
              std::exp(emin - energy[static_cast<std::size_t>(l)]);
          zsum += energy[static_cast<std::size_t>(l)];
        }
        for (int l = 0; l < labels; ++l)
          next.pixel(i)[l] = energy[static_cast<std::size_t>(l)] / zsum;
      }
    }
    std::swap(q, next);
  }
  return q;
}

}  // namespace oracle
