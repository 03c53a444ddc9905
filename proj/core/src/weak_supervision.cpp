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

#include "partprior/weak_supervision.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "partprior/errors.hpp"
#include "partprior/rng.hpp"

namespace partprior {

namespace {

double clamped(double p) { return std::clamp(p, kProbClamp, 1.0); }

void check_shapes(const ProbMap& pred, int width, int height,
                  const char* what) {
  if (pred.width() != width || pred.height() != height)
    throw_error(ErrorKind::dimension_mismatch,
                std::string("prediction and ") + what + " shapes differ");
  if (pred.channels() != kNumLabels)
    throw_error(ErrorKind::dimension_mismatch,
                "prediction must have C+1 channels");
}

}  // namespace

std::string LossReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"structure\":" << structure;
  if (has_mask)
    os << ",\"mask\":" << mask;
  else
    os << ",\"mask\":null";
  os << ",\"total\":" << total << ",\"w_m\":" << w_m
     << ",\"pixels\":{\"foreground\":" << foreground_pixels
     << ",\"background\":" << background_pixels
     << ",\"uncertain\":" << uncertain_pixels
     << ",\"total\":" << foreground_pixels + background_pixels + uncertain_pixels
     << "},\"gradient_kind\":\"dprobs\"}";
  return os.str();
}

LossReport structure_loss(const ProbMap& pred, const TriStateMap& supervision) {
  check_shapes(pred, supervision.width(), supervision.height(), "supervision");

  LossReport report;
  report.gradient =
      PixelField(pred.width(), pred.height(), pred.channels(), 0.0);

  const std::size_t n = pred.pixel_count();
  std::int64_t confident = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t label = supervision[i];
    if (TriStateMap::is_uncertain(label)) {
      ++report.uncertain_pixels;
      continue;
    }
    if (!TriStateMap::is_valid(label))
      throw_error(ErrorKind::schema, "supervision label out of range");
    TriStateMap::is_foreground(label) ? ++report.foreground_pixels
                                      : ++report.background_pixels;
    ++confident;
  }
  if (confident == 0)
    throw_error(ErrorKind::empty_supervision,
                "structure loss undefined: supervision is entirely uncertain");

  const double inv_n = 1.0 / static_cast<double>(confident);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t label = supervision[i];
    if (TriStateMap::is_uncertain(label)) continue;
    const double p = clamped(pred.pixel(i)[label]);
    sum -= std::log(p);
    report.gradient.pixel(i)[label] = -inv_n / p;
  }

  report.structure = sum * inv_n;
  report.total = report.structure;
  return report;
}

LossReport mask_loss(const ProbMap& pred, const FullMask& mask) {
  check_shapes(pred, mask.width(), mask.height(), "mask");

  LossReport report;
  report.has_mask = true;
  report.gradient =
      PixelField(pred.width(), pred.height(), pred.channels(), 0.0);

  const std::size_t n = pred.pixel_count();
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p_bg = pred.pixel(i)[0];
    if (mask[i]) {
      // Foreground probability is 1 - background class probability.
      const double p_fg = clamped(1.0 - p_bg);
      sum -= std::log(p_fg);
      report.gradient.pixel(i)[0] = inv_n / p_fg;
      ++report.foreground_pixels;
    } else {
      const double p = clamped(p_bg);
      sum -= std::log(p);
      report.gradient.pixel(i)[0] = -inv_n / p;
      ++report.background_pixels;
    }
  }

  report.mask = sum * inv_n;
  report.total = report.mask;
  return report;
}

LossReport total_loss(const ProbMap& pred, const TriStateMap& supervision,
                      const FullMask* mask, double w_m) {
  if (w_m < 0.0)
    throw_error(ErrorKind::invalid_config, "w_m must be nonnegative");

  LossReport report = structure_loss(pred, supervision);
  report.w_m = w_m;

  if (mask != nullptr) {
    LossReport m = mask_loss(pred, *mask);
    report.mask = m.mask;
    report.has_mask = true;
    const std::size_t count = report.gradient.data().size();
    for (std::size_t i = 0; i < count; ++i)
      report.gradient.data()[i] += w_m * m.gradient.data()[i];
  }

  report.total = report.structure + (report.has_mask ? w_m * report.mask : 0.0);
  return report;
}

TriStateMap fuse_supervision(const TriStateMap& prior,
                             const LabelGrid& refined) {
  if (prior.width() != refined.width() || prior.height() != refined.height())
    throw_error(ErrorKind::dimension_mismatch,
                "prior and refined label shapes differ");

  TriStateMap fused = prior;
  for (std::size_t i = 0; i < fused.size(); ++i) {
    if (TriStateMap::is_uncertain(fused[i])) {
      const std::uint8_t r = refined[i];
      if (!TriStateMap::is_valid(r) || TriStateMap::is_uncertain(r))
        throw_error(ErrorKind::schema, "refined labels must be 0..6");
      fused[i] = r;
    }
  }
  return fused;
}

double self_paced_discard_probability(double mean_confidence) {
  return std::max(0.0, 2.0 - std::exp(mean_confidence));
}

SelectionDecision self_paced_select(const ProbMap& pred,
                                    const TriStateMap& supervision,
                                    std::uint64_t rng_seed) {
  check_shapes(pred, supervision.width(), supervision.height(), "supervision");

  SelectionDecision decision;
  Rng rng(rng_seed);
  decision.rng_draw = rng.uniform();

  double sum = 0.0;
  std::int64_t count = 0;
  const std::size_t n = pred.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    if (!TriStateMap::is_foreground(supervision[i])) continue;
    const double* p = pred.pixel(i);
    double best = p[1];
    for (int c = 2; c < kNumLabels; ++c) best = std::max(best, p[c]);
    sum += best;
    ++count;
  }

  if (count == 0) {
    decision.empty_foreground = true;
    decision.kept = true;
    decision.discard_probability = 0.0;
    return decision;
  }

  decision.mean_confidence = sum / static_cast<double>(count);
  decision.discard_probability =
      self_paced_discard_probability(decision.mean_confidence);
  decision.kept = decision.rng_draw >= decision.discard_probability;
  return decision;
}

}  // namespace partprior
