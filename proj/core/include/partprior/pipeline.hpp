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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "partprior/dense_crf.hpp"
#include "partprior/metrics.hpp"
#include "partprior/prior_gen.hpp"
#include "partprior/segmenter.hpp"
#include "partprior/weak_supervision.hpp"

namespace partprior {

/// Everything a training run depends on. Serializes to/from JSON; the
/// copy written into the run directory is the run's full provenance.
struct RunConfig {
  std::uint64_t seed = 17;

  std::string train_dir;
  std::string test_dir;

  PriorConfig prior;
  CrfParams crf;
  TrainHyperParams segmenter;

  double w_m = 1.0;
  bool use_full_masks = true;  // false: pose-only training
  int num_refinement_iterations = 4;
  bool self_paced = true;

  /// Priors as full supervision: uncertain pixels train as background,
  /// no mask loss, no refinement. The weakest-supervision reference.
  bool baseline_mode = false;

  /// What a discarded sample trains on: its raw prior, or nothing.
  enum class DiscardFallback { prior, exclude };
  DiscardFallback discard_fallback = DiscardFallback::prior;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  static RunConfig from_json_file(const std::filesystem::path& path);

  /// Apply a partial JSON override (same schema, any subset of keys).
  void merge_json(const std::string& text);
};

/// One refinement round's on-disk record.
struct SampleSelection {
  std::string sample_id;
  SelectionDecision decision;
  bool used_fused = false;
};

struct IterationState {
  int iteration = 0;
  std::filesystem::path checkpoint;
  std::filesystem::path supervision_dir;
  std::string supervision_source;  // "priors" or the previous checkpoint
  Metrics test_metrics;
  std::optional<Metrics> train_metrics;
  std::vector<double> epoch_losses;
  std::vector<SampleSelection> selections;  // empty at iteration 0
};

/// The full loop: train on raw priors, then per round predict ->
/// dense-CRF refine -> argmax -> fuse with the fixed priors ->
/// self-paced select -> retrain (warm start). Writes the run directory
/// layout: config.json, iter_<t>/{model.ckpt,supervision/,metrics.json},
/// decisions.jsonl. Deterministic for a fixed config.
std::vector<IterationState> run_training(const RunConfig& config,
                                         const std::filesystem::path& run_dir);

/// Post-hoc structural check of a run directory: the iteration chain is
/// complete, every round's supervision derives from the previous round's
/// model only, and stored supervision agrees with the freshly recomputed
/// priors on the priors' confident pixels.
/// Throws ErrorKind::schema / io on violations.
void validate_run_directory(const std::filesystem::path& run_dir);

}  // namespace partprior
