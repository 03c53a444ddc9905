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

#include "partprior/pipeline.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "partprior/dataset.hpp"
#include "partprior/errors.hpp"
#include "partprior/png_io.hpp"
#include "partprior/rng.hpp"
#include "partprior/threading.hpp"

namespace partprior {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string iter_dir_name(int t) { return "iter_" + std::to_string(t); }

struct LoadedSplit {
  Dataset dataset;
  std::vector<FeatureMap> features;
  std::vector<TriStateMap> priors;  // train only
};

LoadedSplit load_split(const std::string& dir, const PriorConfig& prior_config,
                       bool build_priors) {
  if (dir.empty() || !fs::is_directory(dir))
    throw_error(ErrorKind::io, "dataset directory missing: " + dir);

  LoadedSplit split;
  split.dataset = load_dataset(dir);
  const std::size_t n = split.dataset.samples.size();
  split.features.resize(n);
  if (build_priors) split.priors.resize(n);

  parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t i) {
    const DatasetSample& sample = split.dataset.samples[static_cast<std::size_t>(i)];
    split.features[static_cast<std::size_t>(i)] = extract_features(sample.image);
    if (build_priors) {
      split.priors[static_cast<std::size_t>(i)] = rasterize_priors(
          sample.poses, sample.image.width(), sample.image.height(),
          prior_config);
    }
  });
  return split;
}

/// Baseline supervision: every uncertain pixel becomes background.
TriStateMap uncertain_to_background(const TriStateMap& prior) {
  TriStateMap out = prior;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (TriStateMap::is_uncertain(out[i])) out[i] = 0;
  return out;
}

Metrics evaluate_split(const SegmenterModel& model, const LoadedSplit& split) {
  const std::size_t n = split.dataset.samples.size();
  std::vector<LabelGrid> predictions(n);
  parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t i) {
    predictions[static_cast<std::size_t>(i)] = argmax_labels(
        predict(model, split.features[static_cast<std::size_t>(i)]));
  });
  ConfusionAccumulator acc;
  for (std::size_t i = 0; i < n; ++i)
    acc.add(predictions[i], *split.dataset.samples[i].gt_mask);
  return acc.finalize();
}

bool split_has_gt(const LoadedSplit& split) {
  for (const DatasetSample& s : split.dataset.samples)
    if (!s.gt_mask) return false;
  return !split.dataset.samples.empty();
}

void write_metrics_json(const fs::path& path, int iteration,
                        const Metrics& test, const std::optional<Metrics>& train,
                        const std::vector<double>& epoch_losses,
                        const std::string& supervision_source,
                        bool baseline_mode) {
  std::ostringstream os;
  os.precision(17);
  os << "{\n  \"iteration\": " << iteration << ",\n";
  os << "  \"supervision_source\": \"" << supervision_source << "\",\n";
  if (baseline_mode)
    os << "  \"note\": \"baseline mode: uncertain pixels trained as background\",\n";
  os << "  \"test\": " << test.to_json() << ",\n";
  os << "  \"train\": " << (train ? train->to_json() : "null") << ",\n";
  os << "  \"mean_loss_per_epoch\": [";
  for (std::size_t i = 0; i < epoch_losses.size(); ++i)
    os << (i ? "," : "") << epoch_losses[i];
  os << "]\n}\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorKind::io, "cannot write " + path.string());
  out << os.str();
}

void write_supervision_dir(const fs::path& dir, const LoadedSplit& train,
                           const std::vector<const TriStateMap*>& maps) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!maps[i]) continue;  // excluded sample
    write_label_png(dir / (train.dataset.samples[i].id + ".png"), *maps[i]);
  }
}

std::vector<double> run_epochs(SegmenterModel& model,
                               const std::vector<TrainSample>& samples,
                               int epochs, double w_m, std::uint64_t seed,
                               std::uint64_t salt) {
  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(epochs));
  for (int e = 0; e < epochs; ++e) {
    losses.push_back(train_epoch(
        model, samples, w_m,
        mix_seed(seed, salt, static_cast<std::uint64_t>(e))));
  }
  return losses;
}

}  // namespace

std::vector<IterationState> run_training(const RunConfig& config,
                                         const fs::path& run_dir) {
  fs::create_directories(run_dir);
  {
    std::ofstream out(run_dir / "config.json", std::ios::binary);
    if (!out) throw_error(ErrorKind::io, "cannot write config.json");
    out << config.to_json() << "\n";
  }

  LoadedSplit train = load_split(config.train_dir, config.prior, true);
  LoadedSplit test = load_split(config.test_dir, config.prior, false);
  if (train.dataset.samples.empty())
    throw_error(ErrorKind::invalid_config, "training split is empty");
  if (!split_has_gt(test))
    throw_error(ErrorKind::invalid_config,
                "test split needs gt_masks/ for evaluation");

  const std::size_t n_train = train.dataset.samples.size();
  const bool train_gt = split_has_gt(train);
  const int rounds = config.baseline_mode ? 0 : config.num_refinement_iterations;
  const bool with_masks = config.use_full_masks && !config.baseline_mode;

  // Iteration 0 supervision: raw priors (baseline collapses U to B).
  std::vector<TriStateMap> base_supervision;
  base_supervision.reserve(n_train);
  for (const TriStateMap& prior : train.priors)
    base_supervision.push_back(
        config.baseline_mode ? uncertain_to_background(prior) : prior);

  auto make_train_samples =
      [&](const std::vector<const TriStateMap*>& supervision) {
        std::vector<TrainSample> samples;
        samples.reserve(n_train);
        for (std::size_t i = 0; i < n_train; ++i) {
          if (!supervision[i]) continue;
          TrainSample s;
          s.features = &train.features[i];
          s.supervision = supervision[i];
          s.mask = (with_masks && train.dataset.samples[i].full_mask)
                       ? &*train.dataset.samples[i].full_mask
                       : nullptr;
          samples.push_back(s);
        }
        return samples;
      };

  std::ofstream decisions(run_dir / "decisions.jsonl", std::ios::binary);
  if (!decisions) throw_error(ErrorKind::io, "cannot write decisions.jsonl");
  decisions.precision(17);

  std::vector<IterationState> states;
  SegmenterModel model = SegmenterModel::zeros(config.seed, config.segmenter);

  for (int t = 0; t <= rounds; ++t) {
    IterationState state;
    state.iteration = t;
    const fs::path iter_dir = run_dir / iter_dir_name(t);
    fs::create_directories(iter_dir);

    std::vector<const TriStateMap*> supervision(n_train, nullptr);
    std::vector<TriStateMap> fused(n_train);

    if (t == 0) {
      state.supervision_source = "priors";
      for (std::size_t i = 0; i < n_train; ++i)
        supervision[i] = &base_supervision[i];
    } else {
      state.supervision_source = iter_dir_name(t - 1) + "/model.ckpt";

      // Predict with the previous round's model, refine against the
      // image, fuse with the fixed priors, then select.
      std::vector<SampleSelection> selections(n_train);
      parallel_for(static_cast<std::int64_t>(n_train), [&](std::int64_t idx) {
        const std::size_t i = static_cast<std::size_t>(idx);
        const ProbMap probs = predict(model, train.features[i]);
        const ProbMap refined = meanfield_refine(
            probs, train.dataset.samples[i].image, config.crf);
        fused[i] = fuse_supervision(train.priors[i], argmax_labels(refined));

        SampleSelection sel;
        sel.sample_id = train.dataset.samples[i].id;
        if (config.self_paced) {
          sel.decision = self_paced_select(
              probs, train.priors[i],
              mix_seed(config.seed, static_cast<std::uint64_t>(t),
                       static_cast<std::uint64_t>(i)));
        } else {
          sel.decision.kept = true;
        }
        sel.used_fused = sel.decision.kept;
        selections[i] = sel;
      });

      for (std::size_t i = 0; i < n_train; ++i) {
        const SampleSelection& sel = selections[i];
        if (sel.used_fused) {
          supervision[i] = &fused[i];
        } else if (config.discard_fallback == RunConfig::DiscardFallback::prior) {
          supervision[i] = &train.priors[i];
        }  // else excluded this round

        decisions << "{\"iteration\":" << t << ",\"sample\":\""
                  << sel.sample_id << "\",\"mean_confidence\":"
                  << sel.decision.mean_confidence << ",\"discard_probability\":"
                  << sel.decision.discard_probability << ",\"rng_draw\":"
                  << sel.decision.rng_draw << ",\"kept\":"
                  << (sel.decision.kept ? "true" : "false")
                  << ",\"empty_foreground\":"
                  << (sel.decision.empty_foreground ? "true" : "false") << "}\n";
      }
      state.selections = std::move(selections);
    }

    write_supervision_dir(iter_dir / "supervision", train, supervision);

    const std::vector<TrainSample> samples = make_train_samples(supervision);
    const int epochs = t == 0 ? config.segmenter.epochs_initial
                              : config.segmenter.epochs_refine;
    const double w_m_eff = with_masks ? config.w_m : 0.0;
    state.epoch_losses =
        run_epochs(model, samples, epochs, w_m_eff, config.seed,
                   static_cast<std::uint64_t>(t) * 1000 + 7);

    model.save(iter_dir / "model.ckpt");
    state.checkpoint = iter_dir / "model.ckpt";
    state.supervision_dir = iter_dir / "supervision";
    state.test_metrics = evaluate_split(model, test);
    if (train_gt) state.train_metrics = evaluate_split(model, train);

    write_metrics_json(iter_dir / "metrics.json", t, state.test_metrics,
                       state.train_metrics, state.epoch_losses,
                       state.supervision_source, config.baseline_mode);

    std::cerr << "[partprior] iteration " << t
              << " test mIoU = " << state.test_metrics.miou << "\n";
    states.push_back(std::move(state));
  }

  validate_run_directory(run_dir);
  return states;
}

void validate_run_directory(const fs::path& run_dir) {
  const fs::path config_path = run_dir / "config.json";
  if (!fs::exists(config_path))
    throw_error(ErrorKind::io, "run directory has no config.json");
  const RunConfig config = RunConfig::from_json_file(config_path);

  // The iteration chain must be contiguous with strictly backward
  // supervision lineage: round t's labels come from round t-1's model.
  int t = 0;
  while (fs::is_directory(run_dir / iter_dir_name(t))) {
    const fs::path metrics_path = run_dir / iter_dir_name(t) / "metrics.json";
    std::ifstream in(metrics_path, std::ios::binary);
    if (!in) throw_error(ErrorKind::io, "missing " + metrics_path.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception&) {
      throw_error(ErrorKind::parse, "unreadable " + metrics_path.string());
    }
    const std::string source = j.value("supervision_source", "");
    const std::string expected =
        t == 0 ? "priors" : iter_dir_name(t - 1) + "/model.ckpt";
    if (source != expected)
      throw_error(ErrorKind::schema,
                  "iteration " + std::to_string(t) +
                      " supervision lineage is wrong: got '" + source +
                      "', expected '" + expected + "'");
    if (!fs::exists(run_dir / iter_dir_name(t) / "model.ckpt"))
      throw_error(ErrorKind::io,
                  "iteration " + std::to_string(t) + " has no checkpoint");
    ++t;
  }
  if (t == 0) throw_error(ErrorKind::schema, "run directory has no iterations");

  // Stored supervision must honor the fixed priors on their confident
  // pixels (recomputed from the dataset; uncertain pixels are free).
  Dataset train = load_dataset(config.train_dir);
  for (const DatasetSample& sample : train.samples) {
    const TriStateMap prior =
        rasterize_priors(sample.poses, sample.image.width(),
                         sample.image.height(), config.prior);
    for (int round = 0; round < t; ++round) {
      const fs::path sup_path =
          run_dir / iter_dir_name(round) / "supervision" / (sample.id + ".png");
      if (!fs::exists(sup_path)) continue;  // excluded by selection
      const TriStateMap stored = read_tri_state_png(sup_path);
      if (stored.width() != prior.width() || stored.height() != prior.height())
        throw_error(ErrorKind::schema, "supervision shape drifted: " + sup_path.string());
      for (std::size_t i = 0; i < stored.size(); ++i) {
        const std::uint8_t p = prior[i];
        if (TriStateMap::is_uncertain(p)) continue;
        if (stored[i] != p)
          throw_error(ErrorKind::schema,
                      "supervision contradicts the fixed prior: " +
                          sup_path.string());
      }
    }
  }
}

}  // namespace partprior
