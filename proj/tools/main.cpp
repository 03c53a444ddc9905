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

// Command-line front end. Every subcommand prints exactly one JSON
// document to stdout; human-readable progress goes to stderr. Exit
// codes: 0 ok, 2 bad flags/config, 3 I/O failure, 4 invalid data.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "partprior/dataset.hpp"
#include "partprior/dense_crf.hpp"
#include "partprior/errors.hpp"
#include "partprior/metrics.hpp"
#include "partprior/npy_io.hpp"
#include "partprior/pipeline.hpp"
#include "partprior/png_io.hpp"
#include "partprior/prior_gen.hpp"
#include "partprior/synthetic.hpp"
#include "partprior/threading.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace partprior;

namespace {

std::vector<std::string> png_ids(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw_error(ErrorKind::io, "not a directory: " + dir.string());
  std::vector<std::string> ids;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".png") ids.push_back(e.path().stem().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

int cmd_synth(const SynthConfig& config, const fs::path& out) {
  generate_synthetic_corpus(config, out);
  json j;
  j["out_dir"] = out.string();
  j["n_train"] = config.n_train;
  j["n_test"] = config.n_test;
  j["width"] = config.width;
  j["height"] = config.height;
  j["seed"] = config.seed;
  j["occlusion_rate"] = config.occlusion_rate;
  j["missing_joint_rate"] = config.missing_joint_rate;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_gen_priors(const fs::path& poses_path, const fs::path& out,
                   const PriorConfig& prior, int width, int height) {
  const std::vector<ImagePoses> images = load_poses_json(poses_path);
  fs::create_directories(out);
  int written = 0;
  for (const ImagePoses& entry : images) {
    const int w = entry.width > 0 ? entry.width : width;
    const int h = entry.height > 0 ? entry.height : height;
    if (w <= 0 || h <= 0)
      throw_error(ErrorKind::invalid_config,
                  "image '" + entry.id +
                      "' has no dimensions; pass --width/--height");
    const TriStateMap map = rasterize_priors(entry.persons, w, h, prior);
    write_label_png(out / (entry.id + ".png"), map);
    ++written;
  }
  json j;
  j["out_dir"] = out.string();
  j["images"] = images.size();
  j["priors_written"] = written;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_train(const RunConfig& config, const fs::path& run_dir) {
  const std::vector<IterationState> states = run_training(config, run_dir);
  json iters = json::array();
  for (const IterationState& s : states) {
    json it;
    it["iteration"] = s.iteration;
    it["test_miou"] = s.test_metrics.miou;
    if (s.train_metrics) it["train_miou"] = s.train_metrics->miou;
    it["checkpoint"] = s.checkpoint.string();
    iters.push_back(it);
  }
  json j;
  j["run_dir"] = run_dir.string();
  j["iterations"] = iters;
  j["final_test_miou"] = states.back().test_metrics.miou;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_refine(const fs::path& probs_dir, const fs::path& images_dir,
               const fs::path& out, const CrfParams& params) {
  if (!fs::is_directory(probs_dir))
    throw_error(ErrorKind::io, "not a directory: " + probs_dir.string());
  std::vector<std::string> ids;
  for (const auto& e : fs::directory_iterator(probs_dir))
    if (e.path().extension() == ".npy") ids.push_back(e.path().stem().string());
  std::sort(ids.begin(), ids.end());

  fs::create_directories(out);
  std::vector<LabelGrid> results(ids.size());
  parallel_for(static_cast<std::int64_t>(ids.size()), [&](std::int64_t i) {
    const std::string& id = ids[static_cast<std::size_t>(i)];
    const ProbMap unary = read_prob_map_npy(probs_dir / (id + ".npy"));
    const RgbImage image = read_rgb_png(images_dir / (id + ".png"));
    const ProbMap refined = meanfield_refine(unary, image, params);
    results[static_cast<std::size_t>(i)] = argmax_labels(refined);
  });
  for (std::size_t i = 0; i < ids.size(); ++i)
    write_label_png(out / (ids[i] + ".png"), results[i]);

  json j;
  j["out_dir"] = out.string();
  j["refined"] = ids.size();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_eval(const fs::path& pred_dir, const fs::path& gt_dir) {
  const std::vector<std::string> ids = png_ids(pred_dir);
  if (ids.empty())
    throw_error(ErrorKind::io, "no predictions in " + pred_dir.string());
  ConfusionAccumulator acc;
  for (const std::string& id : ids) {
    const fs::path gt_path = gt_dir / (id + ".png");
    if (!fs::exists(gt_path))
      throw_error(ErrorKind::io, "missing ground truth: " + gt_path.string());
    acc.add(read_label_png(pred_dir / (id + ".png")),
            read_label_png(gt_path));
  }
  std::cout << acc.finalize().to_json() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pose-based part priors and iterative pseudo-label refinement"};
  app.require_subcommand(1);

  std::string workdir;
  app.add_option("--workdir", workdir,
                 "run with this working directory (all paths relative to it)");

  // synth -----------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  SynthConfig synth_config;
  std::string synth_out;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--n-train", synth_config.n_train, "training samples");
  synth->add_option("--n-test", synth_config.n_test, "test samples");
  synth->add_option("--width", synth_config.width, "image width");
  synth->add_option("--height", synth_config.height, "image height");
  synth->add_option("--seed", synth_config.seed, "corpus seed");
  synth->add_option("--occlusion-rate", synth_config.occlusion_rate,
                    "figure crowding probability");
  synth->add_option("--missing-joint-rate", synth_config.missing_joint_rate,
                    "per-joint annotation dropout");

  // gen-priors ------------------------------------------------------
  auto* gen = app.add_subcommand("gen-priors",
                                 "rasterize keypoints into tri-state priors");
  std::string gen_poses, gen_out, gen_leg_shift = "half";
  PriorConfig gen_prior;
  int gen_width = 0, gen_height = 0;
  bool gen_no_recovery = false;
  gen->add_option("--poses", gen_poses, "pose annotation JSON (native or COCO)")
      ->required();
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--width", gen_width, "fallback image width");
  gen->add_option("--height", gen_height, "fallback image height");
  gen->add_option("--ca", gen_prior.c_a, "ellipse semi-major scale");
  gen->add_option("--cb", gen_prior.c_b, "ellipse semi-minor scale");
  gen->add_option("--kd", gen_prior.k_d, "dilation fraction of pose height");
  gen->add_option("--leg-shift", gen_leg_shift, "half|full");
  gen->add_flag("--no-recovery", gen_no_recovery,
                "disable missing-keypoint recovery");

  // train -----------------------------------------------------------
  auto* train = app.add_subcommand("train", "run the training pipeline");
  std::string train_data, train_out, train_config_path, train_mode = "iter";
  RunConfig run_config;
  int train_iters = -1;
  std::uint64_t train_seed = 0;
  bool train_no_masks = false, train_no_self_paced = false,
       train_no_recovery = false, train_seed_set = false;
  train->add_option("--data", train_data,
                    "dataset root containing train/ and test/");
  train->add_option("--out", train_out, "run directory")->required();
  train->add_option("--config", train_config_path, "RunConfig JSON overrides");
  train->add_option("--mode", train_mode, "baseline|base|iter");
  train->add_option("--iters", train_iters, "refinement iterations");
  train
      ->add_option_function<std::uint64_t>(
          "--seed",
          [&](const std::uint64_t& v) {
            train_seed = v;
            train_seed_set = true;
          },
          "run seed")
      ->expected(1);
  train->add_flag("--no-masks", train_no_masks, "train without full masks");
  train->add_flag("--no-self-paced", train_no_self_paced,
                  "disable self-paced selection");
  train->add_flag("--no-recovery", train_no_recovery,
                  "disable missing-keypoint recovery");

  // refine ----------------------------------------------------------
  auto* refine = app.add_subcommand(
      "refine", "dense-CRF refine class-score maps into label PNGs");
  std::string refine_probs, refine_images, refine_out;
  CrfParams refine_params;
  refine->add_option("--probs", refine_probs, "directory of (H,W,C) .npy maps")
      ->required();
  refine->add_option("--images", refine_images, "directory of RGB PNGs")
      ->required();
  refine->add_option("--out", refine_out, "output directory")->required();
  refine->add_option("--crf-iters", refine_params.iterations,
                     "mean-field updates");
  refine->add_option("--w-app", refine_params.w_app, "appearance weight");
  refine->add_option("--theta-alpha", refine_params.theta_alpha,
                     "appearance spatial width");
  refine->add_option("--theta-beta", refine_params.theta_beta,
                     "appearance color width");
  refine->add_option("--w-smooth", refine_params.w_smooth, "smoothness weight");
  refine->add_option("--theta-gamma", refine_params.theta_gamma,
                     "smoothness width");
  refine->add_flag("--truncated", refine_params.truncated,
                   "bounded-error truncated message passing");

  // eval ------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "mIoU of predictions vs ground truth");
  std::string eval_pred, eval_gt;
  eval->add_option("--pred", eval_pred, "directory of predicted label PNGs")
      ->required();
  eval->add_option("--gt", eval_gt, "directory of ground-truth label PNGs")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!workdir.empty()) fs::current_path(workdir);

    if (*synth) return cmd_synth(synth_config, synth_out);

    if (*gen) {
      if (gen_leg_shift == "full")
        gen_prior.leg_shift = PriorConfig::LegShift::full;
      else if (gen_leg_shift != "half")
        throw_error(ErrorKind::invalid_config, "--leg-shift must be half|full");
      gen_prior.recovery = !gen_no_recovery;
      return cmd_gen_priors(gen_poses, gen_out, gen_prior, gen_width,
                            gen_height);
    }

    if (*train) {
      if (!train_config_path.empty())
        run_config = RunConfig::from_json_file(train_config_path);
      if (!train_data.empty()) {
        run_config.train_dir = (fs::path(train_data) / "train").string();
        run_config.test_dir = (fs::path(train_data) / "test").string();
      }
      if (run_config.train_dir.empty() || run_config.test_dir.empty())
        throw_error(ErrorKind::invalid_config,
                    "pass --data or a config with train_dir/test_dir");
      if (train_seed_set) run_config.seed = train_seed;
      if (train_mode == "baseline") {
        run_config.baseline_mode = true;
      } else if (train_mode == "base") {
        run_config.baseline_mode = false;
        run_config.num_refinement_iterations = 0;
      } else if (train_mode == "iter") {
        run_config.baseline_mode = false;
      } else {
        throw_error(ErrorKind::invalid_config,
                    "--mode must be baseline|base|iter");
      }
      if (train_iters >= 0) run_config.num_refinement_iterations = train_iters;
      if (train_no_masks) run_config.use_full_masks = false;
      if (train_no_self_paced) run_config.self_paced = false;
      if (train_no_recovery) run_config.prior.recovery = false;
      return cmd_train(run_config, train_out);
    }

    if (*refine)
      return cmd_refine(refine_probs, refine_images, refine_out, refine_params);
    if (*eval) return cmd_eval(eval_pred, eval_gt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
