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

#include <fstream>

#include <nlohmann/json.hpp>

#include "partprior/errors.hpp"
#include "partprior/pipeline.hpp"

namespace partprior {

namespace {

using nlohmann::json;

json to_json_value(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["train_dir"] = c.train_dir;
  j["test_dir"] = c.test_dir;
  j["prior"] = {
      {"c_a", c.prior.c_a},
      {"c_b", c.prior.c_b},
      {"k_d", c.prior.k_d},
      {"leg_shift",
       c.prior.leg_shift == PriorConfig::LegShift::half ? "half" : "full"},
      {"recovery", c.prior.recovery},
  };
  j["crf"] = {
      {"w_app", c.crf.w_app},        {"theta_alpha", c.crf.theta_alpha},
      {"theta_beta", c.crf.theta_beta}, {"w_smooth", c.crf.w_smooth},
      {"theta_gamma", c.crf.theta_gamma}, {"iterations", c.crf.iterations},
      {"truncated", c.crf.truncated},
  };
  j["segmenter"] = {
      {"learning_rate", c.segmenter.learning_rate},
      {"epochs_initial", c.segmenter.epochs_initial},
      {"epochs_refine", c.segmenter.epochs_refine},
      {"batch_size", c.segmenter.batch_size},
  };
  j["w_m"] = c.w_m;
  j["use_full_masks"] = c.use_full_masks;
  j["num_refinement_iterations"] = c.num_refinement_iterations;
  j["self_paced"] = c.self_paced;
  j["baseline_mode"] = c.baseline_mode;
  j["discard_fallback"] =
      c.discard_fallback == RunConfig::DiscardFallback::prior ? "prior"
                                                              : "exclude";
  return j;
}

void apply_json(RunConfig& c, const json& j) {
  if (!j.is_object())
    throw_error(ErrorKind::schema, "run config must be a JSON object");

  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("train_dir")) c.train_dir = j.at("train_dir").get<std::string>();
  if (j.contains("test_dir")) c.test_dir = j.at("test_dir").get<std::string>();

  if (j.contains("prior")) {
    const json& p = j.at("prior");
    c.prior.c_a = p.value("c_a", c.prior.c_a);
    c.prior.c_b = p.value("c_b", c.prior.c_b);
    c.prior.k_d = p.value("k_d", c.prior.k_d);
    c.prior.recovery = p.value("recovery", c.prior.recovery);
    if (p.contains("leg_shift")) {
      const std::string mode = p.at("leg_shift").get<std::string>();
      if (mode == "half")
        c.prior.leg_shift = PriorConfig::LegShift::half;
      else if (mode == "full")
        c.prior.leg_shift = PriorConfig::LegShift::full;
      else
        throw_error(ErrorKind::invalid_config,
                    "prior.leg_shift must be 'half' or 'full'");
    }
  }

  if (j.contains("crf")) {
    const json& p = j.at("crf");
    c.crf.w_app = p.value("w_app", c.crf.w_app);
    c.crf.theta_alpha = p.value("theta_alpha", c.crf.theta_alpha);
    c.crf.theta_beta = p.value("theta_beta", c.crf.theta_beta);
    c.crf.w_smooth = p.value("w_smooth", c.crf.w_smooth);
    c.crf.theta_gamma = p.value("theta_gamma", c.crf.theta_gamma);
    c.crf.iterations = p.value("iterations", c.crf.iterations);
    c.crf.truncated = p.value("truncated", c.crf.truncated);
  }

  if (j.contains("segmenter")) {
    const json& p = j.at("segmenter");
    c.segmenter.learning_rate = p.value("learning_rate", c.segmenter.learning_rate);
    c.segmenter.epochs_initial = p.value("epochs_initial", c.segmenter.epochs_initial);
    c.segmenter.epochs_refine = p.value("epochs_refine", c.segmenter.epochs_refine);
    c.segmenter.batch_size = p.value("batch_size", c.segmenter.batch_size);
  }

  c.w_m = j.value("w_m", c.w_m);
  c.use_full_masks = j.value("use_full_masks", c.use_full_masks);
  c.num_refinement_iterations =
      j.value("num_refinement_iterations", c.num_refinement_iterations);
  c.self_paced = j.value("self_paced", c.self_paced);
  c.baseline_mode = j.value("baseline_mode", c.baseline_mode);
  if (j.contains("discard_fallback")) {
    const std::string mode = j.at("discard_fallback").get<std::string>();
    if (mode == "prior")
      c.discard_fallback = RunConfig::DiscardFallback::prior;
    else if (mode == "exclude")
      c.discard_fallback = RunConfig::DiscardFallback::exclude;
    else
      throw_error(ErrorKind::invalid_config,
                  "discard_fallback must be 'prior' or 'exclude'");
  }

  if (c.w_m < 0.0)
    throw_error(ErrorKind::invalid_config, "w_m must be nonnegative");
  if (c.num_refinement_iterations < 0)
    throw_error(ErrorKind::invalid_config,
                "num_refinement_iterations must be nonnegative");
  if (c.segmenter.batch_size < 1 || c.segmenter.epochs_initial < 0 ||
      c.segmenter.epochs_refine < 0)
    throw_error(ErrorKind::invalid_config, "bad segmenter hyperparameters");
}

}  // namespace

std::string RunConfig::to_json() const { return to_json_value(*this).dump(2); }

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw_error(ErrorKind::parse, std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  apply_json(c, j);
  return c;
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::io, "cannot open config: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

void RunConfig::merge_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw_error(ErrorKind::parse, std::string("config is not valid JSON: ") + e.what());
  }
  apply_json(*this, j);
}

}  // namespace partprior
