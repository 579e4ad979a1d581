// Copyright 2026 The clipart Authors
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

#include <cstdint>
#include <string>

#include "clipart/compositor.hpp"
#include "clipart/metrics.hpp"
#include "clipart/mining.hpp"
#include "clipart/pose_fit.hpp"
#include "clipart/synth.hpp"

namespace clipart::cli {

enum class ClassifierKind { kHeuristic, kGroundTruth };

// Empty strings mean "not given". Relative paths resolve against the
// working directory.
struct PathsConfig {
  std::string calibration;
  std::string shape_basis;  // empty: built-in toy basis
  std::string detections;
  std::string tracks;
  std::string reconstructions;
  std::string background;   // empty: temporal median of the frames
  std::string frames;       // directory of frame_NNNN.ppm
  std::string ground_truth;
  std::string annotations;  // annotation file or index
  std::string corpus;
  std::string output = "out";
};

struct MiningConfig {
  ClassifierKind classifier = ClassifierKind::kHeuristic;
  HeuristicOptions heuristic;
  TrackerOptions tracker;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  int threads = 0;  // 0: available cores
  PathsConfig paths;
  MiningConfig mining;
  FitOptions fit;
  double person_height = 1.7;
  SceneConfig scene;
  int scenes_per_sequence = 4;
  OcclusionBins bins;
  SynthSpec synth;
  NoiseSpec noise;
  int sequences = 10;

  int resolved_threads() const;
};

// Every key is optional; unknown keys and out-of-range values raise
// kConfigError naming the field.
PipelineConfig parse_config(const std::string& text, const std::string& source);
PipelineConfig load_config(const std::string& path);
std::string serialize_config(const PipelineConfig& config);

}  // namespace clipart::cli
