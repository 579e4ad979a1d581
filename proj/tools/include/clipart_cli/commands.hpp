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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clipart/dataset_io.hpp"
#include "clipart/shape_model.hpp"
#include "clipart/synth.hpp"
#include "clipart_cli/config.hpp"

namespace clipart::cli {

// Everything one stationary-camera sequence contributes.
struct SequenceInputs {
  CameraModel camera;
  DetectionStream detections;
  Image background;
  std::vector<Image> frames;  // aligned with detections.frame_ids
  std::optional<SequenceGroundTruth> truth;
};

struct SequenceSummary {
  std::size_t tracks = 0;
  std::size_t skipped_tracks = 0;
  std::size_t reconstructions = 0;
  std::size_t scenes = 0;
  std::size_t objects = 0;
  // Annotation documents, relative to the output root.
  std::vector<std::string> annotation_files;
  std::vector<std::string> reference_files;
};

ShapeBasis resolve_basis(const PipelineConfig& config, const std::filesystem::path& fallback = {});
std::filesystem::path frame_path(const std::filesystem::path& dir, std::int64_t frame_id);
// Loads the frames listed by the stream; missing files raise kInputMissing.
std::vector<Image> load_frames(const std::filesystem::path& dir, const DetectionStream& stream);

// mine -> fit -> composite for one sequence, writing under
// root / prefix. Image ids are id_base + scene index. Module errors are
// rethrown as kStageError naming the stage.
SequenceSummary run_sequence(const SequenceInputs& inputs, const ShapeBasis& basis,
                             const PipelineConfig& config, std::uint64_t seed, std::int64_t id_base,
                             const std::filesystem::path& root, const std::string& prefix, int threads,
                             bool write);

// Writes a synthetic corpus: index.json, shape_basis.json and one
// directory per sequence.
void write_corpus(const PipelineConfig& config, const ShapeBasis& basis, const std::filesystem::path& root,
                  int threads);

// Entry point behind main(); returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace clipart::cli
