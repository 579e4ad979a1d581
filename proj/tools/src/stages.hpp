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

// Stage functions shared by the individual subcommands and the pipeline.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clipart/error.hpp"
#include "clipart_cli/commands.hpp"

namespace clipart::cli {

// Re-raises module errors as kStageError prefixed with the stage name.
// Config and input errors pass through untouched.
template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kStageError:
      case ErrorCode::kConfigError:
      case ErrorCode::kInputMissing:
        throw;
      default:
        fail(ErrorCode::kStageError,
             std::string(stage) + ": " + std::string(to_string(e.code())) + ": " + e.what());
    }
  }
}

std::string numbered(const char* stem, std::int64_t n);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

std::vector<ObjectTrack> mine_stage(const DetectionStream& stream, const PipelineConfig& config);

std::vector<ReconstructionEntry> fit_stage(const CameraModel& camera, const ShapeBasis& basis,
                                           const std::vector<ObjectTrack>& tracks, const PipelineConfig& config,
                                           int threads, std::size_t* skipped);

std::vector<ReconstructedObject> build_pool(const CameraModel& camera, const ShapeBasis& basis,
                                            const std::vector<ReconstructionEntry>& entries,
                                            const DetectionStream& stream, const std::vector<Image>& frames);

SequenceSummary composite_stage(const CameraModel& camera, const ShapeBasis& basis,
                                const std::vector<ReconstructedObject>& pool, const Image& background,
                                const std::vector<Image>& frames,
                                const std::optional<SequenceGroundTruth>& truth, const PipelineConfig& config,
                                std::uint64_t seed, std::int64_t id_base, const std::filesystem::path& root,
                                const std::string& prefix, bool write);

}  // namespace clipart::cli
