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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "clipart/compositor.hpp"
#include "clipart/geometry.hpp"
#include "clipart/mining.hpp"
#include "clipart/pose_fit.hpp"
#include "clipart/rle.hpp"
#include "clipart/synth.hpp"

using namespace clipart;

namespace {

const ShapeBasis& basis() {
  static const ShapeBasis b = make_toy_basis(2);
  return b;
}

SyntheticScene vehicle_scene(std::uint64_t seed, int frames) {
  SynthSpec spec;
  spec.n_frames = frames;
  spec.min_objects = 1;
  spec.max_objects = 1;
  spec.person_probability = 0.0;
  return generate_scene(seed, spec, basis());
}

ObjectTrack track_of(const SyntheticScene& scene, const NoiseSpec& noise) {
  const DetectionStream stream = corrupt(scene, noise, scene.truth.seed);
  ObjectTrack track;
  for (const auto& frame : stream.frames) {
    TrackFrame tf;
    tf.frame_id = frame.at(0).frame_id;
    tf.keypoints = frame.at(0).keypoints.value();
    track.frames.push_back(tf);
  }
  return track;
}

void BM_GroundDepth(benchmark::State& state) {
  const SyntheticScene scene = vehicle_scene(1, 1);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> v(scene.camera.height() * 0.6, scene.camera.height());
  const Pixel p{double(scene.camera.width()) / 2, v(gen)};
  for (auto _ : state) benchmark::DoNotOptimize(ground_depth(scene.camera, p));
}
BENCHMARK(BM_GroundDepth);

void BM_Epnp(benchmark::State& state) {
  const SyntheticScene scene = vehicle_scene(2, 1);
  NoiseSpec noise;
  noise.keypoint_sigma_px = 1.0;
  const ObjectTrack track = track_of(scene, noise);
  for (auto _ : state) benchmark::DoNotOptimize(epnp(scene.camera, basis().mean(), track.frames[0].keypoints));
}
BENCHMARK(BM_Epnp);

void BM_RefinePose(benchmark::State& state) {
  const SyntheticScene scene = vehicle_scene(3, 1);
  NoiseSpec noise;
  noise.keypoint_sigma_px = 1.0;
  const ObjectTrack track = track_of(scene, noise);
  FitResult init;
  init.pose = epnp(scene.camera, basis().mean(), track.frames[0].keypoints);
  init.coeffs = ShapeCoefficients::zeros(basis().num_components());
  for (auto _ : state) benchmark::DoNotOptimize(refine_pose(scene.camera, basis(), track.frames[0].keypoints, init));
}
BENCHMARK(BM_RefinePose);

// Joint fit over a track of state.range(0) frames.
void BM_FitTrack(benchmark::State& state) {
  const SyntheticScene scene = vehicle_scene(4, int(state.range(0)));
  NoiseSpec noise;
  noise.keypoint_sigma_px = 1.0;
  const ObjectTrack track = track_of(scene, noise);
  for (auto _ : state) benchmark::DoNotOptimize(fit_track(scene.camera, basis(), track));
}
BENCHMARK(BM_FitTrack)->Arg(1)->Arg(5)->Arg(20);

Mask blob(int w, int h) {
  Mask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = (x - w / 2.0) / (w / 3.0), dy = (y - h / 2.0) / (h / 3.0);
      m.set(x, y, dx * dx + dy * dy < 1.0);
    }
  return m;
}

void BM_RleEncode(benchmark::State& state) {
  const Mask m = blob(640, 480);
  for (auto _ : state) benchmark::DoNotOptimize(rle_encode(m));
  state.SetItemsProcessed(state.iterations() * 640 * 480);
}
BENCHMARK(BM_RleEncode);

void BM_RleDecode(benchmark::State& state) {
  const RleMask r = rle_encode(blob(640, 480));
  for (auto _ : state) benchmark::DoNotOptimize(rle_decode(r));
  state.SetItemsProcessed(state.iterations() * 640 * 480);
}
BENCHMARK(BM_RleDecode);

void BM_Heuristic(benchmark::State& state) {
  SynthSpec spec;
  spec.n_frames = 1;
  spec.min_objects = 4;
  spec.max_objects = 8;
  const SyntheticScene scene = generate_scene(5, spec, basis());
  const DetectionStream stream = corrupt(scene, {}, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(heuristic_unoccluded(stream.frames[0], stream.width, stream.height, {}));
  }
}
BENCHMARK(BM_Heuristic);

// One full clip-art render: sampling, painter order, rasterization, masks.
void BM_Composite(benchmark::State& state) {
  SynthSpec spec;
  spec.n_frames = 4;
  spec.min_objects = 2;
  spec.max_objects = 5;
  const SyntheticScene scene = generate_scene(6, spec, basis());
  std::vector<ReferenceKey> keys;
  for (const GroundTruthFrame& f : scene.truth.frames)
    for (const GroundTruthObjectState& o : f.objects)
      keys.push_back({std::int64_t(keys.size()), o.object_id, o.object_id, f.frame_id});
  const auto pool = ground_truth_objects(scene.truth, keys, scene.frames, basis());
  SceneConfig cfg;
  cfg.seed = 6;
  cfg.min_objects = 2;
  cfg.max_objects = 6;
  const auto objects = sample_nonintersecting(pool, scene.camera, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(composite(scene.background, objects, scene.camera, basis(), cfg));
  state.counters["objects"] = double(objects.size());
}
BENCHMARK(BM_Composite)->Unit(benchmark::kMillisecond);

void BM_GenerateScene(benchmark::State& state) {
  SynthSpec spec;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_scene(seed++, spec, basis()));
}
BENCHMARK(BM_GenerateScene)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
