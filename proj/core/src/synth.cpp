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

#include "clipart/synth.hpp"

#include <algorithm>
#include <cmath>

#include "clipart/error.hpp"
#include "clipart/random.hpp"
#include "clipart/raster.hpp"
#include "json_util.hpp"

namespace clipart {

using json_detail::Json;
using json_detail::Node;

void SynthSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::kConfigError, std::string("synth spec: ") + what);
  };
  require(width > 0 && height > 0 && width <= kMaxImageSide && height <= kMaxImageSide, "bad image size");
  require(n_frames >= 1, "n_frames must be positive");
  require(min_objects >= 1 && max_objects >= min_objects, "object range must satisfy 1 <= min <= max");
  require(person_probability >= 0.0 && person_probability <= 1.0, "person_probability outside [0, 1]");
  require(min_depth > 0.0 && max_depth > min_depth, "depth range");
  require(min_camera_height > 0.0 && max_camera_height >= min_camera_height, "camera height range");
  require(min_pitch_deg > 0.0 && max_pitch_deg >= min_pitch_deg && max_pitch_deg < 90.0, "pitch range");
  require(max_roll_deg >= 0.0 && max_roll_deg < 45.0, "roll bound");
  require(min_focal > 0.0 && max_focal >= min_focal, "focal range");
  require(max_car_speed >= 0.0 && max_person_speed >= 0.0, "speeds must be non-negative");
  require(edge_margin_px >= 0.0, "edge margin must be non-negative");
  require(max_attempts >= 1, "max_attempts must be positive");
}

const GroundTruthObjectState* SequenceGroundTruth::find(std::int64_t frame_id, std::int64_t object_id) const {
  for (const GroundTruthFrame& f : frames) {
    if (f.frame_id != frame_id) continue;
    for (const GroundTruthObjectState& o : f.objects) {
      if (o.object_id == object_id) return &o;
    }
  }
  return nullptr;
}

namespace {

struct Placed {
  ObjectClass cls;
  ShapeCoefficients coeffs;
  std::vector<RigidPose> poses;  // per frame
  std::array<std::uint8_t, 3> color;
};

CameraModel draw_camera(Rng& rng, const SynthSpec& spec) {
  const double h = rng.uniform(spec.min_camera_height, spec.max_camera_height);
  const double pitch = rng.uniform(spec.min_pitch_deg, spec.max_pitch_deg) * M_PI / 180.0;
  const double roll = rng.uniform(-spec.max_roll_deg, spec.max_roll_deg) * M_PI / 180.0;
  const double f = rng.uniform(spec.min_focal, spec.max_focal);
  Mat3 K;
  K << f, 0.0, 0.5 * spec.width + rng.uniform(-5.0, 5.0), 0.0, f, 0.5 * spec.height + rng.uniform(-5.0, 5.0),
      0.0, 0.0, 1.0;
  const Vec3 n = Eigen::AngleAxisd(roll, Vec3::UnitZ()) * Vec3(0.0, std::cos(pitch), std::sin(pitch));
  return CameraModel::create(K, n, -h, spec.width, spec.height);
}

// Low, steep cameras can see too little ground to fit a vehicle at all.
// Redraw until the ground under the top image row reaches kMinGroundReach
// past min_depth, or the top row sees the horizon.
constexpr double kMinGroundReach = 15.0;

CameraModel sample_camera(Rng& rng, const SynthSpec& spec) {
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    const CameraModel camera = draw_camera(rng, spec);
    try {
      if (ground_point(camera, Pixel{camera.cx(), 0.0}).z() >= spec.min_depth + kMinGroundReach) return camera;
    } catch (const Error&) {
      return camera;
    }
  }
  fail(ErrorCode::kInfeasiblePlacement, "no camera with enough visible ground after " +
                                            std::to_string(spec.max_attempts) + " attempts");
}

Mat3 facing_camera(const CameraModel& camera, const Vec3& position) {
  Vec3 heading = -position;
  const Vec3& n = camera.plane_normal();
  if ((heading - heading.dot(n) * n).norm() < 1e-9) heading = -Vec3::UnitZ();
  return upright_rotation(camera, heading);
}

PointMatrix3 local_keypoints(const Placed& p, const ShapeBasis& basis) {
  if (p.cls == ObjectClass::kCar) return instantiate(basis, p.coeffs);
  return PointMatrix3(0, 3);
}

// Trajectory feasibility: positive depth, inside the image with margin,
// footprint disjoint from already placed objects, enough pixels.
bool feasible(const CameraModel& camera, const SynthSpec& spec, const ShapeBasis& basis, const Placed& cand,
              const std::vector<Placed>& placed) {
  const PointMatrix3 local = local_keypoints(cand, basis);
  for (std::size_t f = 0; f < cand.poses.size(); ++f) {
    const RigidPose& pose = cand.poses[f];
    const double depth = pose.translation().z();
    if (depth < spec.min_depth || depth > spec.max_depth) return false;
    const std::vector<Vec3> pts = hull_points(cand.cls, pose, local);
    for (const Vec3& p : pts) {
      if (!(p.z() > 0.5)) return false;
      const Pixel px = project(camera, p);
      if (px.u < spec.edge_margin_px || px.v < spec.edge_margin_px || px.u > spec.width - spec.edge_margin_px ||
          px.v > spec.height - spec.edge_margin_px) {
        return false;
      }
    }
    const OrientedRect fp = compute_footprint(camera, pts);
    for (const Placed& other : placed) {
      const auto other_pts = hull_points(other.cls, other.poses[f], local_keypoints(other, basis));
      if (rects_intersect(fp, compute_footprint(camera, other_pts))) return false;
    }
    if (f == 0) {
      const DepthPatch patch = rasterize_hull(camera, pts);
      const auto covered = std::count_if(patch.depth.begin(), patch.depth.end(),
                                         [](double z) { return std::isfinite(z); });
      if (covered < spec.min_mask_pixels) return false;
    }
  }
  return true;
}

Placed sample_object(Rng& rng, const CameraModel& camera, const SynthSpec& spec, const ShapeBasis& basis) {
  Placed p;
  p.cls = rng.bernoulli(spec.person_probability) ? ObjectClass::kPerson : ObjectClass::kCar;
  p.coeffs = ShapeCoefficients::zeros(0);
  if (p.cls == ObjectClass::kCar) {
    p.coeffs = ShapeCoefficients::zeros(basis.num_components());
    for (int k = 0; k < basis.num_components(); ++k) {
      const double s = basis.scales()(k);
      p.coeffs.alpha(k) = std::clamp(rng.normal(0.0, s), -2.0 * s, 2.0 * s);
    }
  }
  p.color = {std::uint8_t(rng.uniform_int(40, 250)), std::uint8_t(rng.uniform_int(40, 250)),
             std::uint8_t(rng.uniform_int(40, 250))};

  const Pixel px{rng.uniform(0.0, spec.width), rng.uniform(0.0, spec.height)};
  Vec3 position;
  try {
    position = ground_point(camera, px);
  } catch (const Error&) {
    return p;  // rejected by the caller: no poses
  }
  const Vec3& u = camera.ground_u_axis();
  const Vec3& v = camera.ground_v_axis();
  const double yaw = rng.uniform(0.0, 2.0 * M_PI);
  const Vec3 heading = std::cos(yaw) * v + std::sin(yaw) * u;
  const double walk_yaw = rng.uniform(0.0, 2.0 * M_PI);
  const Vec3 walk = std::cos(walk_yaw) * v + std::sin(walk_yaw) * u;
  const double speed =
      rng.uniform(0.0, p.cls == ObjectClass::kCar ? spec.max_car_speed : spec.max_person_speed);
  for (int f = 0; f < spec.n_frames; ++f) {
    if (p.cls == ObjectClass::kCar) {
      const Vec3 t = position + double(f) * speed * heading;
      p.poses.push_back(RigidPose::from_matrix(upright_rotation(camera, heading), t));
    } else {
      const Vec3 t = position + double(f) * speed * walk;
      p.poses.push_back(RigidPose::from_matrix(facing_camera(camera, t), t));
    }
  }
  return p;
}

Image make_background(const SynthSpec& spec, Rng& rng) {
  Image img(spec.width, spec.height);
  const int base = int(rng.uniform_int(80, 130));
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const int tile = ((x / 24) + (y / 24)) % 2 ? 8 : 0;
      const int grad = (y * 40) / std::max(1, spec.height);
      const auto g = std::uint8_t(std::clamp(base + tile + grad, 0, 255));
      img.set(x, y, g, std::uint8_t(std::clamp(g + 4, 0, 255)), std::uint8_t(std::clamp(g + 10, 0, 255)));
    }
  }
  return img;
}

// Z-buffer render of one frame.
GroundTruthFrame render_frame(const CameraModel& camera, const ShapeBasis& basis, const std::vector<Placed>& objs,
                              int frame, const Image& background, Image* image) {
  const int W = camera.width();
  const int H = camera.height();
  const std::size_t n = objs.size();
  std::vector<DepthPatch> patches;
  std::vector<PointMatrix3> locals;
  for (const Placed& o : objs) {
    locals.push_back(local_keypoints(o, basis));
    patches.push_back(rasterize_hull(camera, hull_points(o.cls, o.poses[std::size_t(frame)], locals.back())));
  }
  std::vector<int> owner(std::size_t(W) * std::size_t(H), -1);
  std::vector<double> zbuf(owner.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const DepthPatch& p = patches[i];
    for (int y = 0; y < p.height; ++y) {
      for (int x = 0; x < p.width; ++x) {
        const double z = p.depth[std::size_t(y) * std::size_t(p.width) + std::size_t(x)];
        const std::size_t idx = std::size_t(p.y0 + y) * std::size_t(W) + std::size_t(p.x0 + x);
        if (z < zbuf[idx]) {
          zbuf[idx] = z;
          owner[idx] = int(i);
        }
      }
    }
  }
  *image = background;
  for (std::size_t idx = 0; idx < owner.size(); ++idx) {
    if (owner[idx] < 0) continue;
    const auto& c = objs[std::size_t(owner[idx])].color;
    image->set(int(idx % std::size_t(W)), int(idx / std::size_t(W)), c[0], c[1], c[2]);
  }

  GroundTruthFrame out;
  out.frame_id = frame;
  std::vector<Mask> modal(n, Mask(W, H));
  for (std::size_t idx = 0; idx < owner.size(); ++idx) {
    if (owner[idx] >= 0) modal[std::size_t(owner[idx])].data()[idx] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    GroundTruthObjectState s;
    s.object_id = std::int64_t(i);
    s.cls = objs[i].cls;
    s.coeffs = objs[i].coeffs;
    s.pose = objs[i].poses[std::size_t(frame)];
    const Mask amodal = patches[i].coverage(W, H);
    s.amodal_mask = rle_encode(amodal);
    s.modal_mask = rle_encode(modal[i]);
    s.occlusion_fraction = amodal.count() > 0 ? occlusion_fraction(modal[i], amodal) : 1.0;
    const PointMatrix3& local = locals[i];
    s.keypoints3d.resize(local.rows(), 3);
    s.keypoints.points.resize(local.rows(), 2);
    s.keypoints.visibility.assign(std::size_t(local.rows()), Visibility::kMissing);
    s.keypoints.confidence.assign(std::size_t(local.rows()), 1.0);
    for (Eigen::Index k = 0; k < local.rows(); ++k) {
      const Vec3 pc = s.pose.apply(local.row(k).transpose());
      s.keypoints3d.row(k) = pc.transpose();
      const Pixel px = project(camera, pc);
      s.keypoints.points.row(k) << px.u, px.v;
      const int u = int(std::floor(px.u));
      const int v = int(std::floor(px.v));
      if (u < 0 || v < 0 || u >= W || v >= H) continue;
      const std::size_t idx = std::size_t(v) * std::size_t(W) + std::size_t(u);
      Visibility vis = Visibility::kVisible;
      if (owner[idx] >= 0 && owner[idx] != int(i) && zbuf[idx] < pc.z()) {
        vis = Visibility::kOccludedByOthers;
      } else if (patches[i].at(u, v) < pc.z() - kSelfOcclusionMargin) {
        vis = Visibility::kSelfOccluded;
      }
      s.keypoints.visibility[std::size_t(k)] = vis;
    }
    out.objects.push_back(std::move(s));
  }
  return out;
}

}  // namespace

SyntheticScene generate_scene(std::uint64_t seed, const SynthSpec& spec, const ShapeBasis& basis) {
  spec.validate();
  Rng rng(seed);
  SyntheticScene scene{sample_camera(rng, spec), Image(), {}, {}};
  scene.background = make_background(spec, rng);
  const auto count = rng.uniform_int(spec.min_objects, spec.max_objects);
  std::vector<Placed> placed;
  for (std::int64_t i = 0; i < count; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < spec.max_attempts && !ok; ++attempt) {
      Placed cand = sample_object(rng, scene.camera, spec, basis);
      if (cand.poses.empty() || !feasible(scene.camera, spec, basis, cand, placed)) continue;
      placed.push_back(std::move(cand));
      ok = true;
    }
    // Objects past the minimum count are optional on a crowded ground.
    if (!ok && i >= spec.min_objects) break;
    if (!ok) {
      fail(ErrorCode::kInfeasiblePlacement, "could not place object " + std::to_string(i) + " after " +
                                                std::to_string(spec.max_attempts) + " attempts");
    }
  }
  scene.truth.seed = seed;
  scene.truth.camera = scene.camera;
  for (int f = 0; f < spec.n_frames; ++f) {
    Image img;
    scene.truth.frames.push_back(render_frame(scene.camera, basis, placed, f, scene.background, &img));
    scene.frames.push_back(std::move(img));
  }
  return scene;
}

DetectionStream corrupt(const SyntheticScene& scene, const NoiseSpec& noise, std::uint64_t seed) {
  if (!(noise.keypoint_sigma_px >= 0.0) || !(noise.dropout >= 0.0 && noise.dropout <= 1.0) ||
      noise.mask_jitter_px < 0) {
    fail(ErrorCode::kInvalidArgument, "invalid noise spec");
  }
  Rng rng(seed);
  DetectionStream stream;
  stream.width = scene.camera.width();
  stream.height = scene.camera.height();
  std::int64_t next_id = 0;
  for (const GroundTruthFrame& frame : scene.truth.frames) {
    stream.frame_ids.push_back(frame.frame_id);
    std::vector<Detection> dets;
    for (const GroundTruthObjectState& s : frame.objects) {
      Mask mask = rle_decode(s.modal_mask);
      if (mask.count() == 0) continue;
      if (noise.mask_jitter_px > 0) {
        const auto r = rng.uniform_int(-noise.mask_jitter_px, noise.mask_jitter_px);
        if (r > 0) mask = dilate(mask, int(r));
        if (r < 0) {
          Mask eroded = erode(mask, int(-r));
          if (eroded.count() > 0) mask = std::move(eroded);
        }
      }
      Detection d;
      d.detection_id = next_id++;
      d.frame_id = frame.frame_id;
      d.cls = s.cls;
      d.score = 1.0;
      d.bbox = mask.bbox();
      d.modal_mask = rle_encode(mask);
      if (s.cls == ObjectClass::kCar) {
        Keypoints2D kp = s.keypoints;
        for (int k = 0; k < kp.size(); ++k) {
          if (noise.keypoint_sigma_px > 0.0) {
            kp.points(k, 0) += rng.normal(0.0, noise.keypoint_sigma_px);
            kp.points(k, 1) += rng.normal(0.0, noise.keypoint_sigma_px);
          }
          if (noise.dropout > 0.0 && rng.bernoulli(noise.dropout)) {
            kp.visibility[std::size_t(k)] = Visibility::kMissing;
          }
        }
        d.keypoints = std::move(kp);
      }
      d.gt_object_id = s.object_id;
      d.gt_occlusion_fraction = s.occlusion_fraction;
      dets.push_back(std::move(d));
    }
    stream.frames.push_back(std::move(dets));
  }
  return stream;
}

// ---- ground truth file ---------------------------------------------------

namespace {

constexpr const char* kGroundTruthVersion = "clipart-ground-truth/1";

}  // namespace

std::string serialize_ground_truth(const SequenceGroundTruth& truth) {
  // Reuse the annotation writer for the per-object records.
  AnnotationFile file;
  file.camera = truth.camera;
  file.rng_seed = truth.seed;
  for (const GroundTruthFrame& f : truth.frames) {
    AnnotatedImage img;
    img.image_id = f.frame_id;
    img.file_name = "frame_" + std::to_string(f.frame_id);
    img.width = truth.camera ? truth.camera->width() : 0;
    img.height = truth.camera ? truth.camera->height() : 0;
    for (const GroundTruthObjectState& s : f.objects) {
      AnnotationObject o;
      o.id = s.object_id;
      o.cls = s.cls;
      o.track_id = s.object_id;
      o.gt_object_id = s.object_id;
      o.amodal_mask = s.amodal_mask;
      o.modal_mask = s.modal_mask;
      o.amodal_bbox = rle_decode(s.amodal_mask).bbox();
      o.modal_bbox = rle_decode(s.modal_mask).bbox();
      o.keypoints = s.keypoints;
      if (s.keypoints3d.rows() > 0) o.keypoints3d = s.keypoints3d;
      o.pose = s.pose;
      o.coeffs = s.coeffs;
      o.occlusion_fraction = s.occlusion_fraction;
      img.objects.push_back(std::move(o));
    }
    file.images.push_back(std::move(img));
  }
  Json doc = Json::parse(serialize_annotations(file));
  doc["version"] = kGroundTruthVersion;
  return json_detail::dump_document(doc);
}

SequenceGroundTruth parse_ground_truth(const std::string& text, const std::string& source) {
  Json doc = json_detail::parse_document(text, source);
  const Node r = json_detail::root(doc, source);
  const std::string version = r.at("version").as_string();
  if (version != kGroundTruthVersion) {
    fail(ErrorCode::kVersionMismatch, source + ": expected version '" + std::string(kGroundTruthVersion) +
                                          "', found '" + version + "'");
  }
  doc["version"] = "clipart-annotations/1";
  const AnnotationFile file = parse_annotations(doc.dump(), source);
  if (!file.camera) fail(ErrorCode::kParseError, source + ": $: missing required field 'camera'");
  SequenceGroundTruth truth;
  truth.seed = file.rng_seed;
  truth.camera = file.camera;
  for (const AnnotatedImage& img : file.images) {
    GroundTruthFrame f;
    f.frame_id = img.image_id;
    for (const AnnotationObject& o : img.objects) {
      GroundTruthObjectState s;
      s.object_id = o.id;
      s.cls = o.cls;
      s.coeffs = o.coeffs;
      s.pose = o.pose;
      s.amodal_mask = o.amodal_mask;
      s.modal_mask = o.modal_mask;
      s.keypoints = o.keypoints;
      s.keypoints3d = o.keypoints3d.value_or(PointMatrix3(0, 3));
      s.occlusion_fraction = o.occlusion_fraction;
      f.objects.push_back(std::move(s));
    }
    truth.frames.push_back(std::move(f));
  }
  return truth;
}

SequenceGroundTruth load_ground_truth(const std::filesystem::path& path) {
  return parse_ground_truth(json_detail::read_text_file(path), path.string());
}

void save_ground_truth(const SequenceGroundTruth& truth, const std::filesystem::path& path) {
  json_detail::write_text_file(path, serialize_ground_truth(truth));
}

std::vector<ReconstructedObject> ground_truth_objects(const SequenceGroundTruth& truth,
                                                      const std::vector<ReferenceKey>& keys,
                                                      const std::vector<Image>& frames,
                                                      const ShapeBasis& basis) {
  if (!truth.camera) fail(ErrorCode::kInvalidArgument, "ground truth has no camera");
  std::vector<ReconstructedObject> out;
  for (const ReferenceKey& key : keys) {
    const GroundTruthObjectState* s = truth.find(key.frame_id, key.gt_object_id);
    if (!s) {
      fail(ErrorCode::kValidationError, "no ground truth for object " + std::to_string(key.gt_object_id) +
                                            " in frame " + std::to_string(key.frame_id));
    }
    std::size_t frame_index = 0;
    while (frame_index < truth.frames.size() && truth.frames[frame_index].frame_id != key.frame_id) ++frame_index;
    if (frame_index >= frames.size()) fail(ErrorCode::kInputMissing, "frame image missing for reference");
    ReconstructedObject o;
    o.object_id = key.object_id;
    o.cls = s->cls;
    o.pose = s->pose;
    o.coeffs = s->coeffs;
    o.source_crop = extract_patch(frames[frame_index], rle_decode(s->amodal_mask));
    o.keypoints2d_source = s->keypoints;
    o.track_id = key.track_id;
    o.frame_id = key.frame_id;
    o.gt_object_id = key.gt_object_id;
    o.footprint = compute_footprint(*truth.camera, hull_points(o, basis));
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace clipart
