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

#include "clipart/dataset_io.hpp"

#include <cmath>
#include <set>

#include "clipart/error.hpp"
#include "json_util.hpp"

namespace clipart {

using json_detail::Json;
using json_detail::Node;

namespace {

constexpr const char* kCalibrationVersion = "clipart-calibration/1";
constexpr const char* kSceneConfigVersion = "clipart-scene-config/1";
constexpr const char* kDetectionsVersion = "clipart-detections/1";
constexpr const char* kAnnotationsVersion = "clipart-annotations/1";
constexpr const char* kIndexVersion = "clipart-index/1";
constexpr const char* kTracksVersion = "clipart-tracks/1";
constexpr const char* kReconstructionsVersion = "clipart-reconstructions/1";

void check_version(const Node& root, const char* expected, const std::string& source) {
  const std::string v = root.at("version").as_string();
  if (v != expected) {
    fail(ErrorCode::kVersionMismatch,
         source + ": expected version '" + expected + "', found '" + v + "'");
  }
}

int dimension(const Node& node) {
  const std::int64_t v = node.as_int();
  if (v <= 0 || v > kMaxImageSide) node.invalid("image dimension out of range: " + std::to_string(v));
  return int(v);
}

double finite_in(const Node& node, double lo, double hi) {
  const double v = node.as_double();
  if (v < lo || v > hi) node.invalid("value out of range");
  return v;
}

Json box_json(const Box& b) { return Json::array({b.x0, b.y0, b.width(), b.height()}); }

Box box_from(const Node& node) {
  node.expect_size(4);
  const double x = node.at(0).as_double();
  const double y = node.at(1).as_double();
  const double w = node.at(2).as_double();
  const double h = node.at(3).as_double();
  if (w < 0.0 || h < 0.0) node.invalid("negative box extent");
  return {x, y, x + w, y + h};
}

Json rle_json(const RleMask& rle) {
  Json j;
  j["size"] = Json::array({rle.height, rle.width});
  j["counts"] = rle.counts;
  return j;
}

RleMask rle_from(const Node& node) {
  const Node size = node.at("size");
  size.expect_size(2);
  RleMask rle;
  rle.height = dimension(size.at(0));
  rle.width = dimension(size.at(1));
  const Node counts = node.at("counts");
  const std::size_t n = counts.array_size();
  const std::uint64_t total = std::uint64_t(rle.height) * std::uint64_t(rle.width);
  if (n > total + 1) counts.invalid("more runs than pixels");
  rle.counts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t c = counts.at(i).as_uint();
    if (c > 0xffffffffULL) counts.at(i).invalid("run length overflows 32 bits");
    rle.counts.push_back(std::uint32_t(c));
  }
  try {
    validate_rle(rle);
  } catch (const Error& e) {
    node.invalid(e.what());
  }
  return rle;
}

RleMask rle_sized(const Node& node, int width, int height) {
  RleMask rle = rle_from(node);
  if (rle.width != width || rle.height != height) {
    node.invalid("mask size " + std::to_string(rle.height) + "x" + std::to_string(rle.width) +
                 " differs from image size " + std::to_string(height) + "x" + std::to_string(width));
  }
  return rle;
}

Json keypoints_json(const Keypoints2D& kp, bool with_confidence) {
  Json arr = Json::array();
  for (int i = 0; i < kp.size(); ++i) {
    Json row = Json::array({kp.points(i, 0), kp.points(i, 1), int(kp.visibility[std::size_t(i)])});
    if (with_confidence) row.push_back(kp.confidence[std::size_t(i)]);
    arr.push_back(row);
  }
  return arr;
}

Keypoints2D keypoints_from(const Node& node, bool with_confidence) {
  const std::size_t n = node.array_size();
  if (n > 4096) node.invalid("too many keypoints");
  Keypoints2D kp;
  kp.points.resize(Eigen::Index(n), 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Node row = node.at(i);
    row.expect_size(with_confidence ? 4 : 3);
    kp.points(Eigen::Index(i), 0) = row.at(0).as_double();
    kp.points(Eigen::Index(i), 1) = row.at(1).as_double();
    const std::int64_t code = row.at(2).as_int();
    const auto vis = code >= 0 && code <= 3 ? visibility_from_code(int(code)) : std::nullopt;
    if (!vis) row.at(2).invalid("visibility code must be 0..3");
    kp.visibility.push_back(*vis);
    kp.confidence.push_back(with_confidence ? finite_in(row.at(3), 0.0, 1.0) : 1.0);
  }
  return kp;
}

Json points3_json(const PointMatrix3& m) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) arr.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return arr;
}

PointMatrix3 points3_from(const Node& node) {
  const std::size_t n = node.array_size();
  if (n > 4096) node.invalid("too many points");
  PointMatrix3 m(Eigen::Index(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    const Node row = node.at(i);
    row.expect_size(3);
    for (std::size_t j = 0; j < 3; ++j) m(Eigen::Index(i), Eigen::Index(j)) = row.at(j).as_double();
  }
  return m;
}

Json pose_json(const RigidPose& p) {
  const auto& q = p.rotation();
  const Vec3& t = p.translation();
  Json j;
  j["quaternion"] = Json::array({q.w(), q.x(), q.y(), q.z()});
  j["translation"] = Json::array({t.x(), t.y(), t.z()});
  return j;
}

RigidPose pose_from(const Node& node) {
  const Node qn = node.at("quaternion");
  qn.expect_size(4);
  const Eigen::Quaterniond q(qn.at(0).as_double(), qn.at(1).as_double(), qn.at(2).as_double(),
                             qn.at(3).as_double());
  if (std::abs(q.norm() - 1.0) > 1e-6) qn.invalid("quaternion is not unit-norm");
  const Node tn = node.at("translation");
  tn.expect_size(3);
  return {q, Vec3(tn.at(0).as_double(), tn.at(1).as_double(), tn.at(2).as_double())};
}

Json coeffs_json(const ShapeCoefficients& c) {
  Json arr = Json::array();
  for (int k = 0; k < c.size(); ++k) arr.push_back(c.alpha[k]);
  return arr;
}

ShapeCoefficients coeffs_from(const Node& node) {
  const std::size_t n = node.array_size();
  if (n > 4096) node.invalid("too many shape coefficients");
  ShapeCoefficients c{Eigen::VectorXd(Eigen::Index(n))};
  for (std::size_t k = 0; k < n; ++k) c.alpha[Eigen::Index(k)] = node.at(k).as_double();
  return c;
}

ObjectClass class_from(const Node& node) {
  const auto cls = parse_object_class(node.as_string());
  if (!cls) node.invalid("unknown object class");
  return *cls;
}

Json camera_json(const CameraModel& camera) {
  Json j;
  Json k = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) k.push_back(camera.intrinsics()(r, c));
  }
  j["K"] = k;
  const Vec3& n = camera.plane_normal();
  j["plane"] = Json::array({n.x(), n.y(), n.z(), camera.plane_offset()});
  j["width"] = camera.width();
  j["height"] = camera.height();
  return j;
}

CameraModel camera_from(const Node& node) {
  const Node kn = node.at("K");
  kn.expect_size(9);
  Mat3 K;
  for (std::size_t i = 0; i < 9; ++i) K(Eigen::Index(i / 3), Eigen::Index(i % 3)) = kn.at(i).as_double();
  const Node pn = node.at("plane");
  pn.expect_size(4);
  const Vec3 n(pn.at(0).as_double(), pn.at(1).as_double(), pn.at(2).as_double());
  const double d = pn.at(3).as_double();
  const int w = dimension(node.at("width"));
  const int h = dimension(node.at("height"));
  try {
    return CameraModel::create(K, n, d, w, h);
  } catch (const Error& e) {
    node.invalid(e.what());
  }
}

std::string parse_source(const std::filesystem::path& path) { return path.string(); }

}  // namespace

// ---- calibration ---------------------------------------------------------

std::string serialize_calibration(const CameraModel& camera) {
  Json doc = camera_json(camera);
  doc["version"] = kCalibrationVersion;
  return json_detail::dump_document(doc);
}

CameraModel parse_calibration(const std::string& text, const std::string& source) {
  const Json doc = json_detail::parse_document(text, source);
  const Node r = json_detail::root(doc, source);
  check_version(r, kCalibrationVersion, source);
  return camera_from(r);
}

CameraModel load_calibration(const std::filesystem::path& path) {
  return parse_calibration(json_detail::read_text_file(path), parse_source(path));
}

void save_calibration(const CameraModel& camera, const std::filesystem::path& path) {
  json_detail::write_text_file(path, serialize_calibration(camera));
}

// ---- scene config --------------------------------------------------------

std::string serialize_scene_config(const SceneConfig& c) {
  Json doc;
  doc["version"] = kSceneConfigVersion;
  doc["min_objects"] = c.min_objects;
  doc["max_objects"] = c.max_objects;
  doc["seed"] = c.seed;
  doc["min_depth"] = c.min_depth;
  doc["max_depth"] = c.max_depth;
  doc["feather_px"] = c.feather_px;
  doc["allow_person"] = c.allow_person;
  doc["allow_car"] = c.allow_car;
  return json_detail::dump_document(doc);
}

SceneConfig parse_scene_config(const std::string& text, const std::string& source) {
  const Json doc = json_detail::parse_document(text, source);
  const Node r = json_detail::root(doc, source);
  check_version(r, kSceneConfigVersion, source);
  SceneConfig c;
  c.min_objects = int(finite_in(r.at("min_objects"), 1, 1e6));
  c.max_objects = int(finite_in(r.at("max_objects"), 1, 1e6));
  c.seed = r.at("seed").as_uint();
  c.min_depth = r.at("min_depth").as_double();
  c.max_depth = r.at("max_depth").as_double();
  c.feather_px = int(finite_in(r.at("feather_px"), 0, 64));
  c.allow_person = r.at("allow_person").as_bool();
  c.allow_car = r.at("allow_car").as_bool();
  try {
    c.validate();
  } catch (const Error& e) {
    r.invalid(e.what());
  }
  return c;
}

// ---- detections ----------------------------------------------------------

std::string serialize_detections(const DetectionStream& stream) {
  Json doc;
  doc["version"] = kDetectionsVersion;
  doc["width"] = stream.width;
  doc["height"] = stream.height;
  Json frames = Json::array();
  for (std::size_t f = 0; f < stream.frames.size(); ++f) {
    Json frame;
    frame["frame_id"] = stream.frame_ids[f];
    Json dets = Json::array();
    for (const Detection& d : stream.frames[f]) {
      Json j;
      j["id"] = d.detection_id;
      j["class"] = std::string(to_string(d.cls));
      j["score"] = d.score;
      j["bbox"] = box_json(d.bbox);
      j["mask"] = rle_json(d.modal_mask);
      if (d.keypoints) j["keypoints"] = keypoints_json(*d.keypoints, true);
      if (d.gt_object_id) j["gt_object_id"] = *d.gt_object_id;
      if (d.gt_occlusion_fraction) j["gt_occlusion_fraction"] = *d.gt_occlusion_fraction;
      dets.push_back(j);
    }
    frame["detections"] = dets;
    frames.push_back(frame);
  }
  doc["frames"] = frames;
  return json_detail::dump_document(doc);
}

DetectionStream parse_detections(const std::string& text, const std::string& source) {
  const Json doc = json_detail::parse_document(text, source);
  const Node r = json_detail::root(doc, source);
  check_version(r, kDetectionsVersion, source);
  DetectionStream s;
  s.width = dimension(r.at("width"));
  s.height = dimension(r.at("height"));
  const Node frames = r.at("frames");
  std::set<std::int64_t> ids;
  for (std::size_t f = 0; f < frames.array_size(); ++f) {
    const Node fn = frames.at(f);
    const std::int64_t frame_id = fn.at("frame_id").as_int();
    if (!s.frame_ids.empty() && frame_id <= s.frame_ids.back()) {
      fn.at("frame_id").invalid("frame ids must increase strictly");
    }
    s.frame_ids.push_back(frame_id);
    std::vector<Detection> dets;
    const Node dn = fn.at("detections");
    for (std::size_t i = 0; i < dn.array_size(); ++i) {
      const Node j = dn.at(i);
      Detection d;
      d.detection_id = j.at("id").as_int();
      if (!ids.insert(d.detection_id).second) j.at("id").invalid("duplicate detection id");
      d.frame_id = frame_id;
      d.cls = class_from(j.at("class"));
      d.score = finite_in(j.at("score"), 0.0, 1.0);
      d.bbox = box_from(j.at("bbox"));
      d.modal_mask = rle_sized(j.at("mask"), s.width, s.height);
      if (j.has("keypoints")) d.keypoints = keypoints_from(j.at("keypoints"), true);
      if (j.has("gt_object_id")) d.gt_object_id = j.at("gt_object_id").as_int();
      if (j.has("gt_occlusion_fraction")) {
        d.gt_occlusion_fraction = finite_in(j.at("gt_occlusion_fraction"), 0.0, 1.0);
      }
      dets.push_back(std::move(d));
    }
    s.frames.push_back(std::move(dets));
  }
  return s;
}

DetectionStream load_detections(const std::filesystem::path& path) {
  return parse_detections(json_detail::read_text_file(path), parse_source(path));
}

void save_detections(const DetectionStream& stream, const std::filesystem::path& path) {
  json_detail::write_text_file(path, serialize_detections(stream));
}

// ---- annotations ---------------------------------------------------------

AnnotatedImage annotate(const ClipArtRecord& record, std::int64_t image_id, const std::string& file_name) {
  AnnotatedImage img;
  img.image_id = image_id;
  img.file_name = file_name;
  img.width = record.image.width();
  img.height = record.image.height();
  for (const CompositeObject& o : record.objects) {
    AnnotationObject a;
    a.id = o.object_id;
    a.cls = o.cls;
    a.track_id = o.track_id;
    a.gt_object_id = o.gt_object_id;
    a.amodal_bbox = o.amodal_bbox;
    a.modal_bbox = o.modal_bbox;
    a.amodal_mask = rle_encode(o.amodal_mask);
    a.modal_mask = rle_encode(o.modal_mask);
    a.keypoints = o.keypoints;
    if (o.keypoints3d.rows() > 0) a.keypoints3d = o.keypoints3d;
    a.pose = o.pose;
    a.coeffs = o.coeffs;
    a.occlusion_fraction = o.occlusion_fraction;
    a.mean_depth = o.mean_depth;
    img.objects.push_back(std::move(a));
  }
  return img;
}

std::string serialize_annotations(const AnnotationFile& file) {
  Json doc;
  doc["version"] = kAnnotationsVersion;
  if (file.camera) doc["camera"] = camera_json(*file.camera);
  doc["rng_seed"] = file.rng_seed;
  Json images = Json::array();
  for (const AnnotatedImage& img : file.images) {
    Json ji;
    ji["image_id"] = img.image_id;
    ji["file_name"] = img.file_name;
    ji["width"] = img.width;
    ji["height"] = img.height;
    Json objs = Json::array();
    for (const AnnotationObject& o : img.objects) {
      Json j;
      j["id"] = o.id;
      j["class"] = std::string(to_string(o.cls));
      j["track_id"] = o.track_id;
      if (o.gt_object_id) j["gt_object_id"] = *o.gt_object_id;
      if (o.score) j["score"] = *o.score;
      j["amodal_bbox"] = box_json(o.amodal_bbox);
      j["modal_bbox"] = box_json(o.modal_bbox);
      j["amodal_mask"] = rle_json(o.amodal_mask);
      j["modal_mask"] = rle_json(o.modal_mask);
      j["keypoints"] = keypoints_json(o.keypoints, false);
      if (o.keypoints3d) j["keypoints3d"] = points3_json(*o.keypoints3d);
      j["pose"] = pose_json(o.pose);
      j["shape"] = coeffs_json(o.coeffs);
      j["occlusion_fraction"] = o.occlusion_fraction;
      j["mean_depth"] = o.mean_depth;
      objs.push_back(j);
    }
    ji["objects"] = objs;
    images.push_back(ji);
  }
  doc["images"] = images;
  return json_detail::dump_document(doc);
}

AnnotationFile parse_annotations(const std::string& text, const std::string& source) {
  const Json doc = json_detail::parse_document(text, source);
  const Node r = json_detail::root(doc, source);
  check_version(r, kAnnotationsVersion, source);
  AnnotationFile file;
  if (r.has("camera")) file.camera = camera_from(r.at("camera"));
  file.rng_seed = r.at("rng_seed").as_uint();
  const Node images = r.at("images");
  std::set<std::int64_t> image_ids;
  for (std::size_t i = 0; i < images.array_size(); ++i) {
    const Node in = images.at(i);
    AnnotatedImage img;
    img.image_id = in.at("image_id").as_int();
    if (!image_ids.insert(img.image_id).second) in.at("image_id").invalid("duplicate image id");
    img.file_name = in.at("file_name").as_string();
    img.width = dimension(in.at("width"));
    img.height = dimension(in.at("height"));
    const Node objs = in.at("objects");
    for (std::size_t k = 0; k < objs.array_size(); ++k) {
      const Node j = objs.at(k);
      AnnotationObject o;
      o.id = j.at("id").as_int();
      o.cls = class_from(j.at("class"));
      o.track_id = j.at("track_id").as_int();
      if (j.has("gt_object_id")) o.gt_object_id = j.at("gt_object_id").as_int();
      if (j.has("score")) o.score = finite_in(j.at("score"), 0.0, 1.0);
      o.amodal_bbox = box_from(j.at("amodal_bbox"));
      o.modal_bbox = box_from(j.at("modal_bbox"));
      o.amodal_mask = rle_sized(j.at("amodal_mask"), img.width, img.height);
      o.modal_mask = rle_sized(j.at("modal_mask"), img.width, img.height);
      o.keypoints = keypoints_from(j.at("keypoints"), false);
      if (j.has("keypoints3d")) {
        o.keypoints3d = points3_from(j.at("keypoints3d"));
        if (o.keypoints3d->rows() != o.keypoints.size()) {
          j.at("keypoints3d").invalid("3D keypoint count differs from 2D keypoints");
        }
      }
      o.pose = pose_from(j.at("pose"));
      o.coeffs = coeffs_from(j.at("shape"));
      o.occlusion_fraction = finite_in(j.at("occlusion_fraction"), 0.0, 1.0);
      o.mean_depth = j.at("mean_depth").as_double();

      const Mask amodal = rle_decode(o.amodal_mask);
      const Mask modal = rle_decode(o.modal_mask);
      if (amodal.count() == 0) j.at("amodal_mask").invalid("amodal mask is empty");
      if (!modal.is_subset_of(amodal)) j.at("modal_mask").invalid("modal mask leaves the amodal mask");
      const double expected = occlusion_fraction(modal, amodal);
      if (std::abs(expected - o.occlusion_fraction) > 1e-9) {
        j.at("occlusion_fraction").invalid("occlusion_fraction " + std::to_string(o.occlusion_fraction) +
                                           " disagrees with the masks (" + std::to_string(expected) + ")");
      }
      img.objects.push_back(std::move(o));
    }
    file.images.push_back(std::move(img));
  }
  return file;
}

AnnotationFile load_annotations(const std::filesystem::path& path) {
  return parse_annotations(json_detail::read_text_file(path), parse_source(path));
}

void save_annotations(const AnnotationFile& file, const std::filesystem::path& path) {
  json_detail::write_text_file(path, serialize_annotations(file));
}

std::vector<EvalImage> to_eval_images(const AnnotationFile& file) {
  std::vector<EvalImage> out;
  for (const AnnotatedImage& img : file.images) {
    EvalImage e;
    e.image_id = img.image_id;
    for (const AnnotationObject& o : img.objects) {
      EvalObject eo;
      eo.id = o.id;
      eo.cls = o.cls;
      eo.score = o.score.value_or(1.0);
      eo.bbox = o.amodal_bbox;
      eo.mask = rle_decode(o.amodal_mask);
      eo.keypoints = o.keypoints;
      eo.keypoints3d = o.keypoints3d;
      eo.pose = o.pose;
      eo.occlusion_fraction = o.occlusion_fraction;
      e.objects.push_back(std::move(eo));
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ---- index ---------------------------------------------------------------

std::string serialize_index(const std::vector<std::string>& documents) {
  Json doc;
  doc["version"] = kIndexVersion;
  doc["documents"] = documents;
  return json_detail::dump_document(doc);
}

std::vector<std::string> parse_index(const std::string& text, const std::string& source) {
  const Json doc = json_detail::parse_document(text, source);
  const Node r = json_detail::root(doc, source);
  check_version(r, kIndexVersion, source);
  const Node docs = r.at("documents");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < docs.array_size(); ++i) {
    std::string p = docs.at(i).as_string();
    if (p.empty() || std::filesystem::path(p).is_absolute()) docs.at(i).invalid("paths must be relative");
    out.push_back(std::move(p));
  }
  return out;
}

AnnotationFile load_annotation_set(const std::filesystem::path& path) {
  const std::string text = json_detail::read_text_file(path);
  const Json doc = json_detail::parse_document(text, path.string());
  const Node r = json_detail::root(doc, path.string());
  if (r.at("version").as_string() != kIndexVersion) return parse_annotations(text, path.string());
  AnnotationFile merged;
  std::set<std::int64_t> ids;
  for (const std::string& rel : parse_index(text, path.string())) {
    AnnotationFile part = load_annotations(path.parent_path() / rel);
    if (!merged.camera) merged.camera = part.camera;
    merged.rng_seed = part.rng_seed;
    for (AnnotatedImage& img : part.images) {
      if (!ids.insert(img.image_id).second) {
        fail(ErrorCode::kValidationError, path.string() + ": image id " + std::to_string(img.image_id) +
                                              " appears in more than one document");
      }
      merged.images.push_back(std::move(img));
    }
  }
  return merged;
}

// ---- tracks --------------------------------------------------------------

std::string serialize_tracks(const std::vector<ObjectTrack>& tracks, int width, int height) {
  Json doc;
  doc["version"] = kTracksVersion;
  doc["width"] = width;
  doc["height"] = height;
  Json arr = Json::array();
  for (const ObjectTrack& t : tracks) {
    Json jt;
    jt["track_id"] = t.track_id;
    jt["class"] = std::string(to_string(t.cls));
    Json frames = Json::array();
    for (const TrackFrame& f : t.frames) {
      Json jf;
      jf["frame_id"] = f.frame_id;
      jf["detection_id"] = f.detection_id;
      jf["bbox"] = box_json(f.bbox);
      jf["mask"] = rle_json(f.modal_mask);
      jf["keypoints"] = keypoints_json(f.keypoints, true);
      if (f.gt_object_id) jf["gt_object_id"] = *f.gt_object_id;
      frames.push_back(jf);
    }
    jt["frames"] = frames;
    arr.push_back(jt);
  }
  doc["tracks"] = arr;
  return json_detail::dump_document(doc);
}

std::vector<ObjectTrack> parse_tracks(const std::string& text, const std::string& source) {
  const Json doc = json_detail::parse_document(text, source);
  const Node r = json_detail::root(doc, source);
  check_version(r, kTracksVersion, source);
  const int width = dimension(r.at("width"));
  const int height = dimension(r.at("height"));
  std::vector<ObjectTrack> tracks;
  const Node arr = r.at("tracks");
  for (std::size_t i = 0; i < arr.array_size(); ++i) {
    const Node jt = arr.at(i);
    ObjectTrack t;
    t.track_id = jt.at("track_id").as_int();
    t.cls = class_from(jt.at("class"));
    const Node frames = jt.at("frames");
    if (frames.array_size() == 0) frames.invalid("track has no frames");
    for (std::size_t k = 0; k < frames.array_size(); ++k) {
      const Node jf = frames.at(k);
      TrackFrame f;
      f.frame_id = jf.at("frame_id").as_int();
      if (!t.frames.empty() && f.frame_id <= t.frames.back().frame_id) {
        jf.at("frame_id").invalid("frame ids must increase strictly within a track");
      }
      f.detection_id = jf.at("detection_id").as_int();
      f.bbox = box_from(jf.at("bbox"));
      f.modal_mask = rle_sized(jf.at("mask"), width, height);
      f.keypoints = keypoints_from(jf.at("keypoints"), true);
      if (jf.has("gt_object_id")) f.gt_object_id = jf.at("gt_object_id").as_int();
      t.frames.push_back(std::move(f));
    }
    tracks.push_back(std::move(t));
  }
  return tracks;
}

// ---- reconstructions -----------------------------------------------------

std::string serialize_reconstructions(const std::vector<ReconstructionEntry>& entries) {
  Json doc;
  doc["version"] = kReconstructionsVersion;
  Json arr = Json::array();
  for (const ReconstructionEntry& e : entries) {
    Json j;
    j["object_id"] = e.object_id;
    j["class"] = std::string(to_string(e.cls));
    j["track_id"] = e.track_id;
    j["frame_id"] = e.frame_id;
    j["detection_id"] = e.detection_id;
    if (e.gt_object_id) j["gt_object_id"] = *e.gt_object_id;
    j["pose"] = pose_json(e.pose);
    j["shape"] = coeffs_json(e.coeffs);
    j["bbox"] = box_json(e.bbox);
    j["mask"] = rle_json(e.modal_mask);
    j["keypoints"] = keypoints_json(e.keypoints, true);
    j["rms_reprojection_error"] = e.rms_reprojection_error;
    j["n_inlier_keypoints"] = e.n_inlier_keypoints;
    j["converged"] = e.converged;
    arr.push_back(j);
  }
  doc["objects"] = arr;
  return json_detail::dump_document(doc);
}

std::vector<ReconstructionEntry> parse_reconstructions(const std::string& text, const std::string& source) {
  const Json doc = json_detail::parse_document(text, source);
  const Node r = json_detail::root(doc, source);
  check_version(r, kReconstructionsVersion, source);
  std::vector<ReconstructionEntry> out;
  const Node arr = r.at("objects");
  std::set<std::int64_t> ids;
  for (std::size_t i = 0; i < arr.array_size(); ++i) {
    const Node j = arr.at(i);
    ReconstructionEntry e;
    e.object_id = j.at("object_id").as_int();
    if (!ids.insert(e.object_id).second) j.at("object_id").invalid("duplicate object id");
    e.cls = class_from(j.at("class"));
    e.track_id = j.at("track_id").as_int();
    e.frame_id = j.at("frame_id").as_int();
    e.detection_id = j.at("detection_id").as_int();
    if (j.has("gt_object_id")) e.gt_object_id = j.at("gt_object_id").as_int();
    e.pose = pose_from(j.at("pose"));
    e.coeffs = coeffs_from(j.at("shape"));
    e.bbox = box_from(j.at("bbox"));
    e.modal_mask = rle_from(j.at("mask"));
    e.keypoints = keypoints_from(j.at("keypoints"), true);
    e.rms_reprojection_error = finite_in(j.at("rms_reprojection_error"), 0.0, 1e300);
    e.n_inlier_keypoints = int(finite_in(j.at("n_inlier_keypoints"), 0, 4096));
    e.converged = j.at("converged").as_bool();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace clipart
