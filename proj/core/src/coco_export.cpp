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
#include "clipart/shape_model.hpp"
#include "json_util.hpp"

namespace clipart {

using json_detail::Json;

int coco_visibility(Visibility v) {
  switch (v) {
    case Visibility::kMissing: return 0;
    case Visibility::kOccludedByOthers:
    case Visibility::kSelfOccluded: return 1;
    case Visibility::kVisible: return 2;
  }
  return 0;
}

namespace {

int category_id(ObjectClass cls) { return cls == ObjectClass::kCar ? 1 : 2; }

}  // namespace

std::string export_coco(const AnnotationFile& file, CocoMaskMode mode) {
  Json doc;
  Json car;
  car["id"] = 1;
  car["name"] = "car";
  car["supercategory"] = "vehicle";
  Json names = Json::array();
  for (std::string_view n : kVehicleKeypointNames) names.push_back(std::string(n));
  car["keypoints"] = names;
  car["skeleton"] = Json::array();
  Json person;
  person["id"] = 2;
  person["name"] = "person";
  person["supercategory"] = "person";
  person["keypoints"] = Json::array();
  person["skeleton"] = Json::array();
  doc["categories"] = Json::array({car, person});

  Json images = Json::array();
  Json annotations = Json::array();
  std::int64_t next_id = 1;
  for (const AnnotatedImage& img : file.images) {
    Json ji;
    ji["id"] = img.image_id;
    ji["file_name"] = img.file_name;
    ji["width"] = img.width;
    ji["height"] = img.height;
    images.push_back(ji);
    for (const AnnotationObject& o : img.objects) {
      const bool amodal = mode == CocoMaskMode::kAmodal;
      const RleMask& rle = amodal ? o.amodal_mask : o.modal_mask;
      const Box& box = amodal ? o.amodal_bbox : o.modal_bbox;
      Json ja;
      ja["id"] = next_id++;
      ja["image_id"] = img.image_id;
      ja["category_id"] = category_id(o.cls);
      Json seg;
      seg["size"] = Json::array({rle.height, rle.width});
      seg["counts"] = rle.counts;
      ja["segmentation"] = seg;
      ja["area"] = rle_area(rle);
      ja["bbox"] = Json::array({box.x0, box.y0, box.width(), box.height()});
      ja["iscrowd"] = 0;
      Json kps = Json::array();
      int labeled = 0;
      for (int k = 0; k < o.keypoints.size(); ++k) {
        const int v = coco_visibility(o.keypoints.visibility[std::size_t(k)]);
        kps.push_back(v == 0 ? 0.0 : o.keypoints.points(k, 0));
        kps.push_back(v == 0 ? 0.0 : o.keypoints.points(k, 1));
        kps.push_back(v);
        if (v > 0) ++labeled;
      }
      ja["keypoints"] = kps;
      ja["num_keypoints"] = labeled;
      ja["occlusion_fraction"] = o.occlusion_fraction;
      ja["track_id"] = o.track_id;
      annotations.push_back(ja);
    }
  }
  doc["images"] = images;
  doc["annotations"] = annotations;
  return json_detail::dump_document(doc);
}

}  // namespace clipart
