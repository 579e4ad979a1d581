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

// Document mutator for robustness tests. Mutations come in two flavors:
// ones that always break the document (truncation, type swaps, targeted
// semantic damage) and blind ones (byte edits, key deletions) that may or may
// not keep it valid.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace fuzz {

using Json = nlohmann::json;

struct Mutant {
  std::string text;
  bool must_fail = false;
  std::string what;
};

// Pointers to every node below the root, depth first.
inline void collect(Json& node, std::vector<Json*>& out) {
  if (node.is_object()) {
    for (auto& [k, v] : node.items()) {
      out.push_back(&v);
      collect(v, out);
    }
  } else if (node.is_array()) {
    for (auto& v : node) {
      out.push_back(&v);
      collect(v, out);
    }
  }
}

inline void swap_type(Json& v) {
  if (v.is_number()) v = "x";
  else if (v.is_string()) v = 12345;
  else if (v.is_boolean()) v = "true";
  else if (v.is_array()) v = Json::object({{"a", 1}});
  else if (v.is_object()) v = Json::array({1});
}

// Targeted edits that a parser must reject; each returns false when the
// document lacks the field.
using Edit = std::function<bool(Json&, std::mt19937_64&)>;

class Mutator {
 public:
  Mutator(std::string canonical, std::vector<Edit> semantic)
      : text_(std::move(canonical)), doc_(Json::parse(text_)), semantic_(std::move(semantic)) {}

  Mutant next(std::mt19937_64& gen) {
    const int kind = int(gen() % (semantic_.empty() ? 4 : 5));
    switch (kind) {
      case 0: {
        const std::size_t end = text_.rfind('}');
        const std::size_t cut = 1 + gen() % (end - 1);
        return {text_.substr(0, cut), true, "truncate at " + std::to_string(cut)};
      }
      case 1: {
        Json doc = doc_;
        std::vector<Json*> nodes;
        collect(doc, nodes);
        std::vector<Json*> typed;
        for (Json* n : nodes)
          if (!n->is_null()) typed.push_back(n);
        swap_type(*typed[gen() % typed.size()]);
        return {doc.dump(), true, "type swap"};
      }
      case 2: {
        std::string t = text_;
        const int edits = 1 + int(gen() % 3);
        for (int e = 0; e < edits; ++e) t[gen() % t.size()] = char(32 + gen() % 95);
        return {t, false, "byte edit"};
      }
      case 3: {
        Json doc = doc_;
        std::vector<Json*> objects = {&doc};
        std::vector<Json*> nodes;
        collect(doc, nodes);
        for (Json* n : nodes)
          if (n->is_object() && !n->empty()) objects.push_back(n);
        Json* o = objects[gen() % objects.size()];
        auto it = o->begin();
        std::advance(it, long(gen() % o->size()));
        const std::string key = it.key();
        o->erase(key);
        return {doc.dump(), false, "delete " + key};
      }
      default: {
        for (int tries = 0; tries < 50; ++tries) {
          Json doc = doc_;
          const std::size_t k = gen() % semantic_.size();
          if (semantic_[k](doc, gen)) return {doc.dump(), true, "semantic " + std::to_string(k)};
        }
        return {text_.substr(0, text_.size() / 2), true, "truncate half"};
      }
    }
  }

 private:
  std::string text_;
  Json doc_;
  std::vector<Edit> semantic_;
};

// Picks a random element of a JSON array at `path`, or nullptr.
inline Json* pick(Json& doc, const std::vector<std::string>& path, std::mt19937_64& gen) {
  Json* cur = &doc;
  for (const std::string& key : path) {
    if (cur->is_array()) {
      if (cur->empty()) return nullptr;
      cur = &(*cur)[gen() % cur->size()];
    }
    if (!cur->is_object() || !cur->contains(key)) return nullptr;
    cur = &(*cur)[key];
  }
  return cur;
}

// Semantic damage for annotation documents.
inline std::vector<Edit> annotation_edits() {
  return {
      [](Json& d, std::mt19937_64& g) {
        Json* v = pick(d, {"images", "objects", "occlusion_fraction"}, g);
        if (!v) return false;
        *v = v->get<double>() < 0.5 ? v->get<double>() + 0.25 : v->get<double>() - 0.25;
        return true;
      },
      [](Json& d, std::mt19937_64& g) {
        Json* v = pick(d, {"images", "objects", "pose", "quaternion"}, g);
        if (!v) return false;
        for (auto& q : *v) q = q.get<double>() * 1.5;
        return true;
      },
      [](Json& d, std::mt19937_64& g) {
        Json* v = pick(d, {"images", "objects", "amodal_mask", "counts"}, g);
        if (!v) return false;
        v->push_back(7);
        return true;
      },
      [](Json& d, std::mt19937_64& g) {
        Json* v = pick(d, {"images", "objects", "modal_mask", "counts"}, g);
        if (!v || v->empty()) return false;
        (*v)[0] = (*v)[0].get<std::int64_t>() + 1;
        return true;
      },
      [](Json& d, std::mt19937_64& g) {
        Json* v = pick(d, {"images", "width"}, g);
        if (!v) return false;
        *v = -v->get<std::int64_t>();
        return true;
      },
      [](Json& d, std::mt19937_64& g) {
        Json* v = pick(d, {"images", "objects", "class"}, g);
        if (!v) return false;
        *v = "bicycle";
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["version"] = "clipart-annotations/99";
        return true;
      },
      [](Json& d, std::mt19937_64& g) {
        Json* v = pick(d, {"images", "objects", "keypoints"}, g);
        if (!v || v->empty()) return false;
        (*v)[0][2] = 9;  // no such visibility code
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        if (!d.contains("camera")) return false;
        d["camera"]["K"][1] = 0.5;  // skew
        return true;
      },
  };
}

inline std::vector<Edit> calibration_edits() {
  return {
      [](Json& d, std::mt19937_64&) {
        d["K"][1] = 3.0;
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["K"][0] = -d["K"][0].get<double>();
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["K"][8] = 2.0;
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["plane"] = Json::array({0.0, 0.0, 0.0, -1.0});
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["plane"][3] = 0.0;
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["width"] = 0;
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["height"] = 1 << 20;
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["plane"].push_back(1.0);
        return true;
      },
      [](Json& d, std::mt19937_64&) {
        d["version"] = "clipart-calibration/0";
        return true;
      },
  };
}

}  // namespace fuzz
