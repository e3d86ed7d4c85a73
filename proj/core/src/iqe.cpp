// Copyright 2026 The Unilayout Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "unilayout/iqe.hpp"

#include "unilayout/error.hpp"

namespace unilayout {

GeomKind ToGeomKind(Attribute attribute) {
  switch (attribute) {
    case Attribute::kX: return GeomKind::kX;
    case Attribute::kY: return GeomKind::kY;
    case Attribute::kW: return GeomKind::kW;
    case Attribute::kH: return GeomKind::kH;
    case Attribute::kClass: break;
  }
  throw Error(Errc::kInvalidArgument, "class is not a geometric attribute");
}

Attribute ToAttribute(GeomKind kind) {
  return static_cast<Attribute>(static_cast<int>(kind) + 1);
}

char GeomKindName(GeomKind kind) {
  static constexpr char kNames[] = {'x', 'y', 'w', 'h'};
  return kNames[static_cast<int>(kind)];
}

int Encode(GeomKind kind, int value, const IqeConfig& cfg) {
  if (value < 0 || value > cfg.max_side) {
    throw Error(Errc::kOutOfRange, std::string(1, GeomKindName(kind)) + "=" +
                                       std::to_string(value) +
                                       " outside [0, " +
                                       std::to_string(cfg.max_side) + "]");
  }
  return value + cfg.Offset(kind);
}

EncodedAttribute Decode(int encoded, const IqeConfig& cfg) {
  const int top = 4 * cfg.max_side;
  if (encoded < 0 || encoded > top) {
    throw Error(Errc::kOutOfRange, "encoded value " + std::to_string(encoded) +
                                       " outside [0, " + std::to_string(top) +
                                       "]");
  }
  if (encoded == top) return {GeomKind::kH, cfg.max_side};
  const int index = encoded / cfg.max_side;
  return {static_cast<GeomKind>(index), encoded - index * cfg.max_side};
}

std::vector<std::string> EncodeElement(const Element& element,
                                       const IqeConfig& cfg) {
  std::vector<std::string> tokens;
  if (element.status.get(Attribute::kClass) == AttributeStatus::kKnown) {
    tokens.push_back(element.label);
  }
  for (Attribute attribute : kGeometricAttributes) {
    if (element.status.get(attribute) == AttributeStatus::kUnknown) continue;
    const int value = element.Value(attribute);
    const GeomKind kind = ToGeomKind(attribute);
    if (value >= cfg.max_side) {
      throw Error(Errc::kOutOfRange,
                  std::string(1, GeomKindName(kind)) + "=" +
                      std::to_string(value) + " must be below " +
                      std::to_string(cfg.max_side) + " to stay in its interval");
    }
    tokens.push_back(std::to_string(Encode(kind, value, cfg)));
  }
  return tokens;
}

}  // namespace unilayout
