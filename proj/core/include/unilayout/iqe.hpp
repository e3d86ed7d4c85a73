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
#pragma once

#include <string>
#include <vector>

#include "unilayout/layout.hpp"

namespace unilayout {

// Interval Quantization Encoding. Each geometric attribute is offset into
// its own interval of width `max_side`: x in [0, m), y in [m, 2m),
// w in [2m, 3m), h in [3m, 4m). A value can then be identified by magnitude
// alone, so unknown attributes are simply omitted from a prompt.
enum class GeomKind { kX = 0, kY = 1, kW = 2, kH = 3 };

GeomKind ToGeomKind(Attribute attribute);
Attribute ToAttribute(GeomKind kind);
char GeomKindName(GeomKind kind);

struct IqeConfig {
  int max_side = kDefaultMaxSide;

  int Offset(GeomKind kind) const { return static_cast<int>(kind) * max_side; }
};

struct EncodedAttribute {
  GeomKind kind;
  int value;

  friend bool operator==(const EncodedAttribute&,
                         const EncodedAttribute&) = default;
};

/// value + kind * max_side. Accepts [0, max_side]; kOutOfRange otherwise.
int Encode(GeomKind kind, int value, const IqeConfig& cfg = {});

/// Inverse of Encode: kind is floor(encoded / max_side), except that the top
/// boundary 4 * max_side decodes to a full-length height.
EncodedAttribute Decode(int encoded, const IqeConfig& cfg = {});

/// Condition tokens of one element in c, x, y, w, h order: the label when the
/// class is known, then decimal IQE integers for every known or noisy
/// geometric attribute. Values must lie in [0, max_side - 1].
std::vector<std::string> EncodeElement(const Element& element,
                                       const IqeConfig& cfg = {});

}  // namespace unilayout
