/*
 * Copyright 2026 The epfx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EPFX_SVG_H_
#define EPFX_SVG_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epfx {

// Maps t in [0, 1] to "#rrggbb". Sequential runs white to dark red; diverging
// runs blue through white to red with 0.5 at white.
std::string SequentialColor(double t);
std::string DivergingColor(double t);
// Fixed categorical palette, cycled by index.
std::string CategoricalColor(int index);

// Minimal append-only SVG writer with fixed-precision coordinates so the
// output is byte-stable.
class SvgDocument {
 public:
  SvgDocument(double width, double height);

  // `value` text, when non-empty, is stored in a data-value attribute.
  void Rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view value = {});
  void Line(double x1, double y1, double x2, double y2, std::string_view stroke,
            double width = 1.0);
  void Polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                std::string_view value_list = {});
  void Circle(double cx, double cy, double r, std::string_view fill, std::string_view value = {});
  void Text(double x, double y, std::string_view text, double size = 11.0,
            std::string_view anchor = "start", bool vertical = false);
  void BeginGroup(std::string_view label);
  void EndGroup();

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

std::string XmlEscape(std::string_view text);

}  // namespace epfx

#endif  // EPFX_SVG_H_
