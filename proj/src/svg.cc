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

#include "epfx/svg.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace epfx {
namespace {

std::string Coord(double v) {
  if (std::abs(v) < 0.005) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Hex(double r, double g, double b) {
  auto channel = [](double c) { return static_cast<int>(std::lround(std::clamp(c, 0.0, 1.0) * 255)); };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", channel(r), channel(g), channel(b));
  return buf;
}

double Clamp01(double t) { return std::isfinite(t) ? std::clamp(t, 0.0, 1.0) : 0.5; }

}  // namespace

std::string SequentialColor(double t) {
  t = Clamp01(t);
  return Hex(1.0 - 0.4 * t, 1.0 - 0.9 * t, 1.0 - 0.9 * t);
}

std::string DivergingColor(double t) {
  t = Clamp01(t);
  if (t < 0.5) {
    const double u = (0.5 - t) * 2.0;
    return Hex(1.0 - 0.85 * u, 1.0 - 0.6 * u, 1.0 - 0.2 * u);
  }
  const double u = (t - 0.5) * 2.0;
  return Hex(1.0 - 0.2 * u, 1.0 - 0.85 * u, 1.0 - 0.85 * u);
}

std::string CategoricalColor(int index) {
  static constexpr std::array<const char*, 10> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return kPalette[static_cast<size_t>(index) % kPalette.size()];
}

std::string XmlEscape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

SvgDocument::SvgDocument(double width, double height) : width_(width), height_(height) {}

void SvgDocument::Rect(double x, double y, double w, double h, std::string_view fill,
                       std::string_view value) {
  body_ += "<rect x=\"" + Coord(x) + "\" y=\"" + Coord(y) + "\" width=\"" + Coord(w) +
           "\" height=\"" + Coord(h) + "\" fill=\"" + std::string(fill) + "\"";
  if (!value.empty()) body_ += " data-value=\"" + std::string(value) + "\"";
  body_ += "/>\n";
}

void SvgDocument::Line(double x1, double y1, double x2, double y2, std::string_view stroke,
                       double width) {
  body_ += "<line x1=\"" + Coord(x1) + "\" y1=\"" + Coord(y1) + "\" x2=\"" + Coord(x2) +
           "\" y2=\"" + Coord(y2) + "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" +
           Coord(width) + "\"/>\n";
}

void SvgDocument::Polyline(const std::vector<std::pair<double, double>>& points,
                           std::string_view stroke, std::string_view value_list) {
  body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" points=\"";
  for (size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += ' ';
    body_ += Coord(points[i].first) + "," + Coord(points[i].second);
  }
  body_ += "\"";
  if (!value_list.empty()) body_ += " data-values=\"" + std::string(value_list) + "\"";
  body_ += "/>\n";
}

void SvgDocument::Circle(double cx, double cy, double r, std::string_view fill,
                         std::string_view value) {
  body_ += "<circle cx=\"" + Coord(cx) + "\" cy=\"" + Coord(cy) + "\" r=\"" + Coord(r) +
           "\" fill=\"" + std::string(fill) + "\"";
  if (!value.empty()) body_ += " data-value=\"" + std::string(value) + "\"";
  body_ += "/>\n";
}

void SvgDocument::Text(double x, double y, std::string_view text, double size,
                       std::string_view anchor, bool vertical) {
  body_ += "<text x=\"" + Coord(x) + "\" y=\"" + Coord(y) + "\" font-size=\"" + Coord(size) +
           "\" text-anchor=\"" + std::string(anchor) + "\"";
  if (vertical) body_ += " transform=\"rotate(-90 " + Coord(x) + " " + Coord(y) + ")\"";
  body_ += ">" + XmlEscape(text) + "</text>\n";
}

void SvgDocument::BeginGroup(std::string_view label) {
  body_ += "<g data-label=\"" + XmlEscape(label) + "\">\n";
}

void SvgDocument::EndGroup() { body_ += "</g>\n"; }

std::string SvgDocument::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Coord(width_) + "\" height=\"" +
         Coord(height_) + "\" viewBox=\"0 0 " + Coord(width_) + " " + Coord(height_) +
         "\" font-family=\"sans-serif\">\n<rect x=\"0\" y=\"0\" width=\"" + Coord(width_) +
         "\" height=\"" + Coord(height_) + "\" fill=\"#ffffff\"/>\n" + body_ + "</svg>\n";
}

}  // namespace epfx
