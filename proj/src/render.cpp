// Copyright 2026 The radar-anomaly Authors
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

#include "radar_anomaly/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "radar_anomaly/errors.hpp"

namespace radar::render {
namespace {

constexpr double kMarginLeft = 50.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 70.0;
constexpr double kTickStep = 10.0;  // m

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

double marker_radius(double rcs) { return std::clamp(1.5 + 0.12 * (rcs + 15.0), 1.0, 6.0); }

// Maps vehicle coordinates to pixels: +y to the left, +x upward.
struct Frame2Px {
  double scale;
  double range;
  double origin_x;
  double origin_y;

  double px(double y) const { return origin_x + (range - y) * scale; }
  double py(double x) const { return origin_y + (range - x) * scale; }
};

}  // namespace

std::string_view color_of(PointClass c) noexcept {
  switch (c) {
    case PointClass::Stationary: return "#000000";
    case PointClass::Moving: return "#1f4fd8";
    case PointClass::Anomalous: return "#d62728";
    case PointClass::TruePositive: return "#2ca02c";
    case PointClass::FalsePositive: return "#d62728";
    case PointClass::FalseNegative: return "#ff8c00";
  }
  return "#000000";
}

PointClass ground_truth_class(const RadarTarget& t) noexcept {
  if (t.label == Label::Anomalous) return PointClass::Anomalous;
  return std::abs(t.v_d_comp) > kMovingSpeed ? PointClass::Moving : PointClass::Stationary;
}

PointClass prediction_class(const RadarTarget& t, Label predicted) noexcept {
  const bool truth = t.label == Label::Anomalous;
  const bool flagged = predicted == Label::Anomalous;
  if (truth && flagged) return PointClass::TruePositive;
  if (truth) return PointClass::FalseNegative;
  if (flagged) return PointClass::FalsePositive;
  return std::abs(t.v_d_comp) > kMovingSpeed ? PointClass::Moving : PointClass::Stationary;
}

std::string frame_svg(const RadarFrame& frame, std::span<const Label> predicted,
                      const SvgOptions& o) {
  const bool with_predictions = !predicted.empty();
  if (with_predictions && predicted.size() != frame.targets.size()) {
    throw ShapeError("frame_svg: " + std::to_string(predicted.size()) + " predictions for " +
                     std::to_string(frame.targets.size()) + " targets");
  }
  if (!(o.max_range > 0.0) || !(o.width > kMarginLeft + kMarginRight) ||
      !(o.height > kMarginTop + kMarginBottom)) {
    throw ValidationError("frame_svg: plot area is empty");
  }
  const double R = o.max_range;
  const double plot_w = o.width - kMarginLeft - kMarginRight;
  const double plot_h = o.height - kMarginTop - kMarginBottom;
  const Frame2Px m{std::min(plot_w / (2.0 * R), plot_h / R), R, kMarginLeft, kMarginTop};
  const double left = m.px(R);
  const double right = m.px(-R);
  const double top = m.py(R);
  const double bottom = m.py(0.0);

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<!-- radar-anomaly render v1 seed=" << o.seed << " frame=" << frame.frame_id << " sensor="
    << to_string(frame.sensor) << " mode=" << (with_predictions ? "predictions" : "ground_truth")
    << " -->\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(o.width) << "\" height=\""
    << num(o.height) << "\" viewBox=\"0 0 " << num(o.width) << ' ' << num(o.height) << "\">\n"
    << "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" "
       "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#555555\"/></marker></defs>\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << num(o.width) << "\" height=\"" << num(o.height)
    << "\" fill=\"#ffffff\"/>\n";

  // Grid and ticks every 10 m.
  s << "<g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"0.5\" font-size=\"9\" "
       "font-family=\"sans-serif\" fill=\"#444444\">\n";
  for (double y = -std::floor(R / kTickStep) * kTickStep; y <= R + 1e-9; y += kTickStep) {
    const double x_px = m.px(y);
    s << "<line x1=\"" << num(x_px) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x_px)
      << "\" y2=\"" << num(bottom) << "\"/>"
      << "<text x=\"" << num(x_px) << "\" y=\"" << num(bottom + 12.0)
      << "\" text-anchor=\"middle\" stroke=\"none\">" << num(y).substr(0, num(y).size() - 3)
      << "</text>\n";
  }
  for (double x = 0.0; x <= R + 1e-9; x += kTickStep) {
    const double y_px = m.py(x);
    s << "<line x1=\"" << num(left) << "\" y1=\"" << num(y_px) << "\" x2=\"" << num(right)
      << "\" y2=\"" << num(y_px) << "\"/>"
      << "<text x=\"" << num(left - 4.0) << "\" y=\"" << num(y_px + 3.0)
      << "\" text-anchor=\"end\" stroke=\"none\">" << num(x).substr(0, num(x).size() - 3)
      << "</text>\n";
  }
  s << "</g>\n"
    << "<text x=\"" << num(0.5 * (left + right)) << "\" y=\"" << num(bottom + 26.0)
    << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">y [m]</text>\n"
    << "<text x=\"12\" y=\"" << num(0.5 * (top + bottom))
    << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 12 "
    << num(0.5 * (top + bottom)) << ")\">x [m]</text>\n";

  // Arrows first so that markers stay on top.
  s << "<g class=\"arrows\" stroke=\"#555555\" stroke-width=\"1\">\n";
  for (const RadarTarget& t : frame.targets) {
    if (std::abs(t.v_d_comp) <= kMovingSpeed) continue;
    const double phi = t.azimuth();
    const double len = o.arrow_scale * t.v_d_comp;
    const double tip_x = t.x + len * std::cos(phi);
    const double tip_y = t.y + len * std::sin(phi);
    s << "<line class=\"arrow\" x1=\"" << num(m.px(t.y)) << "\" y1=\"" << num(m.py(t.x))
      << "\" x2=\"" << num(m.px(tip_y)) << "\" y2=\"" << num(m.py(tip_x))
      << "\" marker-end=\"url(#head)\"/>\n";
  }
  s << "</g>\n";

  s << "<g class=\"targets\">\n";
  for (std::size_t i = 0; i < frame.targets.size(); ++i) {
    const RadarTarget& t = frame.targets[i];
    const PointClass c =
        with_predictions ? prediction_class(t, predicted[i]) : ground_truth_class(t);
    s << "<circle cx=\"" << num(m.px(t.y)) << "\" cy=\"" << num(m.py(t.x)) << "\" r=\""
      << num(marker_radius(t.rcs)) << "\" fill=\"" << color_of(c) << "\"/>\n";
  }
  s << "</g>\n";

  // Legend along the bottom edge.
  std::vector<std::pair<PointClass, const char*>> legend;
  if (with_predictions) {
    legend = {{PointClass::Stationary, "TN stationary"},
              {PointClass::Moving, "TN moving"},
              {PointClass::TruePositive, "TP"},
              {PointClass::FalsePositive, "FP"},
              {PointClass::FalseNegative, "FN"}};
  } else {
    legend = {{PointClass::Stationary, "stationary"},
              {PointClass::Moving, "moving"},
              {PointClass::Anomalous, "anomaly"}};
  }
  s << "<g class=\"legend\" font-size=\"10\" font-family=\"sans-serif\">\n";
  double lx = left;
  const double ly = o.height - 14.0;
  for (const auto& [c, text] : legend) {
    s << "<circle cx=\"" << num(lx + 4.0) << "\" cy=\"" << num(ly - 3.0) << "\" r=\"3.50\" fill=\""
      << color_of(c) << "\"/><text x=\"" << num(lx + 11.0) << "\" y=\"" << num(ly) << "\">" << text
      << "</text>\n";
    lx += 20.0 + 6.0 * static_cast<double>(std::string_view(text).size());
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace radar::render
