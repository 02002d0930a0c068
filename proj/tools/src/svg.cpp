// Copyright 2026 The rvo-nav Authors.
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

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>

namespace rvonav::cli {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Frame {
  double x0, y1, scale, margin_px;
  double px(double x) const { return margin_px + (x - x0) * scale; }
  double py(double y) const { return margin_px + (y1 - y) * scale; }
};

}  // namespace

void write_trajectory_svg(std::ostream& out, std::span<const TrajectoryRow> rows,
                          std::span<const Segment> segments, const PlotOptions& opt) {
  std::map<std::size_t, std::vector<const TrajectoryRow*>> by_robot;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto grow = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const TrajectoryRow& r : rows) {
    by_robot[r.robot_id].push_back(&r);
    grow(r.x, r.y);
    grow(r.goal_x, r.goal_y);
  }
  for (const Segment& s : segments) {
    grow(s.a.x, s.a.y);
    grow(s.b.x, s.b.y);
  }
  for (auto& [id, pts] : by_robot) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const TrajectoryRow* a, const TrajectoryRow* b) { return a->step < b->step; });
  }

  // Snap the view to whole metres around the data.
  xmin = std::floor(xmin - opt.margin);
  ymin = std::floor(ymin - opt.margin);
  xmax = std::ceil(xmax + opt.margin);
  ymax = std::ceil(ymax + opt.margin);
  const double s = opt.pixels_per_meter;
  const double pad = 40.0;
  const Frame f{xmin, ymax, s, pad};
  const double width = (xmax - xmin) * s + 2 * pad;
  const double height = (ymax - ymin) * s + 2 * pad;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  out << "<g id=\"grid\" stroke=\"#e0e0e0\" stroke-width=\"1\">\n";
  for (double x = xmin; x <= xmax + 1e-9; x += 1.0) {
    out << "<line x1=\"" << num(f.px(x)) << "\" y1=\"" << num(f.py(ymin)) << "\" x2=\""
        << num(f.px(x)) << "\" y2=\"" << num(f.py(ymax)) << "\"/>\n";
  }
  for (double y = ymin; y <= ymax + 1e-9; y += 1.0) {
    out << "<line x1=\"" << num(f.px(xmin)) << "\" y1=\"" << num(f.py(y)) << "\" x2=\""
        << num(f.px(xmax)) << "\" y2=\"" << num(f.py(y)) << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g id=\"axes\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double x = xmin; x <= xmax + 1e-9; x += 1.0) {
    out << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(f.py(ymin) + 14)
        << "\" text-anchor=\"middle\">" << static_cast<long>(x) << "</text>\n";
  }
  for (double y = ymin; y <= ymax + 1e-9; y += 1.0) {
    out << "<text x=\"" << num(f.px(xmin) - 6) << "\" y=\"" << num(f.py(y) + 4)
        << "\" text-anchor=\"end\">" << static_cast<long>(y) << "</text>\n";
  }
  out << "<text x=\"" << num(width / 2) << "\" y=\"" << num(height - 6)
      << "\" text-anchor=\"middle\">x (m)</text>\n"
      << "<text x=\"12\" y=\"" << num(height / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 12 "
      << num(height / 2) << ")\">y (m)</text>\n</g>\n";

  for (const Segment& seg : segments) {
    out << "<line class=\"obstacle\" x1=\"" << num(f.px(seg.a.x)) << "\" y1=\"" << num(f.py(seg.a.y))
        << "\" x2=\"" << num(f.px(seg.b.x)) << "\" y2=\"" << num(f.py(seg.b.y))
        << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
  }

  for (const auto& [id, pts] : by_robot) {
    const char* color = kPalette[id % std::size(kPalette)];
    out << "<g id=\"robot-" << id << "\">\n<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k) out << ' ';
      out << num(f.px(pts[k]->x)) << ',' << num(f.py(pts[k]->y));
    }
    out << "\"/>\n";
    const TrajectoryRow& first = *pts.front();
    const TrajectoryRow& last = *pts.back();
    const double m = 5.0;
    out << "<rect class=\"start\" x=\"" << num(f.px(first.x) - m) << "\" y=\"" << num(f.py(first.y) - m)
        << "\" width=\"" << num(2 * m) << "\" height=\"" << num(2 * m) << "\" fill=\"" << color
        << "\"/>\n";
    if (std::isfinite(first.goal_x) && std::isfinite(first.goal_y)) {
      const double gx = f.px(first.goal_x), gy = f.py(first.goal_y);
      out << "<path class=\"goal\" d=\"M" << num(gx - m) << ',' << num(gy - m) << " L" << num(gx + m)
          << ',' << num(gy + m) << " M" << num(gx - m) << ',' << num(gy + m) << " L" << num(gx + m)
          << ',' << num(gy - m) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    }
    out << "<circle class=\"footprint\" cx=\"" << num(f.px(last.x)) << "\" cy=\"" << num(f.py(last.y))
        << "\" r=\"" << num(opt.robot_radius * s) << "\" fill=\"" << color
        << "\" fill-opacity=\"0.3\" stroke=\"" << color << "\"/>\n</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace rvonav::cli
