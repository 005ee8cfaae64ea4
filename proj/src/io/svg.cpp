#include "thermo/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "thermo/core/error.hpp"

namespace thermo {
namespace {

constexpr int kMaxCells = 160;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string header(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\">\n";
}

// Dark blue -> yellow ramp, t in [0, 1].
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * std::min(1.0, 2.0 * t)));
  const int g = static_cast<int>(std::lround(40 + 200 * t));
  const int b = static_cast<int>(std::lround(120 * (1.0 - t)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string line_profile_svg(const std::string& title, const Grid2D& gt, const Grid2D& est) {
  require(gt.same_shape(est), "line_profile_svg: shape mismatch");
  const double w = 640, h = 360, left = 60, right = 20, top = 40, bottom = 40;
  const std::size_t row = gt.height() / 2;
  const std::size_t n = gt.width();
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t x = 0; x < n; ++x) {
    for (float v : {gt(row, x), est(row, x)}) {
      if (!std::isfinite(v)) continue;
      lo = std::min<double>(lo, v);
      hi = std::max<double>(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo = std::isfinite(lo) ? lo - 1.0 : 0.0;
    hi = lo + 2.0;
  }
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](std::size_t x) { return left + (n > 1 ? pw * static_cast<double>(x) / static_cast<double>(n - 1) : pw / 2); };
  auto py = [&](double v) { return top + ph * (1.0 - (v - lo) / (hi - lo)); };
  auto polyline = [&](const Grid2D& g, const char* color, const char* dash) {
    std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"" + dash +
                    " points=\"";
    for (std::size_t x = 0; x < n; ++x) {
      const double v = std::isfinite(g(row, x)) ? g(row, x) : lo;
      s += num(px(x)) + "," + num(py(v)) + " ";
    }
    return s + "\"/>\n";
  };
  std::ostringstream out;
  out << header(w, h) << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(left) << "\" y=\"24\" font-size=\"14\">" << xml_escape(title) << " (row " << row
      << ")</text>\n";
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<text x=\"4\" y=\"" << num(top + 10) << "\" font-size=\"11\">" << num(hi) << "</text>\n";
  out << "<text x=\"4\" y=\"" << num(top + ph) << "\" font-size=\"11\">" << num(lo) << "</text>\n";
  out << polyline(gt, "#1f4e9c", "") << polyline(est, "#d4541c", " stroke-dasharray=\"4 2\"");
  out << "<text x=\"" << num(w - 200) << "\" y=\"" << num(h - 12) << "\" font-size=\"11\" fill=\"#1f4e9c\">GT</text>\n";
  out << "<text x=\"" << num(w - 150) << "\" y=\"" << num(h - 12)
      << "\" font-size=\"11\" fill=\"#d4541c\">estimate</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string error_map_svg(const std::string& title, const Grid2D& gt, const Grid2D& est) {
  require(gt.same_shape(est), "error_map_svg: shape mismatch");
  const std::size_t bh = (gt.height() + kMaxCells - 1) / kMaxCells;
  const std::size_t bw = (gt.width() + kMaxCells - 1) / kMaxCells;
  const std::size_t block = std::max(bh, bw);
  const std::size_t ch = (gt.height() + block - 1) / block;
  const std::size_t cw = (gt.width() + block - 1) / block;
  std::vector<double> cells(ch * cw, 0.0);
  double peak = 0.0;
  for (std::size_t cy = 0; cy < ch; ++cy) {
    for (std::size_t cx = 0; cx < cw; ++cx) {
      double s = 0.0;
      std::size_t cnt = 0;
      for (std::size_t y = cy * block; y < std::min(gt.height(), (cy + 1) * block); ++y)
        for (std::size_t x = cx * block; x < std::min(gt.width(), (cx + 1) * block); ++x, ++cnt)
          s += std::abs(static_cast<double>(est(y, x)) - gt(y, x));
      cells[cy * cw + cx] = s / static_cast<double>(cnt);
      if (std::isfinite(cells[cy * cw + cx])) peak = std::max(peak, cells[cy * cw + cx]);
    }
  }
  const double cell = std::max(2.0, 480.0 / static_cast<double>(std::max(ch, cw)));
  const double top = 40;
  std::ostringstream out;
  out << header(cell * static_cast<double>(cw) + 20, top + cell * static_cast<double>(ch) + 30);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"10\" y=\"24\" font-size=\"14\">" << xml_escape(title) << " |error|, max " << num(peak)
      << " C</text>\n<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t cy = 0; cy < ch; ++cy) {
    for (std::size_t cx = 0; cx < cw; ++cx) {
      const double v = cells[cy * cw + cx];
      const double t = peak > 0.0 && std::isfinite(v) ? v / peak : 0.0;
      out << "<rect x=\"" << num(10 + cell * static_cast<double>(cx)) << "\" y=\""
          << num(top + cell * static_cast<double>(cy)) << "\" width=\"" << num(cell) << "\" height=\"" << num(cell)
          << "\" fill=\"" << ramp(t) << "\"/>\n";
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string table_svg(const std::string& title, const std::vector<std::vector<std::string>>& rows) {
  std::size_t cols = 0;
  for (const auto& r : rows) cols = std::max(cols, r.size());
  const double cw = 110, rh = 20, top = 40;
  std::ostringstream out;
  out << header(20 + cw * static_cast<double>(std::max<std::size_t>(cols, 1)),
                top + rh * static_cast<double>(rows.size()) + 20);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"10\" y=\"24\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out << "<text x=\"" << num(10 + cw * static_cast<double>(j)) << "\" y=\""
          << num(top + rh * static_cast<double>(i + 1)) << "\" font-size=\"11\"" << (i == 0 ? " font-weight=\"bold\"" : "")
          << ">" << xml_escape(rows[i][j]) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace thermo
