#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace scalelaw::tools {

namespace {

constexpr double kMargin = 56.0;
constexpr double kFloor = 1e-9;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void LogLogSvg::set_domain(double x_lo, double x_hi, double y_lo, double y_hi) {
  lx_lo_ = std::log10(std::max(x_lo, kFloor));
  lx_hi_ = std::log10(std::max(x_hi, x_lo * 1.0001));
  ly_lo_ = std::log10(std::max(y_lo, kFloor));
  ly_hi_ = std::log10(std::max(y_hi, y_lo * 1.0001));
}

double LogLogSvg::px(double x) const {
  const double t = (std::log10(std::max(x, kFloor)) - lx_lo_) / (lx_hi_ - lx_lo_);
  return kMargin + t * (width_ - 2 * kMargin);
}

double LogLogSvg::py(double y) const {
  const double t = (std::log10(std::max(y, kFloor)) - ly_lo_) / (ly_hi_ - ly_lo_);
  return height_ - kMargin - t * (height_ - 2 * kMargin);
}

void LogLogSvg::add_band(const std::vector<double>& xs, const std::vector<double>& lo,
                         const std::vector<double>& hi, const std::string& fill) {
  std::ostringstream path;
  path << "<polygon fill=\"" << fill << "\" stroke=\"none\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    path << fmt(px(xs[i])) << "," << fmt(py(hi[i])) << " ";
  }
  for (std::size_t i = xs.size(); i > 0; --i) {
    path << fmt(px(xs[i - 1])) << "," << fmt(py(lo[i - 1])) << " ";
  }
  path << "\"/>";
  elements_.push_back(path.str());
}

void LogLogSvg::add_line(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::string& color, bool dashed) {
  std::ostringstream line;
  line << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
  if (dashed) line << " stroke-dasharray=\"5,4\"";
  line << " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    line << fmt(px(xs[i])) << "," << fmt(py(ys[i])) << " ";
  }
  line << "\"/>";
  elements_.push_back(line.str());
}

void LogLogSvg::add_points(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::string& color) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::ostringstream circle;
    circle << "<circle cx=\"" << fmt(px(xs[i])) << "\" cy=\"" << fmt(py(ys[i]))
           << "\" r=\"3\" fill=\"" << color << "\"/>";
    elements_.push_back(circle.str());
  }
}

void LogLogSvg::add_vline(double x, const std::string& color) {
  std::ostringstream line;
  line << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(static_cast<double>(kMargin))
       << "\" x2=\"" << fmt(px(x)) << "\" y2=\"" << fmt(height_ - kMargin) << "\" stroke=\""
       << color << "\" stroke-dasharray=\"3,3\"/>";
  elements_.push_back(line.str());
}

std::string LogLogSvg::render(const std::string& title, const std::string& x_label,
                              const std::string& y_label) const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
      << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // frame
  out << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin) << "\" width=\""
      << fmt(width_ - 2 * kMargin) << "\" height=\"" << fmt(height_ - 2 * kMargin)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade ticks
  for (int d = static_cast<int>(std::ceil(lx_lo_)); d <= static_cast<int>(std::floor(lx_hi_));
       ++d) {
    const double x = px(std::pow(10.0, d));
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(height_ - kMargin) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(height_ - kMargin + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(height_ - kMargin + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly_lo_)); d <= static_cast<int>(std::floor(ly_hi_));
       ++d) {
    const double y = py(std::pow(10.0, d));
    out << "<line x1=\"" << fmt(kMargin - 5) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(kMargin) << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(kMargin - 8) << "\" y=\"" << fmt(y + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">1e" << d << "</text>\n";
  }

  for (const auto& element : elements_) out << element << "\n";

  out << "<text x=\"" << fmt(width_ / 2.0) << "\" y=\"20\" font-size=\"14\" "
      << "text-anchor=\"middle\">" << title << "</text>\n";
  out << "<text x=\"" << fmt(width_ / 2.0) << "\" y=\"" << fmt(height_ - 8.0)
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << fmt(height_ / 2.0) << "\" font-size=\"12\" "
      << "text-anchor=\"middle\" transform=\"rotate(-90 14 " << fmt(height_ / 2.0) << ")\">"
      << y_label << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace scalelaw::tools
