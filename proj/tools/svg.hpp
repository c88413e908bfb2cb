#pragma once

#include <string>
#include <vector>

namespace scalelaw::tools {

// Minimal log-log SVG plot: scatter points, lines, a shaded band, and
// vertical markers. Output is deterministic for identical inputs.
class LogLogSvg {
 public:
  LogLogSvg(int width, int height) : width_(width), height_(height) {}

  // Data domain in natural coordinates; values are clamped to stay positive.
  void set_domain(double x_lo, double x_hi, double y_lo, double y_hi);

  void add_band(const std::vector<double>& xs, const std::vector<double>& lo,
                const std::vector<double>& hi, const std::string& fill);
  void add_line(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, bool dashed = false);
  void add_points(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& color);
  void add_vline(double x, const std::string& color);

  std::string render(const std::string& title, const std::string& x_label,
                     const std::string& y_label) const;

 private:
  double px(double x) const;
  double py(double y) const;

  int width_;
  int height_;
  double lx_lo_ = 0, lx_hi_ = 1, ly_lo_ = 0, ly_hi_ = 1;
  std::vector<std::string> elements_;
};

}  // namespace scalelaw::tools
