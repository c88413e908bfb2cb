#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scalelaw {

enum class Task { classification, detection };

Task parse_task(std::string_view text);
const char* to_string(Task task);

// One measured (training-set size, score) pair. Scores are fractions in the
// open interval (0, 1) so that log(score) and log(1 - score) stay finite.
struct PerformancePoint {
  std::int64_t n = 0;
  double v = 0.0;
};

struct LearningCurve {
  std::string name;
  Task task = Task::classification;
  int classes = 1;
  std::vector<PerformancePoint> points;  // strictly increasing in n
  std::size_t fit_count = 0;             // m: points[0..m) fit, points[m..) eval

  std::span<const PerformancePoint> fit_points() const {
    return {points.data(), fit_count};
  }
  std::span<const PerformancePoint> eval_points() const {
    return {points.data() + fit_count, points.size() - fit_count};
  }
};

// Sorts by n and validates all invariants; fit_count defaults to all points.
LearningCurve make_curve(std::string name, Task task, int classes,
                         std::vector<PerformancePoint> points);

// Parses the curve CSV format: header line exactly `n,score`, one data row per
// point, `#` comment lines permitted anywhere.
LearningCurve parse_curve(std::string_view text, int classes, std::string name, Task task);

std::string serialize_curve(const LearningCurve& curve);

// Records m on the curve and returns (fit, eval) copies. Requires 1 <= m < |points|.
std::pair<std::vector<PerformancePoint>, std::vector<PerformancePoint>> split_points(
    LearningCurve& curve, std::size_t m);

struct CurveDictionary {
  Task task = Task::classification;
  std::vector<LearningCurve> entries;
};

// Validates unique names and a shared task.
CurveDictionary make_dictionary(Task task, std::vector<LearningCurve> entries);

// Dictionary manifest: one flat key-list per curve, entries separated by blank
// lines, `key=value` lines with fields path, name, classes, task.
struct ManifestEntry {
  std::string path;
  std::string name;
  int classes = 1;
  Task task = Task::classification;
};

std::vector<ManifestEntry> parse_manifest(std::string_view text);
std::string serialize_manifest(std::span<const ManifestEntry> entries);

// Reads a manifest file and every curve file it references (paths are taken
// relative to the manifest's directory).
CurveDictionary load_dictionary(const std::filesystem::path& manifest_path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace scalelaw
