#include "scalelaw/curve_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scalelaw/errors.hpp"

namespace scalelaw {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::int64_t parse_int(std::string_view s, const std::string& context) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(context + ": expected integer, got '" + std::string(s) + "'");
  }
  return value;
}

double parse_double(std::string_view s, const std::string& context) {
  try {
    std::size_t pos = 0;
    double value = std::stod(std::string(s), &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw ParseError(context + ": expected number, got '" + std::string(s) + "'");
  }
}

void validate_point(const PerformancePoint& p, const std::string& context) {
  if (p.n < 1) throw DomainError(context + ": sample count must be >= 1, got " + std::to_string(p.n));
  if (!(p.v > 0.0 && p.v < 1.0)) {
    std::ostringstream msg;
    msg << context << ": score must lie in (0,1), got " << p.v << " at n=" << p.n;
    throw DomainError(msg.str());
  }
}

}  // namespace

Task parse_task(std::string_view text) {
  if (text == "classification") return Task::classification;
  if (text == "detection") return Task::detection;
  throw ParseError("unknown task '" + std::string(text) + "'");
}

const char* to_string(Task task) {
  return task == Task::classification ? "classification" : "detection";
}

LearningCurve make_curve(std::string name, Task task, int classes,
                         std::vector<PerformancePoint> points) {
  if (classes < 1) throw DomainError("curve '" + name + "': classes must be >= 1");
  if (points.empty()) throw DomainError("curve '" + name + "': no points");
  for (const auto& p : points) validate_point(p, "curve '" + name + "'");
  std::sort(points.begin(), points.end(),
            [](const PerformancePoint& a, const PerformancePoint& b) { return a.n < b.n; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].n == points[i - 1].n) {
      throw DomainError("curve '" + name + "': duplicate sample count n=" +
                        std::to_string(points[i].n));
    }
  }
  LearningCurve curve;
  curve.name = std::move(name);
  curve.task = task;
  curve.classes = classes;
  curve.fit_count = points.size();
  curve.points = std::move(points);
  return curve;
}

LearningCurve parse_curve(std::string_view text, int classes, std::string name, Task task) {
  std::vector<PerformancePoint> points;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != "n,score") {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected header 'n,score', got '" + std::string(line) + "'");
      }
      saw_header = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'n,score' row");
    }
    const std::string context = "line " + std::to_string(line_no);
    PerformancePoint p;
    p.n = parse_int(trim(line.substr(0, comma)), context);
    p.v = parse_double(trim(line.substr(comma + 1)), context);
    validate_point(p, context);
    points.push_back(p);
  }
  if (!saw_header) throw ParseError("missing 'n,score' header");
  if (points.empty()) throw ParseError("curve file has no data rows");
  return make_curve(std::move(name), task, classes, std::move(points));
}

std::string serialize_curve(const LearningCurve& curve) {
  std::ostringstream out;
  out << "n,score\n";
  out.precision(17);
  for (const auto& p : curve.points) out << p.n << "," << p.v << "\n";
  return out.str();
}

std::pair<std::vector<PerformancePoint>, std::vector<PerformancePoint>> split_points(
    LearningCurve& curve, std::size_t m) {
  if (m < 1 || m >= curve.points.size()) {
    throw RangeError("split at m=" + std::to_string(m) + " needs 1 <= m < " +
                     std::to_string(curve.points.size()));
  }
  curve.fit_count = m;
  std::vector<PerformancePoint> fit(curve.points.begin(), curve.points.begin() + m);
  std::vector<PerformancePoint> eval(curve.points.begin() + m, curve.points.end());
  return {std::move(fit), std::move(eval)};
}

CurveDictionary make_dictionary(Task task, std::vector<LearningCurve> entries) {
  for (const auto& curve : entries) {
    if (curve.task != task) {
      throw DomainError("dictionary task mismatch for curve '" + curve.name + "'");
    }
  }
  std::vector<std::string> names;
  names.reserve(entries.size());
  for (const auto& curve : entries) names.push_back(curve.name);
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw DomainError("dictionary has duplicate curve names");
  }
  return CurveDictionary{task, std::move(entries)};
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  ManifestEntry current;
  bool in_entry = false;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (!in_entry) return;
    if (current.path.empty()) throw ParseError("manifest entry missing 'path'");
    if (current.name.empty()) throw ParseError("manifest entry missing 'name'");
    entries.push_back(current);
    current = ManifestEntry{};
    in_entry = false;
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("manifest line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string context = "manifest line " + std::to_string(line_no);
    in_entry = true;
    if (key == "path") {
      current.path = std::string(value);
    } else if (key == "name") {
      current.name = std::string(value);
    } else if (key == "classes") {
      current.classes = static_cast<int>(parse_int(value, context));
    } else if (key == "task") {
      current.task = parse_task(value);
    } else {
      throw ParseError(context + ": unknown key '" + std::string(key) + "'");
    }
  }
  flush();
  return entries;
}

std::string serialize_manifest(std::span<const ManifestEntry> entries) {
  std::ostringstream out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out << "\n";
    out << "path=" << entries[i].path << "\n";
    out << "name=" << entries[i].name << "\n";
    out << "classes=" << entries[i].classes << "\n";
    out << "task=" << to_string(entries[i].task) << "\n";
  }
  return out.str();
}

CurveDictionary load_dictionary(const std::filesystem::path& manifest_path) {
  const auto entries = parse_manifest(read_file(manifest_path));
  if (entries.empty()) throw ParseError("manifest '" + manifest_path.string() + "' is empty");
  const auto base = manifest_path.parent_path();
  std::vector<LearningCurve> curves;
  curves.reserve(entries.size());
  for (const auto& entry : entries) {
    const auto path = base / entry.path;
    curves.push_back(parse_curve(read_file(path), entry.classes, entry.name, entry.task));
  }
  return make_dictionary(entries.front().task, std::move(curves));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

}  // namespace scalelaw
