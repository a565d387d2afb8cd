// File formats: CSV data sets (wide and long), distance matrix and partition
// CSVs, dendrogram JSON, run manifests, and SVG line charts.
//
// Numbers are written with shortest round-trip formatting, so loading a saved
// file reproduces every double bit for bit.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lawclust/dendrogram.hpp"
#include "lawclust/distance.hpp"
#include "lawclust/errors.hpp"
#include "lawclust/simulate.hpp"
#include "lawclust/types.hpp"

namespace lawclust {

enum class DataFormat { Wide, Long };

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError("cannot parse number '" + std::string(field) + "'", line);
  if (!std::isfinite(v))
    throw NonFiniteValue("non-finite value '" + std::string(field) + "' at line " +
                         std::to_string(line));
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

// Wide CSV: header row holds the grid times, each following row one sample.
// The data set is labelled by the file stem.
inline DataSet load_wide_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw ParseError("empty file '" + path.string() + "'", 1);

  const auto header = detail::split_csv(lines[0]);
  std::vector<double> times(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) times[i] = detail::parse_double(header[i], 1);

  std::vector<FunctionalSample> samples;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const auto fields = detail::split_csv(lines[row]);
    if (fields.size() != times.size())
      throw ParseError("expected " + std::to_string(times.size()) + " values, found " +
                           std::to_string(fields.size()),
                       row + 1);
    FunctionalSample s(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) s[i] = detail::parse_double(fields[i], row + 1);
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw ParseError("no sample rows in '" + path.string() + "'", 1);

  try {
    return DataSet(path.stem().string(), Grid(std::move(times)), std::move(samples));
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("invalid grid header: ") + e.what(), 1);
  }
}

inline void save_wide_csv(const DataSet& ds, const std::filesystem::path& path) {
  std::ostringstream out;
  const auto& t = ds.grid().times();
  for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << format_double(t[i]);
  out << '\n';
  for (const auto& s : ds.samples()) {
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << format_double(s[i]);
    out << '\n';
  }
  write_text(path, out.str());
}

// Long CSV: one file with columns set_id,sample_id,t,value. Sets and samples
// keep first-appearance order; the grid is the sorted set of distinct times,
// and every (set, sample) must cover it completely.
inline std::vector<DataSet> load_long_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw ParseError("empty file '" + path.string() + "'", 1);
  {
    const auto header = detail::split_csv(lines[0]);
    if (header.size() != 4 || header[0] != "set_id" || header[1] != "sample_id" ||
        header[2] != "t" || header[3] != "value")
      throw ParseError("expected header 'set_id,sample_id,t,value'", 1);
  }

  struct SampleData {
    std::map<double, double> by_time;
  };
  struct SetData {
    std::vector<std::string> sample_order;
    std::map<std::string, SampleData> samples;
  };
  std::vector<std::string> set_order;
  std::map<std::string, SetData> sets;
  std::set<double> all_times;

  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const auto fields = detail::split_csv(lines[row]);
    if (fields.size() != 4) throw ParseError("expected 4 fields", row + 1);
    const std::string set_id(fields[0]);
    const std::string sample_id(fields[1]);
    const double t = detail::parse_double(fields[2], row + 1);
    const double v = detail::parse_double(fields[3], row + 1);

    auto [set_it, set_inserted] = sets.try_emplace(set_id);
    if (set_inserted) set_order.push_back(set_id);
    auto [sample_it, sample_inserted] = set_it->second.samples.try_emplace(sample_id);
    if (sample_inserted) set_it->second.sample_order.push_back(sample_id);
    if (!sample_it->second.by_time.emplace(t, v).second)
      throw ParseError("duplicate cell for set '" + set_id + "' sample '" + sample_id + "'",
                       row + 1);
    all_times.insert(t);
  }
  if (set_order.empty()) throw ParseError("no data rows in '" + path.string() + "'", 1);

  std::vector<double> times(all_times.begin(), all_times.end());
  Grid grid = [&] {
    try {
      return Grid(times);
    } catch (const InvalidParameter& e) {
      throw ParseError(std::string("invalid time grid: ") + e.what(), lines.size());
    }
  }();

  std::vector<DataSet> out;
  out.reserve(set_order.size());
  for (const auto& set_id : set_order) {
    const SetData& sd = sets.at(set_id);
    std::vector<FunctionalSample> samples;
    samples.reserve(sd.sample_order.size());
    for (const auto& sample_id : sd.sample_order) {
      const SampleData& rec = sd.samples.at(sample_id);
      FunctionalSample s;
      s.reserve(times.size());
      for (double t : times) {
        const auto it = rec.by_time.find(t);
        if (it == rec.by_time.end())
          throw ParseError("missing value for set '" + set_id + "' sample '" + sample_id +
                               "' at t=" + format_double(t),
                           lines.size());
        s.push_back(it->second);
      }
      samples.push_back(std::move(s));
    }
    out.emplace_back(set_id, grid, std::move(samples));
  }
  return out;
}

// Loads one data set per file (wide) or all sets from one file (long) and
// validates the common grid.
inline std::vector<DataSet> load_datasets(const std::vector<std::filesystem::path>& paths,
                                          DataFormat format) {
  if (paths.empty()) throw EmptyInput("no input files given");
  std::vector<DataSet> out;
  if (format == DataFormat::Wide) {
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(load_wide_csv(p));
  } else {
    for (const auto& p : paths) {
      auto part = load_long_csv(p);
      out.insert(out.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
  }
  validate_common_grid(out);
  return out;
}

// One column per direction, one row per grid point, for auditing draws.
inline std::string directions_csv(const DirectionSet& dirs) {
  std::ostringstream out;
  for (std::size_t m = 0; m < dirs.count(); ++m) out << (m ? "," : "") << "direction_" << m;
  out << '\n';
  for (std::size_t i = 0; i < dirs.grid.size(); ++i) {
    for (std::size_t m = 0; m < dirs.count(); ++m)
      out << (m ? "," : "") << format_double(dirs.paths[m][i]);
    out << '\n';
  }
  return out.str();
}

inline std::string distance_matrix_csv(const DistanceMatrix& m, bool variances = false) {
  std::ostringstream out;
  out << "label";
  for (const auto& l : m.labels()) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.labels()[i];
    for (std::size_t j = 0; j < m.size(); ++j)
      out << ',' << format_double(variances ? m.var(i, j) : m.dist(i, j));
    out << '\n';
  }
  return out.str();
}

inline std::string partition_csv(const Partition& p) {
  std::ostringstream out;
  out << "label,cluster\n";
  for (const auto& [label, cluster] : p.assignment()) out << label << ',' << cluster << '\n';
  return out.str();
}

inline nlohmann::json dendrogram_json(const DendrogramModel& d) {
  nlohmann::json j;
  j["labels"] = d.labels;
  j["merges"] = nlohmann::json::array();
  for (const auto& m : d.merges) {
    nlohmann::json entry;
    entry["left"] = nlohmann::json::array();
    for (std::size_t idx : m.left) entry["left"].push_back(d.labels[idx]);
    entry["right"] = nlohmann::json::array();
    for (std::size_t idx : m.right) entry["right"].push_back(d.labels[idx]);
    entry["height"] = m.height;
    j["merges"].push_back(std::move(entry));
  }
  return j;
}

inline std::string report_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out << "model,N,sigma,proportion_correct,type1,type2\n";
  for (const auto& c : r.cells)
    out << model_name(r.model) << ',' << c.n_samples << ',' << c.sigma << ','
        << format_double(c.proportion_correct) << ',' << format_double(c.type1_rate) << ','
        << format_double(c.type2_rate) << '\n';
  return out.str();
}

// FNV-1a digest of a file's bytes, as fixed-width hex. Used to fingerprint
// inputs in run manifests.
inline std::string fnv1a_file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for digest");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char out[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) out[i] = hex[(h >> (60 - 4 * i)) & 0xF];
  out[16] = '\0';
  return std::string(out);
}

// Minimal SVG line chart: one polyline per series over a fixed y-range.
struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

inline std::string line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<ChartSeries>& series, double y_min = 0.0,
                                  double y_max = 1.0) {
  constexpr int width = 640, height = 420, left = 70, right = 30, top = 50, bottom = 60;
  double x_min = 0.0, x_max = 1.0;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      x_min = first ? x : std::min(x_min, x);
      x_max = first ? x : std::max(x_max, x);
      first = false;
    }
  if (x_max == x_min) x_max = x_min + 1.0;
  auto px = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  };
  auto py = [&](double y) {
    return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n"
      << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
      << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = y_min + (y_max - y_min) * i / 5.0;
    svg << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << y << "</text>\n"
        << "<line x1=\"" << left << "\" y1=\"" << py(y) << "\" x2=\"" << width - right
        << "\" y2=\"" << py(y) << "\" stroke=\"#dddddd\"/>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 5];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[s].points) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    for (const auto& [x, y] : series[s].points)
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    svg << "<text x=\"" << width - right - 4 << "\" y=\"" << top + 16 * (s + 1)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << series[s].name
        << "</text>\n";
  }
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      svg << "<text x=\"" << px(x) << "\" y=\"" << height - bottom + 16
          << "\" text-anchor=\"middle\" font-size=\"11\">" << x << "</text>\n";
    }
    break;  // x tick labels once, from the first series
  }
  svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << (top + height - bottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (top + height - bottom) / 2 << ")\">" << y_label << "</text>\n</svg>\n";
  return svg.str();
}

inline std::string report_chart_svg(const ExperimentReport& r) {
  std::map<std::size_t, ChartSeries> by_sigma;
  for (const auto& c : r.cells) {
    auto& s = by_sigma[c.sigma];
    s.name = "sigma=" + std::to_string(c.sigma);
    s.points.emplace_back(static_cast<double>(c.n_samples), c.proportion_correct);
  }
  std::vector<ChartSeries> series;
  for (auto& [sigma, s] : by_sigma) {
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }
  const std::string title =
      std::string("Proportion of correct partitions (") + model_name(r.model) + " model)";
  return line_chart_svg(title, "N (samples per set)", "proportion correct", series);
}

}  // namespace lawclust
