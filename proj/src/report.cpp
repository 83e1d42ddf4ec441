#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>

#include "hprec/bench.hpp"
#include "hprec/errors.hpp"

namespace hprec {

namespace {

constexpr std::string_view kRawHeader = "snr_db,algorithm,trial,rate_bps_hz,wall_time_us";
constexpr std::string_view kAggHeader = "snr_db,algorithm,mean_rate,std_rate,n";

// Shortest representation that parses back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("bad number in CSV: " + std::string(s));
  return v;
}

long long parse_int(std::string_view s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("bad integer in CSV: " + std::string(s));
  return v;
}

Algorithm parse_tag(std::string_view s) {
  const auto a = parse_algorithm(s);
  if (!a) throw IoError("unknown algorithm tag in CSV: " + std::string(s));
  return *a;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

// Reads data lines after checking the header; returns split rows.
std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path,
                                                 std::string_view header, std::size_t width) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != header)
    throw IoError("unexpected CSV header in " + path.string());
  std::vector<std::vector<std::string>> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != width) throw IoError("wrong column count in " + path.string());
    out.emplace_back(cells.begin(), cells.end());
  }
  return out;
}

}  // namespace

std::vector<AggregateRow> aggregate(std::span<const ResultRow> rows) {
  if (rows.empty()) throw EmptyInput("cannot aggregate an empty table");
  std::map<std::pair<double, Algorithm>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.snr_db, r.algorithm}].push_back(r.rate);

  std::vector<AggregateRow> out;
  out.reserve(groups.size());
  for (const auto& [key, rates] : groups) {
    const double n = static_cast<double>(rates.size());
    double mean = 0.0;
    for (double x : rates) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : rates) ss += (x - mean) * (x - mean);
    const double stddev = rates.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    out.push_back({key.first, key.second, mean, stddev, static_cast<int>(rates.size())});
  }
  return out;
}

void write_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << kRawHeader << '\n';
  for (const auto& r : rows) {
    os << fmt(r.snr_db) << ',' << to_string(r.algorithm) << ',' << r.trial << ',' << fmt(r.rate)
       << ',' << r.wall_time_us << '\n';
  }
  if (!os) throw IoError("write failed: " + path.string());
}

void write_csv(std::span<const AggregateRow> rows, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << kAggHeader << '\n';
  for (const auto& r : rows) {
    os << fmt(r.snr_db) << ',' << to_string(r.algorithm) << ',' << fmt(r.mean_rate) << ','
       << fmt(r.std_rate) << ',' << r.n << '\n';
  }
  if (!os) throw IoError("write failed: " + path.string());
}

std::vector<ResultRow> read_result_csv(const std::filesystem::path& path) {
  std::vector<ResultRow> out;
  for (const auto& c : read_table(path, kRawHeader, 5)) {
    out.push_back({parse_double(c[0]), parse_tag(c[1]), static_cast<int>(parse_int(c[2])),
                   parse_double(c[3]), parse_int(c[4])});
  }
  return out;
}

std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path) {
  std::vector<AggregateRow> out;
  for (const auto& c : read_table(path, kAggHeader, 5)) {
    out.push_back({parse_double(c[0]), parse_tag(c[1]), parse_double(c[2]), parse_double(c[3]),
                   static_cast<int>(parse_int(c[4]))});
  }
  return out;
}

void emit_svg(std::span<const AggregateRow> rows, const std::filesystem::path& path) {
  constexpr double width = 720, height = 480;
  constexpr double left = 70, right = 170, top = 30, bottom = 60;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b"};

  std::map<Algorithm, std::vector<std::pair<double, double>>> series;
  double xmin = 0, xmax = 1, ymax = 1;
  if (!rows.empty()) {
    xmin = xmax = rows.front().snr_db;
    ymax = 0;
    for (const auto& r : rows) {
      series[r.algorithm].emplace_back(r.snr_db, r.mean_rate);
      xmin = std::min(xmin, r.snr_db);
      xmax = std::max(xmax, r.snr_db);
      ymax = std::max(ymax, r.mean_rate);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax <= 0) ymax = 1;
  }
  ymax *= 1.05;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + plot_h - y / ymax * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double x = xmin + (xmax - xmin) * t / 5.0;
    const double y = ymax * t / 5.0;
    svg << "<text x=\"" << px(x) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << fmt(std::round(x * 100) / 100) << "</text>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << fmt(std::round(y * 100) / 100) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
  svg << "<text transform=\"translate(18," << top + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">Spectral efficiency (bps/Hz)</text>\n";

  int idx = 0;
  for (auto& [algorithm, points] : series) {
    std::sort(points.begin(), points.end());
    const char* color = palette[idx % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (p) svg << ' ';
      svg << px(points[p].first) << ',' << py(points[p].second);
    }
    svg << "\"/>\n";
    const double ly = top + 10 + 20 * idx;
    svg << "<line x1=\"" << left + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 45 << "\" y=\"" << ly + 4 << "\">"
        << to_string(algorithm) << "</text>\n";
    ++idx;
  }
  svg << "</svg>\n";

  auto os = open_out(path);
  os << svg.str();
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace hprec
