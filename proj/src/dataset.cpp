#include "polarcp/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "polarcp/errors.hpp"

namespace polarcp {

namespace {

// Splits a CSV line on commas. No quoting: the format never emits quoted
// fields.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ValidationError("dataset: bad numeric field '" + std::string(field) +
                          "' on line " + std::to_string(line_no));
  }
  return v;
}

std::int64_t parse_id(std::string_view field, std::size_t line_no) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ValidationError("dataset: bad id field '" + std::string(field) +
                          "' on line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

std::string dataset_header(int feature_dim) {
  std::string h = "id";
  for (int i = 0; i < feature_dim; ++i) {
    h += ",f" + std::to_string(i);
  }
  h += ",gt_angle,gt_mag,pred_angle,pred_mag";
  return h;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_dataset_csv(std::ostream& os, std::span<const Sample> samples) {
  const int d = samples.empty() ? 0 : static_cast<int>(samples.front().features.size());
  os << "# angles in radians on (-pi, pi]; magnitudes normalized to the image "
        "diagonal (max sqrt(2))\n";
  os << dataset_header(d) << "\n";
  for (const Sample& s : samples) {
    os << s.id;
    for (double f : s.features) os << ',' << format_double(f);
    os << ',' << format_double(s.gt_angle) << ',' << format_double(s.gt_mag)
       << ',' << format_double(s.pred_angle) << ',' << format_double(s.pred_mag)
       << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path,
                       std::span<const Sample> samples) {
  std::ofstream os(path);
  if (!os) throw IoError("dataset: cannot open for writing: " + path.string());
  write_dataset_csv(os, samples);
  os.flush();
  if (!os) throw IoError("dataset: write failed: " + path.string());
}

std::vector<Sample> read_dataset_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  int feature_dim = -1;

  // Header: first non-comment line fixes the feature dimension.
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() < 5 || fields.front() != "id") {
      throw ValidationError("dataset: malformed header on line " +
                            std::to_string(line_no));
    }
    feature_dim = static_cast<int>(fields.size()) - 5;
    if (dataset_header(feature_dim) != line) {
      throw ValidationError("dataset: unexpected header columns on line " +
                            std::to_string(line_no));
    }
    break;
  }
  if (feature_dim < 0) throw ValidationError("dataset: missing header");

  std::vector<Sample> samples;
  const std::size_t expected = static_cast<std::size_t>(feature_dim) + 5;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() != expected) {
      throw ValidationError("dataset: expected " + std::to_string(expected) +
                            " fields, got " + std::to_string(fields.size()) +
                            " on line " + std::to_string(line_no));
    }
    Sample s;
    s.id = parse_id(fields[0], line_no);
    s.features.reserve(feature_dim);
    for (int i = 0; i < feature_dim; ++i) {
      s.features.push_back(parse_double(fields[1 + i], line_no));
    }
    s.gt_angle = parse_double(fields[expected - 4], line_no);
    s.gt_mag = parse_double(fields[expected - 3], line_no);
    s.pred_angle = parse_double(fields[expected - 2], line_no);
    s.pred_mag = parse_double(fields[expected - 1], line_no);
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<Sample> read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("dataset: cannot open for reading: " + path.string());
  return read_dataset_csv(is);
}

}  // namespace polarcp
