#include "fcmstop/imagery.hpp"

#include <png.h>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fcmstop/errors.hpp"

namespace fcmstop {
namespace fs = std::filesystem;

namespace {

constexpr std::array<Rgb, 8> kPalette = {{
    {230, 25, 75},    // red
    {60, 180, 75},    // green
    {0, 130, 200},    // blue
    {255, 225, 25},   // yellow
    {145, 30, 180},   // purple
    {70, 240, 240},   // cyan
    {245, 130, 48},   // orange
    {128, 128, 128},  // gray
}};

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool has_extension(const fs::path& path, const char* ext) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;
};

RgbImage decode_png(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IngestionError(path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RgbImage out;
  out.width = image.width;
  out.height = image.height;
  out.rgb.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.rgb.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IngestionError(path.string() + ": " + message);
  }
  return out;
}

// Binary PPM (P6), maxval <= 255.
RgbImage decode_ppm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) { throw IngestionError(path.string() + ": " + why); };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    std::size_t value = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) value = value * 10 + (bytes[pos++] - '0');
    if (pos == start) fail("malformed PPM header");
    return value;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') fail("not a binary PPM (P6)");
  pos = 2;
  RgbImage out;
  out.width = read_int();
  out.height = read_int();
  const std::size_t maxval = read_int();
  if (maxval == 0 || maxval > 255) fail("only 8-bit PPM is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) fail("malformed PPM header");
  ++pos;
  const std::size_t n = out.width * out.height * 3;
  if (out.width == 0 || out.height == 0) fail("empty image");
  if (bytes.size() - pos < n) fail("truncated pixel data");
  out.rgb.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  if (maxval != 255) {
    for (auto& v : out.rgb) v = static_cast<std::uint8_t>(std::lround(v * 255.0 / static_cast<double>(maxval)));
  }
  return out;
}

std::string to_hex(const unsigned char* data, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(2 * n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    out[2 * i] = kDigits[data[i] >> 4];
    out[2 * i + 1] = kDigits[data[i] & 0xf];
  }
  return out;
}

bool parse_double(std::string_view cell, double& value) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

}  // namespace

Rgb palette_color(std::size_t label) noexcept { return kPalette[label % kPalette.size()]; }

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  return to_hex(digest.data(), length);
}

std::string sha256_hex(const std::string& text) {
  return sha256_hex(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string corpus_fingerprint(std::span<const ImageRecord> corpus) {
  std::vector<std::pair<std::string, std::string>> entries;
  entries.reserve(corpus.size());
  for (const auto& r : corpus) entries.emplace_back(r.id, r.content_digest);
  std::sort(entries.begin(), entries.end());
  std::string joined;
  for (const auto& [id, digest] : entries) joined += id + '\t' + digest + '\n';
  return "sha256:" + sha256_hex(joined);
}

ImageRecord load_image_features(const fs::path& path) {
  const auto bytes = read_bytes(path);
  RgbImage image;
  if (has_extension(path, ".png")) {
    image = decode_png(bytes, path);
  } else if (has_extension(path, ".ppm")) {
    image = decode_ppm(bytes, path);
  } else {
    throw IngestionError(path.string() + ": unsupported image format (expected .png or .ppm)");
  }
  std::vector<double> values(image.rgb.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = image.rgb[k] / 255.0;

  ImageRecord record;
  record.id = path.stem().string();
  record.width = image.width;
  record.height = image.height;
  record.features = FeatureMatrix(image.width * image.height, 3, std::move(values));
  record.content_digest = sha256_hex(bytes);
  return record;
}

FeatureMatrix load_feature_csv(const fs::path& path, bool header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open " + path.string());
  std::vector<double> values;
  std::size_t n_cols = 0;
  std::size_t n_rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header && line_no == 1) continue;
    if (line.empty()) continue;
    std::size_t cols = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      double value = 0.0;
      if (!parse_double(rest.substr(0, comma), value)) {
        throw ParseError(path.string(), line_no, "non-numeric cell in column " + std::to_string(cols + 1));
      }
      if (!std::isfinite(value)) throw ParseError(path.string(), line_no, "non-finite value");
      values.push_back(value);
      ++cols;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (n_rows == 0) {
      n_cols = cols;
    } else if (cols != n_cols) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(n_cols) + " columns, found " + std::to_string(cols));
    }
    ++n_rows;
  }
  if (n_rows == 0) throw ParseError(path.string(), std::max<std::size_t>(line_no, 1), "no data rows");
  return FeatureMatrix(n_rows, n_cols, std::move(values));
}

ImageRecord load_feature_record(const fs::path& path, bool header) {
  ImageRecord record;
  record.id = path.stem().string();
  record.features = load_feature_csv(path, header);
  record.width = record.features.n_points();
  record.height = 1;
  record.content_digest = sha256_hex(read_bytes(path));
  return record;
}

void write_feature_csv(const FeatureMatrix& features, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << std::setprecision(17);
  for (std::size_t i = 0; i < features.n_points(); ++i) {
    for (std::size_t k = 0; k < features.n_dims(); ++k) out << (k ? "," : "") << features(i, k);
    out << '\n';
  }
}

void write_label_image(const LabelMap& map, const fs::path& path) {
  if (map.width * map.height != map.labels.size() || map.labels.empty()) {
    throw OutputError("label map dimensions do not match its label count");
  }
  if (map.n_labels < 1 || map.n_labels > 256) throw OutputError("palette must have 1..256 entries");
  for (Label l : map.labels) {
    if (l >= map.n_labels) throw OutputError("label " + std::to_string(l) + " outside the palette");
  }
  std::vector<std::uint8_t> colormap(map.n_labels * 3);
  for (std::size_t k = 0; k < map.n_labels; ++k) {
    const Rgb c = palette_color(k);
    colormap[3 * k] = c.r;
    colormap[3 * k + 1] = c.g;
    colormap[3 * k + 2] = c.b;
  }
  std::vector<std::uint8_t> indices(map.labels.begin(), map.labels.end());

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(map.width);
  image.height = static_cast<png_uint_32>(map.height);
  image.format = PNG_FORMAT_RGB_COLORMAP;
  image.colormap_entries = static_cast<png_uint_32>(map.n_labels);
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, indices.data(), 0, colormap.data())) {
    throw OutputError(path.string() + ": " + image.message);
  }
}

LabelMap read_label_image(const fs::path& path, std::size_t n_labels) {
  const RgbImage image = decode_png(read_bytes(path), path);
  LabelMap map;
  map.width = image.width;
  map.height = image.height;
  map.n_labels = n_labels;
  map.labels.resize(image.width * image.height);
  for (std::size_t p = 0; p < map.labels.size(); ++p) {
    const Rgb c{image.rgb[3 * p], image.rgb[3 * p + 1], image.rgb[3 * p + 2]};
    std::size_t k = 0;
    while (k < std::min<std::size_t>(n_labels, kPalette.size()) && !(palette_color(k) == c)) ++k;
    if (k == std::min<std::size_t>(n_labels, kPalette.size())) {
      throw IngestionError(path.string() + ": pixel " + std::to_string(p) + " is not a palette color");
    }
    map.labels[p] = static_cast<Label>(k);
  }
  return map;
}

void write_rgb_png(std::span<const std::uint8_t> rgb, std::size_t width, std::size_t height, const fs::path& path) {
  if (rgb.size() != width * height * 3) throw OutputError("RGB buffer size does not match dimensions");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, rgb.data(), 0, nullptr)) {
    throw OutputError(path.string() + ": " + image.message);
  }
}

void write_rgb_ppm(std::span<const std::uint8_t> rgb, std::size_t width, std::size_t height, const fs::path& path) {
  if (rgb.size() != width * height * 3) throw OutputError("RGB buffer size does not match dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << "P6\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
}

std::vector<fs::path> list_inputs(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IngestionError(dir.string() + " is not a directory");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto& p = entry.path();
    if (has_extension(p, ".png") || has_extension(p, ".ppm") || has_extension(p, ".csv")) paths.push_back(p);
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

std::vector<ImageRecord> load_corpus(const std::vector<fs::path>& paths, bool header) {
  std::vector<ImageRecord> corpus;
  corpus.reserve(paths.size());
  for (const auto& p : paths) {
    corpus.push_back(has_extension(p, ".csv") ? load_feature_record(p, header) : load_image_features(p));
  }
  return corpus;
}

void write_trace_csv(const ClusterTrace& trace, const fs::path& csv_path, const fs::path& labels_path) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw OutputError("cannot write " + csv_path.string());
  csv << "iter,objective,elapsed_seconds\n" << std::setprecision(17);
  for (std::size_t k = 0; k < trace.n_iterations(); ++k) {
    csv << k + 1 << ',' << trace.objectives[k] << ',' << trace.iter_times[k] << '\n';
  }
  std::ofstream labels(labels_path, std::ios::binary);
  if (!labels) throw OutputError("cannot write " + labels_path.string());
  for (const auto& row : trace.labels) {
    for (std::size_t i = 0; i < row.size(); ++i) labels << (i ? "," : "") << row[i];
    labels << '\n';
  }
}

}  // namespace fcmstop
