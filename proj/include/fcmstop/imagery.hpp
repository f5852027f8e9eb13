#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fcmstop/feature_matrix.hpp"
#include "fcmstop/fcm.hpp"

namespace fcmstop {

/// One clustering input. Images carry width/height; CSV inputs use width = n_points, height = 1.
struct ImageRecord {
  std::string id;
  std::size_t width = 0;
  std::size_t height = 0;
  FeatureMatrix features;
  std::string content_digest;  ///< hex SHA-256 of the source bytes
};

/// Per-pixel labels with a display palette of `n_labels` entries.
struct LabelMap {
  std::size_t width = 0;
  std::size_t height = 0;
  Labels labels;
  std::size_t n_labels = 0;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Fixed 8-color cycle; label k is drawn with palette_color(k).
Rgb palette_color(std::size_t label) noexcept;

/// PNG (8-bit gray/RGB/RGBA/palette) or binary PPM (P6) into row-major
/// pixels with channels scaled to [0, 1]. Alpha is dropped, gray is
/// replicated to three channels. Throws IngestionError naming the path.
ImageRecord load_image_features(const std::filesystem::path& path);

/// Numeric CSV, one point per row. `header` skips the first line.
/// Throws ParseError with the offending line number.
FeatureMatrix load_feature_csv(const std::filesystem::path& path, bool header = false);

/// CSV input wrapped as an ImageRecord (id = file stem).
ImageRecord load_feature_record(const std::filesystem::path& path, bool header = false);

/// Writes features with 17 significant digits so the loader round-trips them.
void write_feature_csv(const FeatureMatrix& features, const std::filesystem::path& path);

/// Indexed-color PNG, one palette entry per label.
void write_label_image(const LabelMap& map, const std::filesystem::path& path);

/// Inverse of write_label_image: palette lookup of each decoded pixel.
LabelMap read_label_image(const std::filesystem::path& path, std::size_t n_labels);

/// 8-bit RGB PNG from row-major interleaved bytes.
void write_rgb_png(std::span<const std::uint8_t> rgb, std::size_t width, std::size_t height,
                   const std::filesystem::path& path);

/// Binary PPM (P6).
void write_rgb_ppm(std::span<const std::uint8_t> rgb, std::size_t width, std::size_t height,
                   const std::filesystem::path& path);

/// All *.png, *.ppm and *.csv files directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> list_inputs(const std::filesystem::path& dir);

/// Loads every input; `header` applies to CSV files.
std::vector<ImageRecord> load_corpus(const std::vector<std::filesystem::path>& paths, bool header = false);

/// Trace as `iter,objective,elapsed_seconds` plus a sidecar with one label row per iteration.
void write_trace_csv(const ClusterTrace& trace, const std::filesystem::path& csv_path,
                     const std::filesystem::path& labels_path);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(const std::string& text);

/// Digest over the sorted (id, content digest) pairs of a corpus.
std::string corpus_fingerprint(std::span<const ImageRecord> corpus);

}  // namespace fcmstop
