#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "batesqc/manifest.hpp"

namespace batesqc {

enum class Corner { Left, Right };

std::string_view to_string(Corner corner) noexcept;

/// Where a region was cut from: the stamp band and, after splitting, the
/// corner.
struct RegionOrigin {
  Band band = Band::Bottom;
  std::optional<Corner> corner;
};

/// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct PageImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;
  std::string source_path;
  std::size_t page_index = 0;
  std::optional<RegionOrigin> origin;

  PageImage() = default;
  PageImage(int w, int h, int c, std::uint8_t fill = 255);

  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  /// Checks the dimension/buffer invariants; throws InvalidArgument.
  void validate() const;
};

/// Band height either as a fraction of the page height or in pixels.
struct BandHeight {
  bool absolute = false;
  double fraction = 0.10;
  int pixels = 0;

  static BandHeight of_fraction(double f) { return {false, f, 0}; }
  static BandHeight of_pixels(int px) { return {true, 0.0, px}; }
};

struct RegionSpec {
  Band band = Band::Bottom;
  BandHeight height;
  double split = 2.0 / 3.0;  // left (confidentiality) share of the width
  bool clamp = true;
};

/// round-half-up, used for every geometry boundary.
int round_half_up(double x);

/// Row range [begin, end) of the band for a page of `page_height` rows.
std::pair<int, int> band_rows(int page_height, const RegionSpec& spec);

/// Column where the right corner starts.
int split_column(int width, double split);

PageImage crop_band(const PageImage& img, const RegionSpec& spec);

std::pair<PageImage, PageImage> split_corners(const PageImage& band, double split);

enum class Interpolation { Nearest, Bilinear };

struct PreprocessOptions {
  bool grayscale = false;
  std::optional<int> rescale_to_height;
  std::optional<int> binarize_threshold;
  Interpolation interpolation = Interpolation::Bilinear;

  bool is_noop() const { return !grayscale && !rescale_to_height && !binarize_threshold; }
};

/// grayscale -> rescale -> binarize, each step optional.
PageImage preprocess(const PageImage& img, const PreprocessOptions& opts);

}  // namespace batesqc
