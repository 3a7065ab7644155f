#include "batesqc/image.hpp"

#include <algorithm>
#include <cmath>

#include "batesqc/error.hpp"

namespace batesqc {

std::string_view to_string(Corner corner) noexcept {
  return corner == Corner::Left ? "left" : "right";
}

PageImage::PageImage(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c) {
  if (w < 1 || h < 1 || (c != 1 && c != 3)) {
    throw Error(ErrorCode::InvalidArgument, "invalid image dimensions");
  }
  pixels.assign(static_cast<std::size_t>(w) * h * c, fill);
}

void PageImage::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidArgument, "empty image");
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::InvalidArgument, "unsupported channel count");
  }
  if (pixels.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::InvalidArgument, "pixel buffer does not match dimensions");
  }
}

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

std::pair<int, int> band_rows(int page_height, const RegionSpec& spec) {
  int h = 0;
  if (spec.height.absolute) {
    if (spec.height.pixels < 0) {
      throw Error(ErrorCode::InvalidArgument, "negative band height");
    }
    h = spec.height.pixels;
  } else {
    const double f = spec.height.fraction;
    if (!(f > 0.0 && f <= 0.5)) {
      throw Error(ErrorCode::InvalidArgument, "band fraction must lie in (0, 0.5]");
    }
    h = round_half_up(f * page_height);
  }
  if (spec.clamp) {
    h = std::clamp(h, 1, page_height);
  } else if (h < 1 || h > page_height) {
    throw Error(ErrorCode::DegenerateRegion,
                "band height " + std::to_string(h) + " outside [1, " +
                    std::to_string(page_height) + "]");
  }
  if (spec.band == Band::Bottom) return {page_height - h, page_height};
  return {0, h};
}

int split_column(int width, double split) {
  if (!(split > 0.0 && split < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "split must lie in (0, 1)");
  }
  return round_half_up(split * width);
}

namespace {

PageImage sub_image(const PageImage& img, int x0, int y0, int w, int h) {
  PageImage out(w, h, img.channels);
  const std::size_t row_bytes = static_cast<std::size_t>(w) * img.channels;
  for (int y = 0; y < h; ++y) {
    const auto* src = &img.pixels[(static_cast<std::size_t>(y0 + y) * img.width + x0) * img.channels];
    std::copy(src, src + row_bytes, &out.pixels[static_cast<std::size_t>(y) * row_bytes]);
  }
  out.source_path = img.source_path;
  out.page_index = img.page_index;
  out.origin = img.origin;
  return out;
}

}  // namespace

PageImage crop_band(const PageImage& img, const RegionSpec& spec) {
  img.validate();
  const auto [begin, end] = band_rows(img.height, spec);
  PageImage band = sub_image(img, 0, begin, img.width, end - begin);
  band.origin = RegionOrigin{spec.band, std::nullopt};
  return band;
}

std::pair<PageImage, PageImage> split_corners(const PageImage& band, double split) {
  band.validate();
  const int x = split_column(band.width, split);
  if (x <= 0 || x >= band.width) {
    throw Error(ErrorCode::DegenerateRegion,
                "split at column " + std::to_string(x) + " leaves an empty corner for width " +
                    std::to_string(band.width));
  }
  PageImage left = sub_image(band, 0, 0, x, band.height);
  PageImage right = sub_image(band, x, 0, band.width - x, band.height);
  const Band which = band.origin ? band.origin->band : Band::Bottom;
  left.origin = RegionOrigin{which, Corner::Left};
  right.origin = RegionOrigin{which, Corner::Right};
  return {std::move(left), std::move(right)};
}

namespace {

PageImage to_gray(const PageImage& img) {
  if (img.channels == 1) return img;
  PageImage out(img.width, img.height, 1);
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned r = img.pixels[i * 3];
    const unsigned g = img.pixels[i * 3 + 1];
    const unsigned b = img.pixels[i * 3 + 2];
    out.pixels[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
  }
  out.source_path = img.source_path;
  out.page_index = img.page_index;
  out.origin = img.origin;
  return out;
}

PageImage rescale(const PageImage& img, int target_height, Interpolation mode) {
  if (target_height < 1) throw Error(ErrorCode::InvalidArgument, "rescale target must be >= 1");
  if (target_height == img.height) return img;
  const double scale = static_cast<double>(target_height) / img.height;
  const int target_width = std::max(1, round_half_up(img.width * scale));
  PageImage out(target_width, target_height, img.channels);
  const double sx = static_cast<double>(img.width) / target_width;
  const double sy = static_cast<double>(img.height) / target_height;

  for (int y = 0; y < target_height; ++y) {
    for (int x = 0; x < target_width; ++x) {
      if (mode == Interpolation::Nearest) {
        const int src_x = std::min(img.width - 1, static_cast<int>((x + 0.5) * sx));
        const int src_y = std::min(img.height - 1, static_cast<int>((y + 0.5) * sy));
        for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = img.at(src_x, src_y, c);
        continue;
      }
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
      const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
      const int x0 = static_cast<int>(fx);
      const int y0 = static_cast<int>(fy);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const int y1 = std::min(y0 + 1, img.height - 1);
      const double ax = fx - x0;
      const double ay = fy - y0;
      for (int c = 0; c < img.channels; ++c) {
        const double top = img.at(x0, y0, c) * (1 - ax) + img.at(x1, y0, c) * ax;
        const double bottom = img.at(x0, y1, c) * (1 - ax) + img.at(x1, y1, c) * ax;
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(
            round_half_up(top * (1 - ay) + bottom * ay), 0, 255));
      }
    }
  }
  out.source_path = img.source_path;
  out.page_index = img.page_index;
  out.origin = img.origin;
  return out;
}

}  // namespace

PageImage preprocess(const PageImage& img, const PreprocessOptions& opts) {
  img.validate();
  if (opts.binarize_threshold && (*opts.binarize_threshold < 0 || *opts.binarize_threshold > 255)) {
    throw Error(ErrorCode::InvalidArgument, "binarize threshold must lie in [0, 255]");
  }
  PageImage out = opts.grayscale ? to_gray(img) : img;
  if (opts.rescale_to_height) out = rescale(out, *opts.rescale_to_height, opts.interpolation);
  if (opts.binarize_threshold) {
    const int t = *opts.binarize_threshold;
    for (auto& p : out.pixels) p = p >= t ? 255 : 0;
  }
  return out;
}

}  // namespace batesqc
