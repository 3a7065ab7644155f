#include "batesqc/image_io.hpp"

#include <png.h>
#include <tiffio.h>

#include <array>
#include <fstream>
#include <memory>
#include <mutex>

#include "batesqc/error.hpp"

namespace batesqc {

namespace {

enum class FileKind { Png, Tiff, Unknown };

FileKind sniff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open image " + path.string());
  std::array<unsigned char, 8> magic{};
  in.read(reinterpret_cast<char*>(magic.data()), magic.size());
  const auto got = in.gcount();
  if (got >= 8 && png_sig_cmp(magic.data(), 0, 8) == 0) return FileKind::Png;
  if (got >= 4 && ((magic[0] == 'I' && magic[1] == 'I' && magic[2] == 42 && magic[3] == 0) ||
                   (magic[0] == 'M' && magic[1] == 'M' && magic[2] == 0 && magic[3] == 42))) {
    return FileKind::Tiff;
  }
  return FileKind::Unknown;
}

PageImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::ImageDecode, path.string() + ": " + msg);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (image.width < 1 || image.height < 1) {
    png_image_free(&image);
    throw Error(ErrorCode::ImageDecode, path.string() + ": empty image");
  }
  PageImage out(static_cast<int>(image.width), static_cast<int>(image.height), color ? 3 : 1);
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&image, &white, out.pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::ImageDecode, path.string() + ": " + msg);
  }
  out.source_path = path.string();
  return out;
}

void silence_libtiff() {
  static std::once_flag once;
  std::call_once(once, [] {
    TIFFSetErrorHandler(nullptr);
    TIFFSetWarningHandler(nullptr);
  });
}

struct TiffCloser {
  void operator()(TIFF* t) const { TIFFClose(t); }
};
using TiffHandle = std::unique_ptr<TIFF, TiffCloser>;

TiffHandle open_tiff(const std::filesystem::path& path) {
  silence_libtiff();
  TiffHandle tif(TIFFOpen(path.c_str(), "r"));
  if (!tif) throw Error(ErrorCode::ImageDecode, path.string() + ": not a readable TIFF");
  return tif;
}

PageImage read_tiff_page(TIFF* tif, const std::filesystem::path& path, std::size_t page_index) {
  if (!TIFFSetDirectory(tif, static_cast<tdir_t>(page_index))) {
    throw Error(ErrorCode::ImageDecode,
                path.string() + ": no page " + std::to_string(page_index));
  }
  std::uint32_t w = 0;
  std::uint32_t h = 0;
  std::uint16_t spp = 1;
  TIFFGetField(tif, TIFFTAG_IMAGEWIDTH, &w);
  TIFFGetField(tif, TIFFTAG_IMAGELENGTH, &h);
  TIFFGetFieldDefaulted(tif, TIFFTAG_SAMPLESPERPIXEL, &spp);
  if (w < 1 || h < 1) throw Error(ErrorCode::ImageDecode, path.string() + ": empty TIFF page");

  std::vector<std::uint32_t> raster(static_cast<std::size_t>(w) * h);
  if (!TIFFReadRGBAImageOriented(tif, w, h, raster.data(), ORIENTATION_TOPLEFT, 0)) {
    throw Error(ErrorCode::ImageDecode, path.string() + ": cannot decode TIFF page " +
                                            std::to_string(page_index));
  }
  const bool color = spp >= 3;
  PageImage out(static_cast<int>(w), static_cast<int>(h), color ? 3 : 1);
  for (std::size_t i = 0; i < raster.size(); ++i) {
    const std::uint32_t px = raster[i];
    if (color) {
      out.pixels[i * 3] = static_cast<std::uint8_t>(TIFFGetR(px));
      out.pixels[i * 3 + 1] = static_cast<std::uint8_t>(TIFFGetG(px));
      out.pixels[i * 3 + 2] = static_cast<std::uint8_t>(TIFFGetB(px));
    } else {
      out.pixels[i] = static_cast<std::uint8_t>(TIFFGetR(px));
    }
  }
  out.source_path = path.string();
  out.page_index = page_index;
  return out;
}

}  // namespace

PageImage read_image(const std::filesystem::path& path, std::size_t page_index) {
  switch (sniff(path)) {
    case FileKind::Png:
      if (page_index != 0) {
        throw Error(ErrorCode::ImageDecode, path.string() + ": PNG has a single page");
      }
      return read_png(path);
    case FileKind::Tiff: {
      TiffHandle tif = open_tiff(path);
      return read_tiff_page(tif.get(), path, page_index);
    }
    case FileKind::Unknown:
      break;
  }
  throw Error(ErrorCode::ImageDecode, path.string() + ": unrecognized image format");
}

std::size_t count_pages(const std::filesystem::path& path) {
  switch (sniff(path)) {
    case FileKind::Png: return 1;
    case FileKind::Tiff: return TIFFNumberOfDirectories(open_tiff(path).get());
    case FileKind::Unknown: break;
  }
  throw Error(ErrorCode::ImageDecode, path.string() + ": unrecognized image format");
}

std::vector<PageImage> read_all_pages(const std::filesystem::path& path) {
  std::vector<PageImage> pages;
  if (sniff(path) != FileKind::Tiff) {
    pages.push_back(read_image(path));
    return pages;
  }
  TiffHandle tif = open_tiff(path);
  const std::size_t n = TIFFNumberOfDirectories(tif.get());
  for (std::size_t i = 0; i < n; ++i) pages.push_back(read_tiff_page(tif.get(), path, i));
  return pages;
}

void write_png(const std::filesystem::path& path, const PageImage& img) {
  img.validate();
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::IoError, "cannot write " + path.string() + ": " + msg);
  }
}

}  // namespace batesqc
