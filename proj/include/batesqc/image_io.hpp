#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "batesqc/image.hpp"

namespace batesqc {

/// Decodes page `page_index` of a PNG or TIFF file (format sniffed from the
/// magic bytes). PNG has a single page. Throws ImageDecode or IoError.
PageImage read_image(const std::filesystem::path& path, std::size_t page_index = 0);

/// Number of pages in the file (TIFF directories; 1 for PNG).
std::size_t count_pages(const std::filesystem::path& path);

/// Every page of the file, in order.
std::vector<PageImage> read_all_pages(const std::filesystem::path& path);

/// Writes an 8-bit gray or RGB PNG. Throws IoError.
void write_png(const std::filesystem::path& path, const PageImage& img);

}  // namespace batesqc
