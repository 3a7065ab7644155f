#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "batesqc/image.hpp"

namespace batesqc::font {

/// Fixed-metric 5x7 bitmap font: uppercase letters, digits and a little
/// punctuation. Lowercase renders as uppercase; unknown characters render
/// blank.
inline constexpr int kGlyphCols = 5;
inline constexpr int kGlyphRows = 7;
inline constexpr int kAdvance = kGlyphCols + 1;

/// Row bitmasks, bit 4 = leftmost column. Null when the glyph is blank.
const std::array<std::uint8_t, kGlyphRows>* glyph(char c) noexcept;

int text_width(std::string_view text, int scale) noexcept;
int text_height(int scale) noexcept;

/// Draws with the top-left corner at (x, y); pixels outside the image are
/// clipped.
void draw_text(PageImage& img, int x, int y, std::string_view text, int scale,
               std::uint8_t ink = 0);

}  // namespace batesqc::font
