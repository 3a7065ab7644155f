#include "batesqc/font.hpp"

#include <cctype>

namespace batesqc::font {

namespace {

using Glyph = std::array<std::uint8_t, kGlyphRows>;

constexpr Glyph g(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d, std::uint8_t e,
                  std::uint8_t f, std::uint8_t h) {
  return {a, b, c, d, e, f, h};
}

// clang-format off
constexpr Glyph kDigits[10] = {
  g(0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110),  // 0
  g(0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110),  // 1
  g(0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111),  // 2
  g(0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110),  // 3
  g(0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010),  // 4
  g(0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110),  // 5
  g(0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110),  // 6
  g(0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000),  // 7
  g(0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110),  // 8
  g(0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100),  // 9
};

constexpr Glyph kLetters[26] = {
  g(0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001),  // A
  g(0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110),  // B
  g(0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110),  // C
  g(0b11100, 0b10010, 0b10001, 0b10001, 0b10001, 0b10010, 0b11100),  // D
  g(0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111),  // E
  g(0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000),  // F
  g(0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111),  // G
  g(0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001),  // H
  g(0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110),  // I
  g(0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100),  // J
  g(0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001),  // K
  g(0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111),  // L
  g(0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001),  // M
  g(0b10001, 0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001),  // N
  g(0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110),  // O
  g(0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000),  // P
  g(0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101),  // Q
  g(0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001),  // R
  g(0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110),  // S
  g(0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100),  // T
  g(0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110),  // U
  g(0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100),  // V
  g(0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010),  // W
  g(0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001),  // X
  g(0b10001, 0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100),  // Y
  g(0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111),  // Z
};

constexpr Glyph kDash   = g(0, 0, 0, 0b11111, 0, 0, 0);
constexpr Glyph kUnder  = g(0, 0, 0, 0, 0, 0, 0b11111);
constexpr Glyph kColon  = g(0, 0b01100, 0b01100, 0, 0b01100, 0b01100, 0);
constexpr Glyph kPeriod = g(0, 0, 0, 0, 0, 0b01100, 0b01100);
constexpr Glyph kSlash  = g(0b00001, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b10000);
// clang-format on

}  // namespace

const std::array<std::uint8_t, kGlyphRows>* glyph(char c) noexcept {
  const auto u = static_cast<unsigned char>(std::toupper(static_cast<unsigned char>(c)));
  if (u >= '0' && u <= '9') return &kDigits[u - '0'];
  if (u >= 'A' && u <= 'Z') return &kLetters[u - 'A'];
  switch (u) {
    case '-': return &kDash;
    case '_': return &kUnder;
    case ':': return &kColon;
    case '.': return &kPeriod;
    case '/': return &kSlash;
    default: return nullptr;
  }
}

int text_width(std::string_view text, int scale) noexcept {
  if (text.empty()) return 0;
  return (static_cast<int>(text.size()) * kAdvance - 1) * scale;
}

int text_height(int scale) noexcept { return kGlyphRows * scale; }

void draw_text(PageImage& img, int x, int y, std::string_view text, int scale, std::uint8_t ink) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto* rows = glyph(text[i]);
    if (!rows) continue;
    const int gx = x + static_cast<int>(i) * kAdvance * scale;
    for (int r = 0; r < kGlyphRows; ++r) {
      for (int col = 0; col < kGlyphCols; ++col) {
        if (!((*rows)[r] & (1u << (kGlyphCols - 1 - col)))) continue;
        for (int dy = 0; dy < scale; ++dy) {
          const int py = y + r * scale + dy;
          if (py < 0 || py >= img.height) continue;
          for (int dx = 0; dx < scale; ++dx) {
            const int px = gx + col * scale + dx;
            if (px < 0 || px >= img.width) continue;
            for (int ch = 0; ch < img.channels; ++ch) img.at(px, py, ch) = ink;
          }
        }
      }
    }
  }
}

}  // namespace batesqc::font
