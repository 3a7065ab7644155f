#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace batesqc {

enum class Separator { None, Dash, Underscore, Space };

/// The literal text of a separator; empty for Separator::None.
std::string_view separator_text(Separator sep) noexcept;

/// Maps "", "none", "-", "_", " ", "space", "dash", "underscore".
Separator parse_separator(std::string_view name);

/// A Bates endorsement: alphabetic prefix, optional separator and a
/// zero-padded fixed-width page number.
struct BatesNumber {
  std::string prefix;
  Separator separator = Separator::None;
  std::uint64_t value = 0;
  int width = 1;

  friend bool operator==(const BatesNumber&, const BatesNumber&) = default;
};

/// Widest digit run representable in a 64-bit value.
inline constexpr int kMaxBatesWidth = 18;

struct BatesGrammar {
  std::string prefix_alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::vector<Separator> separators = {Separator::None, Separator::Dash,
                                       Separator::Underscore, Separator::Space};

  bool in_alphabet(char c) const noexcept;
  bool allows(Separator sep) const noexcept;
};

/// Parses PREFIX[SEP]DIGITS. The width is the number of digits as written.
/// Throws Error(InvalidFormat) for anything else, including suffixed forms
/// such as "ABC0000123.001".
BatesNumber parse_bates(std::string_view text, const BatesGrammar& grammar = {});

std::string render_bates(const BatesNumber& bates);

/// Next number at the same width. Throws Error(Overflow) when the value
/// would need another digit.
BatesNumber successor(const BatesNumber& bates);

/// 10^width, the exclusive upper bound for a value of that width.
std::uint64_t width_limit(int width);

/// Same prefix, separator and width.
bool same_series(const BatesNumber& a, const BatesNumber& b) noexcept;

}  // namespace batesqc
