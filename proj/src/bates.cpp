#include "batesqc/bates.hpp"

#include <algorithm>

#include "batesqc/error.hpp"

namespace batesqc {

std::string_view separator_text(Separator sep) noexcept {
  switch (sep) {
    case Separator::None: return "";
    case Separator::Dash: return "-";
    case Separator::Underscore: return "_";
    case Separator::Space: return " ";
  }
  return "";
}

Separator parse_separator(std::string_view name) {
  if (name.empty() || name == "none") return Separator::None;
  if (name == "-" || name == "dash") return Separator::Dash;
  if (name == "_" || name == "underscore") return Separator::Underscore;
  if (name == " " || name == "space") return Separator::Space;
  throw Error(ErrorCode::InvalidArgument, "unknown separator '" + std::string(name) + "'");
}

bool BatesGrammar::in_alphabet(char c) const noexcept {
  return prefix_alphabet.find(c) != std::string::npos;
}

bool BatesGrammar::allows(Separator sep) const noexcept {
  return std::find(separators.begin(), separators.end(), sep) != separators.end();
}

std::uint64_t width_limit(int width) {
  if (width < 1 || width > kMaxBatesWidth) {
    throw Error(ErrorCode::InvalidArgument, "Bates width out of range: " + std::to_string(width));
  }
  std::uint64_t limit = 1;
  for (int i = 0; i < width; ++i) limit *= 10;
  return limit;
}

BatesNumber parse_bates(std::string_view text, const BatesGrammar& grammar) {
  auto fail = [&](const char* why) {
    return Error(ErrorCode::InvalidFormat, "'" + std::string(text) + "': " + why);
  };

  std::size_t pos = 0;
  while (pos < text.size() && grammar.in_alphabet(text[pos])) ++pos;
  if (pos == 0) throw fail("missing prefix");

  BatesNumber out;
  out.prefix = std::string(text.substr(0, pos));

  if (pos < text.size()) {
    for (Separator sep : {Separator::Dash, Separator::Underscore, Separator::Space}) {
      if (text[pos] == separator_text(sep)[0]) {
        if (!grammar.allows(sep)) throw fail("separator not allowed");
        out.separator = sep;
        ++pos;
        break;
      }
    }
  }
  if (out.separator == Separator::None && !grammar.allows(Separator::None)) {
    throw fail("separator required");
  }

  const std::size_t digits_begin = pos;
  std::uint64_t value = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') throw fail("illegal character after prefix");
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (pos - digits_begin >= static_cast<std::size_t>(kMaxBatesWidth)) throw fail("too many digits");
  }
  if (pos == digits_begin) throw fail("missing digits");

  out.value = value;
  out.width = static_cast<int>(pos - digits_begin);
  return out;
}

std::string render_bates(const BatesNumber& bates) {
  std::string digits = std::to_string(bates.value);
  if (digits.size() < static_cast<std::size_t>(bates.width)) {
    digits.insert(0, static_cast<std::size_t>(bates.width) - digits.size(), '0');
  }
  std::string out = bates.prefix;
  out += separator_text(bates.separator);
  out += digits;
  return out;
}

BatesNumber successor(const BatesNumber& bates) {
  if (bates.value + 1 >= width_limit(bates.width)) {
    throw Error(ErrorCode::Overflow, render_bates(bates) + " has no successor at width " +
                                         std::to_string(bates.width));
  }
  BatesNumber next = bates;
  ++next.value;
  return next;
}

bool same_series(const BatesNumber& a, const BatesNumber& b) noexcept {
  return a.prefix == b.prefix && a.separator == b.separator && a.width == b.width;
}

}  // namespace batesqc
