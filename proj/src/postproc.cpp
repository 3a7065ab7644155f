#include "batesqc/postproc.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "batesqc/error.hpp"

namespace batesqc {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_o(char c) { return c == 'O' || c == 'o'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// A separator char that survives whitespace normalization, if any.
std::optional<char> literal_separator(Separator sep) {
  if (sep == Separator::Dash) return '-';
  if (sep == Separator::Underscore) return '_';
  return std::nullopt;
}

struct DigitZone {
  std::string digits;  // before any O/0 mapping
  bool separator_found = false;
};

// The separator may only be preceded by characters that can be read as
// leading zeros (the surplus-O case lands the O before the separator).
DigitZone split_digit_zone(std::string_view rest, Separator sep) {
  DigitZone zone;
  if (auto c = literal_separator(sep)) {
    const auto k = rest.find(*c);
    if (k != std::string_view::npos &&
        std::all_of(rest.begin(), rest.begin() + k, [](char ch) { return is_o(ch) || ch == '0'; })) {
      zone.digits = std::string(rest.substr(0, k));
      zone.digits += rest.substr(k + 1);
      zone.separator_found = true;
      return zone;
    }
  }
  zone.digits = std::string(rest);
  return zone;
}

bool map_o_to_zero(std::string& digits) {
  bool changed = false;
  for (char& c : digits) {
    if (is_o(c)) {
      c = '0';
      changed = true;
    }
  }
  return changed;
}

bool trim_surplus_zeros(std::string& digits, int width) {
  const auto w = static_cast<std::size_t>(width);
  if (digits.size() <= w) return false;
  if (!std::all_of(digits.begin(), digits.end(), is_digit)) return false;
  const std::size_t surplus = digits.size() - w;
  if (!std::all_of(digits.begin(), digits.begin() + surplus, [](char c) { return c == '0'; })) {
    return false;
  }
  digits.erase(0, surplus);
  return true;
}

std::string remove_whitespace_upper(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!is_space(c)) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

void CorrectionConfig::normalize() {
  if (expected_prefix.empty()) throw Error(ErrorCode::InvalidArgument, "expected prefix is empty");
  if (expected_width < 1 || expected_width > kMaxBatesWidth) {
    throw Error(ErrorCode::InvalidArgument, "expected width out of range");
  }
  if (!(conf_max_distance >= 0.0 && conf_max_distance < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidentiality threshold must lie in [0, 1)");
  }
  std::vector<std::string> unique;
  for (const std::string& entry : conf_vocabulary) {
    std::string norm = to_upper(entry);
    if (norm.empty()) continue;
    if (std::find(unique.begin(), unique.end(), norm) == unique.end()) unique.push_back(norm);
  }
  if (unique.empty()) throw Error(ErrorCode::InvalidArgument, "confidentiality vocabulary is empty");
  conf_vocabulary = std::move(unique);
}

std::string_view to_string(CorrectionFailure failure) noexcept {
  switch (failure) {
    case CorrectionFailure::EmptyText: return "EmptyText";
    case CorrectionFailure::PrefixNotFound: return "PrefixNotFound";
    case CorrectionFailure::WidthMismatch: return "WidthMismatch";
    case CorrectionFailure::Unparseable: return "Unparseable";
  }
  return "Unknown";
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!is_space(c)) out += c;
  }
  return out;
}

std::string repair_digits(std::string_view text, const CorrectionConfig& cfg) {
  const auto at = text.find(cfg.expected_prefix);
  if (cfg.expected_prefix.empty() || at == std::string_view::npos) {
    throw Error(ErrorCode::PrefixNotFound,
                "'" + cfg.expected_prefix + "' not found in '" + std::string(text) + "'");
  }
  const std::string_view rest = text.substr(at + cfg.expected_prefix.size());
  DigitZone zone = split_digit_zone(rest, cfg.separator);
  map_o_to_zero(zone.digits);
  trim_surplus_zeros(zone.digits, cfg.expected_width);

  std::string out = cfg.expected_prefix;
  if (zone.separator_found) out += separator_text(cfg.separator);
  out += zone.digits;
  return out;
}

StampExtraction correct(std::string_view raw, const CorrectionConfig& cfg) {
  StampExtraction ex;
  ex.raw_text = std::string(raw);
  auto fail = [&](CorrectionFailure why) {
    ex.failure = why;
    return ex;
  };

  const std::string text = normalize_whitespace(raw);
  if (text.size() != raw.size()) ex.applied_rules.emplace_back(rule::kWhitespace);
  if (text.empty()) return fail(CorrectionFailure::EmptyText);

  const auto at = text.find(cfg.expected_prefix);
  if (cfg.expected_prefix.empty() || at == std::string::npos) {
    return fail(CorrectionFailure::PrefixNotFound);
  }
  if (at > 0) ex.applied_rules.emplace_back(rule::kPrefixAnchor);

  const std::string_view rest = std::string_view(text).substr(at + cfg.expected_prefix.size());
  DigitZone zone = split_digit_zone(rest, cfg.separator);
  if (map_o_to_zero(zone.digits)) ex.applied_rules.emplace_back(rule::kOToZero);
  if (trim_surplus_zeros(zone.digits, cfg.expected_width)) {
    ex.applied_rules.emplace_back(rule::kWidthRepair);
  }
  if (zone.digits.empty() || !std::all_of(zone.digits.begin(), zone.digits.end(), is_digit)) {
    return fail(CorrectionFailure::Unparseable);
  }
  if (zone.digits.size() != static_cast<std::size_t>(cfg.expected_width)) {
    return fail(CorrectionFailure::WidthMismatch);
  }
  if (literal_separator(cfg.separator) && !zone.separator_found) {
    ex.applied_rules.emplace_back(rule::kSeparator);
  }

  BatesGrammar grammar;
  grammar.prefix_alphabet.clear();
  for (char c : cfg.expected_prefix) {
    if (grammar.prefix_alphabet.find(c) == std::string::npos) grammar.prefix_alphabet += c;
  }
  try {
    BatesNumber parsed = parse_bates(cfg.expected_prefix + zone.digits, grammar);
    parsed.separator = cfg.separator;
    ex.corrected = std::move(parsed);
  } catch (const Error&) {
    return fail(CorrectionFailure::Unparseable);
  }
  return ex;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

std::optional<std::string> match_confidentiality(std::string_view raw,
                                                 const CorrectionConfig& cfg) {
  const std::string text = remove_whitespace_upper(raw);
  if (text.empty()) return std::nullopt;

  std::optional<std::string> best;
  double best_score = std::numeric_limits<double>::infinity();
  for (const std::string& entry : cfg.conf_vocabulary) {
    const std::string target = remove_whitespace_upper(entry);
    if (target.empty()) continue;
    const double score = static_cast<double>(levenshtein(text, target)) /
                         static_cast<double>(std::max(text.size(), target.size()));
    if (score < best_score) {
      best_score = score;
      best = entry;
    }
  }
  if (best && best_score <= cfg.conf_max_distance) return best;
  return std::nullopt;
}

std::vector<BatesNumber> find_bates_tokens(std::string_view raw, const CorrectionConfig& cfg) {
  const std::string text = normalize_whitespace(raw);
  const auto sep = literal_separator(cfg.separator);
  const auto is_zone_char = [&](char c) { return is_digit(c) || is_o(c) || (sep && c == *sep); };
  const auto w = static_cast<std::size_t>(cfg.expected_width);

  // Longest zone prefix of text[begin, end) that repairs to exactly the
  // expected width; returns the consumed length or 0.
  const auto try_zone = [&](std::size_t begin, std::size_t end, std::string& digits_out) {
    for (std::size_t len = end - begin; len > 0; --len) {
      DigitZone zone = split_digit_zone(std::string_view(text).substr(begin, len), cfg.separator);
      map_o_to_zero(zone.digits);
      trim_surplus_zeros(zone.digits, cfg.expected_width);
      if (zone.digits.size() == w && std::all_of(zone.digits.begin(), zone.digits.end(), is_digit)) {
        digits_out = std::move(zone.digits);
        return len;
      }
    }
    return std::size_t{0};
  };

  std::vector<BatesNumber> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t run_end = i;
    if (cfg.double_stamp_any_prefix) {
      while (run_end < text.size() && is_upper(text[run_end])) ++run_end;
    } else if (text.compare(i, cfg.expected_prefix.size(), cfg.expected_prefix) == 0) {
      run_end = i + cfg.expected_prefix.size();
    }
    if (run_end == i) {
      ++i;
      continue;
    }

    const auto try_prefix_end = [&](std::size_t prefix_end) {
      std::size_t zone_end = prefix_end;
      while (zone_end < text.size() && is_zone_char(text[zone_end])) ++zone_end;
      if (zone_end == prefix_end) return false;
      std::string digits;
      const std::size_t used = try_zone(prefix_end, zone_end, digits);
      if (used == 0) return false;
      BatesNumber b;
      b.prefix = text.substr(i, prefix_end - i);
      b.separator = cfg.separator;
      b.width = cfg.expected_width;
      b.value = std::stoull(digits);
      tokens.push_back(std::move(b));
      i = prefix_end + used;
      return true;
    };

    // Trailing O's of a letter run may belong to the digit zone. The
    // expected prefix wins when only O's follow it in the run.
    bool found = false;
    const std::size_t expected_end = i + cfg.expected_prefix.size();
    if (expected_end < run_end && text.compare(i, cfg.expected_prefix.size(), cfg.expected_prefix) == 0 &&
        std::all_of(text.begin() + static_cast<std::ptrdiff_t>(expected_end),
                    text.begin() + static_cast<std::ptrdiff_t>(run_end), is_o)) {
      found = try_prefix_end(expected_end);
    }
    for (std::size_t prefix_end = run_end; !found && prefix_end > i; --prefix_end) {
      if (prefix_end < run_end && !is_o(text[prefix_end])) break;
      found = try_prefix_end(prefix_end);
    }
    if (!found) i = cfg.double_stamp_any_prefix ? run_end : i + 1;
  }
  return tokens;
}

}  // namespace batesqc
