#include "batesqc/manifest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "batesqc/error.hpp"

namespace batesqc {

std::string_view to_string(Band band) noexcept {
  return band == Band::Top ? "top" : "bottom";
}

LoadFormat parse_load_format(std::string_view name) {
  if (name == "csv") return LoadFormat::Csv;
  if (name == "dat") return LoadFormat::Dat;
  if (name == "opt") return LoadFormat::Opt;
  throw Error(ErrorCode::InvalidArgument, "unknown load-file format '" + std::string(name) + "'");
}

namespace {

constexpr std::string_view kUtf8Bom = "\xEF\xBB\xBF";
constexpr std::string_view kThornUtf8 = "\xC3\xBE";
constexpr std::string_view kThornCp1252 = "\xFE";
constexpr std::string_view kDatSeparator = "\x14";

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

Error parse_error(std::string_view origin, std::size_t line, const std::string& what) {
  return Error(ErrorCode::ParseError,
               std::string(origin) + ":" + std::to_string(line) + ": " + what);
}

// Splits delimited text into rows. Quoted fields may span lines; blank lines
// are skipped.
std::vector<Row> split_delimited(std::string_view data, std::string_view delim,
                                 std::string_view quote, bool doubled_quote_escape,
                                 std::string_view origin) {
  std::vector<Row> rows;
  std::size_t pos = 0;
  std::size_t line = 1;
  const auto at = [&](std::string_view token) { return data.substr(pos, token.size()) == token; };
  const auto at_newline = [&] { return pos < data.size() && (data[pos] == '\n' || data[pos] == '\r'); };
  const auto consume_newline = [&] {
    if (data[pos] == '\r') ++pos;
    if (pos < data.size() && data[pos] == '\n') ++pos;
    ++line;
  };

  while (pos < data.size()) {
    Row row;
    row.line = line;
    bool row_done = false;
    while (!row_done) {
      std::string field;
      if (!quote.empty() && at(quote)) {
        const std::size_t open_line = line;
        pos += quote.size();
        bool closed = false;
        while (pos < data.size()) {
          if (at(quote)) {
            pos += quote.size();
            if (doubled_quote_escape && at(quote)) {
              field += quote;
              pos += quote.size();
              continue;
            }
            closed = true;
            break;
          }
          if (data[pos] == '\n') ++line;
          field += data[pos++];
        }
        if (!closed) throw parse_error(origin, open_line, "unterminated quoted field");
        if (pos < data.size() && !at(delim) && !at_newline()) {
          throw parse_error(origin, line, "unexpected character after closing quote");
        }
      } else {
        while (pos < data.size() && !at(delim) && !at_newline()) {
          if (!quote.empty() && at(quote)) {
            throw parse_error(origin, line, "quote inside unquoted field");
          }
          field += data[pos++];
        }
      }
      row.fields.push_back(std::move(field));
      if (pos >= data.size()) {
        row_done = true;
      } else if (at(delim)) {
        pos += delim.size();
      } else {
        consume_newline();
        row_done = true;
      }
    }
    const bool blank = row.fields.size() == 1 && row.fields.front().empty();
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string normalize_image_path(std::string_view raw) {
  std::string path = trim(raw);
  std::replace(path.begin(), path.end(), '\\', '/');
  return path;
}

std::vector<Band> parse_bands(std::string_view text, std::string_view origin, std::size_t line) {
  const std::string value = upper(trim(text));
  if (value == "BOTTOM") return {Band::Bottom};
  if (value == "TOP") return {Band::Top};
  if (value == "BOTH" || value == "BOTTOM;TOP" || value == "TOP;BOTTOM") {
    return {Band::Bottom, Band::Top};
  }
  throw parse_error(origin, line, "invalid stamp band '" + std::string(text) + "'");
}

TextEncoding detect_encoding(std::string_view bytes, TextEncoding requested) {
  if (requested != TextEncoding::Auto) return requested;
  if (bytes.substr(0, kUtf8Bom.size()) == kUtf8Bom) return TextEncoding::Utf8;
  if (bytes.find(kThornUtf8) != std::string_view::npos) return TextEncoding::Utf8;
  if (bytes.find(kThornCp1252) != std::string_view::npos) return TextEncoding::Windows1252;
  return TextEncoding::Utf8;
}

struct Columns {
  std::size_t bates;
  std::size_t image;
  std::optional<std::size_t> confidentiality;
  std::optional<std::size_t> doc_id;
  std::optional<std::size_t> bands;
};

Columns bind_columns(const Row& header, const FieldMap& fields, std::string_view origin) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    index.emplace(upper(trim(header.fields[i])), i);
  }
  const auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    auto it = index.find(upper(trim(name)));
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  const auto require = [&](const std::string& name) {
    auto col = find(name);
    if (!col) {
      throw Error(ErrorCode::MissingColumn,
                  std::string(origin) + ": header has no column '" + name + "'");
    }
    return *col;
  };
  Columns cols{require(fields.bates), require(fields.image), find(fields.confidentiality),
               find(fields.doc_id), find(fields.bands)};
  return cols;
}

std::vector<PageRecord> records_from_table(const std::vector<Row>& rows, const LoadOptions& options,
                                           std::string_view origin) {
  if (rows.empty()) {
    throw Error(ErrorCode::MissingColumn, std::string(origin) + ": missing header row");
  }
  const Columns cols = bind_columns(rows.front(), options.fields, origin);
  const std::size_t expected_fields = rows.front().fields.size();

  std::vector<PageRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.fields.size() != expected_fields) {
      throw parse_error(origin, row.line,
                        "expected " + std::to_string(expected_fields) + " fields, found " +
                            std::to_string(row.fields.size()));
    }
    PageRecord rec;
    const std::string bates_text = trim(row.fields[cols.bates]);
    try {
      rec.bates = parse_bates(bates_text, options.grammar);
    } catch (const Error& e) {
      throw parse_error(origin, row.line, e.what());
    }
    rec.image_path = normalize_image_path(row.fields[cols.image]);
    if (rec.image_path.empty()) throw parse_error(origin, row.line, "empty image path");
    rec.doc_id = cols.doc_id ? trim(row.fields[*cols.doc_id]) : std::string();
    if (rec.doc_id.empty()) rec.doc_id = bates_text;
    if (cols.confidentiality) {
      std::string conf = trim(row.fields[*cols.confidentiality]);
      if (!conf.empty()) rec.expected_confidentiality = upper(conf);
    }
    rec.stamp_bands = options.default_bands;
    if (cols.bands && !trim(row.fields[*cols.bands]).empty()) {
      rec.stamp_bands = parse_bands(row.fields[*cols.bands], origin, row.line);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<PageRecord> records_from_opt(std::string_view data, const LoadOptions& options,
                                         std::string_view origin) {
  // BATES,VOLUME,IMAGEPATH,DOCBREAK,FOLDERBREAK,BOXBREAK,PAGECOUNT
  const std::vector<Row> rows = split_delimited(data, ",", "", false, origin);
  std::vector<PageRecord> records;
  records.reserve(rows.size());
  std::string current_doc;
  for (const Row& row : rows) {
    if (row.fields.size() < 3) {
      throw parse_error(origin, row.line, "OPT line needs at least BATES,VOLUME,IMAGEPATH");
    }
    PageRecord rec;
    const std::string bates_text = trim(row.fields[0]);
    try {
      rec.bates = parse_bates(bates_text, options.grammar);
    } catch (const Error& e) {
      throw parse_error(origin, row.line, e.what());
    }
    rec.image_path = normalize_image_path(row.fields[2]);
    if (rec.image_path.empty()) throw parse_error(origin, row.line, "empty image path");
    const bool doc_break = row.fields.size() > 3 && upper(trim(row.fields[3])) == "Y";
    if (doc_break || current_doc.empty()) current_doc = bates_text;
    rec.doc_id = current_doc;
    rec.stamp_bands = options.default_bands;
    records.push_back(std::move(rec));
  }
  return records;
}

void assign_image_pages(std::vector<PageRecord>& records) {
  std::map<std::string, std::size_t> seen;
  for (PageRecord& rec : records) rec.image_page = seen[rec.image_path]++;
}

}  // namespace

std::string cp1252_to_utf8(std::string_view bytes) {
  // 0x80..0x9F differ from Latin-1; 0 marks the five undefined positions.
  static constexpr std::array<char32_t, 32> kHigh = {
      0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
      0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
      0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
      0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};
  std::string out;
  out.reserve(bytes.size());
  for (unsigned char c : bytes) {
    char32_t cp = c;
    if (c >= 0x80 && c <= 0x9F) cp = kHigh[c - 0x80] ? kHigh[c - 0x80] : 0xFFFD;
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }
  return out;
}

ProductionManifest make_manifest(std::vector<PageRecord> pages) {
  ProductionManifest manifest;
  if (!pages.empty()) {
    const BatesNumber& first = pages.front().bates;
    for (const PageRecord& rec : pages) {
      if (!same_series(rec.bates, first)) {
        throw Error(ErrorCode::MixedPrefix, render_bates(rec.bates) +
                                                " does not share prefix/width with " +
                                                render_bates(first));
      }
    }
    manifest.prefix = first.prefix;
    manifest.width = first.width;
    manifest.separator = first.separator;
  }
  std::stable_sort(pages.begin(), pages.end(), [](const PageRecord& a, const PageRecord& b) {
    return a.bates.value < b.bates.value;
  });
  for (std::size_t i = 1; i < pages.size(); ++i) {
    if (pages[i].bates.value == pages[i - 1].bates.value) {
      throw Error(ErrorCode::DuplicateBates, render_bates(pages[i].bates) + " appears twice");
    }
  }
  manifest.pages = std::move(pages);
  return manifest;
}

ProductionManifest parse_manifest(std::string_view bytes, const LoadOptions& options,
                                  std::string_view origin) {
  const TextEncoding encoding = detect_encoding(bytes, options.encoding);
  std::string text;
  if (encoding == TextEncoding::Utf8) {
    if (bytes.substr(0, kUtf8Bom.size()) == kUtf8Bom) bytes.remove_prefix(kUtf8Bom.size());
    text = std::string(bytes);
  }

  std::vector<PageRecord> records;
  switch (options.format) {
    case LoadFormat::Csv: {
      if (encoding == TextEncoding::Windows1252) text = cp1252_to_utf8(bytes);
      records = records_from_table(split_delimited(text, ",", "\"", true, origin), options, origin);
      break;
    }
    case LoadFormat::Dat: {
      if (encoding == TextEncoding::Utf8) {
        records = records_from_table(split_delimited(text, kDatSeparator, kThornUtf8, false, origin),
                                     options, origin);
      } else {
        std::vector<Row> rows = split_delimited(bytes, kDatSeparator, kThornCp1252, false, origin);
        for (Row& row : rows) {
          for (std::string& field : row.fields) field = cp1252_to_utf8(field);
        }
        records = records_from_table(rows, options, origin);
      }
      break;
    }
    case LoadFormat::Opt: {
      if (encoding == TextEncoding::Windows1252) text = cp1252_to_utf8(bytes);
      records = records_from_opt(text, options, origin);
      break;
    }
  }
  assign_image_pages(records);
  return make_manifest(std::move(records));
}

ProductionManifest load_manifest(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open load file " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read load file " + path.string());
  return parse_manifest(bytes, options, path.string());
}

}  // namespace batesqc
