#include "batesqc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "batesqc/detail/batch_pool.hpp"
#include "batesqc/error.hpp"
#include "batesqc/font.hpp"
#include "batesqc/image_io.hpp"

namespace batesqc {

std::string_view to_string(FaultKind kind) noexcept {
  switch (kind) {
    case FaultKind::ConfMissing: return "conf_missing";
    case FaultKind::OmitBates: return "omit_bates";
    case FaultKind::WrongBates: return "wrong_bates";
    case FaultKind::DoubleStamp: return "double_stamp";
  }
  return "unknown";
}

std::string_view to_string(Corruption c) noexcept {
  switch (c) {
    case Corruption::Newlines: return "newlines";
    case Corruption::Space: return "space";
    case Corruption::ZeroToO: return "zero_to_o";
    case Corruption::PrefixExtraO: return "prefix_extra_o";
  }
  return "unknown";
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t page_hash(std::uint64_t seed, std::string_view tag, std::size_t index) noexcept {
  return mix64(mix64(seed ^ hash_tag(tag)) + index);
}

double unit_interval(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

bool fault_selected(std::uint64_t seed, std::string_view tag, std::size_t index, double rate) {
  if (rate <= 0.0) return false;
  if (rate >= 1.0) return true;
  const double phase = unit_interval(mix64(seed ^ hash_tag(tag)));
  const auto i = static_cast<double>(index);
  return std::floor((i + 1.0) * rate + phase) > std::floor(i * rate + phase);
}

void CorpusSpec::validate() const {
  auto bad = [](const std::string& what) { return Error(ErrorCode::InvalidArgument, what); };
  if (pages < 1) throw bad("corpus needs at least one page");
  for (double r : {conf_missing_rate, fault_rates.omit_bates, fault_rates.wrong_bates,
                   fault_rates.double_stamp}) {
    if (!(r >= 0.0 && r <= 1.0)) throw bad("fault rates must lie in [0, 1]");
  }
  if (prefix.empty() || double_stamp_prefix.empty()) throw bad("prefix must not be empty");
  for (char c : prefix + double_stamp_prefix) {
    if (c < 'A' || c > 'Z') throw bad("prefix must be uppercase A-Z");
  }
  if (start_value + pages > width_limit(width)) throw bad("corpus overflows the digit width");
  if (page_width < 16 || page_height < 16) throw bad("page too small");
  if (conf_vocabulary.empty()) throw bad("confidentiality vocabulary is empty");
  if (workers < 1) throw bad("workers must be >= 1");
}

namespace {

struct PagePlan {
  PageRecord record;
  std::string file_name;
  std::string drawn_bates;       // "" when omitted
  std::string drawn_old_stamp;   // "" unless double stamped
  std::string drawn_conf;        // "" when missing
  std::vector<FaultRecord> faults;
};

PagePlan plan_page(const CorpusSpec& spec, std::size_t i) {
  PagePlan plan;
  BatesNumber bates{spec.prefix, spec.separator, spec.start_value + i, spec.width};
  const std::string expected = render_bates(bates);
  std::string file_stem = expected;
  std::replace(file_stem.begin(), file_stem.end(), ' ', '_');
  plan.file_name = file_stem + ".png";

  plan.record.bates = bates;
  plan.record.image_path = plan.file_name;
  plan.record.doc_id = expected;
  const std::string& designation =
      spec.conf_vocabulary[page_hash(spec.seed, "designation", i) % spec.conf_vocabulary.size()];
  plan.record.expected_confidentiality = designation;

  auto record = [&](FaultKind kind, std::string detail) {
    plan.faults.push_back(FaultRecord{i, expected, kind, std::move(detail)});
  };

  plan.drawn_conf = designation;
  if (fault_selected(spec.seed, "conf_missing", i, spec.conf_missing_rate)) {
    plan.drawn_conf.clear();
    record(FaultKind::ConfMissing, "no confidentiality stamp");
  }

  plan.drawn_bates = expected;
  if (fault_selected(spec.seed, "omit_bates", i, spec.fault_rates.omit_bates)) {
    plan.drawn_bates.clear();
    record(FaultKind::OmitBates, "no Bates stamp");
    return plan;
  }
  if (fault_selected(spec.seed, "wrong_bates", i, spec.fault_rates.wrong_bates)) {
    const std::uint64_t limit = width_limit(spec.width);
    BatesNumber wrong = bates;
    wrong.value = (bates.value + 1 + page_hash(spec.seed, "wrong_value", i) % 997) % limit;
    plan.drawn_bates = render_bates(wrong);
    record(FaultKind::WrongBates, "stamped " + plan.drawn_bates);
  }
  if (fault_selected(spec.seed, "double_stamp", i, spec.fault_rates.double_stamp)) {
    BatesNumber old{spec.double_stamp_prefix, spec.separator,
                    page_hash(spec.seed, "old_value", i) % width_limit(spec.width), spec.width};
    plan.drawn_old_stamp = render_bates(old);
    record(FaultKind::DoubleStamp, "also stamped " + plan.drawn_old_stamp);
  }
  return plan;
}

int glyph_scale(const CorpusSpec& spec) {
  return std::max(1, static_cast<int>(std::lround(spec.page_height / 412.0)));
}

PageImage render_page(const CorpusSpec& spec, std::size_t i, const PagePlan& plan) {
  PageImage page(spec.page_width, spec.page_height, 1, 255);
  const int scale = glyph_scale(spec);
  const int w = spec.page_width;
  const int h = spec.page_height;
  const int margin = std::max(2 * scale, w / 40);
  const int bottom = std::max(2 * scale, static_cast<int>(h * 0.03));
  const int line_h = font::text_height(scale);

  // Body filler: gray text-line bars well clear of the stamp bands.
  const int bar_h = std::max(1, 4 * scale);
  const int pitch = std::max(bar_h + 2, 3 * line_h);
  std::size_t line = 0;
  for (int y = static_cast<int>(h * 0.12); y + bar_h < static_cast<int>(h * 0.80); y += pitch, ++line) {
    const double len = 0.45 + 0.40 * unit_interval(page_hash(spec.seed ^ i, "filler", line));
    const int x1 = std::min(w - margin, 2 * margin + static_cast<int>(len * (w - 4 * margin)));
    for (int yy = y; yy < y + bar_h; ++yy) {
      for (int x = 2 * margin; x < x1; ++x) page.at(x, yy) = 96;
    }
  }

  const int stamp_y = h - bottom - line_h;
  if (!plan.drawn_bates.empty()) {
    font::draw_text(page, w - margin - font::text_width(plan.drawn_bates, scale), stamp_y,
                    plan.drawn_bates, scale);
  }
  if (!plan.drawn_old_stamp.empty()) {
    const int y = stamp_y - line_h - 3 * scale;
    font::draw_text(page, w - margin - font::text_width(plan.drawn_old_stamp, scale), y,
                    plan.drawn_old_stamp, scale);
  }
  if (!plan.drawn_conf.empty()) font::draw_text(page, margin, stamp_y, plan.drawn_conf, scale);
  return page;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace

Corpus generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<PagePlan> plans(spec.pages);
  for (std::size_t i = 0; i < spec.pages; ++i) plans[i] = plan_page(spec, i);

  detail::run_batches(spec.pages, 8, static_cast<std::size_t>(spec.workers),
                      [&](std::size_t, std::size_t begin, std::size_t end) {
                        for (std::size_t i = begin; i < end; ++i) {
                          write_png(out_dir / plans[i].file_name, render_page(spec, i, plans[i]));
                        }
                      });

  Corpus corpus;
  std::vector<PageRecord> records;
  records.reserve(spec.pages);
  std::string manifest_csv = "BEGBATES,IMAGE,CONF\n";
  nlohmann::ordered_json faults = nlohmann::ordered_json::array();
  for (PagePlan& plan : plans) {
    const std::string bates = render_bates(plan.record.bates);
    manifest_csv += csv_quote(bates) + "," + csv_quote(plan.file_name) + "," +
                    csv_quote(plan.record.expected_confidentiality.value_or("")) + "\n";

    std::string right_text = plan.drawn_bates;
    if (!plan.drawn_old_stamp.empty()) right_text = plan.drawn_old_stamp + "\n" + right_text;
    corpus.rendered_text[region_fingerprint(plan.file_name, 0, Band::Bottom, Corner::Right)] = right_text;
    corpus.rendered_text[region_fingerprint(plan.file_name, 0, Band::Bottom, Corner::Left)] = plan.drawn_conf;

    for (FaultRecord& f : plan.faults) {
      faults.push_back({{"page", f.page_index},
                        {"bates", f.bates},
                        {"kind", to_string(f.kind)},
                        {"detail", f.detail}});
      corpus.ledger.push_back(std::move(f));
    }
    records.push_back(std::move(plan.record));
  }
  corpus.manifest = make_manifest(std::move(records));

  nlohmann::ordered_json ledger;
  ledger["seed"] = spec.seed;
  ledger["pages"] = spec.pages;
  ledger["faults"] = std::move(faults);
  write_text(out_dir / "manifest.csv", manifest_csv);
  write_text(out_dir / "ledger.json", ledger.dump(1) + "\n");
  save_ocr_script(out_dir / "ocr_script.json", corpus.rendered_text);
  return corpus;
}

std::string corrupt_ocr_text(std::string_view text, Corruption pattern, std::uint64_t seed) {
  const Corruption one[] = {pattern};
  return corrupt_ocr_text(text, one, seed);
}

std::string corrupt_ocr_text(std::string_view text, std::span<const Corruption> patterns,
                             std::uint64_t seed) {
  const BatesNumber bates = parse_bates(text);
  const auto has = [&](Corruption c) {
    return std::find(patterns.begin(), patterns.end(), c) != patterns.end();
  };
  std::uint64_t state = mix64(seed ^ hash_tag(text));
  const auto next = [&] { return state = mix64(state); };

  std::string digits = render_bates(bates).substr(bates.prefix.size() +
                                                  separator_text(bates.separator).size());
  if (has(Corruption::ZeroToO)) {
    std::vector<std::size_t> zeros;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] == '0') zeros.push_back(i);
    }
    if (!zeros.empty()) digits[zeros[next() % zeros.size()]] = 'O';
  }

  std::string out = bates.prefix;
  if (has(Corruption::PrefixExtraO)) out += 'O';
  out += separator_text(bates.separator);
  out += digits;

  if (has(Corruption::Space)) {
    const std::size_t pos = 1 + next() % (out.size() - 1);
    out.insert(pos, 1, ' ');
  }
  if (has(Corruption::Newlines)) {
    switch (next() % 3) {
      case 0: out = "\n" + out; break;
      case 1: out += "\n"; break;
      default: out = "\n" + out + "\n"; break;
    }
  }
  return out;
}

}  // namespace batesqc
