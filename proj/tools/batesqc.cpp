// batesqc: production QC for Bates and confidentiality endorsements.
//
//   batesqc run   --manifest M --images DIR ... --json OUT --csv OUT
//   batesqc synth --seed N --pages N ... --out DIR
//
// Exit codes: 0 all pages match, 2 QC findings present, 1 fatal error.
// Standard output is unused; progress and summaries go to stderr.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "batesqc/error.hpp"
#include "batesqc/runner.hpp"
#include "batesqc/synth.hpp"

namespace {

using namespace batesqc;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FatalConfig, "cannot read " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

BandHeight parse_band_height(const std::string& text) {
  std::string number = text;
  bool pixels = false;
  if (number.size() > 2 && number.substr(number.size() - 2) == "px") {
    number.resize(number.size() - 2);
    pixels = true;
  }
  const double value = std::stod(number);
  if (pixels || value >= 1.0) return BandHeight::of_pixels(static_cast<int>(value));
  return BandHeight::of_fraction(value);
}

struct RunArgs {
  std::string manifest;
  std::string format = "csv";
  std::string encoding = "auto";
  std::string images;
  std::string prefix;
  int digits = 0;
  std::string band = "bottom";
  std::string band_height = "0.10";
  double split = 2.0 / 3.0;
  std::string conf_vocab;
  double conf_threshold = 0.2;
  std::string ocr_cmd = std::string(kDefaultOcrCommand);
  std::string ocr_script;
  int ocr_timeout_ms = 60000;
  int workers = 1;
  int batch_size = 16;
  std::string json;
  std::string csv;
  bool check_manifest_gaps = false;
  std::string dump_regions;
  std::size_t progress = 0;
  std::string field_bates = "BEGBATES";
  std::string field_image = "IMAGE";
  std::string field_conf = "CONF";
  bool grayscale = false;
  int rescale_height = 0;
  int binarize = -1;
};

int do_run(const RunArgs& a) {
  JobConfig cfg;
  cfg.manifest.path = a.manifest;
  cfg.manifest.options.format = parse_load_format(a.format);
  cfg.manifest.options.encoding = a.encoding == "utf8"     ? TextEncoding::Utf8
                                  : a.encoding == "cp1252" ? TextEncoding::Windows1252
                                                           : TextEncoding::Auto;
  cfg.manifest.options.fields.bates = a.field_bates;
  cfg.manifest.options.fields.image = a.field_image;
  cfg.manifest.options.fields.confidentiality = a.field_conf;
  if (a.band == "top") {
    cfg.manifest.options.default_bands = {Band::Top};
  } else if (a.band == "both") {
    cfg.manifest.options.default_bands = {Band::Bottom, Band::Top};
  }
  cfg.images_dir = a.images.empty() ? std::filesystem::path(a.manifest).parent_path()
                                    : std::filesystem::path(a.images);
  cfg.region.height = parse_band_height(a.band_height);
  cfg.region.split = a.split;
  if (a.grayscale) cfg.preprocess.grayscale = true;
  if (a.rescale_height > 0) cfg.preprocess.rescale_to_height = a.rescale_height;
  if (a.binarize >= 0) cfg.preprocess.binarize_threshold = a.binarize;

  if (!a.ocr_script.empty()) {
    cfg.ocr.kind = BackendKind::Scripted;
    cfg.ocr.script = std::make_shared<const OcrScript>(load_ocr_script(a.ocr_script));
  } else {
    cfg.ocr.kind = BackendKind::ExternalCommand;
    cfg.ocr.command_template = a.ocr_cmd;
  }
  cfg.ocr.timeout_ms = a.ocr_timeout_ms;

  cfg.correction.expected_prefix = a.prefix;
  cfg.correction.expected_width = a.digits;
  cfg.correction.conf_max_distance = a.conf_threshold;
  if (!a.conf_vocab.empty()) cfg.correction.conf_vocabulary = read_lines(a.conf_vocab);

  cfg.workers = a.workers;
  cfg.batch_size = a.batch_size;
  cfg.check_manifest_gaps = a.check_manifest_gaps;
  cfg.progress_every = a.progress;
  if (!a.json.empty()) cfg.output.json_path = a.json;
  if (!a.csv.empty()) cfg.output.csv_path = a.csv;
  if (!a.dump_regions.empty()) cfg.output.dump_regions_dir = a.dump_regions;

  const ValidationReport report = run_job(cfg);
  const int code = emit_report(report, cfg);
  std::cerr << "batesqc: " << report.total_pages << " pages, raw match "
            << report.raw_match_rate << ", corrected match " << report.corrected_match_rate
            << ", confidentiality missing " << report.conf_missing_rate << "\n";
  for (FindingKind kind : kAllFindingKinds) {
    if (report.count(kind) > 0) {
      std::cerr << "  " << to_string(kind) << ": " << report.count(kind) << "\n";
    }
  }
  return code;
}

struct SynthArgs {
  std::uint64_t seed = 0;
  std::size_t pages = 10;
  std::string prefix = "ABC";
  int digits = 7;
  std::string separator = "none";
  std::uint64_t start = 1;
  std::string page_size = "1275x1650";
  std::string conf_vocab;
  double conf_missing_rate = 0.0;
  std::vector<std::string> faults;
  std::string out;
  int workers = 1;
};

int do_synth(const SynthArgs& a) {
  CorpusSpec spec;
  spec.seed = a.seed;
  spec.pages = a.pages;
  spec.prefix = a.prefix;
  spec.width = a.digits;
  spec.separator = parse_separator(a.separator);
  spec.start_value = a.start;
  const auto x = a.page_size.find('x');
  if (x == std::string::npos) throw Error(ErrorCode::FatalConfig, "--page-size expects WxH");
  spec.page_width = std::stoi(a.page_size.substr(0, x));
  spec.page_height = std::stoi(a.page_size.substr(x + 1));
  if (!a.conf_vocab.empty()) spec.conf_vocabulary = read_lines(a.conf_vocab);
  spec.conf_missing_rate = a.conf_missing_rate;
  for (const std::string& f : a.faults) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::FatalConfig, "--fault expects kind=rate");
    const std::string kind = f.substr(0, eq);
    const double rate = std::stod(f.substr(eq + 1));
    if (kind == "omit_bates") {
      spec.fault_rates.omit_bates = rate;
    } else if (kind == "wrong_bates") {
      spec.fault_rates.wrong_bates = rate;
    } else if (kind == "double_stamp") {
      spec.fault_rates.double_stamp = rate;
    } else {
      throw Error(ErrorCode::FatalConfig, "unknown fault kind '" + kind + "'");
    }
  }
  spec.workers = a.workers;
  const Corpus corpus = generate_corpus(spec, a.out);
  std::cerr << "batesqc: wrote " << corpus.manifest.pages.size() << " pages and "
            << corpus.ledger.size() << " ledger entries to " << a.out << "\n";
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bates number and confidentiality stamp QC for document productions"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Extract and validate stamps for a production");
  run_cmd->add_option("--manifest", run.manifest, "Load file (CSV, DAT or OPT)")->required();
  run_cmd->add_option("--manifest-format", run.format, "Load file dialect")
      ->check(CLI::IsMember({"csv", "dat", "opt"}));
  run_cmd->add_option("--dat-encoding", run.encoding, "DAT/CSV text encoding")
      ->check(CLI::IsMember({"auto", "utf8", "cp1252"}));
  run_cmd->add_option("--field-bates", run.field_bates, "Column holding the Bates number");
  run_cmd->add_option("--field-image", run.field_image, "Column holding the image path");
  run_cmd->add_option("--field-conf", run.field_conf, "Column holding the designation");
  run_cmd->add_option("--images", run.images, "Base directory for relative image paths");
  run_cmd->add_option("--prefix", run.prefix, "Expected Bates prefix (default: from manifest)");
  run_cmd->add_option("--digits", run.digits, "Expected digit width (default: from manifest)");
  run_cmd->add_option("--band", run.band, "Stamp band(s)")
      ->check(CLI::IsMember({"bottom", "top", "both"}));
  run_cmd->add_option("--band-height", run.band_height,
                      "Band height: fraction of the page (<1) or pixels (>=1 or NNpx)");
  run_cmd->add_option("--split", run.split, "Left corner share of the band width");
  run_cmd->add_option("--conf-vocab", run.conf_vocab, "File with one designation per line");
  run_cmd->add_option("--conf-threshold", run.conf_threshold,
                      "Max normalized edit distance for a designation match");
  run_cmd->add_option("--ocr-cmd", run.ocr_cmd, "External OCR command; {input} is the region PNG");
  run_cmd->add_option("--ocr-script", run.ocr_script,
                      "JSON fingerprint->text map; selects the scripted backend");
  run_cmd->add_option("--ocr-timeout-ms", run.ocr_timeout_ms, "Per-region OCR timeout");
  run_cmd->add_option("--workers", run.workers, "Parallel workers")->check(CLI::PositiveNumber);
  run_cmd->add_option("--batch-size", run.batch_size, "Pages per batch")->check(CLI::PositiveNumber);
  run_cmd->add_option("--json", run.json, "JSON report path");
  run_cmd->add_option("--csv", run.csv, "CSV report path");
  run_cmd->add_flag("--check-manifest-gaps", run.check_manifest_gaps,
                    "Also report gaps in the manifest's own numbering");
  run_cmd->add_option("--dump-regions", run.dump_regions, "Write corner regions as PNGs here");
  run_cmd->add_option("--progress", run.progress, "Progress line every N pages (stderr)");
  run_cmd->add_flag("--grayscale", run.grayscale, "Convert regions to grayscale before OCR");
  run_cmd->add_option("--rescale-height", run.rescale_height, "Rescale regions to this height");
  run_cmd->add_option("--binarize", run.binarize, "Binarize regions at this threshold (0-255)");

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic production");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--pages", synth.pages, "Page count")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--prefix", synth.prefix, "Bates prefix");
  synth_cmd->add_option("--digits", synth.digits, "Digit width");
  synth_cmd->add_option("--separator", synth.separator, "none, -, _ or space");
  synth_cmd->add_option("--start", synth.start, "First Bates value");
  synth_cmd->add_option("--page-size", synth.page_size, "Page size WxH in pixels");
  synth_cmd->add_option("--conf-vocab", synth.conf_vocab, "File with one designation per line");
  synth_cmd->add_option("--conf-missing-rate", synth.conf_missing_rate,
                        "Fraction of pages without a confidentiality stamp");
  synth_cmd->add_option("--fault", synth.faults,
                        "kind=rate with kind in omit_bates, wrong_bates, double_stamp");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--workers", synth.workers, "Rendering workers")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFatal;
  }

  try {
    if (run_cmd->parsed()) return do_run(run);
    return do_synth(synth);
  } catch (const std::exception& e) {
    std::cerr << "batesqc: " << e.what() << "\n";
    return kExitFatal;
  }
}
