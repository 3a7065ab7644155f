#include "batesqc/runner.hpp"

#include <iostream>
#include <memory>
#include <mutex>

#include "batesqc/detail/batch_pool.hpp"
#include "batesqc/error.hpp"
#include "batesqc/image_io.hpp"

namespace batesqc {

void JobConfig::validate() const {
  if (workers < 1) throw Error(ErrorCode::FatalConfig, "workers must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::FatalConfig, "batch size must be >= 1");
}

namespace {

struct BandResult {
  StampExtraction bates;
  StampExtraction conf;
  std::vector<BatesNumber> right_tokens;
};

struct PageOutcome {
  std::vector<Finding> findings;
  std::optional<BatesNumber> observed;
};

class PagePipeline {
 public:
  PagePipeline(const JobConfig& cfg, const CorrectionConfig& correction)
      : cfg_(cfg), correction_(correction) {}

  PageOutcome run(std::size_t index, const PageRecord& rec, OcrEngine& engine) const {
    PageOutcome outcome;
    try {
      const PageImage page = read_image(resolve(rec.image_path), rec.image_page);
      std::vector<BandResult> bands;
      for (Band band : rec.stamp_bands) bands.push_back(process_band(page, band, rec, engine));
      assemble(index, rec, bands, outcome);
    } catch (const std::exception& e) {
      Finding f;
      f.kind = FindingKind::OcrFailure;
      f.page = index;
      f.expected = render_bates(rec.bates);
      f.image = rec.image_path;
      f.detail = e.what();
      outcome.findings = {std::move(f)};
      outcome.observed.reset();
    }
    return outcome;
  }

 private:
  std::filesystem::path resolve(const std::string& image_path) const {
    std::filesystem::path p(image_path);
    if (p.is_absolute() || cfg_.images_dir.empty()) return p;
    return cfg_.images_dir / p;
  }

  BandResult process_band(const PageImage& page, Band band, const PageRecord& rec,
                          OcrEngine& engine) const {
    RegionSpec spec = cfg_.region;
    spec.band = band;
    auto [left, right] = split_corners(crop_band(page, spec), spec.split);
    if (!cfg_.preprocess.is_noop()) {
      left = preprocess(left, cfg_.preprocess);
      right = preprocess(right, cfg_.preprocess);
    }
    if (cfg_.output.dump_regions_dir) {
      const std::string stem = render_bates(rec.bates) + "_" + std::string(to_string(band)) + "_";
      write_png(*cfg_.output.dump_regions_dir / (stem + "left.png"), left);
      write_png(*cfg_.output.dump_regions_dir / (stem + "right.png"), right);
    }

    BandResult out;
    const OcrResult right_text = engine.recognize(right);
    const OcrResult left_text = engine.recognize(left);
    out.bates = correct(right_text.raw_text, correction_);
    out.right_tokens = find_bates_tokens(right_text.raw_text, correction_);
    out.conf.raw_text = left_text.raw_text;
    out.conf.conf_match = match_confidentiality(left_text.raw_text, correction_);
    return out;
  }

  void assemble(std::size_t index, const PageRecord& rec, const std::vector<BandResult>& bands,
                PageOutcome& outcome) const {
    const std::string expected = render_bates(rec.bates);
    const auto matches = [&](const BandResult& b) {
      return b.bates.corrected && render_bates(*b.bates.corrected) == expected;
    };
    const BandResult* bates = &bands.front();
    if (auto it = std::find_if(bands.begin(), bands.end(), matches); it != bands.end()) {
      bates = &*it;
    } else if (auto c = std::find_if(bands.begin(), bands.end(),
                                     [](const BandResult& b) { return b.bates.corrected.has_value(); });
               c != bands.end()) {
      bates = &*c;
    }

    const BandResult* conf = &bands.front();
    if (auto it = std::find_if(bands.begin(), bands.end(),
                               [&](const BandResult& b) {
                                 return b.conf.conf_match && b.conf.conf_match == rec.expected_confidentiality;
                               });
        it != bands.end()) {
      conf = &*it;
    } else if (auto c = std::find_if(bands.begin(), bands.end(),
                                     [](const BandResult& b) { return b.conf.conf_match.has_value(); });
               c != bands.end()) {
      conf = &*c;
    }

    outcome.findings = compare_page(rec, bates->bates, conf->conf, index);
    outcome.observed = bates->bates.corrected;

    for (const BandResult& b : bands) {
      if (b.right_tokens.size() < 2) continue;
      Finding f;
      f.kind = FindingKind::DoubleStamp;
      f.page = index;
      f.expected = expected;
      f.observed = b.bates.raw_text;
      f.image = rec.image_path;
      f.detail = std::to_string(b.right_tokens.size()) + " Bates tokens:";
      for (const BatesNumber& t : b.right_tokens) f.detail += " " + render_bates(t);
      outcome.findings.push_back(std::move(f));
      break;
    }
  }

  const JobConfig& cfg_;
  const CorrectionConfig& correction_;
};

CorrectionConfig resolve_correction(const JobConfig& cfg, const ProductionManifest& manifest) {
  CorrectionConfig c = cfg.correction;
  if (c.expected_prefix.empty()) {
    c.expected_prefix = manifest.prefix;
  } else if (!manifest.pages.empty() && c.expected_prefix != manifest.prefix) {
    throw Error(ErrorCode::FatalConfig, "prefix " + c.expected_prefix +
                                            " does not match manifest prefix " + manifest.prefix);
  }
  if (c.expected_width < 1) {
    c.expected_width = manifest.width > 0 ? manifest.width : 1;
  } else if (!manifest.pages.empty() && c.expected_width != manifest.width) {
    throw Error(ErrorCode::FatalConfig, "digit width " + std::to_string(c.expected_width) +
                                            " does not match manifest width " +
                                            std::to_string(manifest.width));
  }
  if (!manifest.pages.empty()) c.separator = manifest.separator;
  // An empty manifest has no prefix; nothing will be corrected anyway.
  if (c.expected_prefix.empty()) c.expected_prefix = "A";
  try {
    c.normalize();
  } catch (const Error& e) {
    throw Error(ErrorCode::FatalConfig, e.what());
  }
  return c;
}

}  // namespace

ValidationReport run_job(const JobConfig& cfg) {
  ProductionManifest manifest;
  try {
    manifest = load_manifest(cfg.manifest.path, cfg.manifest.options);
  } catch (const Error& e) {
    throw Error(ErrorCode::FatalConfig, std::string("manifest: ") + e.what());
  }
  if (!cfg.images_dir.empty()) return run_job(cfg, manifest);
  JobConfig resolved = cfg;
  resolved.images_dir = cfg.manifest.path.parent_path();
  return run_job(resolved, manifest);
}

ValidationReport run_job(const JobConfig& cfg, const ProductionManifest& manifest) {
  cfg.validate();
  const CorrectionConfig correction = resolve_correction(cfg, manifest);
  if (cfg.output.dump_regions_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*cfg.output.dump_regions_dir, ec);
    if (ec) throw Error(ErrorCode::FatalConfig, "cannot create " + cfg.output.dump_regions_dir->string());
  }

  const std::size_t n = manifest.pages.size();
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  const std::size_t batches = (n + batch - 1) / batch;
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(cfg.workers), 1, std::max<std::size_t>(batches, 1));

  // One engine per worker, created up front so an unavailable backend is
  // reported before any page is touched.
  std::vector<std::unique_ptr<OcrEngine>> engines;
  try {
    for (std::size_t w = 0; w < workers; ++w) engines.push_back(make_engine(cfg.ocr));
  } catch (const Error& e) {
    throw Error(ErrorCode::FatalConfig, std::string("OCR backend: ") + e.what());
  }

  const PagePipeline pipeline(cfg, correction);
  std::vector<PageOutcome> outcomes(n);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  detail::run_batches(n, batch, workers, [&](std::size_t worker, std::size_t begin, std::size_t end) {
    OcrEngine& engine = *engines[worker];
    for (std::size_t i = begin; i < end; ++i) {
      outcomes[i] = pipeline.run(i, manifest.pages[i], engine);
      const std::size_t finished = done.fetch_add(1) + 1;
      if (cfg.progress_every > 0 && (finished % cfg.progress_every == 0 || finished == n)) {
        std::lock_guard lock(progress_mutex);
        std::cerr << "batesqc: " << finished << "/" << n << " pages\n";
      }
    }
  });

  std::vector<Finding> findings;
  std::vector<BatesNumber> observed;
  for (PageOutcome& o : outcomes) {
    for (Finding& f : o.findings) findings.push_back(std::move(f));
    if (o.observed) observed.push_back(*o.observed);
  }

  if (n > 0) {
    const BatesNumber& first = manifest.pages.front().bates;
    const BatesNumber& last = manifest.pages.back().bates;
    auto add_gaps = [&](const std::vector<BatesNumber>& seen, const char* detail) {
      for (const BatesNumber& gap : detect_gaps(seen, first, last)) {
        Finding f;
        f.kind = FindingKind::SequenceGap;
        f.expected = render_bates(gap);
        f.detail = detail;
        findings.push_back(std::move(f));
      }
    };
    add_gaps(observed, "not extracted from any page");
    if (cfg.check_manifest_gaps) {
      std::vector<BatesNumber> listed;
      listed.reserve(n);
      for (const PageRecord& rec : manifest.pages) listed.push_back(rec.bates);
      add_gaps(listed, "missing from manifest");
    }
  }
  return summarize(std::move(findings), n);
}

}  // namespace batesqc
