#include "dubalign/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "dubalign/error.hpp"
#include "dubalign/subprocess.hpp"

namespace dubalign {

void MetricParams::validate() const {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw InvalidInput("sigma must lie in [0, 1]");
  if (!(band_low >= 0.0) || !(band_high >= band_low)) {
    throw InvalidInput("fluency band must satisfy 0 <= low <= high");
  }
}

double smoothness(std::span<const double> rates, double sigma) {
  if (rates.size() < 2) throw UndefinedMetric("smoothness needs at least two segments");
  std::size_t smooth = 0;
  for (std::size_t i = 1; i < rates.size(); ++i) {
    const double ratio = std::min(rates[i - 1], rates[i]) / std::max(rates[i - 1], rates[i]);
    if (ratio >= 1.0 - sigma) ++smooth;
  }
  return 100.0 * static_cast<double>(smooth) / static_cast<double>(rates.size() - 1);
}

std::vector<double> target_rates(std::span<const AlignmentResult> clip) {
  std::vector<double> out;
  for (const auto& r : clip) {
    for (const auto& s : r.segments) out.push_back(s.target_rate);
  }
  return out;
}

double smoothness(std::span<const AlignmentResult> clip, double sigma) {
  return smoothness(target_rates(clip), sigma);
}

double fluency(std::span<const double> rates, double low, double high) {
  if (rates.empty()) throw UndefinedMetric("fluency needs at least one segment");
  const auto fluent = std::count_if(rates.begin(), rates.end(),
                                    [&](double r) { return r >= low && r <= high; });
  return 100.0 * static_cast<double>(fluent) / static_cast<double>(rates.size());
}

double fluency(std::span<const AlignmentResult> clip, double low, double high) {
  return fluency(target_rates(clip), low, high);
}

std::vector<std::string> normalize_words(std::string_view text) {
  static constexpr std::string_view kUnicodePunct[] = {"«", "»", "“", "”", "‘", "’",
                                                       "…", "¿", "¡", "\u2013", "\u2014"};
  std::string cleaned;
  cleaned.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    bool skipped = false;
    for (auto p : kUnicodePunct) {
      if (text.substr(i, p.size()) == p) {
        cleaned += ' ';
        i += p.size();
        skipped = true;
        break;
      }
    }
    if (skipped) continue;
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80 && std::ispunct(c)) {
      // Apostrophes and hyphens join word parts; other marks separate.
      if (c != '\'' && c != '-') cleaned += ' ';
    } else if (c < 0x80) {
      cleaned += static_cast<char>(std::tolower(c));
    } else {
      cleaned += static_cast<char>(c);
    }
    ++i;
  }
  return split_words(cleaned);
}

std::vector<std::string> normalize_words(std::span<const std::string> words) {
  std::string joined;
  for (const auto& w : words) {
    joined += w;
    joined += ' ';
  }
  return normalize_words(std::string_view(joined));
}

std::size_t edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp) {
  std::vector<std::size_t> row(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (ref[i - 1] == hyp[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[hyp.size()];
}

double wer(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  if (reference.empty()) throw UndefinedMetric("WER needs a nonempty reference");
  return static_cast<double>(edit_distance(reference, hypothesis)) /
         static_cast<double>(reference.size());
}

double intelligibility(double wer_aligned, double wer_unaligned) {
  if (wer_unaligned >= 1.0) {
    throw DegenerateDenominator("intelligibility undefined when the unaligned WER is 1");
  }
  return (1.0 - wer_aligned) / (1.0 - wer_unaligned);
}

namespace {

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

}  // namespace

double length_compliance(std::span<const PhrasePair> phrases, double tolerance) {
  if (phrases.empty()) throw UndefinedMetric("length compliance needs phrase pairs");
  // Integer comparison at percent granularity keeps the ±10% edges exact.
  const auto pct = static_cast<long long>(std::llround(tolerance * 100.0));
  std::size_t ok = 0;
  for (const auto& p : phrases) {
    const auto src = static_cast<long long>(code_points(p.source));
    const auto tgt = static_cast<long long>(code_points(p.target));
    if (100 * tgt >= (100 - pct) * src && 100 * tgt <= (100 + pct) * src) ++ok;
  }
  return 100.0 * static_cast<double>(ok) / static_cast<double>(phrases.size());
}

double segmentation_accuracy(std::span<const Segmentation> predicted,
                             std::span<const Segmentation> reference) {
  if (predicted.size() != reference.size()) {
    throw InvalidInput("segmentation accuracy: sentence sets differ in size");
  }
  std::size_t matched = 0;
  std::size_t pred_total = 0;
  std::size_t ref_total = 0;
  for (std::size_t s = 0; s < predicted.size(); ++s) {
    const auto& p = predicted[s].breakpoints;
    const auto& r = reference[s].breakpoints;
    if (p.size() != r.size()) {
      throw InvalidInput("segmentation accuracy: sentence " + std::to_string(s) +
                         " has a different number of segments");
    }
    if (p.size() < 2) continue;
    const std::vector<std::size_t> pi(p.begin(), p.end() - 1);
    const std::vector<std::size_t> ri(r.begin(), r.end() - 1);
    std::vector<std::size_t> common;
    std::set_intersection(pi.begin(), pi.end(), ri.begin(), ri.end(), std::back_inserter(common));
    matched += common.size();
    pred_total += pi.size();
    ref_total += ri.size();
  }
  if (ref_total == 0) {
    throw UndefinedMetric("segmentation accuracy: no sentence has internal breakpoints");
  }
  if (matched == 0) return 0.0;
  const double precision = static_cast<double>(matched) / static_cast<double>(pred_total);
  const double recall = static_cast<double>(matched) / static_cast<double>(ref_total);
  return 100.0 * 2.0 * precision * recall / (precision + recall);
}

// ---------------------------------------------------------------------------

double corruption_probability(double rate) {
  return std::clamp((rate - 1.3) / 0.7, 0.0, 1.0);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double unit_draw(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::string> MockTranscriber::transcribe(const AlignmentResult& dubbed) const {
  std::vector<std::string> out;
  const std::uint64_t base =
      splitmix64(seed_ ^ splitmix64(fnv1a(dubbed.clip_id) ^ splitmix64(dubbed.sentence_index)));
  std::uint64_t position = 0;
  for (const auto& seg : dubbed.segments) {
    const double p = corruption_probability(seg.target_rate);
    for (const auto& word : seg.target_text) {
      const std::uint64_t h = splitmix64(base ^ splitmix64(position++));
      if (unit_draw(h) < p) {
        // Low bit picks substitution over deletion.
        if (splitmix64(h) & 1U) out.emplace_back("<unk>");
      } else {
        out.push_back(word);
      }
    }
  }
  return out;
}

std::vector<std::string> PerfectTranscriber::transcribe(const AlignmentResult& dubbed) const {
  std::vector<std::string> out;
  for (const auto& seg : dubbed.segments) {
    out.insert(out.end(), seg.target_text.begin(), seg.target_text.end());
  }
  return out;
}

CommandTranscriber::CommandTranscriber(std::string command, std::chrono::milliseconds timeout)
    : process_(std::make_unique<LineProcess>(std::move(command), timeout)) {}

CommandTranscriber::~CommandTranscriber() = default;

std::vector<std::string> CommandTranscriber::transcribe(const AlignmentResult& dubbed) const {
  std::lock_guard lock(mutex_);
  for (const auto& seg : dubbed.segments) {
    char rate[64];
    std::snprintf(rate, sizeof rate, "%.6f", seg.target_rate);
    process_->write_line(std::to_string(seg.relaxed_interval.begin.rounded_ms()) + "\t" +
                         std::to_string(seg.relaxed_interval.end.rounded_ms()) + "\t" + rate +
                         "\t" + join_words(seg.target_text));
  }
  process_->write_line("");
  return split_words(process_->read_line());
}

AlignmentResult unaligned_rendition(const Clip& clip, std::size_t sentence,
                                    const ScoringModels& models) {
  const auto& pair = clip.pairs[sentence];
  const double seconds =
      synth_duration(*models.durations, pair.target.words, pair.target.language);
  const Time start = pair.source.words.front().start;
  AlignmentResult r;
  r.clip_id = clip.id;
  r.sentence_index = sentence;
  r.onscreen = pair.target.onscreen;
  r.segmentation.breakpoints = {pair.target.size()};
  SegmentAlignment seg;
  seg.target_text = pair.target.words;
  seg.source_interval = pair.source.extent();
  seg.relaxed_interval = {start, start + Time::from_seconds(seconds)};
  seg.source_rate = 1.0;
  seg.target_rate = 1.0;
  r.segments.push_back(std::move(seg));
  return r;
}

MetricsReport evaluate_alignments(std::span<const Clip> clips,
                                  std::span<const std::vector<AlignmentResult>> results,
                                  const Transcriber& transcriber, const MetricParams& params,
                                  const ScoringModels& models) {
  params.validate();
  if (clips.size() != results.size()) {
    throw InvalidInput("alignments do not cover the corpus clip for clip");
  }
  MetricsReport report;
  std::vector<PhrasePair> phrases;
  std::vector<Segmentation> predicted, reference;
  bool all_referenced = true;
  std::size_t edits_aligned = 0, edits_unaligned = 0, ref_words = 0;
  double smooth_sum = 0.0, fluency_sum = 0.0, overspeed_sum = 0.0;
  std::size_t smooth_clips = 0;

  for (std::size_t c = 0; c < clips.size(); ++c) {
    const Clip& clip = clips[c];
    const auto& res = results[c];
    if (res.size() != clip.pairs.size()) {
      throw InvalidInput("clip " + clip.id + ": alignment count differs from sentence count");
    }
    ClipMetrics cm;
    cm.clip_id = clip.id;
    const auto rates = target_rates(res);
    if (rates.size() >= 2) {
      cm.smoothness = smoothness(rates, params.sigma);
      smooth_sum += *cm.smoothness;
      ++smooth_clips;
    }
    cm.fluency = fluency(rates, params.band_low, params.band_high);
    fluency_sum += cm.fluency;
    double clip_over = 0.0;
    for (double r : rates) clip_over += std::max(r - 1.0, 0.0);
    overspeed_sum += clip_over;
    cm.mean_overspeed = clip_over / static_cast<double>(rates.size());

    std::size_t clip_aligned = 0, clip_unaligned = 0, clip_ref = 0;
    for (std::size_t s = 0; s < res.size(); ++s) {
      const auto& r = res[s];
      if (r.clip_id != clip.id || r.sentence_index != s) {
        throw InvalidInput("alignment records are out of corpus order at clip " + clip.id);
      }
      const auto ref = normalize_words(std::span<const std::string>(clip.pairs[s].target.words));
      if (ref.empty()) continue;
      const auto hyp = normalize_words(transcriber.transcribe(r));
      const auto base = normalize_words(transcriber.transcribe(unaligned_rendition(clip, s, models)));
      clip_aligned += edit_distance(ref, hyp);
      clip_unaligned += edit_distance(ref, base);
      clip_ref += ref.size();
      for (const auto& seg : r.segments) {
        phrases.push_back({join_words(seg.source_text), join_words(seg.target_text)});
      }
      predicted.push_back(r.segmentation);
      if (clip.pairs[s].reference_breakpoints) {
        reference.push_back({*clip.pairs[s].reference_breakpoints});
      } else {
        all_referenced = false;
      }
      ++report.sentences;
    }
    report.segments += rates.size();
    cm.reference_words = clip_ref;
    if (clip_ref > 0) {
      cm.wer_aligned = static_cast<double>(clip_aligned) / static_cast<double>(clip_ref);
      cm.wer_unaligned = static_cast<double>(clip_unaligned) / static_cast<double>(clip_ref);
    }
    edits_aligned += clip_aligned;
    edits_unaligned += clip_unaligned;
    ref_words += clip_ref;
    report.per_clip.push_back(std::move(cm));
  }

  report.clips = clips.size();
  if (report.clips == 0) throw UndefinedMetric("no clips to evaluate");
  if (ref_words == 0) throw UndefinedMetric("no reference words to evaluate");
  report.smoothness = smooth_clips ? smooth_sum / static_cast<double>(smooth_clips) : 100.0;
  report.fluency = fluency_sum / static_cast<double>(report.clips);
  report.mean_overspeed = overspeed_sum / static_cast<double>(report.segments);
  report.wer_aligned = static_cast<double>(edits_aligned) / static_cast<double>(ref_words);
  report.wer_unaligned = static_cast<double>(edits_unaligned) / static_cast<double>(ref_words);
  report.intelligibility = intelligibility(report.wer_aligned, report.wer_unaligned);
  report.length_compliance = length_compliance(phrases);
  if (all_referenced && !reference.empty()) {
    try {
      report.segmentation_accuracy = segmentation_accuracy(predicted, reference);
    } catch (const UndefinedMetric&) {
    }
  }
  return report;
}

}  // namespace dubalign
