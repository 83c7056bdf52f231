#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dubalign/features.hpp"
#include "dubalign/model.hpp"

namespace dubalign {

class LineProcess;

struct MetricParams {
  /// Adjacent segments count as smooth when min/max rate >= 1 - sigma.
  double sigma = 0.25;
  /// Segments count as fluent when their rate lies in [band_low, band_high].
  double band_low = 0.8;
  double band_high = 1.3;

  void validate() const;
};

/// Percent of adjacent segment pairs whose rate ratio is at least 1 - sigma.
double smoothness(std::span<const double> rates, double sigma);
/// Clip-wide smoothness: segments of consecutive sentences are adjacent.
double smoothness(std::span<const AlignmentResult> clip, double sigma);

/// Percent of segments whose rate lies inside [low, high].
double fluency(std::span<const double> rates, double low, double high);
double fluency(std::span<const AlignmentResult> clip, double low, double high);

/// Target rates of all segments in order.
std::vector<double> target_rates(std::span<const AlignmentResult> clip);

/// Lowercase, strip punctuation, split on whitespace.
std::vector<std::string> normalize_words(std::string_view text);
std::vector<std::string> normalize_words(std::span<const std::string> words);

/// Minimum number of substitutions, insertions and deletions.
std::size_t edit_distance(std::span<const std::string> reference,
                          std::span<const std::string> hypothesis);
double wer(std::span<const std::string> reference, std::span<const std::string> hypothesis);

/// (1 - WER with alignment) / (1 - WER without alignment); may exceed 1.
double intelligibility(double wer_aligned, double wer_unaligned);

struct PhrasePair {
  std::string source;
  std::string target;
};

/// Percent of phrase pairs whose target character length lies within
/// ±tolerance of the source length, boundaries included.
double length_compliance(std::span<const PhrasePair> phrases, double tolerance = 0.1);

/// Exact-match F1 over internal breakpoints, pooled over sentences, in
/// percent. Single-segment sentences carry no internal breakpoints.
double segmentation_accuracy(std::span<const Segmentation> predicted,
                             std::span<const Segmentation> reference);

// ---------------------------------------------------------------------------
// Transcription stand-ins

/// Maps a dubbed sentence (segment texts with their intervals and rates)
/// to a hypothesis transcript. Must be deterministic.
class Transcriber {
 public:
  virtual ~Transcriber() = default;
  virtual std::vector<std::string> transcribe(const AlignmentResult& dubbed) const = 0;
};

/// Word corruption probability at a given speaking rate.
double corruption_probability(double rate);

/// Deletes or substitutes each word independently with probability
/// corruption_probability(rate of its segment). Draws depend only on the
/// seed and the word's position, so faster speech never corrupts fewer
/// words.
class MockTranscriber final : public Transcriber {
 public:
  explicit MockTranscriber(std::uint64_t seed = 0) : seed_(seed) {}
  std::vector<std::string> transcribe(const AlignmentResult& dubbed) const override;

 private:
  std::uint64_t seed_;
};

/// Returns the target words unchanged.
class PerfectTranscriber final : public Transcriber {
 public:
  std::vector<std::string> transcribe(const AlignmentResult& dubbed) const override;
};

/**
 * External transcriber. Per sentence the engine writes one line per
 * segment, "start_ms <TAB> end_ms <TAB> rate <TAB> text", then an empty
 * line, and reads back one transcript line.
 */
class CommandTranscriber final : public Transcriber {
 public:
  explicit CommandTranscriber(std::string command,
                              std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~CommandTranscriber() override;
  std::vector<std::string> transcribe(const AlignmentResult& dubbed) const override;

 private:
  mutable std::mutex mutex_;
  mutable std::unique_ptr<LineProcess> process_;
};

/// The sentence spoken whole at normal speed from its source start, as
/// synthesized without prosodic alignment.
AlignmentResult unaligned_rendition(const Clip& clip, std::size_t sentence,
                                    const ScoringModels& models);

// ---------------------------------------------------------------------------

struct ClipMetrics {
  std::string clip_id;
  std::optional<double> smoothness;  // undefined below two segments
  double fluency = 0.0;
  double wer_aligned = 0.0;
  double wer_unaligned = 0.0;
  std::size_t reference_words = 0;
  double mean_overspeed = 0.0;  // mean max(r_f - 1, 0)
};

struct MetricsReport {
  double smoothness = 0.0;         // mean over clips with >= 2 segments
  double fluency = 0.0;            // mean over clips
  double intelligibility = 1.0;    // from corpus-level WERs
  double wer_aligned = 0.0;
  double wer_unaligned = 0.0;
  double length_compliance = 0.0;  // over all phrase pairs
  double mean_overspeed = 0.0;     // over all segments
  std::optional<double> segmentation_accuracy;
  std::size_t clips = 0;
  std::size_t sentences = 0;
  std::size_t segments = 0;
  std::vector<ClipMetrics> per_clip;
};

/// Scores alignments against their corpus. `results` holds one entry per
/// clip, in corpus order, each with one result per sentence.
MetricsReport evaluate_alignments(std::span<const Clip> clips,
                                  std::span<const std::vector<AlignmentResult>> results,
                                  const Transcriber& transcriber, const MetricParams& params,
                                  const ScoringModels& models);

}  // namespace dubalign
