#pragma once

#include <istream>
#include <span>
#include <string>
#include <vector>

#include "dubalign/features.hpp"
#include "dubalign/metrics.hpp"
#include "dubalign/model.hpp"

namespace dubalign {

/**
 * Corpus: one JSON object per line,
 *
 *   {"id", "lang_src", "lang_tgt", "duration_ms"?,
 *    "sentences": [{"src_words": [{"w", "start_ms", "end_ms"}],
 *                   "tgt_text", "onscreen", "ref_breakpoints"?}]}
 *
 * Blank lines are skipped. Source breakpoints are detected from pauses of
 * at least `min_pause`. Malformed records raise ParseError with the line
 * and field; records breaking a sentence or clip invariant raise
 * ValidationError.
 */
std::vector<Clip> parse_corpus(std::istream& in, Time min_pause = kDefaultMinPause);
std::vector<Clip> parse_corpus_file(const std::string& path, Time min_pause = kDefaultMinPause);
Clip parse_clip_record(std::string_view line, std::size_t line_number,
                       Time min_pause = kDefaultMinPause);

std::string serialize_clip(const Clip& clip);
std::string serialize_corpus(std::span<const Clip> clips);

/**
 * Alignments: a header line, then one record per sentence with fields in a
 * fixed order. Interval bounds are integer milliseconds rounded half to
 * even; non-finite scores are written as null.
 */
std::string serialize_alignments(std::span<const AlignmentResult> results);
std::vector<AlignmentResult> parse_alignments(std::istream& in);
std::vector<AlignmentResult> parse_alignments_file(const std::string& path);

/// Splits flat results into per-clip lists in corpus order; throws
/// InvalidInput when a clip or sentence is missing or duplicated.
std::vector<std::vector<AlignmentResult>> group_by_clip(std::span<const Clip> clips,
                                                        std::vector<AlignmentResult> results);

struct WeightsFile {
  FeatureWeights weights;
  MetricParams metric_params;
};

/// {"w1".."w5", "metric_params": {"sigma", "band_low", "band_high"}}
std::string serialize_weights(const WeightsFile& file);
WeightsFile parse_weights(std::string_view text);
WeightsFile parse_weights_file(const std::string& path);

std::string serialize_report(const MetricsReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dubalign
