#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dubalign/time.hpp"

namespace dubalign {

/// Default minimum pause separating source phrases.
inline constexpr Time kDefaultMinPause = Time::from_ms(300);

struct TimedWord {
  std::string text;
  Time start;
  Time end;
};

/// Closed time span [begin, end] on the media timeline.
struct Interval {
  Time begin;
  Time end;

  Time length() const { return end - begin; }
  bool operator==(const Interval&) const = default;
};

/**
 * Timestamped source sentence. Breakpoints are 1-based word indices
 * i_1 < ... < i_k = n, each internal one followed by a pause of at least
 * min_pause.
 */
struct SourceSentence {
  std::vector<TimedWord> words;
  std::vector<std::size_t> breakpoints;
  Time min_pause = kDefaultMinPause;
  std::string language = "en";

  std::size_t size() const { return words.size(); }
  std::size_t segment_count() const { return breakpoints.size(); }
  Interval extent() const { return {words.front().start, words.back().end}; }
};

struct SourceInterval {
  Interval span;
  std::size_t segment_index = 0;  // 1-based
};

struct TargetSentence {
  std::vector<std::string> words;
  bool onscreen = true;
  std::string language;

  std::size_t size() const { return words.size(); }
};

struct SentencePair {
  SourceSentence source;
  TargetSentence target;
  /// Manually annotated target breakpoints, when available.
  std::optional<std::vector<std::size_t>> reference_breakpoints;
};

struct Clip {
  std::string id;
  std::vector<SentencePair> pairs;
  std::string source_language;
  std::string target_language;
  /// Media extent; defaults to [0, end of last source word].
  std::optional<Time> duration;

  Interval extent() const;
};

/// Target breakpoints j_1 < ... < j_k = m (1-based word indices).
struct Segmentation {
  std::vector<std::size_t> breakpoints;

  std::size_t segment_count() const { return breakpoints.size(); }
  /// Half-open 0-based word range [first, last) of segment t (1-based).
  std::pair<std::size_t, std::size_t> word_range(std::size_t t) const;
  bool operator==(const Segmentation&) const = default;
};

/// Relaxation of one segment. Deltas are signed fractions of the minimum
/// pause; positive values extend the interval outward.
struct SegmentRelaxation {
  double delta_left = 0.0;
  double delta_right = 0.0;
  Interval relaxed;
  bool operator==(const SegmentRelaxation&) const = default;
};

struct RelaxationPlan {
  std::vector<SegmentRelaxation> segments;
  /// Objective value of the plan under the model that produced it.
  long double score = 0.0L;
  std::vector<std::string> warnings;
};

enum class DubbingMode { Isochrone, OnOff };

std::string_view to_string(DubbingMode mode);
DubbingMode parse_mode(std::string_view text);

struct SegmentAlignment {
  std::vector<std::string> source_text;
  std::vector<std::string> target_text;
  Interval source_interval;
  Interval relaxed_interval;
  double delta_left = 0.0;
  double delta_right = 0.0;
  double source_rate = 0.0;
  double target_rate = 0.0;
};

struct AlignmentResult {
  std::string clip_id;
  std::size_t sentence_index = 0;
  DubbingMode mode = DubbingMode::Isochrone;
  bool onscreen = true;
  Segmentation segmentation;
  std::vector<SegmentAlignment> segments;
  long double segmentation_score = 0.0L;
  long double relaxation_score = 0.0L;
  std::vector<std::string> warnings;
};

struct Violation {
  /// Sentence index within the clip, or nullopt for clip-level rules.
  std::optional<std::size_t> sentence;
  std::string rule;
  std::string detail;
};

/// Split on ASCII whitespace.
std::vector<std::string> split_words(std::string_view text);
std::string join_words(const std::vector<std::string>& words,
                       std::size_t first = 0,
                       std::size_t last = static_cast<std::size_t>(-1));

/// Every index i whose following pause is >= min_pause, plus the final index.
std::vector<std::size_t> detect_breakpoints(const std::vector<TimedWord>& words,
                                            Time min_pause);

SourceSentence make_source_sentence(std::vector<TimedWord> words,
                                    Time min_pause = kDefaultMinPause);

std::vector<SourceInterval> source_intervals(const SourceSentence& sentence);

std::vector<Violation> validate_source(const SourceSentence& sentence,
                                       std::optional<std::size_t> index = {});
std::vector<Violation> validate_clip(const Clip& clip);
std::vector<Violation> validate_plan(const RelaxationPlan& plan);

bool is_valid_segmentation(const std::vector<std::size_t>& breakpoints,
                           std::size_t words);

}  // namespace dubalign
