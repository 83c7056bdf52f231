#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dubalign/model.hpp"

namespace dubalign {

/// mt19937_64 with distribution mappings fixed here rather than left to the
/// standard library, so seeded streams agree across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi] by rejection, free of modulo bias.
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct SimulationOptions {
  std::size_t clips = 10;
  std::uint64_t seed = 0;
  std::size_t sentences_per_clip = 4;
  /// Probability that a sentence is off screen.
  double offscreen_ratio = 0.5;
  /// Source phrases per sentence and words per source phrase.
  std::size_t min_phrases = 1;
  std::size_t max_phrases = 3;
  std::size_t min_phrase_words = 2;
  std::size_t max_phrase_words = 5;
  /// Target to source character ratio per phrase.
  double verbosity_low = 0.9;
  double verbosity_high = 1.1;
  /// Probability that a non-final target phrase ends with a comma.
  double punctuation_rate = 0.8;
  /// Seconds per character of the synthetic source speech.
  double seconds_per_char = 0.08;
  /// Pause ranges in milliseconds.
  std::int64_t word_gap_min_ms = 20;
  std::int64_t word_gap_max_ms = 120;
  std::int64_t phrase_pause_min_ms = 300;
  std::int64_t phrase_pause_max_ms = 900;
  std::int64_t sentence_gap_min_ms = 400;
  std::int64_t sentence_gap_max_ms = 1500;
  /// Detection threshold recorded in the generated sentences.
  Time min_pause = kDefaultMinPause;

  void validate() const;
};

/**
 * Synthetic corpus: pseudo-word sentences whose source phrases are spoken
 * at roughly normal speed, separated by pauses above the detection
 * threshold, with target phrases of controlled verbosity. Reference
 * breakpoints mark the generated phrase boundaries. Identical options give
 * identical corpora.
 */
std::vector<Clip> simulate_corpus(const SimulationOptions& options);

}  // namespace dubalign
