#include "dubalign/simulate.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "dubalign/error.hpp"

namespace dubalign {

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidInput("empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return lo + static_cast<std::int64_t>(x % span);
}

void SimulationOptions::validate() const {
  if (sentences_per_clip == 0) throw InvalidInput("sentences per clip must be positive");
  if (!(offscreen_ratio >= 0.0 && offscreen_ratio <= 1.0)) {
    throw InvalidInput("offscreen ratio must lie in [0, 1]");
  }
  if (min_phrases == 0 || max_phrases < min_phrases) throw InvalidInput("bad phrase count range");
  if (min_phrase_words == 0 || max_phrase_words < min_phrase_words) {
    throw InvalidInput("bad phrase length range");
  }
  if (!(verbosity_low > 0.0) || verbosity_high < verbosity_low) {
    throw InvalidInput("bad verbosity range");
  }
  if (!(punctuation_rate >= 0.0 && punctuation_rate <= 1.0)) {
    throw InvalidInput("punctuation rate must lie in [0, 1]");
  }
  if (!(seconds_per_char > 0.0)) throw InvalidInput("seconds per char must be positive");
  if (word_gap_min_ms < 0 || word_gap_max_ms < word_gap_min_ms ||
      Time::from_ms(word_gap_max_ms) >= min_pause) {
    throw InvalidInput("word gaps must stay below the minimum pause");
  }
  if (Time::from_ms(phrase_pause_min_ms) < min_pause || phrase_pause_max_ms < phrase_pause_min_ms) {
    throw InvalidInput("phrase pauses must reach the minimum pause");
  }
  if (sentence_gap_min_ms < 0 || sentence_gap_max_ms < sentence_gap_min_ms) {
    throw InvalidInput("bad sentence gap range");
  }
}

namespace {

constexpr std::array<const char*, 12> kSyllables = {"ka", "lo", "mi", "ne", "su", "ta",
                                                     "ri", "po", "ve", "da", "shi", "ku"};

std::string pseudo_word(Rng& rng, std::size_t length) {
  std::string w;
  while (w.size() < length) w += kSyllables[static_cast<std::size_t>(rng.integer(0, 11))];
  w.resize(length);
  return w;
}

/// Word lengths summing to `chars`, each at least 2 where possible.
std::vector<std::size_t> split_chars(Rng& rng, std::size_t chars) {
  std::vector<std::size_t> out;
  std::size_t remaining = std::max<std::size_t>(chars, 1);
  while (remaining > 0) {
    auto len = static_cast<std::size_t>(rng.integer(2, 7));
    if (len >= remaining || remaining - len < 2) len = remaining;
    out.push_back(len);
    remaining -= len;
  }
  return out;
}

}  // namespace

std::vector<Clip> simulate_corpus(const SimulationOptions& o) {
  o.validate();
  Rng rng(o.seed);
  std::vector<Clip> clips;
  for (std::size_t c = 0; c < o.clips; ++c) {
    Clip clip;
    clip.id = "sim-" + std::to_string(o.seed) + "-" + std::to_string(c);
    clip.source_language = "en";
    clip.target_language = "xx";
    Time cursor = Time::from_ms(rng.integer(200, 800));
    for (std::size_t s = 0; s < o.sentences_per_clip; ++s) {
      if (s > 0) cursor += Time::from_ms(rng.integer(o.sentence_gap_min_ms, o.sentence_gap_max_ms));
      SentencePair pair;
      const auto phrases = static_cast<std::size_t>(
          rng.integer(static_cast<std::int64_t>(o.min_phrases), static_cast<std::int64_t>(o.max_phrases)));
      std::vector<std::size_t> reference;
      for (std::size_t p = 0; p < phrases; ++p) {
        if (p > 0) cursor += Time::from_ms(rng.integer(o.phrase_pause_min_ms, o.phrase_pause_max_ms));
        const bool last_phrase = p + 1 == phrases;
        const auto count = static_cast<std::size_t>(rng.integer(
            static_cast<std::int64_t>(o.min_phrase_words), static_cast<std::int64_t>(o.max_phrase_words)));
        std::size_t source_chars = 0;
        for (std::size_t i = 0; i < count; ++i) {
          if (i > 0) cursor += Time::from_ms(rng.integer(o.word_gap_min_ms, o.word_gap_max_ms));
          std::string text = pseudo_word(rng, static_cast<std::size_t>(rng.integer(2, 8)));
          if (last_phrase && i + 1 == count) text += '.';
          source_chars += text.size();
          const double seconds = static_cast<double>(text.size()) * o.seconds_per_char *
                                 rng.uniform(0.95, 1.05);
          const std::int64_t ms = Time::from_seconds(seconds).rounded_ms();
          const Time length = Time::from_ms(std::max<std::int64_t>(1, ms));
          pair.source.words.push_back({text, cursor, cursor + length});
          cursor += length;
        }

        const char mark = last_phrase ? '.' : (rng.chance(o.punctuation_rate) ? ',' : '\0');
        const double verbosity = rng.uniform(o.verbosity_low, o.verbosity_high);
        auto budget = static_cast<std::size_t>(
            std::max(1.0, std::round(static_cast<double>(source_chars) * verbosity)));
        if (mark != '\0' && budget > 1) --budget;
        const auto lengths = split_chars(rng, budget);
        for (std::size_t i = 0; i < lengths.size(); ++i) {
          std::string w = pseudo_word(rng, lengths[i]);
          if (i + 1 == lengths.size() && mark != '\0') w += mark;
          pair.target.words.push_back(std::move(w));
        }
        reference.push_back(pair.target.words.size());
      }
      pair.source.min_pause = o.min_pause;
      pair.source.language = clip.source_language;
      pair.source.breakpoints = detect_breakpoints(pair.source.words, o.min_pause);
      pair.target.language = clip.target_language;
      pair.target.onscreen = !rng.chance(o.offscreen_ratio);
      pair.reference_breakpoints = std::move(reference);
      clip.pairs.push_back(std::move(pair));
    }
    clip.duration = cursor + Time::from_ms(rng.integer(200, 1000));
    clips.push_back(std::move(clip));
  }
  return clips;
}

}  // namespace dubalign
