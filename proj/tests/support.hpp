#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "dubalign/model.hpp"
#include "dubalign/relaxer.hpp"
#include "dubalign/simulate.hpp"

namespace support {

using namespace dubalign;

struct W {
  std::string text;
  std::int64_t start_ms;
  std::int64_t end_ms;
};

inline SentencePair sentence(const std::vector<W>& source, const std::string& target,
                              bool onscreen = true, Time min_pause = kDefaultMinPause) {
  std::vector<TimedWord> words;
  for (const auto& w : source) {
    words.push_back({w.text, Time::from_ms(w.start_ms), Time::from_ms(w.end_ms)});
  }
  SentencePair p;
  p.source = make_source_sentence(std::move(words), min_pause);
  p.target.words = split_words(target);
  p.target.onscreen = onscreen;
  p.target.language = "xx";
  return p;
}

inline Clip make_clip(std::vector<SentencePair> pairs, std::string id = "clip") {
  Clip c;
  c.id = std::move(id);
  c.source_language = "en";
  c.target_language = "xx";
  c.pairs = std::move(pairs);
  return c;
}

/// Uniform point of the 4-simplex via normalized exponentials.
inline FeatureWeights random_simplex(Rng& rng, double w5 = 1.0) {
  double e[4];
  double sum = 0.0;
  for (double& x : e) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  return {e[0] / sum, e[1] / sum, e[2] / sum, e[3] / sum, w5};
}

inline std::string random_token(Rng& rng) {
  static const char* kStems[] = {"ka", "lo", "mira", "ne", "sutu", "ta", "ri", "pove", "da", "shiko"};
  std::string w = kStems[rng.integer(0, 9)];
  if (rng.chance(0.5)) w += kStems[rng.integer(0, 9)];
  return w;
}

/**
 * Sentence with k source phrases separated by pauses of at least the
 * minimum pause and a target of m words with scattered punctuation.
 */
inline SentencePair random_sentence(Rng& rng, std::size_t m, std::size_t k,
                                    std::int64_t start_ms = 0) {
  std::vector<W> src;
  std::int64_t cursor = start_ms;
  for (std::size_t p = 0; p < k; ++p) {
    if (p > 0) cursor += rng.integer(300, 900);
    const auto words = rng.integer(1, 3);
    for (std::int64_t i = 0; i < words; ++i) {
      if (i > 0) cursor += rng.integer(0, 150);
      const std::string t = random_token(rng);
      const std::int64_t len = static_cast<std::int64_t>(t.size()) * rng.integer(60, 110);
      src.push_back({t, cursor, cursor + len});
      cursor += len;
    }
  }
  std::string target;
  for (std::size_t i = 0; i < m; ++i) {
    std::string t = random_token(rng);
    const double u = rng.uniform();
    if (i + 1 < m && u < 0.15) t += ",";
    else if (i + 1 < m && u < 0.25) t += ".";
    target += (i ? " " : "") + t;
  }
  return sentence(src, target);
}

/// Off-screen run of `segments` segments spread over `sentences`
/// sentences, with random gaps, bounds and target durations.
inline OffscreenRun random_run(Rng& rng, std::size_t segments, std::size_t sentences,
                               std::int64_t gap_min_ms, std::int64_t gap_max_ms) {
  OffscreenRun run;
  run.min_pause = kDefaultMinPause;
  std::int64_t cursor = 2000;
  const std::size_t per = (segments + sentences - 1) / sentences;
  for (std::size_t t = 0; t < segments; ++t) {
    if (t > 0) cursor += rng.integer(gap_min_ms, gap_max_ms);
    const std::int64_t len = rng.integer(400, 1600);
    RunSegment seg;
    seg.sentence = t / per;
    seg.segment = t % per + 1;
    seg.source = {Time::from_ms(cursor), Time::from_ms(cursor + len)};
    seg.target = {"w"};
    // Normal-speed rates between 0.5 and 2.6 over the source interval.
    seg.target_duration = static_cast<double>(len) / 1000.0 * rng.uniform(0.5, 2.6);
    run.segments.push_back(seg);
    cursor += len;
  }
  for (std::size_t s = 0; s < sentences; ++s) run.sentences.push_back(s);
  run.left_bound = run.segments.front().source.begin - Time::from_ms(rng.integer(0, 300));
  run.right_bound = run.segments.back().source.end + Time::from_ms(rng.integer(0, 300));
  return run;
}

}  // namespace support
