#include "dubalign/model.hpp"

#include <algorithm>
#include <cctype>

#include "dubalign/error.hpp"

namespace dubalign {

Interval Clip::extent() const {
  Time end;
  if (!pairs.empty() && !pairs.back().source.words.empty()) {
    end = pairs.back().source.words.back().end;
  }
  if (duration) end = std::max(end, *duration);
  return {Time{}, end};
}

std::pair<std::size_t, std::size_t> Segmentation::word_range(std::size_t t) const {
  const std::size_t first = t <= 1 ? 0 : breakpoints[t - 2];
  return {first, breakpoints[t - 1]};
}

std::string_view to_string(DubbingMode mode) {
  return mode == DubbingMode::Isochrone ? "iso" : "onoff";
}

DubbingMode parse_mode(std::string_view text) {
  if (text == "iso") return DubbingMode::Isochrone;
  if (text == "onoff") return DubbingMode::OnOff;
  throw InvalidInput("unknown dubbing mode '" + std::string(text) + "'");
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_words(const std::vector<std::string>& words, std::size_t first,
                       std::size_t last) {
  last = std::min(last, words.size());
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out += ' ';
    out += words[i];
  }
  return out;
}

std::vector<std::size_t> detect_breakpoints(const std::vector<TimedWord>& words,
                                            Time min_pause) {
  if (words.empty()) throw InvalidInput("detect_breakpoints: empty word list");
  if (min_pause <= Time{}) throw InvalidInput("detect_breakpoints: min_pause must be positive");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    if (words[i + 1].start - words[i].end >= min_pause) out.push_back(i + 1);
  }
  out.push_back(words.size());
  return out;
}

SourceSentence make_source_sentence(std::vector<TimedWord> words, Time min_pause) {
  SourceSentence s;
  s.breakpoints = detect_breakpoints(words, min_pause);
  s.words = std::move(words);
  s.min_pause = min_pause;
  return s;
}

std::vector<SourceInterval> source_intervals(const SourceSentence& sentence) {
  std::vector<SourceInterval> out;
  out.reserve(sentence.breakpoints.size());
  std::size_t first = 0;
  for (std::size_t t = 0; t < sentence.breakpoints.size(); ++t) {
    const std::size_t last = sentence.breakpoints[t];
    out.push_back({{sentence.words[first].start, sentence.words[last - 1].end}, t + 1});
    first = last;
  }
  return out;
}

bool is_valid_segmentation(const std::vector<std::size_t>& breakpoints,
                           std::size_t words) {
  if (breakpoints.empty() || breakpoints.back() != words) return false;
  std::size_t prev = 0;
  for (std::size_t j : breakpoints) {
    if (j <= prev) return false;
    prev = j;
  }
  return true;
}

std::vector<Violation> validate_source(const SourceSentence& s,
                                       std::optional<std::size_t> index) {
  std::vector<Violation> out;
  auto add = [&](std::string rule, std::string detail) {
    out.push_back({index, std::move(rule), std::move(detail)});
  };
  if (s.words.empty()) {
    add("empty-sentence", "source sentence has no words");
    return out;
  }
  if (s.min_pause <= Time{}) add("min-pause", "minimum pause must be positive");
  for (std::size_t i = 0; i < s.words.size(); ++i) {
    const auto& w = s.words[i];
    const std::string at = "word " + std::to_string(i + 1);
    if (w.text.empty()) add("word-text", at + " has empty text");
    if (w.start < Time{} || w.end < w.start) add("word-timing", at + " has end < start or negative start");
    if (i > 0 && w.start < s.words[i - 1].end) add("word-order", at + " overlaps its predecessor");
  }
  if (!is_valid_segmentation(s.breakpoints, s.words.size())) {
    add("breakpoint-order", "breakpoints must be strictly increasing and end at n");
    return out;
  }
  for (std::size_t t = 0; t + 1 < s.breakpoints.size(); ++t) {
    const std::size_t i = s.breakpoints[t];
    const Time pause = s.words[i].start - s.words[i - 1].end;
    if (pause < s.min_pause) {
      add("breakpoint-pause", "pause after word " + std::to_string(i) + " is " +
                                  std::to_string(pause.us() / 1000) + "ms, below minimum");
    }
  }
  for (const auto& iv : source_intervals(s)) {
    if (iv.span.end <= iv.span.begin) {
      add("interval-length", "source segment " + std::to_string(iv.segment_index) +
                                 " has zero duration");
    }
  }
  return out;
}

std::vector<Violation> validate_clip(const Clip& clip) {
  std::vector<Violation> out;
  if (clip.pairs.empty()) {
    out.push_back({std::nullopt, "empty-clip", "clip has no sentences"});
    return out;
  }
  for (std::size_t s = 0; s < clip.pairs.size(); ++s) {
    const auto& pair = clip.pairs[s];
    auto v = validate_source(pair.source, s);
    out.insert(out.end(), v.begin(), v.end());
    if (pair.target.words.empty()) {
      out.push_back({s, "target-empty", "target sentence has no words"});
    }
    if (pair.reference_breakpoints) {
      const auto& ref = *pair.reference_breakpoints;
      if (!is_valid_segmentation(ref, pair.target.size()) ||
          ref.size() != pair.source.segment_count()) {
        out.push_back({s, "reference-breakpoints",
                       "reference breakpoints must be strictly increasing, end at m, "
                       "and number k"});
      }
    }
    if (s > 0 && !pair.source.words.empty() && !clip.pairs[s - 1].source.words.empty() &&
        pair.source.words.front().start < clip.pairs[s - 1].source.words.back().end) {
      out.push_back({s, "temporal-order", "sentence overlaps or precedes its predecessor"});
    }
  }
  if (clip.duration && !clip.pairs.back().source.words.empty() &&
      *clip.duration < clip.pairs.back().source.words.back().end) {
    out.push_back({std::nullopt, "clip-extent", "clip duration ends before its last word"});
  }
  return out;
}

std::vector<Violation> validate_plan(const RelaxationPlan& plan) {
  std::vector<Violation> out;
  for (std::size_t t = 0; t < plan.segments.size(); ++t) {
    const auto& iv = plan.segments[t].relaxed;
    if (iv.end <= iv.begin) {
      out.push_back({std::nullopt, "plan-duration",
                     "segment " + std::to_string(t + 1) + " has non-positive duration"});
    }
    for (std::size_t u = t + 1; u < plan.segments.size(); ++u) {
      if (plan.segments[u].relaxed.begin < iv.end) {
        out.push_back({std::nullopt, "plan-overlap",
                       "segments " + std::to_string(t + 1) + " and " +
                           std::to_string(u + 1) + " overlap or are out of order"});
      }
    }
  }
  return out;
}

}  // namespace dubalign
