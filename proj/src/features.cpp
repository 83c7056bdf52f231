#include "dubalign/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "dubalign/error.hpp"
#include "dubalign/subprocess.hpp"

namespace dubalign {

namespace {

const long double kLogFloor = std::log(static_cast<long double>(kScoreFloor));

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Token with trailing closing quotes and brackets removed.
std::string_view strip_closers(std::string_view token) {
  static constexpr std::string_view kClosers[] = {"\"", "'", ")", "]", "}",
                                                  "»", "”", "’"};
  bool stripped = true;
  while (stripped && !token.empty()) {
    stripped = false;
    for (auto c : kClosers) {
      if (ends_with(token, c)) {
        token.remove_suffix(c.size());
        stripped = true;
        break;
      }
    }
  }
  return token;
}

}  // namespace

void FeatureWeights::validate() const {
  for (double w : {w1, w2, w3, w4, w5}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidInput("feature weights must be finite and nonnegative");
    }
  }
}

bool FeatureWeights::on_simplex(double tolerance) const {
  return std::abs(w1 + w2 + w3 + w4 - 1.0) <= tolerance;
}

FeatureWeights FeatureWeights::scaled(double factor) const {
  return {w1 * factor, w2 * factor, w3 * factor, w4 * factor, w5 * factor};
}

long double log_score(double score) {
  return std::log(static_cast<long double>(std::max(score, kScoreFloor)));
}

FeatureVector to_scores(const FeatureLogs& l) {
  auto e = [](long double x) { return static_cast<double>(std::exp(x)); };
  return {e(l.l1), e(l.l2), e(l.l3), e(l.l4), e(l.l5)};
}

long double log_rate(double rate) { return std::log(static_cast<long double>(rate)); }

long double log_rate_agreement(long double log_a, long double log_b) {
  return std::max(-std::fabs(log_a - log_b), kLogFloor);
}

long double log_linear_step1(const FeatureWeights& w, const FeatureLogs& l) {
  long double acc = w.w1 * l.l1;
  acc += w.w2 * l.l2;
  acc += w.w3 * l.l3;
  acc += w.w4 * l.l4;
  return acc;
}

long double log_linear_step2(const FeatureWeights& w, const FeatureLogs& l) {
  long double acc = log_linear_step1(w, l);
  acc += w.w5 * l.l5;
  return acc;
}

PunctuationBreakScorer::PunctuationBreakScorer(double strong, double comma, double other)
    : strong_(strong), comma_(comma), other_(other) {
  for (double s : {strong, comma, other}) {
    if (!(s > 0.0 && s <= 1.0)) throw InvalidInput("break scores must lie in (0, 1]");
  }
}

double PunctuationBreakScorer::score(std::span<const std::string> target,
                                     std::size_t j) const {
  if (j == target.size()) return 1.0;
  const std::string_view tok = strip_closers(target[j - 1]);
  if (tok.empty()) return other_;
  for (std::string_view p : {".", "!", "?", ";", ":", "…", "。"}) {
    if (ends_with(tok, p)) return strong_;
  }
  for (std::string_view p : {",", "，", "、"}) {
    if (ends_with(tok, p)) return comma_;
  }
  return other_;
}

double LengthRatioScorer::score(std::span<const std::string> source_segment,
                                std::span<const std::string> target_segment,
                                std::span<const std::string> source_sentence,
                                std::span<const std::string> target_sentence) const {
  auto chars = [](std::span<const std::string> t) {
    return static_cast<double>(std::max<std::size_t>(visible_chars(t), 1));
  };
  const double segment_ratio = chars(target_segment) / chars(source_segment);
  const double sentence_ratio = chars(target_sentence) / chars(source_sentence);
  return std::min(segment_ratio, sentence_ratio) / std::max(segment_ratio, sentence_ratio);
}

CommandScorer::CommandScorer(std::string command)
    : process_(std::make_unique<LineProcess>(std::move(command))) {}

CommandScorer::~CommandScorer() = default;

double CommandScorer::request(const std::string& line) const {
  std::lock_guard lock(mutex_);
  process_->write_line(line);
  const std::string reply = process_->read_line();
  char* end = nullptr;
  const double value = std::strtod(reply.c_str(), &end);
  if (end == reply.c_str() || *end != '\0' || !(value > 0.0 && value <= 1.0)) {
    throw PluginProtocolError("scorer returned '" + reply + "', expected a value in (0, 1]");
  }
  return value;
}

double CommandScorer::score(std::span<const std::string> target, std::size_t j) const {
  std::vector<std::string> words(target.begin(), target.end());
  return request("lm_break\t" + join_words(words) + "\t" + std::to_string(j));
}

double CommandScorer::score(std::span<const std::string> source_segment,
                            std::span<const std::string> target_segment,
                            std::span<const std::string> source_sentence,
                            std::span<const std::string> target_sentence) const {
  auto join = [](std::span<const std::string> s) {
    return join_words(std::vector<std::string>(s.begin(), s.end()));
  };
  return request("semantic_match\t" + join(source_segment) + "\t" + join(target_segment) +
                 "\t" + join(source_sentence) + "\t" + join(target_sentence));
}

double lm_break_score(std::span<const std::string> target, std::size_t j) {
  static const PunctuationBreakScorer scorer;
  return scorer.score(target, j);
}

double semantic_match_score(std::span<const std::string> source_segment,
                            std::span<const std::string> target_segment,
                            std::span<const std::string> source_sentence,
                            std::span<const std::string> target_sentence) {
  static const LengthRatioScorer scorer;
  return scorer.score(source_segment, target_segment, source_sentence, target_sentence);
}

double rate_variation_score(std::optional<double> previous, double current) {
  if (!previous) return 1.0;
  return std::min(*previous, current) / std::max(*previous, current);
}

double rate_match_score(double source_rate, double target_rate) {
  return std::min(source_rate, target_rate) / std::max(source_rate, target_rate);
}

double isochrony_score(double delta_left, double delta_right) {
  return std::exp(-(std::abs(delta_left) + std::abs(delta_right)));
}

long double log_isochrony(double delta_left, double delta_right) {
  return std::max(-static_cast<long double>(std::abs(delta_left) + std::abs(delta_right)),
                  kLogFloor);
}

double global_relax_score(double target_rate) {
  if (target_rate <= 1.0) return 1.0;
  if (target_rate <= 2.0) return 2.0 - target_rate;
  return 0.0;
}

// ---------------------------------------------------------------------------

SentenceContext::SentenceContext(const SentencePair& pair, const ScoringModels& models)
    : pair_(pair), models_(models) {
  for (const auto& w : pair.source.words) source_tokens_.push_back(w.text);
  for (const auto& iv : source_intervals(pair.source)) intervals_.push_back(iv.span);
  source_bounds_ = pair.source.breakpoints;
  for (std::size_t t = 1; t <= intervals_.size(); ++t) {
    source_rates_.push_back(dubalign::source_rate(*models.durations, source_words(t),
                                                  pair.source.language, intervals_[t - 1])
                                .value);
  }
}

std::span<const std::string> SentenceContext::source_words(std::size_t t) const {
  const std::size_t first = t <= 1 ? 0 : source_bounds_[t - 2];
  return std::span<const std::string>(source_tokens_).subspan(first, source_bounds_[t - 1] - first);
}

std::span<const std::string> SentenceContext::target_words(std::size_t j_prev,
                                                           std::size_t j) const {
  return std::span<const std::string>(pair_.target.words).subspan(j_prev, j - j_prev);
}

double SentenceContext::target_duration(std::size_t j_prev, std::size_t j) const {
  return synth_duration(*models_.durations, target_words(j_prev, j), pair_.target.language);
}

double SentenceContext::break_score(std::size_t j) const {
  return models_.breaks->score(pair_.target.words, j);
}

double SentenceContext::semantic_score(std::size_t t, std::size_t j_prev,
                                       std::size_t j) const {
  return models_.semantics->score(source_words(t), target_words(j_prev, j), source_tokens_,
                                  pair_.target.words);
}

FeatureLogs step1_features(const SentenceContext& ctx, std::size_t t,
                           std::optional<std::size_t> j_before, std::size_t j_prev,
                           std::size_t j) {
  FeatureLogs l;
  l.l1 = log_score(ctx.break_score(j));
  l.l2 = log_score(ctx.semantic_score(t, j_prev, j));
  const long double rate =
      log_rate(speaking_rate(ctx.target_duration(j_prev, j), ctx.source_interval(t)).value);
  if (t > 1) {
    const long double previous = log_rate(
        speaking_rate(ctx.target_duration(*j_before, j_prev), ctx.source_interval(t - 1)).value);
    l.l3 = log_rate_agreement(previous, rate);
  }
  l.l4 = log_rate_agreement(log_rate(ctx.source_rate(t)), rate);
  return l;
}

long double transition_score_step1(const SentenceContext& ctx, const FeatureWeights& w,
                                   std::size_t t, std::optional<std::size_t> j_before,
                                   std::size_t j_prev, std::size_t j) {
  return log_linear_step1(w, step1_features(ctx, t, j_before, j_prev, j));
}

FeatureLogs step2_features(const SentenceContext& ctx, const Segmentation& segmentation,
                           std::size_t t, const std::optional<RelaxedPlacement>& previous,
                           const RelaxedPlacement& current) {
  const auto [first, last] = segmentation.word_range(t);
  FeatureLogs l;
  l.l1 = log_score(ctx.break_score(last));
  l.l2 = log_score(ctx.semantic_score(t, first, last));
  const long double rate =
      log_rate(speaking_rate(ctx.target_duration(first, last), current.interval).value);
  if (t > 1 && previous) {
    const auto [pfirst, plast] = segmentation.word_range(t - 1);
    const long double prev_rate =
        log_rate(speaking_rate(ctx.target_duration(pfirst, plast), previous->interval).value);
    l.l3 = log_rate_agreement(prev_rate, rate);
  }
  l.l4 = log_rate_agreement(log_rate(ctx.source_rate(t)), rate);
  l.l5 = log_isochrony(current.delta_left, current.delta_right);
  return l;
}

long double transition_score_step2(const SentenceContext& ctx, const FeatureWeights& w,
                                   const Segmentation& segmentation, std::size_t t,
                                   const std::optional<RelaxedPlacement>& previous,
                                   const RelaxedPlacement& current) {
  return log_linear_step2(w, step2_features(ctx, segmentation, t, previous, current));
}

}  // namespace dubalign
