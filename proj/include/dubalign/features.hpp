#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dubalign/duration.hpp"
#include "dubalign/model.hpp"

namespace dubalign {

class LineProcess;

/// Weights of the log-linear models; w1..w4 drive segmentation, w5 the
/// isochrony feature of the relaxation step.
struct FeatureWeights {
  double w1 = 0.25;
  double w2 = 0.25;
  double w3 = 0.25;
  double w4 = 0.25;
  double w5 = 1.0;

  /// Throws InvalidInput on negative or non-finite weights.
  void validate() const;
  bool on_simplex(double tolerance = 1e-9) const;
  FeatureWeights scaled(double factor) const;
  bool operator==(const FeatureWeights&) const = default;
};

/// Feature scores, each in (0, 1].
struct FeatureVector {
  double s1 = 1.0;
  double s2 = 1.0;
  double s3 = 1.0;
  double s4 = 1.0;
  double s5 = 1.0;
};

/// Logarithms of the feature scores, as used by the log-linear combiners.
struct FeatureLogs {
  long double l1 = 0.0L;
  long double l2 = 0.0L;
  long double l3 = 0.0L;
  long double l4 = 0.0L;
  long double l5 = 0.0L;
};

inline constexpr double kScoreFloor = 1e-6;

/// log(max(score, kScoreFloor)).
long double log_score(double score);
FeatureVector to_scores(const FeatureLogs& logs);

long double log_rate(double rate);

/// log(min(a,b)/max(a,b)) evaluated from log-rates, floored like log_score.
long double log_rate_agreement(long double log_a, long double log_b);

/// Σ w_a log s_a over s1..s4 (segmentation) or s1..s5 (relaxation),
/// accumulated left to right.
long double log_linear_step1(const FeatureWeights& w, const FeatureLogs& logs);
long double log_linear_step2(const FeatureWeights& w, const FeatureLogs& logs);

// ---------------------------------------------------------------------------
// Plug-in scorers

/// s1: plausibility of a target break after word j (1-based).
class BreakScorer {
 public:
  virtual ~BreakScorer() = default;
  virtual double score(std::span<const std::string> target, std::size_t j) const = 0;
};

/// s2: cross-lingual match between a source and a target segment.
class SemanticScorer {
 public:
  virtual ~SemanticScorer() = default;
  virtual double score(std::span<const std::string> source_segment,
                       std::span<const std::string> target_segment,
                       std::span<const std::string> source_sentence,
                       std::span<const std::string> target_sentence) const = 0;
};

/// Break score from the punctuation ending word j.
class PunctuationBreakScorer final : public BreakScorer {
 public:
  PunctuationBreakScorer(double strong = 0.9, double comma = 0.6, double other = 0.1);
  double score(std::span<const std::string> target, std::size_t j) const override;

 private:
  double strong_;
  double comma_;
  double other_;
};

/// exp(-|ln(segment length ratio / sentence length ratio)|) on visible
/// character counts.
class LengthRatioScorer final : public SemanticScorer {
 public:
  double score(std::span<const std::string> source_segment,
               std::span<const std::string> target_segment,
               std::span<const std::string> source_sentence,
               std::span<const std::string> target_sentence) const override;
};

/**
 * External scorer speaking a tab-separated line protocol:
 *
 *   lm_break <TAB> target sentence <TAB> j
 *   semantic_match <TAB> source segment <TAB> target segment <TAB>
 *                  source sentence <TAB> target sentence
 *
 * Each request is answered by one decimal score in (0, 1].
 */
class CommandScorer final : public BreakScorer, public SemanticScorer {
 public:
  explicit CommandScorer(std::string command);
  ~CommandScorer() override;

  double score(std::span<const std::string> target, std::size_t j) const override;
  double score(std::span<const std::string> source_segment,
               std::span<const std::string> target_segment,
               std::span<const std::string> source_sentence,
               std::span<const std::string> target_sentence) const override;

 private:
  double request(const std::string& line) const;

  mutable std::mutex mutex_;
  mutable std::unique_ptr<LineProcess> process_;
};

struct ScoringModels {
  std::shared_ptr<const DurationOracle> durations = std::make_shared<CharDurationModel>();
  std::shared_ptr<const BreakScorer> breaks = std::make_shared<PunctuationBreakScorer>();
  std::shared_ptr<const SemanticScorer> semantics = std::make_shared<LengthRatioScorer>();
};

// ---------------------------------------------------------------------------
// Feature functions

double lm_break_score(std::span<const std::string> target, std::size_t j);
double semantic_match_score(std::span<const std::string> source_segment,
                            std::span<const std::string> target_segment,
                            std::span<const std::string> source_sentence,
                            std::span<const std::string> target_sentence);
/// s3; without a predecessor the score is 1.
double rate_variation_score(std::optional<double> previous, double current);
double rate_match_score(double source_rate, double target_rate);
double isochrony_score(double delta_left, double delta_right);
long double log_isochrony(double delta_left, double delta_right);

/// Off-screen relaxation score: 1 up to normal speed, falling linearly to
/// 0 at twice normal speed.
double global_relax_score(double target_rate);

// ---------------------------------------------------------------------------

/// Per-sentence view used by both optimization steps: source intervals,
/// source rates and access to the target words.
class SentenceContext {
 public:
  SentenceContext(const SentencePair& pair, const ScoringModels& models);

  std::size_t segments() const { return intervals_.size(); }
  std::size_t words() const { return pair_.target.words.size(); }
  const SentencePair& pair() const { return pair_; }
  const ScoringModels& models() const { return models_; }

  /// Source interval of segment t (1-based).
  Interval source_interval(std::size_t t) const { return intervals_[t - 1]; }
  std::span<const std::string> source_words(std::size_t t) const;
  double source_rate(std::size_t t) const { return source_rates_[t - 1]; }

  /// Target words (j_prev, j], 1-based breakpoints.
  std::span<const std::string> target_words(std::size_t j_prev, std::size_t j) const;
  double target_duration(std::size_t j_prev, std::size_t j) const;

  double break_score(std::size_t j) const;
  double semantic_score(std::size_t t, std::size_t j_prev, std::size_t j) const;

 private:
  const SentencePair& pair_;
  const ScoringModels& models_;
  std::vector<std::string> source_tokens_;
  std::vector<Interval> intervals_;
  std::vector<std::size_t> source_bounds_;
  std::vector<double> source_rates_;
};

/**
 * Feature logs of target segment t = words (j_prev, j] over the unrelaxed
 * source interval. For t > 1 the preceding segment (j_before, j_prev] feeds
 * the rate-variation feature.
 */
FeatureLogs step1_features(const SentenceContext& ctx, std::size_t t,
                           std::optional<std::size_t> j_before, std::size_t j_prev,
                           std::size_t j);

long double transition_score_step1(const SentenceContext& ctx, const FeatureWeights& w,
                                   std::size_t t, std::optional<std::size_t> j_before,
                                   std::size_t j_prev, std::size_t j);

/// Relaxed placement of one segment for the relaxation step.
struct RelaxedPlacement {
  double delta_left = 0.0;
  double delta_right = 0.0;
  Interval interval;
};

/**
 * Feature logs of segment t under fixed breakpoints, with its speaking rate
 * measured over the relaxed interval. `previous` is the placement of
 * segment t-1 (absent for t = 1).
 */
FeatureLogs step2_features(const SentenceContext& ctx, const Segmentation& segmentation,
                           std::size_t t, const std::optional<RelaxedPlacement>& previous,
                           const RelaxedPlacement& current);

long double transition_score_step2(const SentenceContext& ctx, const FeatureWeights& w,
                                   const Segmentation& segmentation, std::size_t t,
                                   const std::optional<RelaxedPlacement>& previous,
                                   const RelaxedPlacement& current);

}  // namespace dubalign
