#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "dubalign/features.hpp"
#include "dubalign/model.hpp"

namespace dubalign {

inline constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

/**
 * DP chart of the segmentation step. The rate-variation feature couples
 * three consecutive breakpoints, so states are (t, j_prev, j): the best
 * score of a prefix whose last two breakpoints are j_prev and j.
 */
class SegmentationChart {
 public:
  SegmentationChart() = default;
  SegmentationChart(std::size_t segments, std::size_t words);

  std::size_t segments() const { return k_; }
  std::size_t words() const { return m_; }

  /// Best prefix score ending with j_t = j; -inf when no feasible split exists.
  long double best(std::size_t t, std::size_t j) const;
  long double state(std::size_t t, std::size_t j_prev, std::size_t j) const;

  /// Weight-independent segment feature evaluations (bounded by k*m^2).
  std::size_t segment_evaluations = 0;
  /// Log-linear combinations performed by the recursion.
  std::size_t transition_evaluations = 0;

 private:
  friend class SegmentationProblem;
  std::size_t index(std::size_t t, std::size_t j_prev, std::size_t j) const {
    return ((t - 1) * (m_ + 1) + j_prev) * (m_ + 1) + j;
  }

  std::size_t k_ = 0;
  std::size_t m_ = 0;
  std::vector<long double> score_;
  std::vector<std::size_t> back_;  // j_before of the best predecessor
};

struct SegmentationOutcome {
  Segmentation segmentation;
  long double score = kNegInf;
  SegmentationChart chart;
};

/// Weight-independent features of one sentence, precomputed once so that
/// the recursion can be re-run cheaply under many weight vectors.
class SegmentationProblem {
 public:
  /// Throws InfeasibleSegmentation when m < k.
  SegmentationProblem(const SentencePair& pair, const ScoringModels& models);

  std::size_t segments() const { return k_; }
  std::size_t words() const { return m_; }
  std::size_t segment_evaluations() const { return evaluations_; }

  SegmentationOutcome solve(const FeatureWeights& weights) const;

 private:
  struct SegmentFeatures {
    long double l1 = 0.0L;
    long double l2 = 0.0L;
    long double log_rate = 0.0L;
    long double l4 = 0.0L;
  };
  std::size_t index(std::size_t t, std::size_t j_prev, std::size_t j) const {
    return ((t - 1) * (m_ + 1) + j_prev) * (m_ + 1) + j;
  }
  std::size_t lowest(std::size_t t) const { return t; }
  std::size_t highest(std::size_t t) const { return m_ - k_ + t; }

  std::size_t k_;
  std::size_t m_;
  std::size_t evaluations_ = 0;
  std::vector<SegmentFeatures> features_;
};

/// Breakpoints maximizing the summed segmentation log-scores; ties go to the
/// lexicographically smallest breakpoint sequence.
Segmentation segment(const SentencePair& pair, const FeatureWeights& weights,
                     const ScoringModels& models);
SegmentationOutcome segment_with_chart(const SentencePair& pair, const FeatureWeights& weights,
                                       const ScoringModels& models);

/// Total log-score of a given segmentation, transitions summed in order.
long double segmentation_score(const SentencePair& pair, const FeatureWeights& weights,
                               const ScoringModels& models, const Segmentation& segmentation);

struct BruteForceSegmentation {
  Segmentation segmentation;
  long double score = kNegInf;
  std::size_t enumerated = 0;
};

/// Exhaustive enumeration of all C(m-1, k-1) segmentations.
BruteForceSegmentation brute_force_segment(const SentencePair& pair,
                                           const FeatureWeights& weights,
                                           const ScoringModels& models,
                                           std::size_t max_candidates = 1'000'000);

/// C(n, r) saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t r);

}  // namespace dubalign
