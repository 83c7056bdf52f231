#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dubalign/features.hpp"
#include "dubalign/model.hpp"

namespace dubalign {

struct LatticePoint {
  FeatureWeights weights;  // w1..w4 from the lattice, w5 carried over
  double accuracy = 0.0;   // percent
};

struct Step1Result {
  FeatureWeights weights;
  double accuracy = 0.0;
  /// Every lattice point in enumeration order.
  std::vector<LatticePoint> sweep;
};

/// Weight vectors {w : Σ w_a = 1, w_a a multiple of step}, w1 major,
/// ascending. Throws InvalidInput unless 1/step is a positive integer.
std::vector<FeatureWeights> simplex_lattice(double step, double w5 = 1.0);

/// Segmentation accuracy of `weights` on every annotated sentence with at
/// least two segments.
double step1_accuracy(std::span<const Clip> clips, const FeatureWeights& weights,
                      const ScoringModels& models);

/**
 * Exhaustive sweep of the simplex lattice for w1..w4, maximizing
 * segmentation accuracy against the reference breakpoints. Ties go to the
 * lexicographically largest weight vector. w5 is copied from `base`.
 */
Step1Result tune_step1(std::span<const Clip> clips, double step = 0.1,
                       const ScoringModels& models = {}, const FeatureWeights& base = {},
                       unsigned threads = 1);

inline const std::vector<double> kDefaultW5Candidates = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

struct CandidateScore {
  double w5 = 0.0;
  double smoothness = 0.0;  // mean over clips, percent
};

struct Step2Result {
  FeatureWeights weights;
  double smoothness = 0.0;
  std::vector<CandidateScore> candidates;  // in input order
};

/// Mean clip smoothness after relaxing every sentence on its reference
/// breakpoints with the given weights.
double step2_smoothness(std::span<const Clip> clips, const FeatureWeights& weights,
                        const ScoringModels& models, double sigma = 0.25,
                        Time min_residual = {});

/**
 * Picks w5 among `candidates` maximizing mean clip smoothness with w1..w4
 * fixed from `base`. Ties go to the largest w5. Clips lacking reference
 * breakpoints on any sentence are skipped.
 */
Step2Result tune_step2(std::span<const Clip> clips, const FeatureWeights& base,
                       const std::vector<double>& candidates = kDefaultW5Candidates,
                       const ScoringModels& models = {}, double sigma = 0.25,
                       Time min_residual = {}, unsigned threads = 1);

}  // namespace dubalign
