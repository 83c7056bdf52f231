#include "dubalign/tuner.hpp"

#include <array>
#include <cmath>
#include <memory>

#include "dubalign/error.hpp"
#include "dubalign/metrics.hpp"
#include "dubalign/parallel.hpp"
#include "dubalign/pipeline.hpp"
#include "dubalign/relaxer.hpp"
#include "dubalign/segmenter.hpp"

namespace dubalign {

namespace {

std::size_t lattice_divisions(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw InvalidInput("grid step must lie in (0, 1]");
  const double n = 1.0 / step;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * rounded) {
    throw InvalidInput("grid step must divide 1 evenly");
  }
  return static_cast<std::size_t>(rounded);
}

using Counts = std::array<std::size_t, 4>;

std::vector<Counts> lattice_counts(std::size_t n) {
  std::vector<Counts> out;
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t b = 0; a + b <= n; ++b) {
      for (std::size_t c = 0; a + b + c <= n; ++c) {
        out.push_back({a, b, c, n - a - b - c});
      }
    }
  }
  return out;
}

FeatureWeights from_counts(const Counts& c, std::size_t n, double w5) {
  const auto d = static_cast<double>(n);
  return {static_cast<double>(c[0]) / d, static_cast<double>(c[1]) / d,
          static_cast<double>(c[2]) / d, static_cast<double>(c[3]) / d, w5};
}

struct Annotated {
  std::unique_ptr<SegmentationProblem> problem;
  Segmentation reference;
};

std::vector<Annotated> annotated_sentences(std::span<const Clip> clips,
                                           const ScoringModels& models) {
  std::vector<Annotated> out;
  for (const auto& clip : clips) {
    for (const auto& pair : clip.pairs) {
      if (!pair.reference_breakpoints || pair.reference_breakpoints->size() < 2) continue;
      if (pair.reference_breakpoints->size() != pair.source.segment_count()) {
        throw InvalidInput("clip " + clip.id +
                           ": reference breakpoints disagree with the source phrase count");
      }
      out.push_back({std::make_unique<SegmentationProblem>(pair, models),
                     Segmentation{*pair.reference_breakpoints}});
    }
  }
  if (out.empty()) {
    throw InvalidInput("no annotated sentence with at least two segments");
  }
  return out;
}

double accuracy_of(const std::vector<Annotated>& data, const FeatureWeights& w) {
  std::vector<Segmentation> predicted, reference;
  predicted.reserve(data.size());
  reference.reserve(data.size());
  for (const auto& a : data) {
    predicted.push_back(a.problem->solve(w).segmentation);
    reference.push_back(a.reference);
  }
  return segmentation_accuracy(predicted, reference);
}

}  // namespace

std::vector<FeatureWeights> simplex_lattice(double step, double w5) {
  const std::size_t n = lattice_divisions(step);
  std::vector<FeatureWeights> out;
  for (const auto& c : lattice_counts(n)) out.push_back(from_counts(c, n, w5));
  return out;
}

double step1_accuracy(std::span<const Clip> clips, const FeatureWeights& weights,
                      const ScoringModels& models) {
  return accuracy_of(annotated_sentences(clips, models), weights);
}

Step1Result tune_step1(std::span<const Clip> clips, double step, const ScoringModels& models,
                       const FeatureWeights& base, unsigned threads) {
  const std::size_t n = lattice_divisions(step);
  const auto data = annotated_sentences(clips, models);
  const auto points = lattice_counts(n);
  std::vector<double> accuracy(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    accuracy[i] = accuracy_of(data, from_counts(points[i], n, base.w5));
  });

  Step1Result result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.sweep.push_back({from_counts(points[i], n, base.w5), accuracy[i]});
    // Enumeration is lexicographically ascending, so >= keeps the largest tie.
    if (accuracy[i] >= accuracy[best]) best = i;
  }
  result.weights = from_counts(points[best], n, base.w5);
  result.accuracy = accuracy[best];
  return result;
}

double step2_smoothness(std::span<const Clip> clips, const FeatureWeights& weights,
                        const ScoringModels& models, double sigma, Time min_residual) {
  double total = 0.0;
  std::size_t counted = 0;
  for (const auto& clip : clips) {
    bool annotated = !clip.pairs.empty();
    for (const auto& pair : clip.pairs) annotated = annotated && pair.reference_breakpoints;
    if (!annotated) continue;
    const auto bounds = sentence_edge_bounds(clip, min_residual);
    std::vector<double> rates;
    for (std::size_t s = 0; s < clip.pairs.size(); ++s) {
      const auto& pair = clip.pairs[s];
      const Segmentation seg{*pair.reference_breakpoints};
      const auto plan = relax_local(pair, seg, weights, models, bounds[s]);
      const SentenceContext ctx(pair, models);
      for (std::size_t t = 1; t <= seg.segment_count(); ++t) {
        const auto [first, last] = seg.word_range(t);
        rates.push_back(
            speaking_rate(ctx.target_duration(first, last), plan.segments[t - 1].relaxed).value);
      }
    }
    if (rates.size() < 2) continue;
    total += smoothness(rates, sigma);
    ++counted;
  }
  if (counted == 0) {
    throw InvalidInput("no fully annotated clip with at least two segments");
  }
  return total / static_cast<double>(counted);
}

Step2Result tune_step2(std::span<const Clip> clips, const FeatureWeights& base,
                       const std::vector<double>& candidates, const ScoringModels& models,
                       double sigma, Time min_residual, unsigned threads) {
  if (candidates.empty()) throw InvalidInput("w5 candidate list is empty");
  for (double c : candidates) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidInput("w5 candidates must be finite and >= 0");
  }
  std::vector<double> scores(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    FeatureWeights w = base;
    w.w5 = candidates[i];
    scores[i] = step2_smoothness(clips, w, models, sigma, min_residual);
  });

  Step2Result result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    result.candidates.push_back({candidates[i], scores[i]});
    if (scores[i] > scores[best] || (scores[i] == scores[best] && candidates[i] > candidates[best])) {
      best = i;
    }
  }
  result.weights = base;
  result.weights.w5 = candidates[best];
  result.smoothness = scores[best];
  return result;
}

}  // namespace dubalign
