#include "dubalign/segmenter.hpp"

#include <algorithm>
#include <limits>

#include "dubalign/error.hpp"

namespace dubalign {

SegmentationChart::SegmentationChart(std::size_t segments, std::size_t words)
    : k_(segments),
      m_(words),
      score_(segments * (words + 1) * (words + 1), kNegInf),
      back_(segments * (words + 1) * (words + 1), 0) {}

long double SegmentationChart::state(std::size_t t, std::size_t j_prev, std::size_t j) const {
  if (t < 1 || t > k_ || j_prev > m_ || j > m_) return kNegInf;
  return score_[index(t, j_prev, j)];
}

long double SegmentationChart::best(std::size_t t, std::size_t j) const {
  long double out = kNegInf;
  if (t < 1 || t > k_ || j > m_) return out;
  for (std::size_t jp = 0; jp < j; ++jp) out = std::max(out, score_[index(t, jp, j)]);
  return out;
}

SegmentationProblem::SegmentationProblem(const SentencePair& pair, const ScoringModels& models)
    : k_(pair.source.segment_count()), m_(pair.target.size()) {
  if (k_ == 0 || m_ < k_) throw InfeasibleSegmentation(m_, k_);
  const SentenceContext ctx(pair, models);
  features_.resize(k_ * (m_ + 1) * (m_ + 1));
  for (std::size_t t = 1; t <= k_; ++t) {
    const Interval interval = ctx.source_interval(t);
    const long double source_log_rate = log_rate(ctx.source_rate(t));
    const std::size_t prev_lo = t == 1 ? 0 : lowest(t - 1);
    const std::size_t prev_hi = t == 1 ? 0 : highest(t - 1);
    for (std::size_t jp = prev_lo; jp <= prev_hi; ++jp) {
      for (std::size_t j = std::max(jp + 1, lowest(t)); j <= highest(t); ++j) {
        auto& f = features_[index(t, jp, j)];
        f.l1 = log_score(ctx.break_score(j));
        f.l2 = log_score(ctx.semantic_score(t, jp, j));
        f.log_rate = log_rate(speaking_rate(ctx.target_duration(jp, j), interval).value);
        f.l4 = log_rate_agreement(source_log_rate, f.log_rate);
        ++evaluations_;
      }
    }
  }
}

SegmentationOutcome SegmentationProblem::solve(const FeatureWeights& weights) const {
  weights.validate();
  SegmentationOutcome out;
  SegmentationChart& chart = out.chart;
  chart = SegmentationChart(k_, m_);
  chart.segment_evaluations = evaluations_;

  // Prefix j_1..j_{t-1} of the best path reaching state (t, j_prev, j).
  auto prefix = [&](std::size_t t, std::size_t j_prev, std::size_t j) {
    std::vector<std::size_t> seq{j};
    std::size_t cur = j;
    std::size_t prev = j_prev;
    for (std::size_t u = t; u > 1; --u) {
      seq.push_back(prev);
      const std::size_t before = chart.back_[chart.index(u, prev, cur)];
      cur = prev;
      prev = before;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  for (std::size_t j = lowest(1); j <= highest(1); ++j) {
    const auto& f = features_[index(1, 0, j)];
    FeatureLogs logs{f.l1, f.l2, 0.0L, f.l4, 0.0L};
    long double acc = 0.0L;
    acc += log_linear_step1(weights, logs);
    chart.score_[chart.index(1, 0, j)] = acc;
    ++chart.transition_evaluations;
  }
  for (std::size_t t = 2; t <= k_; ++t) {
    for (std::size_t jp = lowest(t - 1); jp <= highest(t - 1); ++jp) {
      for (std::size_t j = std::max(jp + 1, lowest(t)); j <= highest(t); ++j) {
        const auto& f = features_[index(t, jp, j)];
        long double best = kNegInf;
        std::size_t best_before = 0;
        bool found = false;
        const std::size_t before_lo = t == 2 ? 0 : lowest(t - 2);
        const std::size_t before_hi = std::min(jp - 1, t == 2 ? std::size_t{0} : highest(t - 2));
        for (std::size_t jb = before_lo; jb <= before_hi && jb < jp; ++jb) {
          const long double base = chart.score_[chart.index(t - 1, jb, jp)];
          if (base == kNegInf) continue;
          const auto& pf = features_[index(t - 1, jb, jp)];
          FeatureLogs logs{f.l1, f.l2, log_rate_agreement(pf.log_rate, f.log_rate), f.l4, 0.0L};
          const long double total = base + log_linear_step1(weights, logs);
          ++chart.transition_evaluations;
          if (!found || total > best) {
            best = total;
            best_before = jb;
            found = true;
          } else if (total == best && prefix(t - 1, jb, jp) < prefix(t - 1, best_before, jp)) {
            best_before = jb;
          }
        }
        if (found) {
          chart.score_[chart.index(t, jp, j)] = best;
          chart.back_[chart.index(t, jp, j)] = best_before;
        }
      }
    }
  }

  bool found = false;
  std::size_t best_prev = 0;
  for (std::size_t jp = (k_ == 1 ? 0 : lowest(k_ - 1)); jp <= (k_ == 1 ? 0 : highest(k_ - 1));
       ++jp) {
    const long double s = chart.score_[chart.index(k_, jp, m_)];
    if (s == kNegInf) continue;
    if (!found || s > out.score) {
      out.score = s;
      best_prev = jp;
      found = true;
    } else if (s == out.score && prefix(k_, jp, m_) < prefix(k_, best_prev, m_)) {
      best_prev = jp;
    }
  }
  out.segmentation.breakpoints = prefix(k_, best_prev, m_);
  return out;
}

SegmentationOutcome segment_with_chart(const SentencePair& pair, const FeatureWeights& weights,
                                       const ScoringModels& models) {
  return SegmentationProblem(pair, models).solve(weights);
}

Segmentation segment(const SentencePair& pair, const FeatureWeights& weights,
                     const ScoringModels& models) {
  return segment_with_chart(pair, weights, models).segmentation;
}

long double segmentation_score(const SentencePair& pair, const FeatureWeights& weights,
                               const ScoringModels& models, const Segmentation& segmentation) {
  const SentenceContext ctx(pair, models);
  const auto& j = segmentation.breakpoints;
  long double acc = 0.0L;
  for (std::size_t t = 1; t <= j.size(); ++t) {
    const std::size_t jp = t == 1 ? 0 : j[t - 2];
    std::optional<std::size_t> jb;
    if (t >= 2) jb = t == 2 ? 0 : j[t - 3];
    acc += transition_score_step1(ctx, weights, t, jb, jp, j[t - 1]);
  }
  return acc;
}

std::size_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::size_t out = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    const std::size_t num = n - r + i;
    if (out > std::numeric_limits<std::size_t>::max() / num) {
      return std::numeric_limits<std::size_t>::max();
    }
    out = out * num / i;
  }
  return out;
}

BruteForceSegmentation brute_force_segment(const SentencePair& pair,
                                           const FeatureWeights& weights,
                                           const ScoringModels& models,
                                           std::size_t max_candidates) {
  weights.validate();
  const std::size_t k = pair.source.segment_count();
  const std::size_t m = pair.target.size();
  if (k == 0 || m < k) throw InfeasibleSegmentation(m, k);
  const std::size_t total = binomial(m - 1, k - 1);
  if (total > max_candidates) {
    throw OracleTooLarge("brute-force segmentation over " + std::to_string(total) +
                         " candidates exceeds the limit");
  }
  const SentenceContext ctx(pair, models);
  BruteForceSegmentation out;

  // Internal breakpoints as a combination of {1..m-1}, visited in
  // lexicographic order so the first maximum found is the smallest.
  std::vector<std::size_t> internal(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i) internal[i] = i + 1;
  for (;;) {
    std::vector<std::size_t> j = internal;
    j.push_back(m);
    long double acc = 0.0L;
    for (std::size_t t = 1; t <= k; ++t) {
      const std::size_t jp = t == 1 ? 0 : j[t - 2];
      std::optional<std::size_t> jb;
      if (t >= 2) jb = t == 2 ? 0 : j[t - 3];
      acc += transition_score_step1(ctx, weights, t, jb, jp, j[t - 1]);
    }
    ++out.enumerated;
    if (out.enumerated == 1 || acc > out.score) {
      out.score = acc;
      out.segmentation.breakpoints = j;
    }
    // Next combination.
    std::size_t i = internal.size();
    while (i > 0 && internal[i - 1] == m - 1 - (internal.size() - i)) --i;
    if (i == 0) break;
    ++internal[i - 1];
    for (std::size_t u = i; u < internal.size(); ++u) internal[u] = internal[u - 1] + 1;
  }
  return out;
}

}  // namespace dubalign
