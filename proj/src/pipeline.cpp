#include "dubalign/pipeline.hpp"

#include <cmath>

#include "dubalign/error.hpp"
#include "dubalign/parallel.hpp"
#include "dubalign/segmenter.hpp"

namespace dubalign {

namespace {

std::vector<Segmentation> segment_all(const Clip& clip, const PipelineConfig& config,
                                      std::vector<long double>& scores) {
  std::vector<Segmentation> out(clip.pairs.size());
  scores.assign(clip.pairs.size(), 0.0L);
  parallel_for(clip.pairs.size(), config.threads, [&](std::size_t i) {
    const auto& pair = clip.pairs[i];
    try {
      auto outcome = segment_with_chart(pair, config.weights, config.models);
      out[i] = std::move(outcome.segmentation);
      scores[i] = outcome.score;
    } catch (const InfeasibleSegmentation& e) {
      throw InfeasibleSegmentation(e.words(), e.segments(),
                                   "clip " + clip.id + ", sentence " + std::to_string(i));
    }
  });
  return out;
}

AlignmentResult make_result(const Clip& clip, std::size_t index, DubbingMode mode,
                            const Segmentation& segmentation, long double segmentation_score,
                            const RelaxationPlan& plan, const ScoringModels& models) {
  const auto& pair = clip.pairs[index];
  const SentenceContext ctx(pair, models);
  AlignmentResult r;
  r.clip_id = clip.id;
  r.sentence_index = index;
  r.mode = mode;
  r.onscreen = pair.target.onscreen;
  r.segmentation = segmentation;
  r.segmentation_score = segmentation_score;
  r.relaxation_score = plan.score;
  r.warnings = plan.warnings;
  for (std::size_t t = 1; t <= segmentation.segment_count(); ++t) {
    const auto [first, last] = segmentation.word_range(t);
    const auto src = ctx.source_words(t);
    const auto tgt = ctx.target_words(first, last);
    const auto& relax = plan.segments[t - 1];
    SegmentAlignment seg;
    seg.source_text.assign(src.begin(), src.end());
    seg.target_text.assign(tgt.begin(), tgt.end());
    seg.source_interval = ctx.source_interval(t);
    seg.relaxed_interval = relax.relaxed;
    seg.delta_left = relax.delta_left;
    seg.delta_right = relax.delta_right;
    seg.source_rate = ctx.source_rate(t);
    seg.target_rate =
        speaking_rate(ctx.target_duration(first, last), relax.relaxed).value;
    r.segments.push_back(std::move(seg));
  }
  return r;
}

void check_clip(const Clip& clip) {
  const auto violations = validate_clip(clip);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw ValidationError("clip " + clip.id +
                          (v.sentence ? ", sentence " + std::to_string(*v.sentence) : "") +
                          ": " + v.rule + ": " + v.detail);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  weights.validate();
  if (min_pause <= Time{}) throw InvalidInput("minimum pause must be positive");
  if (onscreen_min_residual < Time{} || offscreen.min_residual < Time{}) {
    throw InvalidInput("residual pauses must be nonnegative");
  }
  if (onscreen_min_residual > min_pause) {
    throw InvalidInput("on-screen residual pause cannot exceed the minimum pause");
  }
  if (offscreen.quantum <= Time{}) throw InvalidInput("lattice quantum must be positive");
  if (!models.durations || !models.breaks || !models.semantics) {
    throw InvalidInput("scoring models are incomplete");
  }
}

std::vector<LocalRelaxOptions> sentence_edge_bounds(const Clip& clip, Time min_residual) {
  const Interval extent = clip.extent();
  std::vector<LocalRelaxOptions> out(clip.pairs.size());
  for (auto& o : out) o.min_residual = min_residual;
  if (out.empty()) return out;
  out.front().left_bound = extent.begin;
  out.back().right_bound = extent.end;
  for (std::size_t i = 1; i < clip.pairs.size(); ++i) {
    const Time prev_end = clip.pairs[i - 1].source.words.back().end;
    const Time start = clip.pairs[i].source.words.front().start;
    const Time gap = start - prev_end;
    // Split the pause at its midpoint, keeping the residual between the two.
    const Time half_residual = Time::from_us(std::min(min_residual, gap).us() / 2);
    const Time mid = midpoint(prev_end, start);
    out[i - 1].right_bound = std::max(prev_end, mid - half_residual);
    out[i].left_bound = std::min(start, mid - half_residual + std::min(min_residual, gap));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> offscreen_runs(const Clip& clip) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < clip.pairs.size()) {
    if (clip.pairs[i].target.onscreen) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < clip.pairs.size() && !clip.pairs[j].target.onscreen) ++j;
    out.emplace_back(i, j);
    i = j;
  }
  return out;
}

OffscreenRun make_offscreen_run(const Clip& clip, std::size_t first, std::size_t last,
                                const std::vector<Segmentation>& segmentations,
                                Time left_bound, Time right_bound,
                                const ScoringModels& models) {
  OffscreenRun run;
  run.left_bound = left_bound;
  run.right_bound = right_bound;
  run.min_pause = clip.pairs[first].source.min_pause;
  for (std::size_t s = first; s < last; ++s) {
    run.sentences.push_back(s);
    const SentenceContext ctx(clip.pairs[s], models);
    const auto& seg = segmentations[s];
    for (std::size_t t = 1; t <= seg.segment_count(); ++t) {
      const auto [a, b] = seg.word_range(t);
      const auto words = ctx.target_words(a, b);
      run.segments.push_back({s, t, ctx.source_interval(t),
                              std::vector<std::string>(words.begin(), words.end()),
                              ctx.target_duration(a, b)});
    }
  }
  return run;
}

std::vector<AlignmentResult> dub_isochrone(const Clip& clip, const PipelineConfig& config) {
  config.validate();
  check_clip(clip);
  std::vector<long double> seg_scores;
  const auto segmentations = segment_all(clip, config, seg_scores);
  const auto bounds = sentence_edge_bounds(clip, config.onscreen_min_residual);
  std::vector<AlignmentResult> out(clip.pairs.size());
  parallel_for(clip.pairs.size(), config.threads, [&](std::size_t i) {
    const auto plan = relax_local(clip.pairs[i], segmentations[i], config.weights,
                                  config.models, bounds[i]);
    out[i] = make_result(clip, i, DubbingMode::Isochrone, segmentations[i], seg_scores[i], plan,
                         config.models);
  });
  return out;
}

std::vector<AlignmentResult> dub_onoff(const Clip& clip, const PipelineConfig& config) {
  config.validate();
  check_clip(clip);
  std::vector<long double> seg_scores;
  const auto segmentations = segment_all(clip, config, seg_scores);
  const auto bounds = sentence_edge_bounds(clip, config.onscreen_min_residual);
  std::vector<AlignmentResult> out(clip.pairs.size());

  std::vector<std::size_t> onscreen;
  for (std::size_t i = 0; i < clip.pairs.size(); ++i) {
    if (clip.pairs[i].target.onscreen) onscreen.push_back(i);
  }
  parallel_for(onscreen.size(), config.threads, [&](std::size_t n) {
    const std::size_t i = onscreen[n];
    const auto plan = relax_local(clip.pairs[i], segmentations[i], config.weights,
                                  config.models, bounds[i]);
    out[i] = make_result(clip, i, DubbingMode::OnOff, segmentations[i], seg_scores[i], plan,
                         config.models);
  });

  const auto runs = offscreen_runs(clip);
  const Interval extent = clip.extent();
  const Time residual = config.offscreen.min_residual;
  parallel_for(runs.size(), config.threads, [&](std::size_t r) {
    const auto [first, last] = runs[r];
    Time left = extent.begin;
    Time right = extent.end;
    if (first > 0) {
      left = out[first - 1].segments.back().relaxed_interval.end + residual;
    }
    if (last < clip.pairs.size()) {
      right = out[last].segments.front().relaxed_interval.begin - residual;
    }
    const OffscreenRun run =
        make_offscreen_run(clip, first, last, segmentations, left, right, config.models);
    const RelaxationPlan global = relax_global(run, config.offscreen);
    const RelaxationPlan trimmed = trim_slow_segments(global, run);

    std::size_t offset = 0;
    for (std::size_t s = first; s < last; ++s) {
      const std::size_t k = segmentations[s].segment_count();
      RelaxationPlan part;
      part.warnings = global.warnings;
      long double score = 0.0L;
      for (std::size_t t = 0; t < k; ++t) {
        part.segments.push_back(trimmed.segments[offset + t]);
        const double value = global_relax_score(
            speaking_rate(run.segments[offset + t].target_duration,
                          global.segments[offset + t].relaxed)
                .value);
        score += value > 0.0 ? std::log(static_cast<long double>(value)) : kNegInf;
      }
      part.score = score;
      out[s] = make_result(clip, s, DubbingMode::OnOff, segmentations[s], seg_scores[s], part,
                           config.models);
      offset += k;
    }
  });
  return out;
}

std::vector<AlignmentResult> dub_clip(const Clip& clip, const PipelineConfig& config) {
  return config.mode == DubbingMode::Isochrone ? dub_isochrone(clip, config)
                                               : dub_onoff(clip, config);
}

}  // namespace dubalign
