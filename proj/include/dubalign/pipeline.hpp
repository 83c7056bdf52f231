#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dubalign/features.hpp"
#include "dubalign/model.hpp"
#include "dubalign/relaxer.hpp"

namespace dubalign {

struct PipelineConfig {
  DubbingMode mode = DubbingMode::Isochrone;
  FeatureWeights weights;
  ScoringModels models;
  /// Minimum pause used to detect source phrases at ingestion.
  Time min_pause = kDefaultMinPause;
  /// Pause kept between relaxed on-screen segments and at sentence edges.
  Time onscreen_min_residual{};
  GlobalRelaxOptions offscreen;
  /// Worker threads for per-sentence and per-run work; results do not
  /// depend on this value.
  unsigned threads = 1;

  void validate() const;
};

/// Per-sentence edge limits for the local relaxation: sentences share each
/// inter-sentence pause at its midpoint; the clip extent bounds the ends.
std::vector<LocalRelaxOptions> sentence_edge_bounds(const Clip& clip, Time min_residual);

/// Maximal runs of consecutive off-screen sentences as [first, last) ranges.
std::vector<std::pair<std::size_t, std::size_t>> offscreen_runs(const Clip& clip);

OffscreenRun make_offscreen_run(const Clip& clip, std::size_t first, std::size_t last,
                                const std::vector<Segmentation>& segmentations,
                                Time left_bound, Time right_bound,
                                const ScoringModels& models);

/// Segment then relax every sentence on its own.
std::vector<AlignmentResult> dub_isochrone(const Clip& clip, const PipelineConfig& config);

/// Segment every sentence; relax on-screen sentences locally and each
/// off-screen run globally, then contract slow off-screen segments.
std::vector<AlignmentResult> dub_onoff(const Clip& clip, const PipelineConfig& config);

/// Dispatch on config.mode.
std::vector<AlignmentResult> dub_clip(const Clip& clip, const PipelineConfig& config);

}  // namespace dubalign
