#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dubalign/features.hpp"
#include "dubalign/model.hpp"

namespace dubalign {

/// Per-side relaxations for on-screen segments: {0, ±1/4, ±2/4, ±3/4, ±1}
/// of the minimum pause, stored as signed quarter counts.
struct RelaxationGrid {
  static constexpr int kQuarters = 4;
  static constexpr std::size_t kValues = 2 * kQuarters + 1;
  static constexpr std::size_t kStates = kValues * kValues;

  /// Quarter counts in ascending order: -4 .. 4.
  static constexpr std::array<int, kValues> values() {
    std::array<int, kValues> out{};
    for (std::size_t i = 0; i < kValues; ++i) out[i] = static_cast<int>(i) - kQuarters;
    return out;
  }
  static constexpr double fraction(int quarters) { return quarters / double(kQuarters); }
  static Time shift(Time min_pause, int quarters) {
    return Time::from_us(min_pause.us() * quarters / kQuarters);
  }
  /// (left, right) quarter counts of a combined state index; states are
  /// ordered by left then right relaxation.
  static constexpr std::pair<int, int> decode(std::size_t state) {
    return {static_cast<int>(state / kValues) - kQuarters,
            static_cast<int>(state % kValues) - kQuarters};
  }
};

struct LocalRelaxOptions {
  /// Pause kept between consecutive relaxed segments.
  Time min_residual{};
  /// Earliest start of the first segment; unbounded when absent.
  std::optional<Time> left_bound;
  /// Latest end of the last segment; unbounded when absent.
  std::optional<Time> right_bound;
};

/**
 * Relaxation step for on-screen speech: chooses per-segment (δl, δr) on the
 * grid maximizing the summed five-feature log-scores, subject to relaxed
 * intervals staying disjoint with the configured residual pause and within
 * the edge bounds. Ties prefer the smaller total shift, then the
 * lexicographically smallest assignment.
 */
RelaxationPlan relax_local(const SentencePair& pair, const Segmentation& segmentation,
                           const FeatureWeights& weights, const ScoringModels& models,
                           const LocalRelaxOptions& options = {});

/// Exhaustive counterpart of relax_local over all 81^k assignments.
RelaxationPlan brute_force_relax_local(const SentencePair& pair,
                                       const Segmentation& segmentation,
                                       const FeatureWeights& weights,
                                       const ScoringModels& models,
                                       const LocalRelaxOptions& options = {},
                                       std::size_t max_assignments = 1'000'000);

/// Summed relaxation log-score of an explicit plan; -inf if infeasible.
long double local_plan_score(const SentencePair& pair, const Segmentation& segmentation,
                             const FeatureWeights& weights, const ScoringModels& models,
                             const RelaxationPlan& plan);

// ---------------------------------------------------------------------------

struct RunSegment {
  std::size_t sentence = 0;  // index within the clip
  std::size_t segment = 0;   // 1-based within its sentence
  Interval source;
  std::vector<std::string> target;
  /// Seconds of target speech at normal speed.
  double target_duration = 0.0;
};

/// Maximal block of consecutive off-screen sentences, flattened into
/// segments, with the outer limits it may not cross.
struct OffscreenRun {
  std::vector<std::size_t> sentences;
  std::vector<RunSegment> segments;
  Time left_bound;
  Time right_bound;
  Time min_pause = kDefaultMinPause;
};

struct GlobalRelaxOptions {
  /// Lattice spacing for boundary candidates.
  Time quantum = Time::from_ms(75);
  /// Pause kept between consecutive segments of the run.
  Time min_residual{};
};

/**
 * Candidate boundary positions. Each internal gap between segments t and
 * t+1 offers positions for both the end of t and the start of t+1, anchored
 * at the original end of t and spaced by the quantum, plus the gap's far
 * edge. The run edges are anchored at the original outer boundaries.
 */
struct BoundaryLattice {
  std::vector<Time> first_start;             // ascending
  std::vector<std::vector<Time>> gaps;       // per internal gap, ascending
  std::vector<Time> last_end;                // ascending
  Time min_residual{};

  /// Number of complete boundary assignments (saturating).
  std::size_t assignments() const;
};

BoundaryLattice build_lattice(const OffscreenRun& run, const GlobalRelaxOptions& options);

/// Comparable objective of a (partial) global assignment.
struct GlobalScore {
  std::int64_t zeros = 0;          // segments scoring 0 (rate above 2)
  long double log_sum = 0.0L;      // Σ log score over the other segments
  std::int64_t duration_us = 0;    // Σ relaxed durations
  std::int64_t shift_us = 0;       // Σ |boundary displacement|

  GlobalScore operator+(const GlobalScore& o) const;
  bool operator==(const GlobalScore&) const = default;
};

/// Contribution of run segment t (0-based) placed on [start, end].
GlobalScore global_segment_score(const OffscreenRun& run, std::size_t t, Time start, Time end);

/// -1 if a is preferred, 1 if b is, 0 on a full tie. The fallback ordering
/// maximizes total relaxed duration first.
int compare_global(const GlobalScore& a, const GlobalScore& b, bool fallback);

/**
 * Relaxation step for off-screen runs: one start/end position per boundary
 * from the lattice, maximizing Σ log of the off-screen rate score. When
 * every assignment contains a segment above twice normal speed, returns
 * the assignment with the largest total duration and flags the run.
 */
RelaxationPlan relax_global(const OffscreenRun& run, const GlobalRelaxOptions& options = {});

RelaxationPlan brute_force_relax_global(const OffscreenRun& run,
                                        const GlobalRelaxOptions& options = {},
                                        std::size_t max_assignments = 1'000'000);

/// Off-screen rate score of a plan: Σ log score, -inf if any segment is
/// above twice normal speed.
long double global_plan_score(const OffscreenRun& run, const RelaxationPlan& plan);

/// Pulls in the end of every segment slower than normal speed so that it
/// is spoken at exactly normal speed.
RelaxationPlan trim_slow_segments(const RelaxationPlan& plan, const OffscreenRun& run);

inline constexpr const char* kUnintelligibleRunWarning = "unintelligible-run";

}  // namespace dubalign
