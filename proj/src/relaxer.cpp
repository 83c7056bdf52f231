#include "dubalign/relaxer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dubalign/error.hpp"
#include "dubalign/segmenter.hpp"

namespace dubalign {

namespace {

using Grid = RelaxationGrid;

RelaxedPlacement place(const Interval& source, Time min_pause, std::size_t state) {
  const auto [ql, qr] = Grid::decode(state);
  return {Grid::fraction(ql), Grid::fraction(qr),
          {source.begin - Grid::shift(min_pause, ql), source.end + Grid::shift(min_pause, qr)}};
}

int state_shift(std::size_t state) {
  const auto [ql, qr] = Grid::decode(state);
  return std::abs(ql) + std::abs(qr);
}

/// Everything about segment t that does not depend on its neighbours.
struct LocalCell {
  bool feasible = false;
  RelaxedPlacement placement;
  long double log_rate = 0.0L;
  long double l4 = 0.0L;
  long double l5 = 0.0L;
};

struct LocalTables {
  std::size_t k = 0;
  std::vector<long double> l1, l2;     // per segment
  std::vector<std::vector<LocalCell>> cells;  // [t][state]
  Time min_residual;
};

LocalTables build_local_tables(const SentenceContext& ctx, const Segmentation& seg,
                               const LocalRelaxOptions& options) {
  const auto& pair = ctx.pair();
  const std::size_t k = pair.source.segment_count();
  if (seg.segment_count() != k || !is_valid_segmentation(seg.breakpoints, pair.target.size())) {
    throw InvalidInput("relaxation needs a valid segmentation with k segments");
  }
  if (options.min_residual < Time{}) throw InvalidInput("min_residual must be nonnegative");
  LocalTables tab;
  tab.k = k;
  tab.min_residual = options.min_residual;
  tab.cells.assign(k, std::vector<LocalCell>(Grid::kStates));
  for (std::size_t t = 1; t <= k; ++t) {
    const auto [first, last] = seg.word_range(t);
    tab.l1.push_back(log_score(ctx.break_score(last)));
    tab.l2.push_back(log_score(ctx.semantic_score(t, first, last)));
    const double duration = ctx.target_duration(first, last);
    const long double source_log_rate = log_rate(ctx.source_rate(t));
    for (std::size_t s = 0; s < Grid::kStates; ++s) {
      LocalCell& c = tab.cells[t - 1][s];
      c.placement = place(ctx.source_interval(t), pair.source.min_pause, s);
      const Interval& iv = c.placement.interval;
      c.feasible = iv.length() > Time{};
      if (t == 1 && options.left_bound && iv.begin < *options.left_bound) c.feasible = false;
      if (t == k && options.right_bound && iv.end > *options.right_bound) c.feasible = false;
      if (!c.feasible) continue;
      c.log_rate = log_rate(speaking_rate(duration, iv).value);
      c.l4 = log_rate_agreement(source_log_rate, c.log_rate);
      c.l5 = log_isochrony(c.placement.delta_left, c.placement.delta_right);
    }
  }
  return tab;
}

bool adjacent_ok(const LocalCell& prev, const LocalCell& cur, Time min_residual) {
  return prev.placement.interval.end + min_residual <= cur.placement.interval.begin;
}

RelaxationPlan plan_from_states(const LocalTables& tab, const std::vector<std::size_t>& states,
                                long double score) {
  RelaxationPlan plan;
  plan.score = score;
  for (std::size_t t = 0; t < states.size(); ++t) {
    const auto& p = tab.cells[t][states[t]].placement;
    plan.segments.push_back({p.delta_left, p.delta_right, p.interval});
  }
  return plan;
}

}  // namespace

RelaxationPlan relax_local(const SentencePair& pair, const Segmentation& segmentation,
                           const FeatureWeights& weights, const ScoringModels& models,
                           const LocalRelaxOptions& options) {
  weights.validate();
  const SentenceContext ctx(pair, models);
  const LocalTables tab = build_local_tables(ctx, segmentation, options);
  const std::size_t k = tab.k;
  constexpr std::size_t S = Grid::kStates;

  std::vector<std::vector<long double>> score(k, std::vector<long double>(S, kNegInf));
  std::vector<std::vector<int>> shift(k, std::vector<int>(S, 0));
  std::vector<std::vector<std::size_t>> back(k, std::vector<std::size_t>(S, 0));
  std::vector<std::vector<bool>> reached(k, std::vector<bool>(S, false));

  auto prefix = [&](std::size_t t, std::size_t s) {
    std::vector<std::size_t> seq(t + 1);
    for (std::size_t u = t + 1; u-- > 0;) {
      seq[u] = s;
      if (u > 0) s = back[u][s];
    }
    return seq;
  };

  for (std::size_t s = 0; s < S; ++s) {
    const LocalCell& c = tab.cells[0][s];
    if (!c.feasible) continue;
    long double acc = 0.0L;
    acc += log_linear_step2(weights, {tab.l1[0], tab.l2[0], 0.0L, c.l4, c.l5});
    score[0][s] = acc;
    shift[0][s] = state_shift(s);
    reached[0][s] = true;
  }
  for (std::size_t t = 1; t < k; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      const LocalCell& c = tab.cells[t][s];
      if (!c.feasible) continue;
      for (std::size_t p = 0; p < S; ++p) {
        if (!reached[t - 1][p]) continue;
        const LocalCell& pc = tab.cells[t - 1][p];
        if (!adjacent_ok(pc, c, tab.min_residual)) continue;
        const long double total =
            score[t - 1][p] +
            log_linear_step2(weights, {tab.l1[t], tab.l2[t],
                                       log_rate_agreement(pc.log_rate, c.log_rate), c.l4, c.l5});
        const int sh = shift[t - 1][p] + state_shift(s);
        bool better = !reached[t][s] || total > score[t][s];
        if (!better && total == score[t][s]) {
          better = sh < shift[t][s] ||
                   (sh == shift[t][s] && prefix(t - 1, p) < prefix(t - 1, back[t][s]));
        }
        if (better) {
          score[t][s] = total;
          shift[t][s] = sh;
          back[t][s] = p;
          reached[t][s] = true;
        }
      }
    }
  }

  bool found = false;
  std::size_t best = 0;
  for (std::size_t s = 0; s < S; ++s) {
    if (!reached[k - 1][s]) continue;
    bool better = !found || score[k - 1][s] > score[k - 1][best];
    if (!better && score[k - 1][s] == score[k - 1][best]) {
      better = shift[k - 1][s] < shift[k - 1][best] ||
               (shift[k - 1][s] == shift[k - 1][best] && prefix(k - 1, s) < prefix(k - 1, best));
    }
    if (better) {
      best = s;
      found = true;
    }
  }
  if (!found) {
    throw InvalidInput("no feasible relaxation; residual pause exceeds an available gap");
  }
  return plan_from_states(tab, prefix(k - 1, best), score[k - 1][best]);
}

RelaxationPlan brute_force_relax_local(const SentencePair& pair,
                                       const Segmentation& segmentation,
                                       const FeatureWeights& weights,
                                       const ScoringModels& models,
                                       const LocalRelaxOptions& options,
                                       std::size_t max_assignments) {
  weights.validate();
  const SentenceContext ctx(pair, models);
  const LocalTables tab = build_local_tables(ctx, segmentation, options);
  const std::size_t k = tab.k;
  constexpr std::size_t S = Grid::kStates;
  std::size_t total = 1;
  for (std::size_t t = 0; t < k; ++t) {
    if (total > max_assignments / S) {
      throw OracleTooLarge("brute-force relaxation over 81^" + std::to_string(k) +
                           " assignments exceeds the limit");
    }
    total *= S;
  }

  // Transition scores from the public scorer: [t][prev][cur]; t = 0 uses prev = 0.
  std::vector<std::vector<std::vector<long double>>> trans(
      k, std::vector<std::vector<long double>>(S, std::vector<long double>(S, kNegInf)));
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      const LocalCell& c = tab.cells[t][s];
      if (!c.feasible) continue;
      if (t == 0) {
        trans[0][0][s] = transition_score_step2(ctx, weights, segmentation, 1, std::nullopt,
                                                c.placement);
        continue;
      }
      for (std::size_t p = 0; p < S; ++p) {
        const LocalCell& pc = tab.cells[t - 1][p];
        if (!pc.feasible || !adjacent_ok(pc, c, tab.min_residual)) continue;
        trans[t][p][s] =
            transition_score_step2(ctx, weights, segmentation, t + 1, pc.placement, c.placement);
      }
    }
  }

  std::vector<std::size_t> states(k, 0), best_states;
  long double best_score = kNegInf;
  int best_shift = std::numeric_limits<int>::max();
  for (;;) {
    long double acc = 0.0L;
    int sh = 0;
    bool ok = true;
    for (std::size_t t = 0; t < k && ok; ++t) {
      const long double x = trans[t][t == 0 ? 0 : states[t - 1]][states[t]];
      if (x == kNegInf) ok = false;
      acc += x;
      sh += state_shift(states[t]);
    }
    if (ok && (best_states.empty() || acc > best_score ||
               (acc == best_score && sh < best_shift))) {
      best_score = acc;
      best_shift = sh;
      best_states = states;
    }
    std::size_t i = k;
    while (i > 0 && states[i - 1] == S - 1) states[--i] = 0;
    if (i == 0) break;
    ++states[i - 1];
  }
  if (best_states.empty()) {
    throw InvalidInput("no feasible relaxation; residual pause exceeds an available gap");
  }
  return plan_from_states(tab, best_states, best_score);
}

long double local_plan_score(const SentencePair& pair, const Segmentation& segmentation,
                             const FeatureWeights& weights, const ScoringModels& models,
                             const RelaxationPlan& plan) {
  const SentenceContext ctx(pair, models);
  if (plan.segments.size() != segmentation.segment_count()) {
    throw InvalidInput("plan and segmentation disagree on the segment count");
  }
  long double acc = 0.0L;
  std::optional<RelaxedPlacement> previous;
  for (std::size_t t = 1; t <= plan.segments.size(); ++t) {
    const auto& s = plan.segments[t - 1];
    if (s.relaxed.length() <= Time{}) return kNegInf;
    if (previous && previous->interval.end > s.relaxed.begin) return kNegInf;
    const RelaxedPlacement cur{s.delta_left, s.delta_right, s.relaxed};
    acc += transition_score_step2(ctx, weights, segmentation, t, previous, cur);
    previous = cur;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Global relaxation

namespace {

std::vector<Time> ascending_from(Time anchor, Time limit, Time step) {
  std::vector<Time> out;
  for (Time p = anchor; p <= limit; p += step) out.push_back(p);
  if (out.empty() || out.back() != limit) out.push_back(limit);
  return out;
}

std::vector<Time> descending_from(Time anchor, Time limit, Time step) {
  std::vector<Time> out;
  for (Time p = anchor; p >= limit; p -= step) out.push_back(p);
  if (out.empty() || out.back() != limit) out.push_back(limit);
  std::reverse(out.begin(), out.end());
  return out;
}

/// Whether (end of t, start of t+1) is an admissible pair for gap g.
bool pair_ok(const OffscreenRun& run, std::size_t g, Time end, Time start, Time residual) {
  if (end + residual <= start) return true;
  return end == run.segments[g].source.end && start == run.segments[g + 1].source.begin;
}

std::vector<std::pair<std::size_t, std::size_t>> gap_pairs(const OffscreenRun& run,
                                                           const BoundaryLattice& lat,
                                                           std::size_t g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& pos = lat.gaps[g];
  for (std::size_t a = 0; a < pos.size(); ++a) {
    for (std::size_t b = 0; b < pos.size(); ++b) {
      if (pair_ok(run, g, pos[a], pos[b], lat.min_residual)) out.emplace_back(a, b);
    }
  }
  return out;
}

void check_run(const OffscreenRun& run, const GlobalRelaxOptions& options) {
  if (run.segments.empty()) throw InvalidInput("off-screen run has no segments");
  if (options.quantum <= Time{}) throw InvalidInput("lattice quantum must be positive");
  if (options.min_residual < Time{}) throw InvalidInput("min_residual must be nonnegative");
  for (std::size_t t = 0; t < run.segments.size(); ++t) {
    const auto& s = run.segments[t];
    if (s.source.length() <= Time{}) throw InvalidInput("run segment with empty interval");
    if (!(s.target_duration > 0.0)) throw InvalidInput("run segment without target speech");
    if (t > 0 && s.source.begin < run.segments[t - 1].source.end) {
      throw InvalidInput("run segments overlap");
    }
  }
}

RelaxationPlan plan_from_positions(const OffscreenRun& run, const std::vector<Time>& starts,
                                   const std::vector<Time>& ends, const GlobalScore& score) {
  RelaxationPlan plan;
  const double unit = static_cast<double>(run.min_pause.us());
  for (std::size_t t = 0; t < run.segments.size(); ++t) {
    const auto& src = run.segments[t].source;
    plan.segments.push_back({static_cast<double>((src.begin - starts[t]).us()) / unit,
                             static_cast<double>((ends[t] - src.end).us()) / unit,
                             {starts[t], ends[t]}});
  }
  if (score.zeros == 0) {
    plan.score = score.log_sum;
  } else {
    plan.score = kNegInf;
    plan.warnings.emplace_back(kUnintelligibleRunWarning);
  }
  return plan;
}

}  // namespace

std::size_t BoundaryLattice::assignments() const {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  auto mul = [](std::size_t a, std::size_t b) {
    if (a != 0 && b > kMax / a) return kMax;
    return a * b;
  };
  std::size_t n = mul(first_start.size(), last_end.size());
  for (const auto& g : gaps) {
    std::size_t pairs = 0;
    for (Time a : g) {
      for (Time b : g) pairs += (a + min_residual <= b) ? 1 : 0;
    }
    // The original boundaries remain admissible even when the gap is
    // narrower than the residual pause.
    if (!g.empty() && g.front() + min_residual > g.back()) ++pairs;
    n = mul(n, pairs);
  }
  return n;
}

BoundaryLattice build_lattice(const OffscreenRun& run, const GlobalRelaxOptions& options) {
  check_run(run, options);
  BoundaryLattice lat;
  lat.min_residual = options.min_residual;
  const auto& segs = run.segments;
  const Time first = segs.front().source.begin;
  const Time last = segs.back().source.end;
  lat.first_start = descending_from(first, std::min(run.left_bound, first), options.quantum);
  lat.last_end = ascending_from(last, std::max(run.right_bound, last), options.quantum);
  for (std::size_t g = 0; g + 1 < segs.size(); ++g) {
    lat.gaps.push_back(
        ascending_from(segs[g].source.end, segs[g + 1].source.begin, options.quantum));
  }
  return lat;
}

GlobalScore GlobalScore::operator+(const GlobalScore& o) const {
  GlobalScore out;
  out.zeros = zeros + o.zeros;
  out.log_sum = log_sum + o.log_sum;
  out.duration_us = duration_us + o.duration_us;
  out.shift_us = shift_us + o.shift_us;
  return out;
}

GlobalScore global_segment_score(const OffscreenRun& run, std::size_t t, Time start, Time end) {
  const auto& seg = run.segments[t];
  GlobalScore s;
  s.duration_us = (end - start).us();
  s.shift_us = abs(start - seg.source.begin).us() + abs(end - seg.source.end).us();
  const double score = end > start
                           ? global_relax_score(speaking_rate(seg.target_duration, {start, end}).value)
                           : 0.0;
  if (score == 0.0) {
    s.zeros = 1;
  } else {
    s.log_sum = std::log(static_cast<long double>(score));
  }
  return s;
}

int compare_global(const GlobalScore& a, const GlobalScore& b, bool fallback) {
  if (fallback && a.duration_us != b.duration_us) return a.duration_us > b.duration_us ? -1 : 1;
  if (a.zeros != b.zeros) return a.zeros < b.zeros ? -1 : 1;
  if (a.log_sum != b.log_sum) return a.log_sum > b.log_sum ? -1 : 1;
  if (a.shift_us != b.shift_us) return a.shift_us < b.shift_us ? -1 : 1;
  return 0;
}

namespace {

struct GlobalSolution {
  GlobalScore score;
  std::vector<Time> starts;
  std::vector<Time> ends;
};

GlobalSolution solve_global(const OffscreenRun& run, const BoundaryLattice& lat,
                            bool fallback) {
  const std::size_t n = run.segments.size();
  auto starts_of = [&](std::size_t t) -> const std::vector<Time>& {
    return t == 0 ? lat.first_start : lat.gaps[t - 1];
  };
  auto ends_of = [&](std::size_t t) -> const std::vector<Time>& {
    return t + 1 == n ? lat.last_end : lat.gaps[t];
  };

  // a[t][i]: best prefix with segment t starting at starts_of(t)[i].
  // c[t][i]: best prefix with segment t ending at ends_of(t)[i].
  std::vector<std::vector<GlobalScore>> a(n), c(n);
  std::vector<std::vector<std::size_t>> a_back(n), c_back(n);
  std::vector<std::vector<bool>> a_ok(n), c_ok(n);

  // Flattened boundary sequence (start_1, end_1, start_2, ...) of a prefix.
  std::function<std::vector<Time>(std::size_t, std::size_t)> prefix_a;
  std::function<std::vector<Time>(std::size_t, std::size_t)> prefix_c;
  prefix_a = [&](std::size_t t, std::size_t i) {
    std::vector<Time> seq;
    if (t > 0) seq = prefix_c(t - 1, a_back[t][i]);
    seq.push_back(starts_of(t)[i]);
    return seq;
  };
  prefix_c = [&](std::size_t t, std::size_t i) {
    std::vector<Time> seq = prefix_a(t, c_back[t][i]);
    seq.push_back(ends_of(t)[i]);
    return seq;
  };

  a[0].assign(lat.first_start.size(), GlobalScore{});
  a_back[0].assign(lat.first_start.size(), 0);
  a_ok[0].assign(lat.first_start.size(), true);

  for (std::size_t t = 0; t < n; ++t) {
    const auto& st = starts_of(t);
    const auto& en = ends_of(t);
    c[t].assign(en.size(), GlobalScore{});
    c_back[t].assign(en.size(), 0);
    c_ok[t].assign(en.size(), false);
    for (std::size_t e = 0; e < en.size(); ++e) {
      for (std::size_t s = 0; s < st.size(); ++s) {
        if (!a_ok[t][s]) continue;
        const GlobalScore total = a[t][s] + global_segment_score(run, t, st[s], en[e]);
        int cmp = c_ok[t][e] ? compare_global(total, c[t][e], fallback) : -1;
        if (cmp == 0 && prefix_a(t, s) < prefix_a(t, c_back[t][e])) cmp = -1;
        if (cmp < 0) {
          c[t][e] = total;
          c_back[t][e] = s;
          c_ok[t][e] = true;
        }
      }
    }
    if (t + 1 == n) break;
    const auto& next = starts_of(t + 1);
    a[t + 1].assign(next.size(), GlobalScore{});
    a_back[t + 1].assign(next.size(), 0);
    a_ok[t + 1].assign(next.size(), false);
    for (std::size_t s = 0; s < next.size(); ++s) {
      for (std::size_t e = 0; e < en.size(); ++e) {
        if (!c_ok[t][e] || !pair_ok(run, t, en[e], next[s], lat.min_residual)) continue;
        int cmp = a_ok[t + 1][s] ? compare_global(c[t][e], a[t + 1][s], fallback) : -1;
        if (cmp == 0 && prefix_c(t, e) < prefix_c(t, a_back[t + 1][s])) cmp = -1;
        if (cmp < 0) {
          a[t + 1][s] = c[t][e];
          a_back[t + 1][s] = e;
          a_ok[t + 1][s] = true;
        }
      }
    }
  }

  std::size_t best = 0;
  bool found = false;
  for (std::size_t e = 0; e < lat.last_end.size(); ++e) {
    if (!c_ok[n - 1][e]) continue;
    int cmp = found ? compare_global(c[n - 1][e], c[n - 1][best], fallback) : -1;
    if (cmp == 0 && prefix_c(n - 1, e) < prefix_c(n - 1, best)) cmp = -1;
    if (cmp < 0) {
      best = e;
      found = true;
    }
  }
  if (!found) throw InvalidInput("off-screen run admits no boundary assignment");

  GlobalSolution sol;
  sol.score = c[n - 1][best];
  const std::vector<Time> seq = prefix_c(n - 1, best);
  for (std::size_t t = 0; t < n; ++t) {
    sol.starts.push_back(seq[2 * t]);
    sol.ends.push_back(seq[2 * t + 1]);
  }
  return sol;
}

}  // namespace

RelaxationPlan relax_global(const OffscreenRun& run, const GlobalRelaxOptions& options) {
  const BoundaryLattice lat = build_lattice(run, options);
  GlobalSolution sol = solve_global(run, lat, false);
  if (sol.score.zeros > 0) sol = solve_global(run, lat, true);
  return plan_from_positions(run, sol.starts, sol.ends, sol.score);
}

RelaxationPlan brute_force_relax_global(const OffscreenRun& run,
                                        const GlobalRelaxOptions& options,
                                        std::size_t max_assignments) {
  const BoundaryLattice lat = build_lattice(run, options);
  const std::size_t total = lat.assignments();
  if (total > max_assignments) {
    throw OracleTooLarge("brute-force global relaxation over " + std::to_string(total) +
                         " assignments exceeds the limit");
  }
  const std::size_t n = run.segments.size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs;
  for (std::size_t g = 0; g + 1 < n; ++g) pairs.push_back(gap_pairs(run, lat, g));

  // Odometer digits: first start, one pair per gap, last end. Digits are
  // ordered so that enumeration follows the flattened boundary sequence.
  std::vector<std::size_t> radix{lat.first_start.size()};
  for (const auto& p : pairs) radix.push_back(p.size());
  radix.push_back(lat.last_end.size());
  std::vector<std::size_t> digit(radix.size(), 0);

  std::vector<Time> starts(n), ends(n);
  GlobalSolution normal, fallback;
  bool have = false;
  for (;;) {
    starts[0] = lat.first_start[digit[0]];
    for (std::size_t g = 0; g + 1 < n; ++g) {
      const auto [e, s] = pairs[g][digit[g + 1]];
      ends[g] = lat.gaps[g][e];
      starts[g + 1] = lat.gaps[g][s];
    }
    ends[n - 1] = lat.last_end[digit.back()];
    GlobalScore acc;
    for (std::size_t t = 0; t < n; ++t) acc = acc + global_segment_score(run, t, starts[t], ends[t]);
    if (!have || compare_global(acc, normal.score, false) < 0) normal = {acc, starts, ends};
    if (!have || compare_global(acc, fallback.score, true) < 0) fallback = {acc, starts, ends};
    have = true;

    std::size_t i = digit.size();
    while (i > 0 && digit[i - 1] + 1 == radix[i - 1]) digit[--i] = 0;
    if (i == 0) break;
    ++digit[i - 1];
  }
  const GlobalSolution& sol = normal.score.zeros == 0 ? normal : fallback;
  return plan_from_positions(run, sol.starts, sol.ends, sol.score);
}

long double global_plan_score(const OffscreenRun& run, const RelaxationPlan& plan) {
  long double acc = 0.0L;
  for (std::size_t t = 0; t < plan.segments.size(); ++t) {
    const Interval& iv = plan.segments[t].relaxed;
    if (iv.length() <= Time{}) return kNegInf;
    const double s = global_relax_score(speaking_rate(run.segments[t].target_duration, iv).value);
    if (s == 0.0) return kNegInf;
    acc += std::log(static_cast<long double>(s));
  }
  return acc;
}

RelaxationPlan trim_slow_segments(const RelaxationPlan& plan, const OffscreenRun& run) {
  if (plan.segments.size() != run.segments.size()) {
    throw InvalidInput("plan and run disagree on the segment count");
  }
  RelaxationPlan out = plan;
  const double unit = static_cast<double>(run.min_pause.us());
  for (std::size_t t = 0; t < out.segments.size(); ++t) {
    auto& seg = out.segments[t];
    const double seconds = run.segments[t].target_duration;
    if (speaking_rate(seconds, seg.relaxed).value >= 1.0) continue;
    const auto natural = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(seconds * 1e6)));
    seg.relaxed.end = seg.relaxed.begin + Time::from_us(natural);
    seg.delta_right = static_cast<double>((seg.relaxed.end - run.segments[t].source.end).us()) / unit;
  }
  return out;
}

}  // namespace dubalign
