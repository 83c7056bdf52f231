// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "dubalign/corpus_io.hpp"
#include "dubalign/error.hpp"
#include "dubalign/metrics.hpp"
#include "dubalign/pipeline.hpp"
#include "dubalign/relaxer.hpp"
#include "dubalign/segmenter.hpp"
#include "dubalign/tuner.hpp"
#include "support.hpp"

using namespace dubalign;
namespace fs = std::filesystem;

namespace {

/// Collects constraint violations seen by every criterion.
struct Violations {
  std::size_t checked = 0;
  std::vector<std::string> found;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (!ok && found.size() < 20) found.push_back(what);
    if (!ok && found.size() >= 20) found.back() = what + " (and more)";
  }
};

Violations g_violations;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_local_plan(const RelaxationPlan& plan, const SentencePair& pair,
                      const LocalRelaxOptions& options, const std::string& tag) {
  const auto src = source_intervals(pair.source);
  const Time limit = pair.source.min_pause;
  g_violations.expect(validate_plan(plan).empty(), tag + ": plan invariant");
  g_violations.expect(plan.segments.size() == src.size(), tag + ": segment count");
  for (std::size_t t = 0; t < std::min(src.size(), plan.segments.size()); ++t) {
    const auto& s = plan.segments[t];
    g_violations.expect(abs(s.relaxed.begin - src[t].span.begin) <= limit &&
                            abs(s.relaxed.end - src[t].span.end) <= limit,
                        tag + ": shift beyond one pause");
    g_violations.expect(s.relaxed.begin < s.relaxed.end, tag + ": empty interval");
    if (t > 0) {
      g_violations.expect(plan.segments[t - 1].relaxed.end + options.min_residual <=
                              s.relaxed.begin,
                          tag + ": overlap");
    }
  }
  if (options.left_bound) {
    g_violations.expect(plan.segments.front().relaxed.begin >= *options.left_bound,
                        tag + ": left bound");
  }
  if (options.right_bound) {
    g_violations.expect(plan.segments.back().relaxed.end <= *options.right_bound,
                        tag + ": right bound");
  }
}

void check_run_plan(const RelaxationPlan& plan, const OffscreenRun& run, Time residual,
                    const std::string& tag) {
  g_violations.expect(validate_plan(plan).empty(), tag + ": plan invariant");
  g_violations.expect(plan.segments.size() == run.segments.size(), tag + ": segment count");
  for (std::size_t t = 0; t < std::min(plan.segments.size(), run.segments.size()); ++t) {
    const auto& s = plan.segments[t].relaxed;
    g_violations.expect(s.begin < s.end, tag + ": empty interval");
    g_violations.expect(s.begin >= run.left_bound && s.end <= run.right_bound,
                        tag + ": run bounds");
    if (t > 0) {
      g_violations.expect(plan.segments[t - 1].relaxed.end + residual <= s.begin,
                          tag + ": overlap");
    }
  }
}

/// Whole-clip constraints on pipeline output.
void check_clip_output(const Clip& clip, const std::vector<AlignmentResult>& out,
                       const std::string& tag) {
  g_violations.expect(validate_clip(clip).empty(), tag + ": source pause validity");
  g_violations.expect(out.size() == clip.pairs.size(), tag + ": sentence count");
  const Interval extent = clip.extent();
  std::optional<Time> previous_end;
  for (std::size_t s = 0; s < out.size(); ++s) {
    const auto& r = out[s];
    const auto src = source_intervals(clip.pairs[s].source);
    const bool flagged = !r.warnings.empty();
    for (std::size_t t = 0; t < r.segments.size(); ++t) {
      const auto& seg = r.segments[t];
      g_violations.expect(seg.relaxed_interval.begin < seg.relaxed_interval.end,
                          tag + ": empty interval");
      if (previous_end) {
        g_violations.expect(*previous_end <= seg.relaxed_interval.begin, tag + ": overlap");
      }
      previous_end = seg.relaxed_interval.end;
      g_violations.expect(seg.relaxed_interval.begin >= extent.begin &&
                              seg.relaxed_interval.end <= extent.end,
                          tag + ": clip extent");
      if (r.onscreen) {
        const Time limit = clip.pairs[s].source.min_pause;
        g_violations.expect(abs(seg.relaxed_interval.begin - src[t].span.begin) <= limit &&
                                abs(seg.relaxed_interval.end - src[t].span.end) <= limit,
                            tag + ": on-screen shift beyond one pause");
      } else if (r.mode == DubbingMode::OnOff) {
        g_violations.expect(seg.target_rate >= 1.0 - 1e-9 || flagged,
                            tag + ": off-screen segment slower than normal after trim");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Independent oracles

/// Exhaustive segmentation by explicit enumeration of breakpoint tuples.
std::pair<std::vector<std::size_t>, long double> enumerate_segmentations(
    const SentencePair& pair, const FeatureWeights& w, const ScoringModels& models) {
  const std::size_t m = pair.target.size();
  const std::size_t k = pair.source.segment_count();
  std::vector<std::size_t> best;
  long double best_score = kNegInf;
  std::vector<std::size_t> j(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t t, std::size_t lo) {
    if (t + 1 == k) {
      j[t] = m;
      const long double s = segmentation_score(pair, w, models, Segmentation{j});
      // Enumeration is lexicographic, so keeping the first maximum breaks ties.
      if (best.empty() || s > best_score) {
        best = j;
        best_score = s;
      }
      return;
    }
    // Leave room for the k - 1 - t breakpoints still to place.
    for (std::size_t v = lo; v + (k - 1 - t) <= m; ++v) {
      j[t] = v;
      rec(t + 1, v + 1);
    }
  };
  rec(0, 1);
  return {best, best_score};
}

RelaxationPlan random_local_assignment(Rng& rng, const SentencePair& pair) {
  const auto src = source_intervals(pair.source);
  const Time quarter = Time::from_us(pair.source.min_pause.us() / 4);
  RelaxationPlan plan;
  for (const auto& iv : src) {
    const auto ql = rng.integer(-4, 4);
    const auto qr = rng.integer(-4, 4);
    plan.segments.push_back({static_cast<double>(ql) / 4.0, static_cast<double>(qr) / 4.0,
                             {iv.span.begin - quarter * ql, iv.span.end + quarter * qr}});
  }
  return plan;
}

/// Random complete assignment drawn from the boundary lattice, if one exists.
std::optional<RelaxationPlan> random_lattice_assignment(Rng& rng, const OffscreenRun& run,
                                                        const BoundaryLattice& lat) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<Time> starts;
    std::vector<Time> ends;
    starts.push_back(lat.first_start[static_cast<std::size_t>(
        rng.integer(0, static_cast<std::int64_t>(lat.first_start.size()) - 1))]);
    for (const auto& gap : lat.gaps) {
      auto a = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(gap.size()) - 1));
      auto b = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(gap.size()) - 1));
      if (a > b) std::swap(a, b);
      ends.push_back(gap[a]);
      starts.push_back(gap[b]);
    }
    ends.push_back(lat.last_end[static_cast<std::size_t>(
        rng.integer(0, static_cast<std::int64_t>(lat.last_end.size()) - 1))]);
    RelaxationPlan plan;
    bool ok = true;
    for (std::size_t t = 0; t < run.segments.size(); ++t) {
      if (!(starts[t] < ends[t])) ok = false;
      if (t > 0 && ends[t - 1] + lat.min_residual > starts[t]) ok = false;
      plan.segments.push_back({0, 0, {starts[t], ends[t]}});
    }
    if (ok) return plan;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criteria

Outcome criterion1() {
  const double in[] = {0.5, 1.0, 1.25, 2.0, 2.5};
  const double want[] = {1.0, 1.0, 0.75, 0.0, 0.0};
  Outcome o;
  std::ostringstream d;
  for (int i = 0; i < 5; ++i) {
    const double got = global_relax_score(in[i]);
    d << in[i] << "->" << got << (i < 4 ? " " : "");
    if (got != want[i]) o.pass = false;
  }
  o.detail = d.str();
  return o;
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240601);
  const ScoringModels models;
  std::size_t mismatches = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto k = static_cast<std::size_t>(rng.integer(1, 4));
    const auto m = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(k), 12));
    const auto pair = support::random_sentence(rng, m, k);
    const auto w = support::random_simplex(rng);
    const auto dp = segment_with_chart(pair, w, models);
    const auto bf = brute_force_segment(pair, w, models);
    const auto [oracle, oracle_score] = enumerate_segmentations(pair, w, models);
    if (dp.segmentation != bf.segmentation || dp.score != bf.score ||
        dp.segmentation.breakpoints != oracle || dp.score != oracle_score) {
      ++mismatches;
    }
    g_violations.expect(is_valid_segmentation(dp.segmentation.breakpoints, m),
                        "segmentation shape");
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 5.0,
          "200 instances, " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(secs) + " s"};
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(7031);
  const ScoringModels models;
  std::size_t mismatches = 0;
  std::size_t dominated = 0;
  std::size_t k3 = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto k = static_cast<std::size_t>(rng.integer(1, 3));
    if (k == 3) ++k3;
    const auto m = k + static_cast<std::size_t>(rng.integer(0, 5));
    const auto pair = support::random_sentence(rng, m, k, 2000);
    const auto w = support::random_simplex(rng, rng.uniform(0.1, 3.0));
    const auto seg = segment(pair, w, models);
    LocalRelaxOptions opt;
    if (rng.chance(0.3)) opt.min_residual = Time::from_ms(75 * rng.integer(1, 2));
    if (rng.chance(0.5)) {
      opt.left_bound = pair.source.words.front().start - Time::from_ms(rng.integer(0, 400));
    }
    if (rng.chance(0.5)) {
      opt.right_bound = pair.source.words.back().end + Time::from_ms(rng.integer(0, 400));
    }
    const auto dp = relax_local(pair, seg, w, models, opt);
    const auto bf = brute_force_relax_local(pair, seg, w, models, opt);
    if (dp.segments != bf.segments || dp.score != bf.score ||
        local_plan_score(pair, seg, w, models, dp) != dp.score) {
      ++mismatches;
    }
    for (int s = 0; s < 300; ++s) {
      const auto other = random_local_assignment(rng, pair);
      if (local_plan_score(pair, seg, w, models, other) > dp.score) ++dominated;
    }
    check_local_plan(dp, pair, opt, "local");
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && dominated == 0 && secs < 30.0,
          "100 instances (" + std::to_string(k3) + " with k=3), " + std::to_string(mismatches) +
              " mismatches, " + std::to_string(dominated) + " better samples, " +
              std::to_string(secs) + " s"};
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(4242);
  std::size_t mismatches = 0;
  std::size_t dominated = 0;
  std::size_t five = 0;
  std::size_t drawn = 0;
  int checked = 0;
  while (checked < 50) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 5));
    const std::size_t sentences = n == 1 ? 1 : static_cast<std::size_t>(rng.integer(1, 2));
    auto run = support::random_run(rng, n, sentences, 300, 420);
    GlobalRelaxOptions opt;
    opt.quantum = Time::from_us(kDefaultMinPause.us() / 4);
    opt.min_residual = Time::from_ms(75 * rng.integer(0, 1));
    ++drawn;
    const auto lattice = build_lattice(run, opt);
    if (lattice.assignments() > 1'000'000) continue;
    ++checked;
    if (n == 5) ++five;
    const auto dp = relax_global(run, opt);
    const auto bf = brute_force_relax_global(run, opt);
    if (dp.segments != bf.segments || dp.warnings != bf.warnings) ++mismatches;
    if (dp.warnings.empty()) {
      if (dp.score != bf.score || global_plan_score(run, dp) != dp.score) ++mismatches;
      for (int s = 0; s < 200; ++s) {
        const auto other = random_lattice_assignment(rng, run, lattice);
        if (other && global_plan_score(run, *other) > dp.score) ++dominated;
      }
    }
    check_run_plan(dp, run, opt.min_residual, "global");
    const auto trimmed = trim_slow_segments(dp, run);
    check_run_plan(trimmed, run, opt.min_residual, "trimmed");
    for (std::size_t t = 0; t < run.segments.size(); ++t) {
      const double r = speaking_rate(run.segments[t].target_duration,
                                     trimmed.segments[t].relaxed).value;
      g_violations.expect(r >= 1.0 - 1e-9 || !dp.warnings.empty(),
                          "trimmed segment below normal speed");
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && dominated == 0 && secs < 60.0,
          "50 runs (" + std::to_string(five) + " with 5 segments, " + std::to_string(drawn) +
              " drawn), " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(dominated) + " better samples, " + std::to_string(secs) + " s"};
}

std::vector<Clip> simulate(std::uint64_t seed, std::size_t clips, double offscreen,
                           double verbosity_low, double verbosity_high) {
  SimulationOptions o;
  o.clips = clips;
  o.seed = seed;
  o.offscreen_ratio = offscreen;
  o.verbosity_low = verbosity_low;
  o.verbosity_high = verbosity_high;
  return simulate_corpus(o);
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto clips = simulate(606, 50, 1.0, 1.1, 1.4);
  const ScoringModels models;
  PipelineConfig iso;
  PipelineConfig onoff;
  onoff.mode = DubbingMode::OnOff;
  std::vector<std::vector<AlignmentResult>> a;
  std::vector<std::vector<AlignmentResult>> b;
  for (const auto& c : clips) {
    a.push_back(dub_clip(c, iso));
    b.push_back(dub_clip(c, onoff));
    check_clip_output(c, a.back(), "iso");
    check_clip_output(c, b.back(), "onoff");
  }
  const MetricParams params;
  double in_iso = 0.0;
  double in_onoff = 0.0;
  MetricsReport ra;
  MetricsReport rb;
  constexpr int kSeeds = 10;
  for (int s = 0; s < kSeeds; ++s) {
    const MockTranscriber asr(static_cast<std::uint64_t>(s));
    ra = evaluate_alignments(clips, a, asr, params, models);
    rb = evaluate_alignments(clips, b, asr, params, models);
    in_iso += ra.intelligibility / kSeeds;
    in_onoff += rb.intelligibility / kSeeds;
  }
  std::size_t better_or_equal = 0;
  for (std::size_t c = 0; c < clips.size(); ++c) {
    if (rb.per_clip[c].smoothness.value_or(100.0) >= ra.per_clip[c].smoothness.value_or(100.0)) {
      ++better_or_equal;
    }
  }
  const double share = 100.0 * static_cast<double>(better_or_equal) / clips.size();
  const double secs = seconds_since(t0);
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "smoothness >= on %.0f%% of clips (ISO %.2f, ON/OFF %.2f); overspeed ISO %.4f, "
                "ON/OFF %.4f; intelligibility ISO %.4f, ON/OFF %.4f; %.1f s",
                share, ra.smoothness, rb.smoothness, ra.mean_overspeed, rb.mean_overspeed,
                in_iso, in_onoff, secs);
  return {share >= 90.0 && rb.mean_overspeed < ra.mean_overspeed && in_onoff >= in_iso &&
              secs < 120.0,
          buf};
}

Outcome criterion7() {
  const auto clips = simulate(707, 30, 0.0, 0.8, 1.5);
  std::size_t differing = 0;
  for (const auto& c : clips) {
    PipelineConfig iso;
    PipelineConfig onoff;
    onoff.mode = DubbingMode::OnOff;
    auto x = dub_clip(c, iso);
    auto y = dub_clip(c, onoff);
    for (auto& r : y) {
      if (r.mode != DubbingMode::OnOff) ++differing;
      r.mode = DubbingMode::Isochrone;
    }
    if (serialize_alignments(x) != serialize_alignments(y)) ++differing;
    check_clip_output(c, x, "on-screen iso");
  }
  return {differing == 0, "30 clips, " + std::to_string(differing) + " differing"};
}

Outcome criterion8() {
  std::vector<std::string> failures;
  Rng rng(808);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> x;
    for (auto n = rng.integer(1, 20); n > 0; --n) x.push_back(support::random_token(rng));
    if (wer(x, x) != 0.0) failures.push_back("wer(x,x)");
  }
  const auto clips = simulate(808, 10, 0.5, 0.9, 1.6);
  std::vector<std::vector<AlignmentResult>> results;
  for (const auto& c : clips) {
    PipelineConfig config;
    config.mode = DubbingMode::OnOff;
    results.push_back(dub_clip(c, config));
  }
  const auto report =
      evaluate_alignments(clips, results, PerfectTranscriber(), MetricParams{}, ScoringModels{});
  if (report.intelligibility != 1.0) failures.push_back("perfect intelligibility");
  for (int i = 0; i < 50; ++i) {
    std::vector<double> rates(static_cast<std::size_t>(rng.integer(2, 16)), rng.uniform(0.3, 3.0));
    if (smoothness(rates, 0.25) != 100.0) failures.push_back("constant-rate smoothness");
  }
  for (int n = 10; n <= 300; n += 10) {
    const std::string src(static_cast<std::size_t>(n), 'a');
    const std::vector<PhrasePair> edges{
        {src, std::string(static_cast<std::size_t>(n * 9 / 10), 'b')},
        {src, std::string(static_cast<std::size_t>(n * 11 / 10), 'b')}};
    const std::vector<PhrasePair> outside{
        {src, std::string(static_cast<std::size_t>(n * 9 / 10 - 1), 'b')},
        {src, std::string(static_cast<std::size_t>(n * 11 / 10 + 1), 'b')}};
    if (length_compliance(edges) != 100.0) failures.push_back("compliance at the edge");
    if (length_compliance(outside) != 0.0) failures.push_back("compliance outside");
  }
  std::string detail = "wer, perfect intelligibility, constant-rate smoothness, ±10% boundaries";
  if (!failures.empty()) detail = "failed: " + failures.front();
  return {failures.empty(), detail};
}

/// F1 over internal breakpoints, computed here from scratch.
double oracle_accuracy(const std::vector<Clip>& clips, const FeatureWeights& w,
                       const ScoringModels& models) {
  double matched = 0.0;
  double predicted = 0.0;
  double reference = 0.0;
  for (const auto& c : clips) {
    for (const auto& p : c.pairs) {
      if (!p.reference_breakpoints || p.reference_breakpoints->size() < 2) continue;
      const auto bf = brute_force_segment(p, w, models).segmentation.breakpoints;
      const auto& ref = *p.reference_breakpoints;
      for (std::size_t i = 0; i + 1 < bf.size(); ++i) {
        if (std::find(ref.begin(), ref.end() - 1, bf[i]) != ref.end() - 1) matched += 1.0;
      }
      predicted += static_cast<double>(bf.size() - 1);
      reference += static_cast<double>(ref.size() - 1);
    }
  }
  if (matched == 0.0) return 0.0;
  const double precision = matched / predicted;
  const double recall = matched / reference;
  return 100.0 * 2.0 * precision * recall / (precision + recall);
}

Outcome criterion9() {
  SimulationOptions o;
  o.clips = 12;
  o.seed = 909;
  o.punctuation_rate = 1.0;
  o.min_phrases = 2;
  o.max_phrases = 3;
  o.verbosity_low = 0.6;
  o.verbosity_high = 1.6;
  const auto clips = simulate_corpus(o);
  const ScoringModels models;
  const auto result = tune_step1(clips, 0.05, models);
  double best = 0.0;
  std::size_t disagreements = 0;
  for (const auto& point : result.sweep) {
    const double oracle = oracle_accuracy(clips, point.weights, models);
    if (std::abs(oracle - point.accuracy) > 1e-9) ++disagreements;
    best = std::max(best, oracle);
  }
  const double uniform = oracle_accuracy(clips, {0.25, 0.25, 0.25, 0.25, 1.0}, models);
  const auto s2a = tune_step2(clips, result.weights);
  const auto s2b = tune_step2(clips, result.weights);
  const bool deterministic =
      serialize_weights({s2a.weights, {}}) == serialize_weights({s2b.weights, {}}) &&
      s2a.smoothness == s2b.smoothness;
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "%zu lattice points, accuracy %.2f (sweep max %.2f, uniform %.2f), "
                "%zu oracle disagreements, step2 w5=%g %s",
                result.sweep.size(), result.accuracy, best, uniform, disagreements,
                s2a.weights.w5, deterministic ? "deterministic" : "NOT deterministic");
  return {disagreements == 0 && std::abs(result.accuracy - best) <= 1e-9 &&
              result.accuracy >= uniform && deterministic,
          buf};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DUBALIGN_CLI) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion10() {
  const fs::path dir = fs::temp_directory_path() / "dubalign-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  write_text_file(p("weights.json"), serialize_weights({}));
  std::vector<std::string> differing;
  std::size_t commands = 0;
  for (int round = 0; round < 2; ++round) {
    const std::string r = std::to_string(round);
    const std::vector<std::string> cmds = {
        "simulate --clips 6 --seed 31 --offscreen-ratio 0.5 --out " + p("corpus" + r + ".jsonl"),
        "align --mode iso --corpus " + p("corpus0.jsonl") + " --weights " + p("weights.json") +
            " --out " + p("iso" + r + ".jsonl"),
        "align --mode onoff --threads 3 --corpus " + p("corpus0.jsonl") + " --weights " +
            p("weights.json") + " --out " + p("onoff" + r + ".jsonl"),
        "evaluate --seed 5 --alignments " + p("onoff0.jsonl") + " --corpus " +
            p("corpus0.jsonl") + " --report " + p("report" + r + ".json"),
        "tune step1 --grid-step 0.25 --corpus " + p("corpus0.jsonl") + " --out-weights " +
            p("step1-" + r + ".json"),
        "tune step2 --corpus " + p("corpus0.jsonl") + " --weights " + p("step1-0.json") +
            " --out-weights " + p("step2-" + r + ".json"),
    };
    for (const auto& c : cmds) {
      ++commands;
      if (run_cli(c) != 0) differing.push_back("exit status of: " + c.substr(0, 20));
    }
  }
  for (const char* stem : {"corpus", "iso", "onoff", "report", "step1-", "step2-"}) {
    const std::string ext = std::string(stem) == "report" || std::string(stem).back() == '-'
                                ? ".json"
                                : ".jsonl";
    const auto a = read_text_file(p(stem + std::string("0") + ext));
    const auto b = read_text_file(p(stem + std::string("1") + ext));
    if (a != b || a.empty()) differing.push_back(stem);
  }
  std::string detail = std::to_string(commands) + " invocations, outputs byte-identical";
  if (!differing.empty()) detail = "differs: " + differing.front();
  return {differing.empty(), detail};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> order = {
      {1, "off-screen score exactness", criterion1},
      {2, "segmentation DP equals brute force", criterion2},
      {3, "local relaxation DP equals brute force", criterion3},
      {4, "global relaxation DP equals brute force", criterion4},
      {6, "direction of improvement", criterion6},
      {7, "ISO/ONOFF agreement on screen", criterion7},
      {8, "metric identities", criterion8},
      {9, "tuning", criterion9},
      {10, "CLI determinism", criterion10},
  };
  bool all = true;
  for (const auto& e : order) {
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << e.id << " (" << e.name
              << "): " << o.detail << std::endl;
  }
  // Constraint checks accumulate across every criterion above.
  const bool constraints = g_violations.found.empty();
  all = all && constraints;
  std::string detail = std::to_string(g_violations.checked) + " checks, " +
                       std::to_string(g_violations.found.size()) + " violations";
  if (!constraints) detail += " (first: " + g_violations.found.front() + ")";
  std::cout << (constraints ? "PASS" : "FAIL") << " criterion 5 (constraint suite): " << detail
            << std::endl;
  return all ? 0 : 1;
}
