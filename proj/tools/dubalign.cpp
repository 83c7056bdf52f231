#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "dubalign/corpus_io.hpp"
#include "dubalign/error.hpp"
#include "dubalign/metrics.hpp"
#include "dubalign/pipeline.hpp"
#include "dubalign/simulate.hpp"
#include "dubalign/tuner.hpp"

using namespace dubalign;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kInfeasible = 3,
  kPlugin = 4,
};

struct PluginFlags {
  std::string duration_cmd;
  std::string scorer_cmd;

  void add(CLI::App* app) {
    app->add_option("--duration-cmd", duration_cmd,
                     "External duration oracle: reads a text line, writes seconds");
    app->add_option("--scorer-cmd", scorer_cmd,
                     "External scorer for the break and semantic features");
  }

  ScoringModels models() const {
    ScoringModels m;
    if (!duration_cmd.empty()) m.durations = std::make_shared<CommandDurationOracle>(duration_cmd);
    if (!scorer_cmd.empty()) {
      auto scorer = std::make_shared<CommandScorer>(scorer_cmd);
      m.breaks = scorer;
      m.semantics = scorer;
    }
    return m;
  }
};

std::pair<double, double> parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidInput("band must look like LOW:HIGH");
  try {
    std::size_t used = 0;
    const double lo = std::stod(text.substr(0, colon), &used);
    const std::string hi_text = text.substr(colon + 1);
    const double hi = hi_text == "inf" ? std::numeric_limits<double>::infinity()
                                       : std::stod(hi_text, &used);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InvalidInput("band must look like LOW:HIGH");
  }
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << (e.field().empty() ? "" : ", field ")
              << e.field() << ": " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const InfeasibleSegmentation& e) {
    std::cerr << "infeasible alignment: " << e.what() << "\n";
    return kInfeasible;
  } catch (const PluginProtocolError& e) {
    std::cerr << "plug-in failure: " << e.what() << "\n";
    return kPlugin;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prosodic alignment for automatic dubbing"};
  app.require_subcommand(1);

  // align
  auto* align = app.add_subcommand("align", "Segment and relax a corpus");
  std::string align_mode = "iso";
  std::string align_corpus, align_weights, align_out;
  std::int64_t quantum_ms = 75, min_pause_ms = 300, onscreen_residual_ms = 0,
               offscreen_residual_ms = 0;
  unsigned align_threads = 1;
  PluginFlags align_plugins;
  align->add_option("--mode", align_mode, "iso or onoff")
      ->check(CLI::IsMember({"iso", "onoff"}));
  align->add_option("--corpus", align_corpus, "Corpus JSONL")->required();
  align->add_option("--weights", align_weights, "Weights file")->required();
  align->add_option("--out", align_out, "Alignments output")->required();
  align->add_option("--quantum-ms", quantum_ms, "Off-screen boundary lattice spacing");
  align->add_option("--min-pause-ms", min_pause_ms, "Minimum pause between source phrases");
  align->add_option("--onscreen-residual-ms", onscreen_residual_ms,
                    "Pause kept between relaxed on-screen segments");
  align->add_option("--offscreen-residual-ms", offscreen_residual_ms,
                    "Pause kept between relaxed off-screen segments");
  align->add_option("--threads", align_threads, "Worker threads")->check(CLI::Range(1u, 256u));
  align_plugins.add(align);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score alignments");
  std::string eval_alignments, eval_corpus, eval_report, transcriber_cmd, band = "0.8:1.3";
  double sigma = 0.25;
  std::uint64_t eval_seed = 0;
  std::int64_t eval_min_pause_ms = 300;
  PluginFlags eval_plugins;
  evaluate->add_option("--alignments", eval_alignments, "Alignments file")->required();
  evaluate->add_option("--corpus", eval_corpus, "Corpus JSONL")->required();
  evaluate->add_option("--report", eval_report, "Report output")->required();
  evaluate->add_option("--transcriber-cmd", transcriber_cmd,
                       "External transcriber; defaults to the seeded mock");
  evaluate->add_option("--seed", eval_seed, "Mock transcriber seed");
  evaluate->add_option("--sigma", sigma, "Smoothness threshold");
  evaluate->add_option("--band", band, "Fluency band LOW:HIGH");
  evaluate->add_option("--min-pause-ms", eval_min_pause_ms, "Minimum pause between source phrases");
  eval_plugins.add(evaluate);

  // tune
  auto* tune = app.add_subcommand("tune", "Fit feature weights");
  std::string tune_step, tune_corpus, tune_out, tune_base;
  double grid_step = 0.1;
  std::vector<double> candidates = kDefaultW5Candidates;
  std::int64_t tune_min_pause_ms = 300;
  unsigned tune_threads = 1;
  PluginFlags tune_plugins;
  tune->add_option("step", tune_step, "step1 or step2")
      ->required()
      ->check(CLI::IsMember({"step1", "step2"}));
  tune->add_option("--corpus", tune_corpus, "Annotated corpus JSONL")->required();
  tune->add_option("--out-weights", tune_out, "Weights output")->required();
  tune->add_option("--weights", tune_base, "Starting weights (w1..w4 for step2, w5 for step1)");
  tune->add_option("--grid-step", grid_step, "Simplex lattice spacing");
  tune->add_option("--candidates", candidates, "w5 candidates for step2")->delimiter(',');
  tune->add_option("--min-pause-ms", tune_min_pause_ms, "Minimum pause between source phrases");
  tune->add_option("--threads", tune_threads, "Worker threads")->check(CLI::Range(1u, 256u));
  tune_plugins.add(tune);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic corpus");
  SimulationOptions sim;
  std::string sim_out, verbosity;
  simulate->add_option("--clips", sim.clips, "Number of clips")->required();
  simulate->add_option("--seed", sim.seed, "Generator seed")->required();
  simulate->add_option("--offscreen-ratio", sim.offscreen_ratio, "Share of off-screen sentences")
      ->required();
  simulate->add_option("--out", sim_out, "Corpus output")->required();
  simulate->add_option("--sentences", sim.sentences_per_clip, "Sentences per clip");
  simulate->add_option("--verbosity", verbosity, "Target/source character ratio LOW:HIGH");
  simulate->add_option("--punctuation-rate", sim.punctuation_rate,
                       "Probability of a comma closing a non-final target phrase");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  if (*align) {
    return run_guarded([&] {
      const auto weights = parse_weights_file(align_weights);
      PipelineConfig config;
      config.mode = parse_mode(align_mode);
      config.weights = weights.weights;
      config.models = align_plugins.models();
      config.min_pause = Time::from_ms(min_pause_ms);
      config.onscreen_min_residual = Time::from_ms(onscreen_residual_ms);
      config.offscreen.quantum = Time::from_ms(quantum_ms);
      config.offscreen.min_residual = Time::from_ms(offscreen_residual_ms);
      config.threads = align_threads;
      config.validate();
      const auto clips = parse_corpus_file(align_corpus, config.min_pause);
      std::vector<AlignmentResult> all;
      for (const auto& clip : clips) {
        auto results = dub_clip(clip, config);
        all.insert(all.end(), std::make_move_iterator(results.begin()),
                   std::make_move_iterator(results.end()));
      }
      write_text_file(align_out, serialize_alignments(all));
    });
  }
  if (*evaluate) {
    return run_guarded([&] {
      MetricParams params;
      params.sigma = sigma;
      std::tie(params.band_low, params.band_high) = parse_band(band);
      params.validate();
      const auto clips = parse_corpus_file(eval_corpus, Time::from_ms(eval_min_pause_ms));
      const auto grouped = group_by_clip(clips, parse_alignments_file(eval_alignments));
      std::unique_ptr<Transcriber> transcriber;
      if (transcriber_cmd.empty()) {
        transcriber = std::make_unique<MockTranscriber>(eval_seed);
      } else {
        transcriber = std::make_unique<CommandTranscriber>(transcriber_cmd);
      }
      const auto report =
          evaluate_alignments(clips, grouped, *transcriber, params, eval_plugins.models());
      write_text_file(eval_report, serialize_report(report));
    });
  }
  if (*tune) {
    return run_guarded([&] {
      WeightsFile base;
      if (!tune_base.empty()) base = parse_weights_file(tune_base);
      const auto clips = parse_corpus_file(tune_corpus, Time::from_ms(tune_min_pause_ms));
      const auto models = tune_plugins.models();
      WeightsFile out = base;
      if (tune_step == "step1") {
        const auto result = tune_step1(clips, grid_step, models, base.weights, tune_threads);
        out.weights = result.weights;
        std::cerr << "segmentation accuracy " << result.accuracy << "\n";
      } else {
        const auto result = tune_step2(clips, base.weights, candidates, models,
                                       base.metric_params.sigma, Time{}, tune_threads);
        out.weights = result.weights;
        std::cerr << "smoothness " << result.smoothness << "\n";
      }
      write_text_file(tune_out, serialize_weights(out));
    });
  }
  if (*simulate) {
    return run_guarded([&] {
      if (!verbosity.empty()) std::tie(sim.verbosity_low, sim.verbosity_high) = parse_band(verbosity);
      write_text_file(sim_out, serialize_corpus(simulate_corpus(sim)));
    });
  }
  return kFailure;
}
