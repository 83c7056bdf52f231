#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>

#include "dubalign/model.hpp"

namespace dubalign {

class LineProcess;

/**
 * Stand-in for running TTS at normal speed: maps a token sequence to the
 * seconds it takes to speak. Implementations must be deterministic and
 * additive over concatenation so that segment durations sum to the
 * sentence duration.
 */
class DurationOracle {
 public:
  virtual ~DurationOracle() = default;
  virtual double duration(std::span<const std::string> tokens,
                          std::string_view language) const = 0;
};

/// Non-whitespace UTF-8 code points in a token.
std::size_t visible_chars(std::string_view token);
std::size_t visible_chars(std::span<const std::string> tokens);

/// Fixed seconds per visible character, optionally per language, with an
/// optional per-token override table.
class CharDurationModel final : public DurationOracle {
 public:
  static constexpr double kDefaultSecondsPerChar = 0.08;

  explicit CharDurationModel(double seconds_per_char = kDefaultSecondsPerChar);

  void set_language_rate(std::string language, double seconds_per_char);
  void set_token_override(std::string token, double seconds);
  double seconds_per_char(std::string_view language) const;

  double duration(std::span<const std::string> tokens,
                  std::string_view language) const override;

 private:
  double default_rate_;
  std::map<std::string, double, std::less<>> language_rates_;
  std::map<std::string, double, std::less<>> token_overrides_;
};

/// Delegates to an external command: one text line in, one decimal seconds
/// line out. Replies are cached; calls are serialized.
class CommandDurationOracle final : public DurationOracle {
 public:
  explicit CommandDurationOracle(std::string command);
  ~CommandDurationOracle() override;

  double duration(std::span<const std::string> tokens,
                  std::string_view language) const override;

 private:
  mutable std::mutex mutex_;
  mutable std::unique_ptr<LineProcess> process_;
  mutable std::map<std::string, double> cache_;
};

struct SpeakingRate {
  double value = 1.0;
  auto operator<=>(const SpeakingRate&) const = default;
};

double synth_duration(const DurationOracle& oracle, std::span<const std::string> text,
                      std::string_view language);

/// duration / |interval|; throws DegenerateInterval on empty intervals.
SpeakingRate speaking_rate(double seconds, Interval interval);

SpeakingRate source_rate(const DurationOracle& oracle, std::span<const std::string> segment,
                         std::string_view language, Interval interval);
SpeakingRate target_rate(const DurationOracle& oracle, std::span<const std::string> segment,
                         std::string_view language, Interval relaxed);

}  // namespace dubalign
