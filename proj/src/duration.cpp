#include "dubalign/duration.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "dubalign/error.hpp"
#include "dubalign/subprocess.hpp"

namespace dubalign {

std::size_t visible_chars(std::string_view token) {
  std::size_t n = 0;
  for (unsigned char c : token) {
    if ((c & 0xC0) == 0x80) continue;  // UTF-8 continuation byte
    if (c < 0x80 && std::isspace(c)) continue;
    ++n;
  }
  return n;
}

std::size_t visible_chars(std::span<const std::string> tokens) {
  std::size_t n = 0;
  for (const auto& t : tokens) n += visible_chars(t);
  return n;
}

CharDurationModel::CharDurationModel(double seconds_per_char)
    : default_rate_(seconds_per_char) {
  if (!(seconds_per_char > 0.0)) throw InvalidInput("seconds per character must be positive");
}

void CharDurationModel::set_language_rate(std::string language, double seconds_per_char) {
  if (!(seconds_per_char > 0.0)) throw InvalidInput("seconds per character must be positive");
  language_rates_[std::move(language)] = seconds_per_char;
}

void CharDurationModel::set_token_override(std::string token, double seconds) {
  if (!(seconds > 0.0)) throw InvalidInput("token override must be positive");
  token_overrides_[std::move(token)] = seconds;
}

double CharDurationModel::seconds_per_char(std::string_view language) const {
  auto it = language_rates_.find(language);
  return it == language_rates_.end() ? default_rate_ : it->second;
}

double CharDurationModel::duration(std::span<const std::string> tokens,
                                   std::string_view language) const {
  std::size_t chars = 0;
  double overridden = 0.0;
  bool any = false;
  for (const auto& tok : tokens) {
    if (auto it = token_overrides_.find(tok); it != token_overrides_.end()) {
      overridden += it->second;
      any = true;
    } else {
      const std::size_t n = visible_chars(tok);
      chars += n;
      any = any || n > 0;
    }
  }
  if (!any) throw InvalidInput("synth_duration: text has no visible characters");
  return static_cast<double>(chars) * seconds_per_char(language) + overridden;
}

CommandDurationOracle::CommandDurationOracle(std::string command)
    : process_(std::make_unique<LineProcess>(std::move(command))) {}

CommandDurationOracle::~CommandDurationOracle() = default;

double CommandDurationOracle::duration(std::span<const std::string> tokens,
                                       std::string_view) const {
  if (visible_chars(tokens) == 0) {
    throw InvalidInput("synth_duration: text has no visible characters");
  }
  std::string line;
  for (const auto& t : tokens) {
    if (t.empty()) continue;
    if (!line.empty()) line += ' ';
    line += t;
  }
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(line); it != cache_.end()) return it->second;
  process_->write_line(line);
  const std::string reply = process_->read_line();
  char* end = nullptr;
  const double seconds = std::strtod(reply.c_str(), &end);
  if (end == reply.c_str() || *end != '\0' || !std::isfinite(seconds) || seconds <= 0.0) {
    throw PluginProtocolError("duration command returned '" + reply + "' for '" + line + "'");
  }
  cache_.emplace(line, seconds);
  return seconds;
}

double synth_duration(const DurationOracle& oracle, std::span<const std::string> text,
                      std::string_view language) {
  if (text.empty()) throw InvalidInput("synth_duration: empty text");
  return oracle.duration(text, language);
}

SpeakingRate speaking_rate(double seconds, Interval interval) {
  if (interval.length() <= Time{}) {
    throw DegenerateInterval("speaking rate over an empty interval");
  }
  return {seconds / interval.length().seconds()};
}

SpeakingRate source_rate(const DurationOracle& oracle, std::span<const std::string> segment,
                         std::string_view language, Interval interval) {
  if (interval.length() <= Time{}) {
    throw DegenerateInterval("source_rate over an empty interval");
  }
  return speaking_rate(synth_duration(oracle, segment, language), interval);
}

SpeakingRate target_rate(const DurationOracle& oracle, std::span<const std::string> segment,
                         std::string_view language, Interval relaxed) {
  if (relaxed.length() <= Time{}) {
    throw DegenerateInterval("target_rate over an empty interval");
  }
  return speaking_rate(synth_duration(oracle, segment, language), relaxed);
}

}  // namespace dubalign
