#include <doctest.h>

#include "dubalign/duration.hpp"
#include "dubalign/error.hpp"
#include "dubalign/subprocess.hpp"

using namespace dubalign;

namespace {

Interval seconds(double a, double b) { return {Time::from_seconds(a), Time::from_seconds(b)}; }

}  // namespace

TEST_CASE("character model counts visible code points") {
  CHECK(visible_chars("hello") == 5);
  CHECK(visible_chars("héllo") == 5);
  CHECK(visible_chars("a b\tc") == 3);
  CHECK(visible_chars("…") == 1);
  CharDurationModel model;
  const std::vector<std::string> ten = {"abcde", "fgh,", "i"};
  CHECK(synth_duration(model, ten, "en") == doctest::Approx(0.80).epsilon(1e-12));
  CHECK_THROWS_AS(synth_duration(model, std::vector<std::string>{"", ""}, "en"), InvalidInput);
  CHECK_THROWS_AS(synth_duration(model, std::vector<std::string>{}, "en"), InvalidInput);
}

TEST_CASE("durations are additive and increase with length") {
  CharDurationModel model;
  model.set_language_rate("fr", 0.07);
  model.set_token_override("NASA", 0.5);
  const std::vector<std::string> a = {"bonjour", "NASA"};
  const std::vector<std::string> b = {"le", "monde."};
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  CHECK(model.duration(ab, "fr") ==
        doctest::Approx(model.duration(a, "fr") + model.duration(b, "fr")).epsilon(1e-12));
  CHECK(model.duration(std::vector<std::string>{"NASA"}, "fr") == doctest::Approx(0.5));
  CHECK(model.seconds_per_char("fr") == 0.07);
  CHECK(model.seconds_per_char("de") == CharDurationModel::kDefaultSecondsPerChar);
  CHECK(model.duration(std::vector<std::string>{"abc"}, "de") <
        model.duration(std::vector<std::string>{"abcd"}, "de"));
  CHECK_THROWS_AS(CharDurationModel(0.0), InvalidInput);
}

TEST_CASE("speaking rates divide duration by interval length") {
  CHECK(speaking_rate(1.2, seconds(3.0, 4.2)).value == doctest::Approx(1.0));
  CHECK(speaking_rate(1.5, seconds(0.0, 1.0)).value == doctest::Approx(1.5));
  CHECK(speaking_rate(2.0, seconds(5.0, 6.0)).value == doctest::Approx(2.0));
  CHECK(speaking_rate(1.5, seconds(0.0, 0.5)).value ==
        doctest::Approx(2.0 * speaking_rate(1.5, seconds(0.0, 1.0)).value));
  // Extending the interval by a quarter scales the rate by 0.8.
  CHECK(speaking_rate(1.0, seconds(0.0, 1.25)).value ==
        doctest::Approx(0.8 * speaking_rate(1.0, seconds(0.0, 1.0)).value));
  // Translation invariance.
  CHECK(speaking_rate(0.9, seconds(0.0, 1.1)).value ==
        doctest::Approx(speaking_rate(0.9, seconds(7.0, 8.1)).value).epsilon(1e-12));
  CHECK_THROWS_AS(speaking_rate(1.0, seconds(1.0, 1.0)), DegenerateInterval);
  CHECK_THROWS_AS(speaking_rate(1.0, seconds(2.0, 1.0)), DegenerateInterval);

  CharDurationModel model;
  const std::vector<std::string> seg = {"abcdefghij"};
  CHECK(source_rate(model, seg, "en", seconds(0.0, 0.8)).value == doctest::Approx(1.0));
  CHECK(target_rate(model, seg, "en", seconds(0.0, 0.4)).value == doctest::Approx(2.0));
  double previous = 1e9;
  for (int ms = 100; ms <= 2000; ms += 100) {
    const double r = target_rate(model, seg, "en", {Time{}, Time::from_ms(ms)}).value;
    CHECK(r < previous);
    previous = r;
  }
}

TEST_CASE("external duration oracle speaks one line per request") {
  // Seconds = 0.05 per non-space byte, one reply line per request line.
  CommandDurationOracle oracle(
      "while IFS= read -r l; do printf '%s' \"$l\" | tr -d ' ' | wc -c | "
      "awk '{ printf \"%.6f\\n\", $1 * 0.05 }'; done");
  CHECK(oracle.duration(std::vector<std::string>{"abcd", "ef"}, "en") == doctest::Approx(0.3));
  CHECK(oracle.duration(std::vector<std::string>{"abcd", "ef"}, "en") == doctest::Approx(0.3));
  CHECK(oracle.duration(std::vector<std::string>{"a"}, "en") == doctest::Approx(0.05));

  CommandDurationOracle negative("while read l; do echo -1; done");
  CHECK_THROWS_AS(negative.duration(std::vector<std::string>{"a"}, "en"), PluginProtocolError);

  CommandDurationOracle garbage("while read l; do echo soon; done");
  CHECK_THROWS_AS(garbage.duration(std::vector<std::string>{"a"}, "en"), PluginProtocolError);

  CommandDurationOracle dead("exit 0");
  CHECK_THROWS_AS(dead.duration(std::vector<std::string>{"a"}, "en"), PluginProtocolError);
}

TEST_CASE("line processes time out") {
  LineProcess slow("sleep 5", std::chrono::milliseconds(100));
  slow.write_line("x");
  CHECK_THROWS_AS(slow.read_line(), PluginProtocolError);
}
