#include "dubalign/corpus_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "dubalign/error.hpp"

namespace dubalign {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

struct Cursor {
  std::size_t line;
  std::string path;

  Cursor at(const std::string& key) const {
    return {line, path.empty() ? key : path + "." + key};
  }
  Cursor at(std::size_t index) const { return {line, path + "[" + std::to_string(index) + "]"}; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, path, what); }
};

const json& field(const json& obj, const std::string& key, const Cursor& cur) {
  auto it = obj.find(key);
  if (it == obj.end()) cur.at(key).fail("missing field");
  return *it;
}

std::string as_string(const json& j, const Cursor& cur) {
  if (!j.is_string()) cur.fail("expected a string");
  return j.get<std::string>();
}

std::int64_t as_integer(const json& j, const Cursor& cur) {
  if (!j.is_number_integer()) cur.fail("expected an integer");
  if (j.is_number_unsigned() &&
      j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    cur.fail("integer out of range");
  }
  return j.get<std::int64_t>();
}

bool as_bool(const json& j, const Cursor& cur) {
  if (!j.is_boolean()) cur.fail("expected true or false");
  return j.get<bool>();
}

double as_number(const json& j, const Cursor& cur) {
  if (!j.is_number()) cur.fail("expected a number");
  return j.get<double>();
}

const json& as_array(const json& j, const Cursor& cur) {
  if (!j.is_array()) cur.fail("expected an array");
  return j;
}

json parse_json(std::string_view text, std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, "", std::string("malformed JSON: ") + e.what());
  }
}

std::string describe(const Violation& v) {
  return (v.sentence ? "sentence " + std::to_string(*v.sentence) + ": " : std::string()) +
         v.rule + ": " + v.detail;
}

/// Finite long doubles become numbers, everything else null.
ojson score_value(long double v) {
  const auto d = static_cast<double>(v);
  if (!std::isfinite(d)) return nullptr;
  return d;
}

long double score_from(const json& j) {
  if (j.is_null()) return -std::numeric_limits<long double>::infinity();
  return j.get<double>();
}

ojson interval_ms(const Interval& i) {
  return ojson::array({i.begin.rounded_ms(), i.end.rounded_ms()});
}

}  // namespace

Clip parse_clip_record(std::string_view text, std::size_t line, Time min_pause) {
  const json root = parse_json(text, line);
  const Cursor top{line, ""};
  if (!root.is_object()) top.fail("expected a JSON object");

  Clip clip;
  clip.id = as_string(field(root, "id", top), top.at("id"));
  clip.source_language = as_string(field(root, "lang_src", top), top.at("lang_src"));
  clip.target_language = as_string(field(root, "lang_tgt", top), top.at("lang_tgt"));
  if (auto it = root.find("duration_ms"); it != root.end()) {
    clip.duration = Time::from_ms(as_integer(*it, top.at("duration_ms")));
  }
  const Cursor sc = top.at("sentences");
  const json& sentences = as_array(field(root, "sentences", top), sc);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const Cursor cur = sc.at(s);
    const json& rec = sentences[s];
    if (!rec.is_object()) cur.fail("expected an object");
    std::vector<TimedWord> words;
    const Cursor wc = cur.at("src_words");
    const json& src = as_array(field(rec, "src_words", cur), wc);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Cursor c = wc.at(i);
      if (!src[i].is_object()) c.fail("expected an object");
      words.push_back({as_string(field(src[i], "w", c), c.at("w")),
                       Time::from_ms(as_integer(field(src[i], "start_ms", c), c.at("start_ms"))),
                       Time::from_ms(as_integer(field(src[i], "end_ms", c), c.at("end_ms")))});
    }
    SentencePair pair;
    pair.source.words = std::move(words);
    pair.source.min_pause = min_pause;
    pair.source.language = clip.source_language;
    if (!pair.source.words.empty()) {
      pair.source.breakpoints = detect_breakpoints(pair.source.words, min_pause);
    }
    pair.target.words = split_words(as_string(field(rec, "tgt_text", cur), cur.at("tgt_text")));
    pair.target.onscreen = as_bool(field(rec, "onscreen", cur), cur.at("onscreen"));
    pair.target.language = clip.target_language;
    if (auto it = rec.find("ref_breakpoints"); it != rec.end()) {
      const Cursor rc = cur.at("ref_breakpoints");
      std::vector<std::size_t> ref;
      for (std::size_t i = 0; i < as_array(*it, rc).size(); ++i) {
        const auto v = as_integer((*it)[i], rc.at(i));
        if (v <= 0) rc.at(i).fail("breakpoints are 1-based word indices");
        ref.push_back(static_cast<std::size_t>(v));
      }
      pair.reference_breakpoints = std::move(ref);
    }
    clip.pairs.push_back(std::move(pair));
  }

  const auto violations = validate_clip(clip);
  if (!violations.empty()) {
    throw ValidationError("line " + std::to_string(line) + ", clip " + clip.id + ": " +
                          describe(violations.front()));
  }
  return clip;
}

std::vector<Clip> parse_corpus(std::istream& in, Time min_pause) {
  if (min_pause <= Time{}) throw InvalidInput("minimum pause must be positive");
  std::vector<Clip> clips;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    clips.push_back(parse_clip_record(line, number, min_pause));
  }
  if (in.bad()) throw IoError("read failed at line " + std::to_string(number));
  return clips;
}

std::vector<Clip> parse_corpus_file(const std::string& path, Time min_pause) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_corpus(in, min_pause);
}

std::string serialize_clip(const Clip& clip) {
  ojson root;
  root["id"] = clip.id;
  root["lang_src"] = clip.source_language;
  root["lang_tgt"] = clip.target_language;
  if (clip.duration) root["duration_ms"] = clip.duration->rounded_ms();
  ojson sentences = ojson::array();
  for (const auto& pair : clip.pairs) {
    ojson s;
    ojson words = ojson::array();
    for (const auto& w : pair.source.words) {
      ojson wj;
      wj["w"] = w.text;
      wj["start_ms"] = w.start.rounded_ms();
      wj["end_ms"] = w.end.rounded_ms();
      words.push_back(std::move(wj));
    }
    s["src_words"] = std::move(words);
    s["tgt_text"] = join_words(pair.target.words);
    s["onscreen"] = pair.target.onscreen;
    if (pair.reference_breakpoints) s["ref_breakpoints"] = *pair.reference_breakpoints;
    sentences.push_back(std::move(s));
  }
  root["sentences"] = std::move(sentences);
  return root.dump();
}

std::string serialize_corpus(std::span<const Clip> clips) {
  std::string out;
  for (const auto& c : clips) {
    out += serialize_clip(c);
    out += '\n';
  }
  return out;
}

std::string serialize_alignments(std::span<const AlignmentResult> results) {
  std::string out;
  ojson header;
  header["format"] = "dubalign-alignments";
  header["version"] = 1;
  header["time_unit"] = "ms";
  header["rounding"] = "half-even";
  header["records"] = results.size();
  out += header.dump();
  out += '\n';
  for (const auto& r : results) {
    ojson rec;
    rec["clip"] = r.clip_id;
    rec["sentence"] = r.sentence_index;
    rec["mode"] = std::string(to_string(r.mode));
    rec["onscreen"] = r.onscreen;
    rec["breakpoints"] = r.segmentation.breakpoints;
    rec["segmentation_score"] = score_value(r.segmentation_score);
    rec["relaxation_score"] = score_value(r.relaxation_score);
    rec["warnings"] = r.warnings;
    ojson segs = ojson::array();
    for (const auto& s : r.segments) {
      ojson sj;
      sj["source_text"] = join_words(s.source_text);
      sj["target_text"] = join_words(s.target_text);
      sj["source_ms"] = interval_ms(s.source_interval);
      sj["relaxed_ms"] = interval_ms(s.relaxed_interval);
      sj["delta_left"] = s.delta_left;
      sj["delta_right"] = s.delta_right;
      sj["r_e"] = s.source_rate;
      sj["r_f"] = s.target_rate;
      segs.push_back(std::move(sj));
    }
    rec["segments"] = std::move(segs);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::vector<AlignmentResult> parse_alignments(std::istream& in) {
  std::vector<AlignmentResult> out;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json root = parse_json(line, number);
    const Cursor top{number, ""};
    if (!root.is_object()) top.fail("expected a JSON object");
    if (!header) {
      if (root.value("format", "") != "dubalign-alignments") {
        top.at("format").fail("missing alignments header");
      }
      header = true;
      continue;
    }
    AlignmentResult r;
    r.clip_id = as_string(field(root, "clip", top), top.at("clip"));
    r.sentence_index =
        static_cast<std::size_t>(as_integer(field(root, "sentence", top), top.at("sentence")));
    try {
      r.mode = parse_mode(as_string(field(root, "mode", top), top.at("mode")));
    } catch (const InvalidInput& e) {
      top.at("mode").fail(e.what());
    }
    r.onscreen = as_bool(field(root, "onscreen", top), top.at("onscreen"));
    const Cursor bc = top.at("breakpoints");
    const json& bps = as_array(field(root, "breakpoints", top), bc);
    for (std::size_t i = 0; i < bps.size(); ++i) {
      r.segmentation.breakpoints.push_back(static_cast<std::size_t>(as_integer(bps[i], bc.at(i))));
    }
    r.segmentation_score = score_from(field(root, "segmentation_score", top));
    r.relaxation_score = score_from(field(root, "relaxation_score", top));
    const Cursor wc = top.at("warnings");
    const json& warnings = as_array(field(root, "warnings", top), wc);
    for (std::size_t i = 0; i < warnings.size(); ++i) {
      r.warnings.push_back(as_string(warnings[i], wc.at(i)));
    }
    const Cursor sc = top.at("segments");
    const json& segs = as_array(field(root, "segments", top), sc);
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const Cursor c = sc.at(i);
      const json& sj = segs[i];
      if (!sj.is_object()) c.fail("expected an object");
      SegmentAlignment s;
      s.source_text = split_words(as_string(field(sj, "source_text", c), c.at("source_text")));
      s.target_text = split_words(as_string(field(sj, "target_text", c), c.at("target_text")));
      auto read_interval = [&](const char* key) {
        const Cursor ic = c.at(key);
        const json& a = as_array(field(sj, key, c), ic);
        if (a.size() != 2) ic.fail("expected [begin_ms, end_ms]");
        return Interval{Time::from_ms(as_integer(a[0], ic.at(0))),
                        Time::from_ms(as_integer(a[1], ic.at(1)))};
      };
      s.source_interval = read_interval("source_ms");
      s.relaxed_interval = read_interval("relaxed_ms");
      s.delta_left = as_number(field(sj, "delta_left", c), c.at("delta_left"));
      s.delta_right = as_number(field(sj, "delta_right", c), c.at("delta_right"));
      s.source_rate = as_number(field(sj, "r_e", c), c.at("r_e"));
      s.target_rate = as_number(field(sj, "r_f", c), c.at("r_f"));
      r.segments.push_back(std::move(s));
    }
    if (r.segments.size() != r.segmentation.segment_count()) {
      sc.fail("segment count differs from breakpoint count");
    }
    out.push_back(std::move(r));
  }
  if (!header) throw ParseError(number, "format", "missing alignments header");
  return out;
}

std::vector<AlignmentResult> parse_alignments_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_alignments(in);
}

std::vector<std::vector<AlignmentResult>> group_by_clip(std::span<const Clip> clips,
                                                        std::vector<AlignmentResult> results) {
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<AlignmentResult>> out(clips.size());
  for (std::size_t c = 0; c < clips.size(); ++c) {
    if (!index.emplace(clips[c].id, c).second) {
      throw InvalidInput("duplicate clip id " + clips[c].id);
    }
    out[c].resize(clips[c].pairs.size());
  }
  std::vector<std::vector<bool>> seen(clips.size());
  for (std::size_t c = 0; c < clips.size(); ++c) seen[c].assign(clips[c].pairs.size(), false);
  for (auto& r : results) {
    auto it = index.find(r.clip_id);
    if (it == index.end()) throw InvalidInput("alignment for unknown clip " + r.clip_id);
    const std::size_t c = it->second;
    if (r.sentence_index >= out[c].size()) {
      throw InvalidInput("clip " + r.clip_id + ": sentence index out of range");
    }
    if (seen[c][r.sentence_index]) {
      throw InvalidInput("clip " + r.clip_id + ": duplicate sentence " +
                         std::to_string(r.sentence_index));
    }
    seen[c][r.sentence_index] = true;
    out[c][r.sentence_index] = std::move(r);
  }
  for (std::size_t c = 0; c < clips.size(); ++c) {
    for (std::size_t s = 0; s < seen[c].size(); ++s) {
      if (!seen[c][s]) {
        throw InvalidInput("clip " + clips[c].id + ": no alignment for sentence " +
                           std::to_string(s));
      }
    }
  }
  return out;
}

std::string serialize_weights(const WeightsFile& file) {
  ojson root;
  root["w1"] = file.weights.w1;
  root["w2"] = file.weights.w2;
  root["w3"] = file.weights.w3;
  root["w4"] = file.weights.w4;
  root["w5"] = file.weights.w5;
  ojson mp;
  mp["sigma"] = file.metric_params.sigma;
  mp["band_low"] = file.metric_params.band_low;
  mp["band_high"] = file.metric_params.band_high;
  root["metric_params"] = std::move(mp);
  return root.dump(2) + "\n";
}

WeightsFile parse_weights(std::string_view text) {
  const json root = parse_json(text, 1);
  const Cursor top{1, ""};
  if (!root.is_object()) top.fail("expected a JSON object");
  WeightsFile f;
  f.weights.w1 = as_number(field(root, "w1", top), top.at("w1"));
  f.weights.w2 = as_number(field(root, "w2", top), top.at("w2"));
  f.weights.w3 = as_number(field(root, "w3", top), top.at("w3"));
  f.weights.w4 = as_number(field(root, "w4", top), top.at("w4"));
  f.weights.w5 = as_number(field(root, "w5", top), top.at("w5"));
  if (auto it = root.find("metric_params"); it != root.end()) {
    const Cursor mc = top.at("metric_params");
    if (!it->is_object()) mc.fail("expected an object");
    if (auto s = it->find("sigma"); s != it->end()) f.metric_params.sigma = as_number(*s, mc.at("sigma"));
    if (auto s = it->find("band_low"); s != it->end()) {
      f.metric_params.band_low = as_number(*s, mc.at("band_low"));
    }
    if (auto s = it->find("band_high"); s != it->end()) {
      f.metric_params.band_high = as_number(*s, mc.at("band_high"));
    }
  }
  try {
    f.weights.validate();
    f.metric_params.validate();
  } catch (const InvalidInput& e) {
    throw ValidationError(std::string("weights file: ") + e.what());
  }
  return f;
}

WeightsFile parse_weights_file(const std::string& path) {
  return parse_weights(read_text_file(path));
}

std::string serialize_report(const MetricsReport& r) {
  auto optional_number = [](const std::optional<double>& v) -> ojson {
    if (!v) return nullptr;
    return *v;
  };
  ojson root;
  root["clips"] = r.clips;
  root["sentences"] = r.sentences;
  root["segments"] = r.segments;
  root["smoothness"] = r.smoothness;
  root["fluency"] = r.fluency;
  root["intelligibility"] = r.intelligibility;
  root["wer_aligned"] = r.wer_aligned;
  root["wer_unaligned"] = r.wer_unaligned;
  root["length_compliance"] = r.length_compliance;
  root["mean_overspeed"] = r.mean_overspeed;
  root["segmentation_accuracy"] = optional_number(r.segmentation_accuracy);
  ojson clips = ojson::array();
  for (const auto& c : r.per_clip) {
    ojson cj;
    cj["id"] = c.clip_id;
    cj["smoothness"] = optional_number(c.smoothness);
    cj["fluency"] = c.fluency;
    cj["wer_aligned"] = c.wer_aligned;
    cj["wer_unaligned"] = c.wer_unaligned;
    cj["reference_words"] = c.reference_words;
    cj["mean_overspeed"] = c.mean_overspeed;
    clips.push_back(std::move(cj));
  }
  root["per_clip"] = std::move(clips);
  return root.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace dubalign
