#include "puppetwire/wire_json.hpp"

#include "puppetwire/detail/json_fields.hpp"

namespace puppetwire {
namespace {

using nlohmann::json;
using detail::FieldReader;

FieldReader reader(const json& j, const std::string& path) {
  return FieldReader(j, path, Code::SchemaViolation, Code::SchemaViolation);
}

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> read_optional_string(FieldReader& r, std::string_view name) {
  const auto& v = r.required(name);
  if (v.is_null()) return std::nullopt;
  return r.as_string(name, v);
}

template <typename E>
E read_enum(FieldReader& r, std::string_view name, std::optional<E> (*parse)(std::string_view)) {
  const auto text = r.string(name);
  const auto value = parse(text);
  if (!value) r.fail(Code::SchemaViolation, "bad value '" + text + "' for '" + std::string(name) + "'");
  return *value;
}

int read_flag(FieldReader& r, std::string_view name) {
  const auto v = r.integer(name);
  if (v != 0 && v != 1) r.fail(Code::SchemaViolation, "'" + std::string(name) + "' must be 0 or 1");
  return static_cast<int>(v);
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::Positive;
  if (s == "negative") return Polarity::Negative;
  return std::nullopt;
}

}  // namespace

json sample_to_json(const SensorSample& s) {
  json j{{"timestamp_ms", s.timestamp_ms}};
  if (s.landmarks) {
    json pts = json::array();
    for (const auto& p : *s.landmarks) pts.push_back(json::array({p.x, p.y}));
    j["landmarks"] = pts;
  }
  if (s.emotion_probs) j["emotion_probs"] = *s.emotion_probs;
  if (s.volume) j["volume"] = *s.volume;
  if (s.bpm) j["bpm"] = *s.bpm;
  if (s.eye_open_l) j["eye_open_l"] = *s.eye_open_l;
  if (s.eye_open_r) j["eye_open_r"] = *s.eye_open_r;
  return j;
}

SensorSample sample_from_json(const json& j) {
  auto r = reader(j, "sample");
  SensorSample s;
  if (const auto* v = r.find("timestamp_ms")) s.timestamp_ms = r.as_integer("timestamp_ms", *v);
  if (const auto* v = r.find("landmarks")) {
    if (!v->is_array()) r.fail(Code::SchemaViolation, "'landmarks' must be an array of [x, y]");
    std::vector<Vec2> pts;
    for (const auto& p : *v) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        r.fail(Code::SchemaViolation, "'landmarks' must be an array of [x, y]");
      }
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    s.landmarks = std::move(pts);
  }
  if (const auto* v = r.find("emotion_probs")) {
    if (!v->is_array() || v->size() != kEmotionClassCount) {
      r.fail(Code::SchemaViolation, "'emotion_probs' must hold 7 numbers");
    }
    EmotionProbs probs{};
    for (std::size_t i = 0; i < kEmotionClassCount; ++i) probs[i] = r.as_number("emotion_probs", (*v)[i]);
    s.emotion_probs = probs;
  }
  if (const auto* v = r.find("volume")) s.volume = r.as_number("volume", *v);
  if (const auto* v = r.find("bpm")) s.bpm = r.as_number("bpm", *v);
  if (r.find("eye_open_l")) s.eye_open_l = r.boolean("eye_open_l");
  if (r.find("eye_open_r")) s.eye_open_r = r.boolean("eye_open_r");
  r.finish();
  return s;
}

json recommendation_to_json(const Recommendation& rec) {
  return json{{"keys", rec.keys},
              {"distances", rec.distances},
              {"polarity", to_string(rec.polarity)},
              {"fallback_used", rec.fallback_used}};
}

Recommendation recommendation_from_json(const json& j) {
  auto r = reader(j, "recommendations");
  Recommendation rec;
  const auto& keys = r.required("keys");
  const auto& distances = r.required("distances");
  if (!keys.is_array() || !distances.is_array() || keys.size() != distances.size()) {
    r.fail(Code::SchemaViolation, "'keys' and 'distances' must be arrays of equal length");
  }
  for (const auto& k : keys) rec.keys.push_back(r.as_string("keys", k));
  for (const auto& d : distances) rec.distances.push_back(r.as_number("distances", d));
  rec.polarity = read_enum(r, "polarity", &parse_polarity);
  rec.fallback_used = r.boolean("fallback_used");
  r.finish();
  return rec;
}

json frame_to_json(const StateFrame& f) {
  const auto& p = f.puppet;
  json puppet{{"x", p.x},
              {"y", p.y},
              {"emotion", to_string(p.emotion)},
              {"eye_closed_l", p.eye_closed_l},
              {"eye_closed_r", p.eye_closed_r},
              {"mouth_open", p.mouth_open},
              {"character", to_string(p.character)}};

  const auto& e = f.effects;
  json vibration = json::array();
  for (const auto& v : e.vibration) {
    vibration.push_back({{"component", to_string(v.component)}, {"axis", to_string(v.axis)}, {"offset", v.offset}});
  }
  json danmaku = json::array();
  for (const auto& d : e.danmaku) {
    danmaku.push_back({{"text", d.text},
                       {"font_size", d.font_size},
                       {"color", to_string(d.color)},
                       {"x", d.x},
                       {"y", d.y}});
  }
  json particles = json::array();
  for (const auto& s : e.particles) {
    particles.push_back({{"x", s.x}, {"y", s.y}, {"alpha", s.alpha}, {"texture_id", s.texture_id}});
  }
  json effects{{"command", optional_string(e.command)},
               {"timeline_ms", e.timeline_ms ? json(*e.timeline_ms) : json(nullptr)},
               {"vibration", vibration},
               {"danmaku", danmaku},
               {"particles", particles},
               {"sounds", e.sounds},
               {"background", optional_string(e.background)}};

  return json{{"tick", f.tick},
              {"time_ms", f.time_ms},
              {"puppet", puppet},
              {"effects", effects},
              {"recommendations", recommendation_to_json(f.recommendations)},
              {"estimate", {{"valence", f.valence}, {"arousal", f.arousal}}}};
}

StateFrame frame_from_json(const json& j) {
  auto r = reader(j, "frame");
  StateFrame f;
  const auto tick = r.integer("tick");
  if (tick < 0) r.fail(Code::SchemaViolation, "'tick' must be >= 0");
  f.tick = static_cast<std::uint64_t>(tick);
  f.time_ms = r.number("time_ms");

  auto pr = reader(r.required("puppet"), "frame.puppet");
  f.puppet.x = pr.number("x");
  f.puppet.y = pr.number("y");
  f.puppet.emotion = read_enum(pr, "emotion", &parse_emotion_template);
  f.puppet.eye_closed_l = read_flag(pr, "eye_closed_l");
  f.puppet.eye_closed_r = read_flag(pr, "eye_closed_r");
  f.puppet.mouth_open = read_flag(pr, "mouth_open");
  f.puppet.character = read_enum(pr, "character", &parse_character);
  pr.finish();

  auto er = reader(r.required("effects"), "frame.effects");
  f.effects.command = read_optional_string(er, "command");
  if (const auto& t = er.required("timeline_ms"); !t.is_null()) f.effects.timeline_ms = er.as_number("timeline_ms", t);
  auto array_of = [&](std::string_view name) -> const json& {
    const auto& v = er.required(name);
    if (!v.is_array()) er.fail(Code::SchemaViolation, "'" + std::string(name) + "' must be an array");
    return v;
  };
  for (const auto& v : array_of("vibration")) {
    auto vr = reader(v, "frame.effects.vibration");
    f.effects.vibration.push_back({read_enum(vr, "component", &parse_component), read_enum(vr, "axis", &parse_axis),
                                   vr.number("offset")});
    vr.finish();
  }
  for (const auto& v : array_of("danmaku")) {
    auto dr = reader(v, "frame.effects.danmaku");
    DanmakuEntity d;
    d.text = dr.string("text");
    d.font_size = dr.number("font_size");
    const auto color = parse_rgb(dr.string("color"));
    if (!color) dr.fail(Code::SchemaViolation, "bad color");
    d.color = *color;
    d.x = dr.number("x");
    d.y = dr.number("y");
    dr.finish();
    f.effects.danmaku.push_back(std::move(d));
  }
  for (const auto& v : array_of("particles")) {
    auto sr = reader(v, "frame.effects.particles");
    f.effects.particles.push_back({sr.number("x"), sr.number("y"), sr.number("alpha"), sr.string("texture_id")});
    sr.finish();
  }
  for (const auto& v : array_of("sounds")) f.effects.sounds.push_back(er.as_string("sounds", v));
  f.effects.background = read_optional_string(er, "background");
  er.finish();

  f.recommendations = recommendation_from_json(r.required("recommendations"));
  auto ar = reader(r.required("estimate"), "frame.estimate");
  f.valence = static_cast<int>(ar.integer("valence"));
  f.arousal = static_cast<int>(ar.integer("arousal"));
  ar.finish();
  r.finish();
  return f;
}

}  // namespace puppetwire
