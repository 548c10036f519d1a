#include "puppetwire/offline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "puppetwire/detail/json_fields.hpp"
#include "puppetwire/wire_json.hpp"

namespace puppetwire {
namespace {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Code::MalformedDocument, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::vector<StateFrame> render_command(const CommandCorpus& corpus, std::string_view key, int fps,
                                       std::uint64_t seed) {
  EngineConfig cfg;
  cfg.tick_rate = fps;
  cfg.seed = seed;
  Engine engine(corpus, cfg);
  engine.trigger(key);
  const auto* cmd = corpus.find(key);
  const std::int64_t total = compile_timeline(cmd->behavior).total_ms;
  const std::int64_t count = std::max<std::int64_t>(1, (total * fps + 999) / 1000);
  std::vector<StateFrame> frames;
  frames.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) frames.push_back(engine.tick());
  return frames;
}

std::string frames_to_ndjson(const std::vector<StateFrame>& frames) {
  std::string out;
  for (const auto& f : frames) {
    out += frame_to_json(f).dump();
    out += '\n';
  }
  return out;
}

std::int64_t Scenario::effective_duration_ms() const {
  if (duration_ms) return *duration_ms;
  return (events.empty() ? 0 : events.back().t_ms) + 1000;
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  Scenario scenario;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool seen_event = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "scenario line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(Code::MalformedDocument, where + ": " + e.what());
    }
    if (!j.is_object()) throw Error(Code::MalformedDocument, where + ": record is not an object");
    const auto kind_it = j.find("kind");
    if (kind_it == j.end() || !kind_it->is_string()) throw Error(Code::SchemaViolation, where + ": missing 'kind'");
    const std::string kind = kind_it->get<std::string>();

    if (kind == "config") {
      if (seen_event || line_no != 1) throw Error(Code::SchemaViolation, where + ": config must be the first record");
      detail::FieldReader r(j, where, Code::SchemaViolation, Code::SchemaViolation);
      r.string("kind");
      if (const auto* p = r.find("corpus_path")) {
        std::filesystem::path path = r.as_string("corpus_path", *p);
        if (path.is_relative()) path = base_dir / path;
        scenario.corpus = load_corpus(read_text_file(path));
      }
      if (const auto* c = r.find("corpus")) scenario.corpus = corpus_from_json(*c);
      if (const auto* v = r.find("tick_rate")) {
        const auto rate = r.as_integer("tick_rate", *v);
        if (rate < 1 || rate > 240) r.fail(Code::SchemaViolation, "tick_rate must be within [1, 240]");
        scenario.tick_rate = static_cast<int>(rate);
      }
      if (const auto* v = r.find("seed")) {
        if (!v->is_number_unsigned()) r.fail(Code::SchemaViolation, "seed must be a non-negative integer");
        scenario.seed = v->get<std::uint64_t>();
      }
      if (const auto* v = r.find("duration_ms")) {
        const auto d = r.as_integer("duration_ms", *v);
        if (d < 0) r.fail(Code::SchemaViolation, "duration_ms must be >= 0");
        scenario.duration_ms = d;
      }
      r.finish();
      continue;
    }

    const auto t_it = j.find("t_ms");
    if (t_it == j.end() || !t_it->is_number_integer() || t_it->get<std::int64_t>() < 0) {
      throw Error(Code::SchemaViolation, where + ": 't_ms' must be a non-negative integer");
    }
    ScenarioEvent ev;
    ev.t_ms = t_it->get<std::int64_t>();
    if (!scenario.events.empty() && ev.t_ms < scenario.events.back().t_ms) {
      throw Error(Code::SchemaViolation, where + ": records must be in time order");
    }
    json rest = j;
    rest.erase("t_ms");
    rest.erase("kind");
    if (kind == "sensor") {
      rest["timestamp_ms"] = ev.t_ms;
      ev.input = sample_from_json(rest);
    } else if (kind == "trigger") {
      detail::FieldReader r(rest, where, Code::SchemaViolation, Code::SchemaViolation);
      ev.input = TriggerInput{r.string("key")};
      r.finish();
    } else {
      throw Error(Code::SchemaViolation, where + ": unknown kind '" + kind + "'");
    }
    seen_event = true;
    scenario.events.push_back(std::move(ev));
  }
  return scenario;
}

SimulationResult simulate(const Scenario& scenario) {
  EngineConfig cfg;
  cfg.tick_rate = scenario.tick_rate;
  cfg.seed = scenario.seed;
  Session session(kSimulationSessionId, scenario.corpus, cfg);
  constexpr ConnectionId kPerformer = 1;
  std::uint64_t seq = 0;
  json errors = json::array();
  auto send = [&](Payload payload) {
    for (const auto& o : session.handle(kPerformer, Message{kSimulationSessionId, ++seq, std::move(payload)})) {
      if (const auto* e = std::get_if<ErrorPayload>(&o.message.payload)) {
        errors.push_back({{"seq", seq}, {"code", to_string(e->code)}, {"message", e->message}});
      }
    }
  };
  send(HelloPayload{Role::Performer, scenario.seed});

  SimulationResult result;
  const double dt = 1000.0 / static_cast<double>(scenario.tick_rate);
  const std::int64_t ticks = (scenario.effective_duration_ms() * scenario.tick_rate + 999) / 1000;
  std::size_t next_event = 0;
  json trace = json::array();
  std::vector<std::string> last_keys;
  bool first = true;
  std::uint64_t hash = fnv1a64("");
  for (std::int64_t k = 0; k < ticks; ++k) {
    const double now = static_cast<double>(k) * dt;
    while (next_event < scenario.events.size() && static_cast<double>(scenario.events[next_event].t_ms) <= now) {
      const auto& ev = scenario.events[next_event++];
      if (const auto* sample = std::get_if<SensorSample>(&ev.input)) {
        send(SensorPayload{*sample});
      } else {
        send(TriggerPayload{std::get<TriggerInput>(ev.input).key});
      }
    }
    for (const auto& o : session.tick()) {
      const auto& frame = std::get<StateFramePayload>(o.message.payload).frame;
      if (first || frame.recommendations.keys != last_keys) {
        trace.push_back({{"tick", frame.tick}, {"keys", frame.recommendations.keys},
                         {"valence", frame.valence}, {"arousal", frame.arousal}});
        last_keys = frame.recommendations.keys;
        first = false;
      }
      hash = fnv1a64(frame_to_json(frame).dump() + "\n", hash);
      result.frames.push_back(frame);
    }
  }

  json summary{{"frames", result.frames.size()},
               {"frame_hash", hex64(hash)},
               {"recommendation_trace", trace},
               {"errors", errors}};
  if (!result.frames.empty()) {
    const auto& last = result.frames.back();
    summary["final_valence"] = last.valence;
    summary["final_arousal"] = last.arousal;
    summary["final_x"] = last.puppet.x;
    summary["final_y"] = last.puppet.y;
    summary["final_emotion"] = to_string(last.puppet.emotion);
  }
  result.summary = std::move(summary);
  result.log = session.log();
  return result;
}

}  // namespace puppetwire
