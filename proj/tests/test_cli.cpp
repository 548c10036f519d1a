#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "puppetwire/offline.hpp"
#include "puppetwire/server.hpp"
#include "puppetwire/wire_json.hpp"
#include "test_support.hpp"

namespace pw = puppetwire;
namespace fs = std::filesystem;
using namespace puppetwire::testing;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = pw::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("puppetwire_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name), std::ios::binary) << content;
    return path(name);
  }

  std::vector<pw::StateFrame> read_frames(const std::string& file) const {
    std::vector<pw::StateFrame> frames;
    std::istringstream in(read_file(file));
    std::string line;
    while (std::getline(in, line)) frames.push_back(pw::frame_from_json(json::parse(line)));
    return frames;
  }

  fs::path dir_;
};

const std::string kCorpus = data_path("corpus/basic_emotions.json");

}  // namespace

TEST_F(CliTest, ValidateBundledCorpus) {
  const auto r = run({"validate", kCorpus});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "OK: 6 commands\n");
}

TEST_F(CliTest, ValidateReportsComponentMismatch) {
  auto doc = json::parse(read_file(kCorpus));
  for (auto& n : doc["commands"][0]["tree"]["nodes"]) {
    if (n["kind"] == "sequence+" && n["params"]["component"] == "face") n["params"]["component"] = "background";
  }
  const auto r = run({"validate", write("bad.json", doc.dump())});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("COMPONENT_MISMATCH"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("q"), std::string::npos);
}

TEST_F(CliTest, ValidateOneLinePerDiagnostic) {
  auto doc = json::parse(read_file(kCorpus));
  doc["commands"][0]["valence"] = 0;
  doc["commands"][1]["arousal"] = 100;
  const auto r = run({"validate", write("two.json", doc.dump())});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2) << r.out;
  EXPECT_NE(r.out.find("VALENCE_OUT_OF_RANGE"), std::string::npos);
  EXPECT_NE(r.out.find("AROUSAL_OUT_OF_RANGE"), std::string::npos);
}

TEST_F(CliTest, ValidateMissingOrMalformedFile) {
  EXPECT_EQ(run({"validate", path("nope.json")}).code, 2);
  const auto r = run({"validate", write("trunc.json", read_file(kCorpus).substr(0, 100))});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("MALFORMED_DOCUMENT"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"dance"}).code, 1);
  EXPECT_EQ(run({"render", kCorpus}).code, 1);
  EXPECT_EQ(run({"render", kCorpus, "--key", "q", "--fps", "0", "--out", path("x")}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, RenderTwoSecondCommandAtThirtyFps) {
  const auto r = run({"render", kCorpus, "--key", "q", "--fps", "30", "--out", path("q.ndjson"), "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto frames = read_frames(path("q.ndjson"));
  ASSERT_EQ(frames.size(), 60u);
  EXPECT_EQ(frames.front().puppet.emotion, pw::EmotionTemplate::Happy);
  EXPECT_EQ(frames.back().puppet.emotion, pw::EmotionTemplate::Neutral);
  for (std::size_t k = 0; k < frames.size(); ++k) EXPECT_EQ(frames[k].tick, k);
}

TEST_F(CliTest, RenderIsByteIdentical) {
  for (const char* name : {"a.ndjson", "b.ndjson"}) {
    ASSERT_EQ(run({"render", kCorpus, "--key", "e", "--fps", "60", "--out", path(name), "--seed", "9"}).code, 0);
  }
  ASSERT_EQ(run({"render", kCorpus, "--key", "e", "--fps", "60", "--out", path("c.ndjson"), "--seed", "10"}).code, 0);
  EXPECT_EQ(read_file(path("a.ndjson")), read_file(path("b.ndjson")));
  EXPECT_NE(read_file(path("a.ndjson")), read_file(path("c.ndjson")));
}

TEST_F(CliTest, RenderUnknownKey) {
  const auto r = run({"render", kCorpus, "--key", "#", "--fps", "30", "--out", path("x.ndjson")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("UNKNOWN_KEY"), std::string::npos) << r.err;
  EXPECT_EQ(run({"render", path("missing.json"), "--key", "q", "--fps", "30", "--out", path("x")}).code, 2);
}

TEST_F(CliTest, RenderMatchesLibrary) {
  ASSERT_EQ(run({"render", kCorpus, "--key", "y", "--fps", "24", "--out", path("y.ndjson")}).code, 0);
  const auto frames = pw::render_command(pw::load_corpus(read_file(kCorpus)), "y", 24, 0);
  EXPECT_EQ(read_file(path("y.ndjson")), pw::frames_to_ndjson(frames));
}

TEST_F(CliTest, OracleMatches) {
  const auto r = run({"oracle", "recommend", kCorpus, "--valence", "6.5", "--arousal", "72"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("MATCH"), std::string::npos);
  EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);
  EXPECT_NE(r.out.find("fallback: no"), std::string::npos);
}

TEST_F(CliTest, OracleFlagsFallback) {
  auto doc = json::parse(read_file(kCorpus));
  json negatives = json::array();
  for (auto& c : doc["commands"]) {
    if (c["valence"].get<int>() < 5) negatives.push_back(c);
  }
  doc["commands"] = negatives;
  const auto r = run({"oracle", "recommend", write("neg.json", doc.dump()), "--valence", "8", "--arousal", "70"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("fallback: yes"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("MATCH"), std::string::npos);
}

TEST_F(CliTest, OracleRangeChecks) {
  EXPECT_EQ(run({"oracle", "recommend", kCorpus, "--valence", "0", "--arousal", "70"}).code, 1);
  EXPECT_EQ(run({"oracle", "recommend", kCorpus, "--valence", "5", "--arousal", "91"}).code, 1);
  EXPECT_EQ(run({"oracle", "recommend", kCorpus, "--valence", "9", "--arousal", "50"}).code, 0);
}

TEST_F(CliTest, SimulateBpmRampClampsArousal) {
  const auto r = run({"simulate", data_path("scenarios/bpm_ramp.ndjson"), "--out", path("ramp.ndjson")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = json::parse(read_file(path("ramp.ndjson.summary.json")));
  EXPECT_EQ(summary.at("final_arousal"), 90);
  EXPECT_EQ(json::parse(r.out), summary);
  EXPECT_TRUE(fs::exists(path("ramp.ndjson.session.ndjson")));
}

TEST_F(CliTest, SimulateConstantFaceConverges) {
  ASSERT_EQ(run({"simulate", data_path("scenarios/constant_face.ndjson"), "--out", path("face.ndjson")}).code, 0);
  const auto summary = json::parse(read_file(path("face.ndjson.summary.json")));
  EXPECT_NEAR(summary.at("final_x").get<double>(), 0.5, 0.02);
  EXPECT_NEAR(summary.at("final_y").get<double>(), 0.5, 0.02);
}

TEST_F(CliTest, SimulateEmptyScenarioIsIdle) {
  ASSERT_EQ(run({"simulate", data_path("scenarios/empty.ndjson"), "--out", path("idle.ndjson")}).code, 0);
  const auto frames = read_frames(path("idle.ndjson"));
  ASSERT_EQ(frames.size(), 60u);
  for (const auto& f : frames) {
    EXPECT_EQ(f.puppet.emotion, pw::EmotionTemplate::Neutral);
    EXPECT_FALSE(f.effects.command);
    EXPECT_TRUE(f.effects.particles.empty());
    EXPECT_TRUE(f.effects.sounds.empty());
  }

  ASSERT_EQ(run({"simulate", write("blank.ndjson", ""), "--out", path("blank.out")}).code, 0);
  for (const auto& f : read_frames(path("blank.out"))) EXPECT_EQ(f.puppet.emotion, pw::EmotionTemplate::Neutral);
}

TEST_F(CliTest, SimulateIsDeterministicAndReplayable) {
  const auto scenario = data_path("scenarios/performance.ndjson");
  ASSERT_EQ(run({"simulate", scenario, "--out", path("a.ndjson")}).code, 0);
  ASSERT_EQ(run({"simulate", scenario, "--out", path("b.ndjson")}).code, 0);
  EXPECT_EQ(read_file(path("a.ndjson")), read_file(path("b.ndjson")));
  EXPECT_EQ(read_file(path("a.ndjson.summary.json")), read_file(path("b.ndjson.summary.json")));

  const auto parsed = pw::parse_scenario(read_file(scenario), fs::path(scenario).parent_path());
  const auto log = pw::log_from_ndjson(read_file(path("a.ndjson.session.ndjson")));
  pw::EngineConfig cfg;
  cfg.tick_rate = parsed.tick_rate;
  cfg.seed = parsed.seed;
  const auto replayed = pw::replay_session(pw::kSimulationSessionId, parsed.corpus, cfg, log);
  EXPECT_EQ(pw::frames_to_ndjson(replayed), read_file(path("a.ndjson")));

  const auto frames = read_frames(path("a.ndjson"));
  EXPECT_EQ(frames.size(), 720u);
  const auto triggered = std::count_if(frames.begin(), frames.end(), [](const auto& f) { return f.effects.command; });
  EXPECT_GT(triggered, 0);
}

TEST_F(CliTest, SimulateMalformedScenario) {
  EXPECT_EQ(run({"simulate", write("bad.ndjson", "{\"t_ms\": 0, \"kind\": \"dance\"}\n"), "--out", path("o")}).code, 1);
  EXPECT_EQ(run({"simulate", write("bad2.ndjson", "{not json\n"), "--out", path("o")}).code, 1);
  EXPECT_EQ(run({"simulate", write("bad3.ndjson", "{\"t_ms\": 5, \"kind\": \"sensor\", \"bpm\": \"x\"}\n"), "--out",
                 path("o")})
                .code,
            1);
  EXPECT_EQ(run({"simulate", path("missing.ndjson"), "--out", path("o")}).code, 2);
}

TEST_F(CliTest, ServeBadCorpusPath) {
  const auto r = run({"serve", "--port", "0", "--corpus", path("absent.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(path("absent.json")), std::string::npos) << r.err;
}

TEST_F(CliTest, ServeScriptedClient) {
  std::atomic<bool> stop{false};
  std::promise<std::uint16_t> port;
  pw::cli::Hooks hooks;
  hooks.on_listening = [&](std::uint16_t p) { port.set_value(p); };
  hooks.stop = &stop;
  std::ostringstream out, err;
  auto server = std::async(std::launch::async, [&] {
    return pw::cli::run({"serve", "--port", "0", "--corpus", kCorpus, "--tick-rate", "30", "--seed", "3"}, out, err,
                        hooks);
  });
  auto fut = port.get_future();
  ASSERT_EQ(fut.wait_for(std::chrono::seconds(5)), std::future_status::ready);
  {
    pw::Client c("127.0.0.1", fut.get());
    c.send({"cli", 1, pw::HelloPayload{pw::Role::Performer, std::nullopt}});
    c.send({"cli", 2, pw::TriggerPayload{"w"}});
    bool saw = false;
    for (int i = 0; i < 100 && !saw; ++i) {
      const auto m = c.receive(std::chrono::milliseconds(500));
      ASSERT_TRUE(m);
      if (const auto* f = std::get_if<pw::StateFramePayload>(&m->payload)) {
        saw = f->frame.effects.command == "w" && f->frame.puppet.emotion == pw::EmotionTemplate::Sad;
      } else if (const auto* ack = std::get_if<pw::HelloAckPayload>(&m->payload)) {
        EXPECT_EQ(ack->tick_rate, 30);
      }
    }
    EXPECT_TRUE(saw);
  }
  stop = true;
  EXPECT_EQ(server.get(), 0);
}
