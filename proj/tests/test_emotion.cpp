#include <gtest/gtest.h>

#include <algorithm>

#include "puppetwire/emotion.hpp"
#include "test_support.hpp"

namespace pw = puppetwire;
using namespace puppetwire::testing;

namespace {

bool has_code(const pw::Diagnostics& d, pw::Code code) {
  return std::any_of(d.begin(), d.end(), [&](const pw::Diagnostic& x) { return x.code == code; });
}

pw::Code load_error(std::string_view bytes) {
  try {
    pw::load_corpus(bytes);
  } catch (const pw::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected load_corpus to throw";
  return pw::Code::InvalidTree;
}

}  // namespace

TEST(ValidateCommand, MinimalCommandIsClean) {
  EXPECT_TRUE(pw::validate_command(command("q", 8, 80, minimal_tree(), "happy"), {}).empty());
}

TEST(ValidateCommand, RangeBoundaries) {
  EXPECT_TRUE(pw::validate_command(command("q", 1, 50), {}).empty());
  EXPECT_TRUE(pw::validate_command(command("q", 9, 90), {}).empty());
  EXPECT_TRUE(has_code(pw::validate_command(command("q", 10, 80), {}), pw::Code::ValenceOutOfRange));
  EXPECT_TRUE(has_code(pw::validate_command(command("q", 0, 80), {}), pw::Code::ValenceOutOfRange));
  EXPECT_TRUE(has_code(pw::validate_command(command("q", 5, 49), {}), pw::Code::ArousalOutOfRange));
  EXPECT_TRUE(has_code(pw::validate_command(command("q", 5, 91), {}), pw::Code::ArousalOutOfRange));
}

TEST(ValidateCommand, DuplicateKeyAgainstCorpus) {
  pw::CommandCorpus corpus;
  corpus.commands.push_back(command("w", 3, 60));
  const auto d = pw::validate_command(command("w", 2, 55), corpus);
  ASSERT_TRUE(has_code(d, pw::Code::DuplicateKey));
  EXPECT_EQ(d.front().key, "w");

  corpus.commands.push_back(command("w", 2, 55));
  EXPECT_TRUE(has_code(pw::validate_corpus(corpus), pw::Code::DuplicateKey));
}

TEST(ValidateCommand, KeyAndSemanticShape) {
  EXPECT_TRUE(has_code(pw::validate_command(command("", 5, 70), {}), pw::Code::InvalidKey));
  EXPECT_TRUE(has_code(pw::validate_command(command("ab", 5, 70), {}), pw::Code::InvalidKey));
  EXPECT_TRUE(has_code(pw::validate_command(command("\t", 5, 70), {}), pw::Code::InvalidKey));
  EXPECT_TRUE(has_code(pw::validate_command(command("q", 5, 70, minimal_tree(), ""), {}), pw::Code::EmptySemantic));
}

TEST(ValidateCommand, TreeDiagnosticsCarryKey) {
  pw::BehaviorTree bad{{root({"s"}), seq("s", pw::Component::Background, {"snd"}), node("snd", pw::Action{sound()})},
                       "root"};
  const auto d = pw::validate_command(command("z", 5, 70, bad), {});
  ASSERT_TRUE(has_code(d, pw::Code::ComponentMismatch));
  const auto it = std::find_if(d.begin(), d.end(), [](const auto& x) { return x.code == pw::Code::ComponentMismatch; });
  EXPECT_EQ(it->key, "z");
  EXPECT_EQ(it->node_id, "snd");
}

TEST(ValidateCommand, IsPure) {
  const auto cmd = command("q", 10, 95);
  EXPECT_EQ(pw::validate_command(cmd, {}), pw::validate_command(cmd, {}));
}

TEST(LoadCorpus, BundledSixBasicEmotions) {
  const auto corpus = pw::load_corpus(read_file(data_path("corpus/basic_emotions.json")));
  ASSERT_EQ(corpus.commands.size(), 6u);
  std::vector<std::string> semantics;
  for (const auto& c : corpus.commands) semantics.push_back(c.semantic);
  std::sort(semantics.begin(), semantics.end());
  EXPECT_EQ(semantics, (std::vector<std::string>{"angry", "disgusted", "fearful", "happy", "sad", "surprised"}));
}

TEST(LoadCorpus, EmptyObjectHasNoCommands) {
  const auto corpus = pw::load_corpus("{}");
  EXPECT_TRUE(corpus.commands.empty());
  EXPECT_EQ(corpus.schema_version, 1);
}

TEST(LoadCorpus, ErrorsAreStructured) {
  const std::string good = pw::save_corpus(pw::CommandCorpus{{command("q", 8, 80)}, 1, std::nullopt});
  EXPECT_EQ(load_error(good.substr(0, good.size() / 2)), pw::Code::MalformedDocument);
  EXPECT_EQ(load_error(""), pw::Code::MalformedDocument);
  EXPECT_EQ(load_error("\xff\xfe"), pw::Code::MalformedDocument);
  EXPECT_EQ(load_error("[]"), pw::Code::SchemaViolation);
  EXPECT_EQ(load_error(R"({"schema_version": 2})"), pw::Code::SchemaViolation);
  EXPECT_EQ(load_error(R"({"extra": 1})"), pw::Code::SchemaViolation);
  EXPECT_EQ(load_error(R"({"commands": [{"key": "q"}]})"), pw::Code::SchemaViolation);

  auto doc = nlohmann::json::parse(good);
  doc["commands"][0]["valence"] = 12;
  const std::string out_of_range = doc.dump();
  try {
    pw::load_corpus(out_of_range);
    FAIL();
  } catch (const pw::Error& e) {
    EXPECT_EQ(e.code(), pw::Code::InvalidCommand);
    EXPECT_TRUE(has_code(e.diagnostics(), pw::Code::ValenceOutOfRange));
  }
}

TEST(LoadCorpus, TotalOnGarbage) {
  pw::Rng rng(7);
  const std::string base = pw::save_corpus(pw::load_corpus(read_file(data_path("corpus/basic_emotions.json"))));
  for (int i = 0; i < 300; ++i) {
    std::string bytes = base;
    const int edits = 1 + static_cast<int>(rng.uniform() * 4);
    for (int e = 0; e < edits; ++e) {
      const auto at = static_cast<std::size_t>(rng.uniform() * bytes.size());
      bytes[at] = static_cast<char>(rng.next_u64() & 0xFF);
    }
    try {
      pw::load_corpus(bytes);
    } catch (const pw::Error&) {
    }
  }
}

TEST(SaveCorpus, EmptyCorpusGolden) {
  // Frozen from the first implementation run.
  EXPECT_EQ(pw::save_corpus(pw::CommandCorpus{}),
            "{\n  \"commands\": [],\n  \"default_background\": null,\n  \"schema_version\": 1\n}\n");
}

TEST(SaveCorpus, IdempotentAndRoundTrips) {
  const auto corpus = pw::load_corpus(read_file(data_path("corpus/basic_emotions.json")));
  const std::string once = pw::save_corpus(corpus);
  EXPECT_EQ(pw::save_corpus(pw::load_corpus(once)), once);
  EXPECT_EQ(pw::load_corpus(once), corpus);
}

TEST(SaveCorpus, RandomizedRoundTrip) {
  pw::Rng rng(20240517);
  for (int i = 0; i < 500; ++i) {
    const auto corpus = random_corpus(rng);
    ASSERT_TRUE(pw::validate_corpus(corpus).empty()) << "generator produced an invalid corpus at " << i;
    const std::string bytes = pw::save_corpus(corpus);
    const auto loaded = pw::load_corpus(bytes);
    ASSERT_EQ(loaded, corpus) << bytes;
    ASSERT_EQ(pw::save_corpus(loaded), bytes);
  }
}

TEST(Partition, PositiveAndNegativeSplitByValence) {
  pw::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto corpus = random_corpus(rng, 30);
    const auto pos = pw::positive_commands(corpus);
    const auto neg = pw::negative_commands(corpus);
    ASSERT_EQ(pos.size() + neg.size(), corpus.commands.size());
    std::vector<std::size_t> all(pos);
    all.insert(all.end(), neg.begin(), neg.end());
    std::sort(all.begin(), all.end());
    for (std::size_t k = 0; k < all.size(); ++k) ASSERT_EQ(all[k], k);
    for (auto p : pos) EXPECT_GE(corpus.commands[p].valence, 5);
    for (auto n : neg) EXPECT_LT(corpus.commands[n].valence, 5);
  }
}

TEST(ActionSet, ClassifiesByParentComponent) {
  const auto corpus = pw::load_corpus(read_file(data_path("corpus/basic_emotions.json")));
  const auto set = pw::action_set(corpus.find("q")->behavior);
  ASSERT_EQ(set.face.size(), 1u);
  ASSERT_EQ(set.texture.size(), 1u);
  ASSERT_EQ(set.text.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<pw::SwapAction>(set.face[0]));
  EXPECT_TRUE(std::holds_alternative<pw::ParticleAction>(set.texture[0]));
  EXPECT_TRUE(std::holds_alternative<pw::DanmakuAction>(set.text[0]));
}
