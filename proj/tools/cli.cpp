#include "cli.hpp"

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "puppetwire/emotion.hpp"
#include "puppetwire/offline.hpp"
#include "puppetwire/recommend.hpp"
#include "puppetwire/server.hpp"

namespace puppetwire::cli {
namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

struct IoFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure{"cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream outf(path, std::ios::binary | std::ios::trunc);
  if (!outf || !(outf << data) || !outf.flush()) throw IoFailure{"cannot write '" + path + "'"};
}

void print_diagnostics(const Diagnostics& diags, std::ostream& os) {
  for (const auto& d : diags) {
    os << to_string(d.code) << " key=" << (d.key.empty() ? "-" : d.key)
        << " node=" << (d.node_id.empty() ? "-" : d.node_id) << " " << d.message << "\n";
  }
}

/// Loads a corpus, reporting failures; returns an exit code on failure.
std::optional<int> load_checked(const std::string& path, CommandCorpus& corpus, std::ostream& err,
                                int unreadable_code) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const IoFailure& e) {
    err << "error: " << e.message << "\n";
    return unreadable_code;
  }
  try {
    corpus = load_corpus(bytes);
  } catch (const Error& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    print_diagnostics(e.diagnostics(), err);
    return kDomainError;
  }
  return std::nullopt;
}

// The report (OK line or one line per diagnostic) goes to stdout.
int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const IoFailure& e) {
    err << "error: " << e.message << "\n";
    return kIoError;
  }
  try {
    const auto corpus = load_corpus(bytes);
    out << "OK: " << corpus.commands.size() << " commands\n";
    return kOk;
  } catch (const Error& e) {
    auto diags = e.diagnostics();
    if (diags.empty()) diags.push_back({e.code(), {}, {}, e.what()});
    print_diagnostics(diags, out);
    err << "error: " << path << ": " << diags.size() << " problem(s)\n";
    return kDomainError;
  }
}

int cmd_render(const std::string& path, const std::string& key, int fps, const std::string& out_path,
               std::uint64_t seed, std::ostream& out, std::ostream& err) {
  if (fps < 1 || fps > 240) {
    err << "error: --fps must be within [1, 240]\n";
    return kDomainError;
  }
  CommandCorpus corpus;
  if (auto code = load_checked(path, corpus, err, kIoError)) return *code;
  if (corpus.find(key) == nullptr) {
    err << "error: UNKNOWN_KEY: no command bound to key '" << key << "' in " << path << "\n";
    return kDomainError;
  }
  const auto frames = render_command(corpus, key, fps, seed);
  try {
    write_file(out_path, frames_to_ndjson(frames));
  } catch (const IoFailure& e) {
    err << "error: " << e.message << "\n";
    return kIoError;
  }
  out << "wrote " << frames.size() << " frames to " << out_path << "\n";
  return kOk;
}

void print_recommendation(const char* label, const Recommendation& rec, std::ostream& out) {
  out << label << ":";
  for (std::size_t i = 0; i < rec.keys.size(); ++i) {
    out << " " << rec.keys[i] << "(" << std::fixed << std::setprecision(6) << rec.distances[i] << ")";
  }
  out << "\n";
}

int cmd_oracle_recommend(const std::string& path, double valence, double arousal, std::ostream& out,
                         std::ostream& err) {
  if (!(valence >= 1.0 && valence <= 9.0)) {
    err << "error: --valence must be within [1, 9]\n";
    return kDomainError;
  }
  if (!(arousal >= 50.0 && arousal <= 90.0)) {
    err << "error: --arousal must be within [50, 90]\n";
    return kDomainError;
  }
  CommandCorpus corpus;
  if (auto code = load_checked(path, corpus, err, kIoError)) return *code;
  if (corpus.commands.empty()) {
    err << "error: EMPTY_CORPUS: " << path << " has no commands\n";
    return kDomainError;
  }
  const auto r3 = recommend3(corpus, valence, arousal);
  const auto oracle = brute_force_recommend(corpus, valence, arousal);
  print_recommendation("R3", r3, out);
  out << "polarity: " << to_string(r3.polarity) << "\n";
  out << "fallback: " << (r3.fallback_used ? "yes (no command of matching polarity)" : "no") << "\n";
  print_recommendation("oracle", oracle, out);
  const bool match = r3 == oracle;
  out << (match ? "MATCH" : "MISMATCH") << "\n";
  return match ? kOk : kDomainError;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  std::string text;
  try {
    text = read_file(scenario_path);
  } catch (const IoFailure& e) {
    err << "error: " << e.message << "\n";
    return kIoError;
  }
  Scenario scenario;
  try {
    scenario = parse_scenario(text, std::filesystem::path(scenario_path).parent_path());
  } catch (const Error& e) {
    err << "error: " << scenario_path << ": " << e.what() << "\n";
    print_diagnostics(e.diagnostics(), err);
    return kDomainError;
  }
  const auto result = simulate(scenario);
  try {
    write_file(out_path, frames_to_ndjson(result.frames));
    write_file(out_path + ".summary.json", result.summary.dump(2) + "\n");
    write_file(out_path + ".session.ndjson", log_to_ndjson(result.log));
  } catch (const IoFailure& e) {
    err << "error: " << e.message << "\n";
    return kIoError;
  }
  out << result.summary.dump(2) << "\n";
  return kOk;
}

int cmd_serve(int port, const std::string& corpus_path, int tick_rate, std::uint64_t seed, std::ostream& out,
              std::ostream& err, const Hooks& hooks) {
  if (tick_rate < 1 || tick_rate > 240) {
    err << "error: --tick-rate must be within [1, 240]\n";
    return kDomainError;
  }
  if (port < 0 || port > 65535) {
    err << "error: --port must be within [0, 65535]\n";
    return kDomainError;
  }
  ServerConfig cfg;
  cfg.port = static_cast<std::uint16_t>(port);
  cfg.engine.tick_rate = tick_rate;
  cfg.engine.seed = seed;
  if (auto code = load_checked(corpus_path, cfg.corpus, err, kDomainError)) return *code;

  Server server(std::move(cfg));
  try {
    server.start();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  out << "listening on port " << server.port() << std::endl;
  if (hooks.on_listening) hooks.on_listening(server.port());

  g_interrupted = false;
  auto previous_int = std::signal(SIGINT, on_signal);
  auto previous_term = std::signal(SIGTERM, on_signal);
  while (!g_interrupted && !(hooks.stop && hooks.stop->load())) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  server.stop();
  spdlog::info("server stopped");
  return kOk;
}

}  // namespace

void configure_logging() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("puppetwire");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)once;
  const char* env = std::getenv("PUPPETWIRE_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  CLI::App app{"puppetwire: live emotion-command animation engine"};
  app.require_subcommand(1);

  int port = 7700;
  std::string corpus_path;
  int tick_rate = 60;
  std::uint64_t seed = 0;
  auto* serve = app.add_subcommand("serve", "Run the live session service");
  serve->add_option("--port", port, "TCP port (0 picks one)");
  serve->add_option("--corpus", corpus_path, "Corpus document")->required();
  serve->add_option("--tick-rate", tick_rate, "Ticks per second");
  serve->add_option("--seed", seed, "Default engine seed");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Validate a corpus document");
  validate->add_option("path", validate_path, "Corpus document")->required();

  std::string render_path;
  std::string render_key;
  int fps = 30;
  std::string render_out;
  std::uint64_t render_seed = 0;
  auto* render = app.add_subcommand("render", "Render one command's frames as NDJSON");
  render->add_option("path", render_path, "Corpus document")->required();
  render->add_option("--key", render_key, "Trigger key")->required();
  render->add_option("--fps", fps, "Frames per second");
  render->add_option("--out", render_out, "Output file")->required();
  render->add_option("--seed", render_seed, "Seed");

  std::string oracle_path;
  double valence = 5.0;
  double arousal = 70.0;
  auto* oracle = app.add_subcommand("oracle", "Cross-check algorithms against brute-force oracles");
  oracle->require_subcommand(1);
  auto* oracle_rec = oracle->add_subcommand("recommend", "Compare R3 recommendation with the brute-force oracle");
  oracle_rec->add_option("path", oracle_path, "Corpus document")->required();
  oracle_rec->add_option("--valence", valence, "Estimated valence (1-9)")->required();
  oracle_rec->add_option("--arousal", arousal, "Estimated arousal (50-90)")->required();

  std::string scenario_path;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Replay a sensor/trigger scenario headlessly");
  sim->add_option("scenario", scenario_path, "Scenario NDJSON")->required();
  sim->add_option("--out", sim_out, "Frame stream output")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kDomainError;
  }

  if (*serve) return cmd_serve(port, corpus_path, tick_rate, seed, out, err, hooks);
  if (*validate) return cmd_validate(validate_path, out, err);
  if (*render) return cmd_render(render_path, render_key, fps, render_out, render_seed, out, err);
  if (*oracle_rec) return cmd_oracle_recommend(oracle_path, valence, arousal, out, err);
  if (*sim) return cmd_simulate(scenario_path, sim_out, out, err);
  return kDomainError;
}

}  // namespace puppetwire::cli
