#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace puppetwire::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kIoError = 2 };

struct Hooks {
  /// Called once serve is listening, with the bound port.
  std::function<void(std::uint16_t)> on_listening;
  /// serve returns once this becomes true (in addition to SIGINT/SIGTERM).
  const std::atomic<bool>* stop = nullptr;
};

/// Entry point shared by the binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

/// Applies PUPPETWIRE_LOG (error | info | debug) to the global logger.
void configure_logging();

}  // namespace puppetwire::cli
