#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dormant {

enum class Command { Pcurv, Cartier, Pretango, Enumerate, TangoCertify, TangoSearch, Miura, Raynaud, Selftest };

const char* command_name(Command c);

// A typed payload: "conn rank=<n> bundle=<label>" + n^2 entry lines (+ "special=true"),
// "form" + 1 line, "function" + 1 line, "gtc" / "surface" + lines up to "end".
struct Block {
  std::string kind;
  std::vector<std::string> header;  // words after the kind
  std::vector<std::string> lines;
};

// Job file: "# comment" lines, then
//   job <command> [key=value ...]
//   [mode human|machine]
//   [p=<prime>]
//   [<curve descriptor>]
//   blocks...
struct JobSpec {
  std::optional<Command> command;  // inferred from the blocks when absent
  std::vector<std::pair<std::string, std::string>> args;
  std::optional<std::string> mode;
  std::optional<std::string> p_line;
  std::optional<std::string> curve;
  std::vector<Block> blocks;

  bool machine() const { return mode && *mode == "machine"; }
  std::optional<std::string> arg(const std::string& key) const;
  Command effective_command() const;
};

// Throws SyntaxError (with line number) or SemanticError only.
JobSpec parse_job(const std::string& text);
std::string render_job(const JobSpec& spec);
// Comments and blank lines dropped, whitespace trimmed and collapsed.
std::string normalize_job_text(const std::string& text);

struct JobResult {
  std::string output;
  int exit_code = 0;  // 0 success, 1 domain failure, 2 input error
};

JobResult run_job(const JobSpec& spec, unsigned threads);
// Parse and run; parse errors map to exit code 2.
JobResult run_job_text(const std::string& text, unsigned threads);

// Named invariant checks used by the selftest command.
std::vector<std::pair<std::string, bool>> selftest_checks(unsigned threads);

}  // namespace dormant
