#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "abaudit/atoms.hpp"
#include "abaudit/scenario.hpp"

namespace abaudit {

// One audited formula. Pass means the transcription matches the independent
// derivation exactly; Finding means it does not, and the detail says how;
// Fail is reserved for the machinery itself breaking, which no run should
// produce.
enum class CheckStatus { Pass, Finding, Fail };

const char* to_string(CheckStatus s);

struct CheckRecord {
  std::string id;       // stable dotted identifier, e.g. "gap.p3"
  std::string title;
  CheckStatus status = CheckStatus::Fail;
  std::string detail;   // empty for an unremarkable pass
  std::string fixture;  // fixture path relative to the fixture root, if any
  double ms = 0.0;
};

struct AuditOptions {
  std::string fixtures_dir = "fixtures";
  std::string scenario_path;  // empty: the embedded default scenario
  std::uint64_t seed = 1729;
};

struct AuditReport {
  std::vector<CheckRecord> records;
  std::vector<std::string> conventions;
  std::string scenario_name;
  std::uint64_t seed = 0;
  double ms = 0.0;

  int count(CheckStatus s) const;
  bool clean() const;  // no Fail records
};

// Transcribed formula file: a kind line, an optional note, and either one
// expression or a list of slot-pair coefficients. Continuation lines start
// with whitespace. Expressions are parsed over the atom vocabulary.
struct Fixture {
  std::string kind;  // "scalar", "vector" or "pair"
  std::string note;
  Expr expr;
  std::vector<std::tuple<SymId, SymId, Expr>> pairs;
};

Fixture load_fixture(const AtomTable& at, const std::string& path);

// Runs every check: the family partials and package, the deviation chain,
// the scale-change laws on atoms, the family gap and its special cases, the
// quotient-length extension, and the concrete chart block on the scenario.
AuditReport run_all(const AuditOptions& opt);

// The canonical outcome table the suite and the self test compare against.
std::vector<std::pair<std::string, CheckStatus>> expected_statuses();

std::string render_text(const AuditReport& rep, bool timings);
std::string render_json(const AuditReport& rep, bool timings);

// Re-runs the audit and checks it against the canonical table, then proves
// the comparator bites by feeding it a deliberately corrupted fixture.
// Returns 0 on success; failures are described on the stream.
int selftest(const AuditOptions& opt, std::ostream& log);

}  // namespace abaudit
