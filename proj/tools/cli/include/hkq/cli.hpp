#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkq/ideal.hpp"

namespace hkq::cli {

using Json = nlohmann::ordered_json;

/// Process exit codes. Every failure path maps to exactly one of these.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,  // bad flags, unparsable or invalid input
  kNonGeneric = 3,
  kBudgetExceeded = 4,
  kInternal = 5,
};

std::string exit_status_name(int code);

struct RunConfig {
  std::string command;  // shorts, present, verify, certify, betti, localize-demo, report
  std::optional<std::string> xi;
  std::optional<std::string> fixture;
  /// certify: a single subject such as "{1,3}".
  std::optional<std::string> subset;
  bool force_fallback = false;
  /// localize-demo: degree of the integral pullback comparison.
  int degree = 2;
  bool second_iso = true;
  Budget budget;
  std::string format = "json";
  std::optional<std::string> out;
  bool omit_timing = false;
};

struct RunResult {
  Json report;
  int exit_code = kOk;
};

/// Runs one command; errors are folded into the report, never thrown.
RunResult run(const RunConfig& config);

/// Budget defaults, overridden by HKQ_MAX_BASIS / HKQ_MAX_DEGREE.
/// Throws hkq::ParseError on a malformed or non-positive value.
Budget default_budget();

/// A fixture name (line, product, segre) or a path to a fixture file.
/// Names are looked up in $HKQ_FIXTURES, then the source and install trees.
std::string resolve_fixture(const std::string& name_or_path);

/// Copy with every "timing_ms" member removed.
Json canonical(Json report);

/// JSON is pretty-printed with two-space indent and a trailing newline.
std::string render(const Json& report, const std::string& format);

/// Full command line handling; returns the exit code.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hkq::cli
