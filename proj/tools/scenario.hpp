// Scenario files in, report documents out.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace dtw::cli {

using json = nlohmann::json;

enum Exit : int { kOk = 0, kPropertyFailure = 1, kInputError = 2, kBudget = 3, kInconclusive = 4 };

// malformed or unsupported input; never produces a report
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunResult {
  int code = kOk;
  json report;  // null when code == kInputError
  std::string report_error;
};

constexpr long long kDefaultWorkBudget = 10000000;

// seed and budget come from the command line (they override the file's own fields when set)
RunResult run_scenario(const json& scenario, std::optional<std::uint64_t> seed, std::optional<long long> budget);
RunResult run_scenario_text(const std::string& text, std::optional<std::uint64_t> seed,
                            std::optional<long long> budget);

}  // namespace dtw::cli
