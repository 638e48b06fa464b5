#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "scenario.hpp"
#include "suites.hpp"

namespace {

using dtw::cli::json;

// DTW_BUDGET replaces the budget of either subcommand; nothing else is read from the environment
std::optional<long long> env_budget() {
  const char* v = std::getenv("DTW_BUDGET");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  long long b = std::strtoll(v, &end, 10);
  if (*end || b <= 0) throw std::runtime_error("DTW_BUDGET must be a positive integer");
  return b;
}

int cmd_run(const std::string& file, const std::string& out, std::optional<std::uint64_t> seed,
            std::optional<long long> budget) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << "cannot read " << file << "\n";
    return dtw::cli::kInputError;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  if (auto b = env_budget()) budget = b;
  auto rr = dtw::cli::run_scenario_text(ss.str(), seed, budget);
  if (rr.code == dtw::cli::kInputError) {
    std::cerr << "input error: " << rr.report_error << "\n";
    return rr.code;
  }
  const std::string text = rr.report.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream o(out, std::ios::binary);
    if (!o) {
      std::cerr << "cannot write " << out << "\n";
      return dtw::cli::kInputError;
    }
    o << text;
  }
  std::cerr << "status: " << rr.report.value("status", "?") << "\n";
  return rr.code;
}

int cmd_selftest(const std::string& filter, std::optional<long long> budget, const std::string& out) {
  namespace su = dtw::suites;
  auto mods = su::modules();
  if (!filter.empty() && std::find(mods.begin(), mods.end(), filter) == mods.end()) {
    std::cerr << "unknown module '" << filter << "'; one of:";
    for (const auto& m : mods) std::cerr << " " << m;
    std::cerr << "\n";
    return dtw::cli::kInputError;
  }
  if (auto b = env_budget()) budget = b;
  const long long ms = budget ? *budget : 600000;
  std::vector<su::Result> results;
  if (filter.empty() || filter != "cli") results = su::run(filter, ms);
  if (filter.empty() || filter == "cli") {
    // reports must be byte-identical across runs with the same seed
    su::Result r;
    r.name = "report-determinism";
    r.module = "cli";
    r.repro = "dtw selftest --filter cli";
    const char* sc[] = {R"({"schema":"1","kind":"limit-tor","payload":{"p":2,"s":1,"delta":1}})",
                        R"({"schema":"1","kind":"groupcoh","payload":{"group":{"cyclic":3},"module":{"p":3},"maxdeg":4}})",
                        R"({"schema":"1","kind":"cg","payload":{"pass":2,"freeness":2}})"};
    r.status = su::Status::Pass;
    for (const char* s : sc) {
      auto a = dtw::cli::run_scenario_text(s, 5, {}), b = dtw::cli::run_scenario_text(s, 5, {});
      if (a.code != 0 || a.report.dump() != b.report.dump()) {
        r.status = su::Status::Fail;
        r.detail = std::string("scenario differs or fails: ") + s;
      }
    }
    if (dtw::cli::run_scenario_text("{\"kind\": 3", 1, {}).code != dtw::cli::kInputError) {
      r.status = su::Status::Fail;
      r.detail = "malformed input not rejected";
    }
    if (r.detail.empty()) r.detail = "3 scenarios, identical reports; malformed input exits 2";
    results.push_back(r);
  }
  json rep{{"schema", "1"}, {"kind", "selftest"}, {"budget_ms", ms}, {"filter", filter}};
  json arr = json::array();
  bool failed = false;
  for (const auto& r : results) {
    std::cout << fmt::format("{:<8} {:<22} {:<21} {:7.2f}s  {}\n", su::status_name(r.status), r.name, r.module,
                             r.seconds, r.detail);
    if (r.status == su::Status::Fail) {
      failed = true;
      std::cout << "         reproduce: " << r.repro << "\n";
    }
    arr.push_back({{"name", r.name}, {"module", r.module}, {"status", su::status_name(r.status)},
                   {"detail", r.detail}, {"seed", r.seed}, {"reproduce", r.repro}});
  }
  rep["suites"] = arr;
  if (!out.empty()) std::ofstream(out, std::ios::binary) << rep.dump(2) << "\n";
  return failed ? dtw::cli::kPropertyFailure : dtw::cli::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dtw: desk-scale checks for patching and derived deformation computations"};
  app.require_subcommand(1);

  std::string file, out;
  std::optional<std::uint64_t> seed;
  std::optional<long long> budget;
  auto* run = app.add_subcommand("run", "run one scenario file and write a JSON report");
  run->add_option("file", file, "scenario JSON")->required();
  run->add_option("--out", out, "report path (default stdout)");
  run->add_option("--seed", seed, "seed for randomized payloads");
  run->add_option("--budget", budget, "work budget in table entries");

  std::string filter, sout;
  std::optional<long long> sbudget;
  auto* self = app.add_subcommand("selftest", "run the property suites with fixed seeds");
  self->add_option("--filter", filter, "module name");
  self->add_option("--budget", sbudget, "time budget in milliseconds");
  self->add_option("--out", sout, "summary JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : dtw::cli::kInputError;
  }
  try {
    if (*run) return cmd_run(file, out, seed, budget);
    return cmd_selftest(filter, sbudget, sout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dtw::cli::kInputError;
  }
}
