// Property suites with fixed seeds, shared by `dtw selftest` and the acceptance binary.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dtw::suites {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Suite {
  std::string name;
  std::string module;
  int criterion = 0;       // acceptance criterion number, 0 for plain module suites
  double limit_s = 0;      // wall-clock limit, 0 for none
  long long cost_ms = 0;   // rough cost, compared against the budget
  std::uint64_t seed = 1;
  std::function<Outcome(std::uint64_t)> run;
};

enum class Status { Pass, Fail, Skipped };
const char* status_name(Status s);

struct Result {
  std::string name, module;
  int criterion = 0;
  Status status = Status::Pass;
  std::string detail;
  double seconds = 0;
  double limit_s = 0;
  std::uint64_t seed = 1;
  std::string repro;
};

// cone LES, axioms and pairing properties on one seeded Selmer instance
struct SelmerStats {
  std::string description;
  bool axioms = true;
  bool les_exact = true;
  int pairs = 0;      // pairings evaluated
  int nonzero = 0;    // of which nonzero
  int no_primitive = 0;
  bool cocycles = true;    // dP = eps u eps' and eps u eps' = 0
  bool invariant = true;   // choices, coboundaries, symmetric formula, additivity
  std::string failure;
  bool ok() const { return axioms && les_exact && cocycles && invariant; }
};
SelmerStats selmer_checks(std::uint64_t seed, int trials = 3);

const std::vector<Suite>& all();
std::vector<std::string> modules();

// runs one suite; exceptions and overtime count as failures
Result run_one(const Suite& s);

// filter by module name ("" for all); a suite whose cost exceeds the remaining budget is skipped
std::vector<Result> run(const std::string& module_filter, long long budget_ms);

}  // namespace dtw::suites
