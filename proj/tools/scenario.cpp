#include "scenario.hpp"

#include <fmt/format.h>

#include <random>

#include "dtw/deformation.hpp"
#include "dtw/dold_kan.hpp"
#include "dtw/generators.hpp"
#include "dtw/group_cochains.hpp"
#include "dtw/local_conditions.hpp"
#include "dtw/patching.hpp"
#include "suites.hpp"

namespace dtw::cli {

namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(fmt::format("missing field '{}'", key));
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return need(j, key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(fmt::format("field '{}': {}", key, e.what()));
  }
}

template <class T>
T get_or(const json& j, const char* key, T def) {
  return j.contains(key) ? get<T>(j, key) : def;
}

int small_int(const json& j, const char* key, int lo, int hi, std::optional<int> def = {}) {
  if (!j.contains(key) && def) return *def;
  const int v = get<int>(j, key);
  if (v < lo || v > hi) throw InputError(fmt::format("field '{}' = {} outside [{}, {}]", key, v, lo, hi));
  return v;
}

i64 prime(const json& j) {
  const i64 p = get<i64>(j, "p");
  if (p < 2 || p > 97 || !is_prime(p)) throw InputError(fmt::format("p = {} is not a small prime", p));
  return p;
}

void charge(long long need_units, long long budget, const std::string& what) {
  if (need_units > budget)
    throw BudgetError(fmt::format("{} needs about {} work units, budget is {}", what, need_units, budget));
}

long long powll(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > (1LL << 50)) return 1LL << 50;
  }
  return r;
}

json module_json(const GradedModule& M, int maxdeg) {
  json out = json::array();
  for (int i = 0; i <= maxdeg; ++i) out.push_back(M.at(i));
  return out;
}

struct Ctx {
  std::uint64_t seed;
  long long budget;
  json result = json::object();
  json properties = json::array();
  int code = kOk;
  void prop(const std::string& name, bool holds, const std::string& detail = "") {
    json p{{"name", name}, {"holds", holds}};
    if (!detail.empty()) p["detail"] = detail;
    properties.push_back(p);
    if (!holds && code == kOk) code = kPropertyFailure;
  }
};

// ---- kinds ----

void run_tor(const json& in, Ctx& c) {
  const i64 p = prime(in);
  const int n = small_int(in, "n", 1, 4, 1);
  const int s = small_int(in, "s", 1, 6);
  const int maxdeg = small_int(in, "maxdeg", 0, 8, 3);
  const std::string ring = get_or<std::string>(in, "ring", "power-series");
  std::vector<int> kill = get_or<std::vector<int>>(in, "kill", {});
  for (int k : kill)
    if (k < 0 || k >= s) throw InputError("kill index outside the variables");
  TorRing R;
  if (ring == "power-series") {
    const int T = small_int(in, "T", 1, 6, 2);
    charge(powll(s + 1, T) * powll(2, s), c.budget, "tor");
    R = TorRing::from_poly(PolyQuotientRing{Wn(p, n), s, false, T, {}});
  } else if (ring == "group") {
    const int m = small_int(in, "m", 1, 3, n);
    charge(powll(powll(p, m), s), c.budget, "tor");
    R = TorRing::finite(Ring::make({p, n, std::vector<int>(s, m)}));
  } else {
    throw InputError("ring must be 'power-series' or 'group'");
  }
  std::vector<Poly> I;
  for (int k : kill) I.push_back(Poly::var(s, k));
  if (I.empty()) I = augmentation_ideal(s);
  TorModule T = tor(R, I, augmentation_ideal(s), maxdeg);
  c.result["divisors"] = module_json(T.H, maxdeg);
  json ranks = json::array();
  for (int i = 0; i <= maxdeg; ++i) ranks.push_back(T.H.rank(i));
  c.result["ranks"] = ranks;
  c.result["strategy"] = T.strategy;
  c.result["exact"] = T.known_exact;
}

void run_limit_tor(const json& in, Ctx& c) {
  const i64 p = prime(in);
  const int s = small_int(in, "s", 1, 4);
  const int delta = small_int(in, "delta", 0, s);
  const int maxdeg = small_int(in, "maxdeg", 0, 6, delta + 2);
  const int lo = small_int(in, "n_lo", 1, 4, 1), hi = small_int(in, "n_hi", lo, 5, 3);
  charge(powll(powll(p, hi), delta) * (maxdeg + 1), c.budget, "limit-tor");
  LimitTor L = limit_tor(group_tower(p, s, delta, lo, hi, maxdeg), maxdeg);
  c.result["certified"] = L.certified;
  c.result["ranks"] = L.ranks;
  c.result["stable_level"] = L.stable_level;
  json levels = json::array();
  for (const auto& g : L.level_tor) levels.push_back(module_json(g, maxdeg));
  c.result["level_tor"] = levels;
  if (!L.note.empty()) c.result["note"] = L.note;
  if (!L.certified) {
    c.code = kInconclusive;
    return;
  }
  bool band = true;
  for (int i = delta + 1; i <= maxdeg; ++i) band = band && L.ranks[i] == 0;
  c.prop("nonzero only in degrees 0..delta", band);
}

FiniteGroup parse_group(const json& g) {
  if (g.is_string()) {
    if (g == "quaternion") return FiniteGroup::quaternion();
    if (g == "trivial") return FiniteGroup::trivial();
    throw InputError("unknown group name");
  }
  if (g.contains("cyclic")) return FiniteGroup::cyclic(small_int(g, "cyclic", 1, 64));
  if (g.contains("dihedral")) return FiniteGroup::dihedral(small_int(g, "dihedral", 2, 32));
  if (g.contains("abelian")) {
    auto inv = get<std::vector<int>>(g, "abelian");
    if (inv.empty() || inv.size() > 4) throw InputError("abelian needs 1 to 4 invariants");
    for (int x : inv)
      if (x < 1 || x > 64) throw InputError("abelian invariant outside [1, 64]");
    return FiniteGroup::abelian_group(inv);
  }
  if (g.contains("table")) {
    try {
      return FiniteGroup::from_table(get<std::vector<std::vector<int>>>(g, "table"));
    } catch (const Error& e) {
      throw InputError(std::string("group table: ") + e.what());
    }
  }
  throw InputError("group must be cyclic, dihedral, abelian, table, 'quaternion' or 'trivial'");
}

GModule parse_module(const json& m, const FiniteGroup& G) {
  const i64 p = prime(m);
  auto div = get_or<std::vector<int>>(m, "div", {1});
  if (div.empty() || div.size() > 6) throw InputError("module needs 1 to 6 summands");
  for (int e : div)
    if (e < 1 || e > 4) throw InputError("module exponents must lie in [1, 4]");
  if (!m.contains("generators")) return GModule::trivial(G, p, div);
  std::vector<std::pair<int, WMat>> gens;
  int n = *std::max_element(div.begin(), div.end());
  Wn W(p, n);
  for (const auto& g : need(m, "generators")) {
    const int e = small_int(g, "g", 0, G.order - 1);
    auto rows = get<std::vector<std::vector<i64>>>(g, "matrix");
    if (int(rows.size()) != int(div.size())) throw InputError("action matrix has the wrong size");
    WMat A(int(div.size()), int(div.size()), W);
    for (int i = 0; i < A.rows; ++i) {
      if (int(rows[i].size()) != A.cols) throw InputError("action matrix has the wrong size");
      for (int j = 0; j < A.cols; ++j) A(i, j) = W.red(rows[i][j]);
    }
    gens.push_back({e, A});
  }
  try {
    return GModule::from_generators(G, p, div, gens);
  } catch (const Error& e) {
    throw InputError(std::string("module: ") + e.what());
  }
}

void run_groupcoh(const json& in, Ctx& c) {
  FiniteGroup G = parse_group(need(in, "group"));
  GModule M = parse_module(need(in, "module"), G);
  const int maxdeg = small_int(in, "maxdeg", 0, 8);
  // the top cochain term only serves as the target of the last differential
  Cochains C = cochain_complex(G, M, maxdeg + 1, c.budget);
  json dims = json::array(), divs = json::array();
  for (int k = 0; k <= maxdeg; ++k) {
    auto d = C.cohomology(k).divisors();
    int lo = 0;
    for (int e : d) lo += e;
    dims.push_back(lo);
    divs.push_back(d);
  }
  c.result["group_order"] = G.order;
  c.result["dims"] = dims;  // log_p |H^k|, the F_p-dimension for F_p modules
  c.result["divisors"] = divs;
}

void run_selmer(const json& in, Ctx& c) {
  const int trials = small_int(in, "pairing_trials", 0, 20, 0);
  const int max_group = small_int(in, "max_group", 1, 8, 8), max_module = small_int(in, "max_module", 2, 27, 27);
  SelmerInstance I = random_selmer(c.seed, max_group, max_module);
  c.result["description"] = I.description;
  json places = json::array();
  bool axioms = true;
  for (int v = 0; v < int(I.S.places.size()); ++v) {
    AxiomReport a = check_axioms(I.S, v);
    axioms = axioms && a.ok();
    places.push_back({{"label", I.S.places[v].label}, {"axioms", a.ok()}, {"failures", a.failures}});
  }
  c.result["places"] = places;
  c.prop("condition lifts satisfy the axioms", axioms);
  for (Side side : {Side::Primary, Side::Dual}) {
    SelmerLesReport les = selmer_les(I.S, side, 2);
    const char* tag = side == Side::Primary ? "primary" : "dual";
    c.result[tag] = {{"selmer", les.selmer}, {"global", les.global}, {"local", les.local}, {"spots", les.spots}};
    c.prop(fmt::format("{} long exact sequence is exact", tag), les.exact, les.failure);
  }
  if (trials > 0) {
    suites::SelmerStats st = suites::selmer_checks(c.seed, trials);
    c.result["pairings"] = {{"evaluated", st.pairs}, {"nonzero", st.nonzero}, {"no_primitive", st.no_primitive}};
    c.prop("pairing cochain is a local cocycle", st.cocycles, st.failure);
    c.prop("pairing is independent of choices", st.invariant, st.failure);
  }
}

void run_pairing(const json& in, Ctx& c) {
  const int trials = small_int(in, "trials", 1, 20, 3);
  suites::SelmerStats st = suites::selmer_checks(c.seed, trials);
  SelmerInstance I = random_selmer(c.seed);
  SelmerComplex X = cone_selmer_complex(I.S, Side::Primary, 3), Y = cone_selmer_complex(I.S, Side::Dual, 3);
  PairingMatrix M = pairing_matrix(I.S, X, Y);
  json rows = json::array();
  for (int i = 0; i < M.values.rows; ++i) {
    json r = json::array();
    for (int j = 0; j < M.values.cols; ++j) r.push_back(M.values(i, j));
    rows.push_back(r);
  }
  c.result["description"] = st.description;
  c.result["matrix"] = rows;
  c.result["left_log"] = M.left_log;
  c.result["right_log"] = M.right_log;
  c.result["image_log"] = M.image_log;
  c.result["skipped"] = M.skipped;
  c.result["perfect"] = M.perfect();
  c.result["evaluated"] = st.pairs;
  c.result["nonzero"] = st.nonzero;
  c.prop("long exact sequences are exact", st.les_exact && st.axioms, st.failure);
  c.prop("pairing cochain is a local cocycle", st.cocycles, st.failure);
  c.prop("pairing is independent of choices", st.invariant, st.failure);
}

void run_doldkan(const json& in, Ctx& c) {
  const i64 p = prime(in);
  const int n = small_int(in, "n", 1, 3, 1);
  const int D = small_int(in, "D", 1, 6, 4);
  const int count = small_int(in, "instances", 0, 200, 10);
  Wn W(p, n);
  std::mt19937_64 rng(c.seed);
  int ngamma = 0, iso = 0;
  for (int t = 0; t < count; ++t) {
    ChainComplex C = random_complex(rng, W, 0, D, 1);
    if (check_n_gamma(C, D).ok) ++ngamma;
    SimplicialModule X = dk_inverse(random_complex(rng, W, 0, D, 1), D);
    GammaN g = gamma_n_iso(X);
    if (g.simplicial && g.invertible) ++iso;
  }
  c.result["instances"] = count;
  c.prop("N Gamma = id", ngamma == count, fmt::format("{} of {}", ngamma, count));
  c.prop("Gamma N is isomorphic to id", iso == count, fmt::format("{} of {}", iso, count));
  if (in.contains("sphere")) {
    const int k = small_int(in, "sphere", 1, 3);
    GradedAlgebra A = homotopy_ring(square_zero(sphere_module(W, k, 2 * k + 1)), 2 * k);
    json pi = json::array();
    bool ok = true;
    for (int j = 0; j <= 2 * k; ++j) {
      pi.push_back(A.H[j].divisors());
      ok = ok && (j == 0 || j == k ? A.H[j].divisors() == std::vector<int>{n} : A.rank(j) == 0);
    }
    c.result["sphere_pi"] = pi;
    c.prop("pi of k + k[n] is W in degrees 0 and n", ok);
  }
}

Poly parse_poly(const json& terms, int s) {
  Poly f;
  if (!terms.is_array()) throw InputError("a relation is a list of [exponents, coefficient] terms");
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 2) throw InputError("a term is [exponents, coefficient]");
    auto e = t[0].get<std::vector<int>>();
    if (int(e.size()) != s) throw InputError("exponent vector length differs from s");
    for (int x : e)
      if (x < 0 || x > 16) throw InputError("exponent outside [0, 16]");
    f.terms.push_back({e, t[1].get<i64>()});
  }
  return f;
}

void run_ci(const json& in, Ctx& c) {
  const i64 p = prime(in);
  const int n = small_int(in, "n", 1, 3, 2);
  const int s = small_int(in, "s", 1, 5);
  const int T = small_int(in, "T", 2, 6, 4);
  std::vector<Presentation> Ps;
  if (in.contains("relations")) {
    Presentation P{Wn(p, n), s, T, {}};
    try {
      for (const auto& r : need(in, "relations")) P.rel.push_back(parse_poly(r, s));
    } catch (const json::exception& e) {
      throw InputError(std::string("relations: ") + e.what());
    }
    try {
      validate(P);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    Ps.push_back(P);
  } else {
    const int t = small_int(in, "t", 0, s);
    const int count = small_int(in, "count", 1, 200, 10);
    std::mt19937_64 rng(c.seed);
    for (int k = 0; k < count; ++k) Ps.push_back(random_ci(rng, Wn(p, n), s, t, T));
  }
  charge(powll(s + 1, T) * i64(Ps.size()), c.budget, "ci");
  json out = json::array();
  bool all_regular = true;
  for (const auto& P : Ps) {
    json e;
    try {
      TangentDims d = ci_tangent_dims(P);
      e["tangent_dims"] = d;
      e["regular"] = true;
      Minimized m = minimize(P);
      e["minimal"] = {m.s, m.t};
    } catch (const NotRegular& nr) {
      e["regular"] = false;
      e["method"] = nr.info.method;
      all_regular = false;
    }
    out.push_back(e);
  }
  c.result["presentations"] = out;
  c.prop("relations form a regular sequence", all_regular);
}

void run_numerology(const json& in, Ctx& c) {
  auto nat = [&](const char* k) {
    const i64 v = get<i64>(in, k);
    if (v < 0) throw InputError(fmt::format("field '{}' must be nonnegative", k));
    return v;
  };
  Numerology n = wiles_numerology(nat("h1"), nat("h2"), nat("h1_local"), nat("h1_f"), nat("r"), nat("nQ"), nat("delta"));
  c.result["value"] = n.value;
  c.result["expected"] = n.expected;
  c.result["negative"] = n.negative;
  c.prop("h1 - h2 + delta = h1_local - h1_f", n.relations);
  c.prop("value equals r #Q - delta", n.value == n.expected);
}

PatchScenario parse_patch(const json& in) {
  PatchScenario sc;
  sc.p = prime(in);
  sc.s = small_int(in, "s", 1, 4);
  sc.delta = small_int(in, "delta", 0, sc.s);
  sc.levels = get_or<std::vector<int>>(in, "levels", {1, 2, 3});
  sc.maxdeg = small_int(in, "maxdeg", 0, 6, sc.delta + 2);
  if (in.contains("perturb"))
    for (const auto& q : need(in, "perturb")) {
      Perturbation pt;
      const auto kind = get<std::string>(q, "kind");
      if (kind == "zero") pt.kind = Perturbation::Kind::Zero;
      else if (kind == "times-p") pt.kind = Perturbation::Kind::TimesP;
      else throw InputError("perturbation kind must be 'zero' or 'times-p'");
      pt.level = get<int>(q, "level");
      pt.degree = get<int>(q, "degree");
      sc.perturb.push_back(pt);
    }
  try {
    validate(sc);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  return sc;
}

json cg_json(const CgReport& r) {
  return {{"pass", r.pass}, {"diagnosis", r.diagnosis}, {"nonzero_degrees", r.nonzero_degrees},
          {"generators", r.generators}, {"tor1", r.tor1}};
}

void run_patch(const json& in, Ctx& c) {
  PatchScenario sc = parse_patch(in);
  for (int n : sc.levels)
    if (n > 4) throw InputError("levels above 4 are not supported");
  charge(powll(powll(sc.p, sc.levels.back()), sc.delta) * (sc.maxdeg + 2), c.budget, "patch");
  json levels = json::array(), transitions = json::array();
  std::vector<LevelDatum> data;
  for (int n : sc.levels) {
    data.push_back(build_level_complex(sc, n));
    json ranks = json::array();
    for (int i = 0; i <= sc.maxdeg; ++i) ranks.push_back(data.back().pi.rank(i));
    levels.push_back({{"n", n}, {"ranks", ranks}, {"divisors", module_json(data.back().pi, sc.maxdeg)}});
  }
  for (std::size_t k = 0; k + 1 < data.size(); ++k) {
    Transition T = transition(data[k + 1], data[k], sc.maxdeg);
    json ranks = json::array();
    for (int i = 0; i <= sc.maxdeg; ++i) ranks.push_back(smith(T.on_homology[i]).rank);
    transitions.push_back({{"from", T.n}, {"to", T.m}, {"ranks", ranks}});
  }
  LimitReport L = limit_pi(sc);
  c.result["levels"] = levels;
  c.result["transitions"] = transitions;
  c.result["limit"] = {{"certified", L.limit.certified}, {"ranks", L.limit.ranks}, {"stable_level", L.limit.stable_level}};
  c.result["koszul_ranks"] = L.koszul_ranks;
  c.result["euler"] = L.euler;
  c.result["exterior"] = {{"limit", L.limit_exterior.ok}, {"koszul", L.koszul_exterior.ok},
                          {"limit_reason", L.limit_exterior.reason}, {"koszul_reason", L.koszul_exterior.reason}};
  c.result["perturbed"] = !sc.perturb.empty();
  const int ncg = small_int(in, "cg_instances", 0, 60, 0);
  if (ncg > 0) {
    std::mt19937_64 rng(c.seed);
    json cg = json::array();
    for (int k = 0; k < ncg; ++k) cg.push_back(cg_json(cg_check(random_cg_instance(rng, CgKind(k % 3)))));
    c.result["cg"] = cg;
  }
  if (!L.conclusive()) {
    c.result["note"] = L.note;
    c.code = kInconclusive;
    return;
  }
  // perturbed towers are reported, not judged
  if (!sc.perturb.empty()) return;
  c.prop("limit ranks equal the Koszul Tor ranks", L.ranks_match);
  c.prop("nonzero only in degrees 0..delta", L.band_ok);
  c.prop("limit ring is exterior", L.limit_exterior.ok, L.limit_exterior.reason);
  c.prop("Koszul Tor ring is exterior", L.koszul_exterior.ok, L.koszul_exterior.reason);
  c.prop("pi_0 is W_n at every level", L.pi0_ok);
}

void run_cg(const json& in, Ctx& c) {
  std::mt19937_64 rng(c.seed);
  json out = json::array();
  bool ok = true;
  const char* names[3] = {"pass", "concentration", "freeness"};
  for (int k = 0; k < 3; ++k) {
    const int count = small_int(in, names[k], 0, 100, 0);
    for (int t = 0; t < count; ++t) {
      CgReport r = cg_check(random_cg_instance(rng, CgKind(k)));
      json e = cg_json(r);
      e["constructed"] = names[k];
      const std::string want = k == 0 ? "" : names[k];
      ok = ok && r.diagnosis == want;
      out.push_back(e);
    }
  }
  c.result["instances"] = out;
  c.prop("diagnoses match the constructions", ok);
}

}  // namespace

RunResult run_scenario(const json& sc, std::optional<std::uint64_t> seed, std::optional<long long> budget) {
  RunResult rr;
  try {
    if (!sc.is_object()) throw InputError("scenario must be a JSON object");
    if (sc.contains("schema") && sc.at("schema") != "1") throw InputError("unsupported schema version");
    const std::string kind = get<std::string>(sc, "kind");
    const json& payload = sc.contains("payload") ? sc.at("payload") : sc;
    Ctx c{seed ? *seed : get_or<std::uint64_t>(sc, "seed", 1),
          budget ? *budget : get_or<long long>(sc, "budget", kDefaultWorkBudget)};
    if (c.budget <= 0) throw InputError("budget must be positive");
    static const std::map<std::string, void (*)(const json&, Ctx&)> kinds{
        {"tor", run_tor},       {"limit-tor", run_limit_tor}, {"groupcoh", run_groupcoh},
        {"selmer", run_selmer}, {"pairing", run_pairing},     {"doldkan", run_doldkan},
        {"ci", run_ci},         {"numerology", run_numerology}, {"patch", run_patch},
        {"cg", run_cg}};
    auto it = kinds.find(kind);
    if (it == kinds.end()) throw InputError(fmt::format("unknown kind '{}'", kind));
    json report{{"schema", "1"}, {"kind", kind}, {"seed", c.seed}, {"budget", c.budget}};
    try {
      it->second(payload, c);
    } catch (const BudgetError& e) {
      report["status"] = "budget";
      report["error"] = e.what();
      rr.code = kBudget;
      rr.report = report;
      return rr;
    }
    report["result"] = c.result;
    report["properties"] = c.properties;
    report["status"] = c.code == kOk ? "ok" : (c.code == kInconclusive ? "inconclusive" : "property-failure");
    rr.code = c.code;
    rr.report = report;
  } catch (const InputError& e) {
    rr.code = kInputError;
    rr.report = json();
    rr.report_error = e.what();
  } catch (const json::exception& e) {
    rr.code = kInputError;
    rr.report = json();
    rr.report_error = e.what();
  } catch (const BudgetError& e) {
    rr.code = kBudget;
    rr.report = json{{"schema", "1"}, {"status", "budget"}, {"error", e.what()}};
  } catch (const Error& e) {
    // library validation of a well-formed but inadmissible payload
    rr.code = kInputError;
    rr.report = json();
    rr.report_error = e.what();
  }
  return rr;
}

RunResult run_scenario_text(const std::string& text, std::optional<std::uint64_t> seed,
                            std::optional<long long> budget) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    RunResult rr;
    rr.code = kInputError;
    rr.report_error = e.what();
    return rr;
  }
  return run_scenario(j, seed, budget);
}

}  // namespace dtw::cli
