// tte: extremal exponents of multi-leg partial traces.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <json.hpp>

#include "tte/caps.hpp"
#include "tte/errors.hpp"
#include "tte/extremal.hpp"
#include "tte/ginibre.hpp"
#include "tte/graph.hpp"
#include "tte/perm.hpp"
#include "tte/tensor.hpp"
#include "tte/verify.hpp"

using nlohmann::json;
using namespace tte;

namespace {

struct Common {
  std::vector<std::string> sigma_text;
  int m = 0;
  std::string out;
  std::uint64_t seed = 1;
  int threads = 1;
};

void add_sigma_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--sigma", c.sigma_text, "permutation per leg: \"(1 2 3)(4)\" or \"1>2,2>3\"")
      ->required()
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd->add_option("--m", c.m, "number of points (inferred from the largest point when omitted)");
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "write output to this file instead of stdout");
  cmd->add_option("--seed", c.seed, "seed for every random choice");
  cmd->add_option("--threads", c.threads, "worker threads");
}

int infer_m(const Common& c) {
  if (c.m > 0) return c.m;
  int m = 0;
  for (const auto& t : c.sigma_text) {
    const int p = max_point(t);
    if (p == 0) continue;
    if (m != 0 && p != m) {
      throw InputError("legs mention different largest points (" + std::to_string(m) + " and " + std::to_string(p) +
                       "); pass --m to fix the size");
    }
    m = p;
  }
  if (m == 0) throw InputError("cannot infer m from empty permutations; pass --m");
  return m;
}

std::vector<PartialPermutation> parse_sigmas(const Common& c) {
  const int m = infer_m(c);
  std::vector<PartialPermutation> out;
  for (const auto& t : c.sigma_text) out.push_back(parse_permutation(t, m));
  return out;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InputError("cannot write " + c.out);
  f << text;
}

json sigmas_json(const std::vector<PartialPermutation>& s) {
  json a = json::array();
  for (const auto& p : s) a.push_back(to_json(p));
  return a;
}

int leg_dim(int N, int k, const Caps& caps) {
  double d = std::pow(static_cast<double>(N), k);
  if (d > static_cast<double>(caps.dim)) throw CapExceeded("N^k exceeds the dimension cap");
  return static_cast<int>(d + 0.5);
}

std::vector<DenseMatrix> load_matrix_file(const std::string& path, int count, int dim) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  const json& list = j.is_object() && j.contains("mats") ? j.at("mats") : j;
  if (!list.is_array()) throw InputError(path + ": expected an array of matrices");
  if (static_cast<int>(list.size()) != count) {
    throw InputError(path + ": expected " + std::to_string(count) + " matrices, found " + std::to_string(list.size()));
  }
  std::vector<DenseMatrix> out;
  for (const auto& mj : list) {
    Mat m = matrix_from_json(mj);
    if (m.rows() != dim || m.cols() != dim) throw InputError(path + ": matrices must be " + std::to_string(dim) + " square");
    out.push_back({m, {}});
  }
  return out;
}

// --mats upi:witness | upi:<r1,r2,...> | random:<seed> | identity | file:<path>
std::vector<DenseMatrix> make_mats(const std::string& spec, const std::vector<PartialPermutation>& s, int N,
                                   const Caps& caps, BluePairing* used_pairing) {
  const int k = static_cast<int>(s.size());
  const int m = s.front().size();
  const int dim = leg_dim(N, k, caps);
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "identity") return std::vector<DenseMatrix>(static_cast<std::size_t>(m), identity_matrix(dim));
  if (kind == "random") {
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(arg);
    } catch (const std::exception&) {
      throw InputError("random:<seed> needs an integer seed");
    }
    std::vector<DenseMatrix> out;
    for (int i = 0; i < m; ++i) out.push_back(random_unitary(dim, seed * 1000 + i));
    return out;
  }
  if (kind == "file") return load_matrix_file(arg, m, dim);
  if (kind == "upi") {
    BluePairing b;
    if (arg == "witness" || arg.empty()) {
      ReportOptions opt;
      opt.caps = caps;
      opt.certificate = false;
      b = exponent_report(s, {}, opt).witness;
    } else {
      std::vector<std::uint32_t> ranks;
      std::stringstream ss(arg);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          ranks.push_back(static_cast<std::uint32_t>(std::stoul(item)));
        } catch (const std::exception&) {
          throw InputError("upi ranks must be integers, got '" + item + "'");
        }
      }
      if (static_cast<int>(ranks.size()) != m) throw InputError("upi needs one rank per matrix");
      b = BluePairing::from_ranks(k, ranks);
    }
    if (used_pairing) *used_pairing = b;
    return u_tuple(b, N, caps.dim);
  }
  throw InputError("unknown --mats kind '" + kind + "'");
}

json value_json(const EvalResult& r) {
  if (r.scalar()) {
    const cd v = r.value.data(0, 0);
    return {{"re", v.real()}, {"im", v.imag()}};
  }
  json rows = json::array(), cols = json::array();
  for (const auto& s : r.row_slots) rows.push_back({s.leg + 1, s.rect + 1});
  for (const auto& s : r.col_slots) cols.push_back({s.leg + 1, s.rect + 1});
  json j = matrix_to_json(r.value.data);
  j["row_slots"] = rows;
  j["col_slots"] = cols;
  return j;
}

int extremal_M(const std::vector<PartialPermutation>& s, const Caps& caps, std::uint64_t seed) {
  ReportOptions opt;
  opt.caps = caps;
  opt.seed = seed;
  opt.certificate = false;
  return exponent_report(s, {}, opt).M;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal exponents of multi-leg partial traces"};
  app.require_subcommand(1);
  Caps caps;
  int rc = 0;

  // extremal
  Common ce;
  std::vector<int> mult;
  std::string method = "auto";
  int restarts = 32;
  int moment_p = 0;
  int scan_k = 0;
  auto* ext = app.add_subcommand("extremal", "compute M, witness, bounds and certificate");
  add_sigma_flags(ext, ce);
  add_output_flags(ext, ce);
  ext->add_option("--mult", mult, "multiplicity a_j per leg");
  ext->add_option("--method", method, "exhaustive, local or auto")->check(CLI::IsMember({"exhaustive", "local", "auto"}));
  ext->add_option("--restarts", restarts, "local-search restarts");
  ext->add_option("--moment-p", moment_p, "search the moment graph of order p instead");
  ext->add_option("--scan-k", scan_k, "single sigma: report every k <= K with M(sigma, gamma, ...) = R + k - 1");

  // evaluate
  Common cv;
  int n_eval = 2;
  std::string mats_eval = "identity";
  bool check_extremal = false;
  auto* ev = app.add_subcommand("evaluate", "dense partial trace of explicit matrices");
  add_sigma_flags(ev, cv);
  add_output_flags(ev, cv);
  ev->add_option("--n", n_eval, "dimension N of each leg");
  ev->add_option("--mats", mats_eval, "upi:witness | upi:<ranks> | random:<seed> | identity | file:<path>");
  ev->add_flag("--check-extremal", check_extremal, "compare with N^M");

  // moments / opnorm
  Common cm;
  int n_mom = 2;
  std::vector<int> ps{1, 2, 3};
  std::string mats_mom = "upi:witness";
  auto* mom = app.add_subcommand("moments", "Tr((Y Y*)^p) against N^(2pM + open)");
  add_sigma_flags(mom, cm);
  add_output_flags(mom, cm);
  mom->add_option("--n", n_mom, "dimension N of each leg");
  mom->add_option("--p", ps, "moment orders");
  mom->add_option("--mats", mats_mom, "matrix source, as for evaluate");

  Common co;
  int n_op = 2;
  std::string mats_op = "upi:witness";
  auto* op = app.add_subcommand("opnorm", "operator norm of Y against N^M");
  add_sigma_flags(op, co);
  add_output_flags(op, co);
  op->add_option("--n", n_op, "dimension N of each leg");
  op->add_option("--mats", mats_op, "matrix source, as for evaluate");

  // ginibre
  Common cg;
  int g_m = 2, g_d1 = 1, g_d2 = 1, g_n = 2, mc_samples = 0;
  std::string g_mats = "random:1";
  auto* gin = app.add_subcommand("ginibre", "Wick pairing sums and the circular limit");
  add_output_flags(gin, cg);
  gin->add_option("--m", g_m, "word half-length")->required();
  gin->add_option("--d1", g_d1, "legs of the Ginibre factor")->required();
  gin->add_option("--d2", g_d2, "spectator legs")->required();
  gin->add_option("--n-base", g_n, "base dimension N");
  gin->add_option("--mats", g_mats, "random:<seed> | identity | file:<path> (A'_1, B'_1, ...)");
  gin->add_option("--mc-samples", mc_samples, "Monte Carlo samples (0 to skip)");

  // verify
  std::string suite = "core";
  VerifyOptions vopt;
  std::string verify_out;
  auto* ver = app.add_subcommand("verify", "run acceptance suites");
  ver->add_option("--suite", suite, "core, moments, ginibre or all")
      ->check(CLI::IsMember({"core", "moments", "ginibre", "all"}));
  ver->add_option("--max-m", vopt.max_m, "largest m for exhaustive partial-graph checks");
  ver->add_option("--max-k", vopt.max_k, "largest k for the simplicity check");
  ver->add_option("--n", vopt.N, "dimension N");
  ver->add_option("--threads", vopt.threads, "worker threads");
  ver->add_option("--seed", vopt.seed, "base seed");
  ver->add_option("--mc-samples", vopt.mc_samples, "Monte Carlo samples per seed");
  ver->add_option("--out", verify_out, "write the JSON summary here");
  ver->add_flag("--inject-fault", vopt.inject_fault, "corrupt the dense oracle (harness self-test)");

  // dot
  Common cd_;
  bool dot_witness = false;
  std::string dot_ranks;
  int dot_p = 0;
  auto* dot = app.add_subcommand("dot", "Graphviz rendering of the graph");
  add_sigma_flags(dot, cd_);
  add_output_flags(dot, cd_);
  dot->add_flag("--witness", dot_witness, "draw the blue edges of an optimal pairing");
  dot->add_option("--pairing", dot_ranks, "draw the blue edges of these per-rectangle ranks");
  dot->add_option("--moment-p", dot_p, "draw the moment graph of order p");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    caps = Caps::from_env();

    if (*ext) {
      const auto s = parse_sigmas(ce);
      const int m = s.front().size();
      ReportOptions opt;
      opt.caps = caps;
      opt.seed = ce.seed;
      opt.restarts = restarts;
      opt.mode = method == "exhaustive" ? SearchMode::exhaustive : method == "local" ? SearchMode::local : SearchMode::automatic;
      json out = {{"m", m}, {"sigmas", sigmas_json(s)}, {"mult", mult}};
      if (moment_p > 0) {
        const auto legs = expand_legs(s, mult);
        const TensorGraph g = build_moment(legs, m, moment_p);
        ExtremalResult local = m_local_search(g, restarts, ce.seed);
        ExtremalResult r = local;
        if (opt.mode != SearchMode::local) {
          SearchOptions so;
          so.node_limit = caps.pairings;
          so.incumbent = &local.witness;
          try {
            r = m_exhaustive(g, so);
          } catch (const CapExceeded&) {
            if (opt.mode == SearchMode::exhaustive) throw;
          }
        }
        const int base = extremal_M(legs, caps, ce.seed);
        out["moment_p"] = moment_p;
        out["result"] = to_json(r, g);
        out["formula"] = moment_exponent(legs, moment_p, base);
        out["formula_matches"] = r.method == Method::exhaustive ? json(r.M == moment_exponent(legs, moment_p, base)) : json(nullptr);
      } else {
        const ExtremalResult r = exponent_report(s, mult, opt);
        const auto legs = expand_legs(s, mult);
        out["result"] = to_json(r, build(legs, m));
        out["k"] = legs.size();
      }
      if (scan_k > 0) {
        if (s.size() != 1 || !s.front().is_full()) throw InputError("--scan-k needs exactly one full permutation");
        const Permutation sigma(s.front());
        json scan = json::array();
        for (int k = 2; k <= scan_k; ++k) {
          std::vector<PartialPermutation> legs{sigma};
          for (int t = 1; t < k; ++t) legs.push_back(Permutation::increasing_cycle(m));
          const BackwardFormula f = multi_backward_formula(sigma, k);
          const int M = extremal_M(legs, caps, ce.seed);
          scan.push_back({{"k", k}, {"M", M}, {"formula", f.value}, {"equal", M == f.value}, {"K", f.K}, {"applicable", f.applicable}});
        }
        out["scan"] = scan;
      }
      emit(ce, out.dump(2) + "\n");
    } else if (*ev) {
      const auto s = parse_sigmas(cv);
      BluePairing used;
      const auto mats = make_mats(mats_eval, s, n_eval, caps, &used);
      const EvalResult r = evaluate(s, mats, n_eval, caps.terms);
      json out = {{"N", n_eval}, {"sigmas", sigmas_json(s)}, {"mats", mats_eval}, {"value", value_json(r)}};
      if (check_extremal) {
        const int M = extremal_M(s, caps, cv.seed);
        const double target = std::pow(static_cast<double>(n_eval), M);
        const double size = r.scalar() ? std::abs(r.value.data(0, 0)) : operator_norm(r.value.data).value;
        out["M"] = M;
        out["N_pow_M"] = target;
        out["magnitude"] = size;
        out["margin"] = target - size;
        out["within_bound"] = size <= target + 1e-6;
        if (mats_eval.rfind("upi:", 0) == 0) {
          const int cyc = cycle_count(build(s, s.front().size()), used);
          out["pairing_cycles"] = cyc;
          out["equals_N_pow_cycles"] = std::abs(size - std::pow(static_cast<double>(n_eval), cyc)) <= 1e-9 * std::max(1.0, size);
        }
        if (!out["within_bound"].get<bool>()) rc = 1;
      }
      emit(cv, out.dump(2) + "\n");
    } else if (*mom || *op) {
      Common& c = *mom ? cm : co;
      const int N = *mom ? n_mom : n_op;
      const std::string& spec = *mom ? mats_mom : mats_op;
      const auto s = parse_sigmas(c);
      const auto mats = make_mats(spec, s, N, caps, nullptr);
      const Mat Y = evaluate(s, mats, N, caps.terms).value.data;
      const int M = extremal_M(s, caps, c.seed);
      const bool maximizer = spec.rfind("upi:witness", 0) == 0 || spec == "upi:";
      const NormResult nr = operator_norm(Y);
      json out = {{"N", N}, {"sigmas", sigmas_json(s)}, {"mats", spec}, {"M", M}, {"rows", Y.rows()}, {"cols", Y.cols()}};
      bool pass = nr.converged;
      if (*mom) {
        json rows = json::array();
        for (int p : ps) {
          const double t = moment_trace(Y, p);
          const int e = moment_exponent(s, p, M);
          const double expect = std::pow(static_cast<double>(N), e);
          const bool ok = maximizer ? std::abs(t - expect) <= 1e-9 * expect : t <= expect * (1 + 1e-9);
          pass = pass && ok;
          rows.push_back({{"p", p}, {"trace", t}, {"exponent", e}, {"N_pow_exponent", expect}, {"pass", ok}});
        }
        out["moments"] = rows;
      }
      const double expect = std::pow(static_cast<double>(N), M);
      const bool ok = maximizer ? std::abs(nr.value - expect) <= 1e-9 * expect : nr.value <= expect * (1 + 1e-9);
      pass = pass && ok;
      out["operator_norm"] = {{"value", nr.value}, {"lower", nr.lower}, {"upper", nr.upper}, {"converged", nr.converged},
                              {"N_pow_M", expect}, {"pass", ok}};
      out["comparison"] = maximizer ? "equality at the maximizer" : "upper bound";
      out["pass"] = pass;
      emit(c, out.dump(2) + "\n");
      if (!pass) rc = 1;
    } else if (*gin) {
      GinibreModel model;
      if (g_mats.rfind("random:", 0) == 0) {
        model = random_model(g_m, g_d1, g_d2, g_n, std::stoull(g_mats.substr(7)));
      } else if (g_mats == "identity") {
        model = identity_model(g_m, g_d1, g_d2, g_n);
      } else if (g_mats.rfind("file:", 0) == 0) {
        model = identity_model(g_m, g_d1, g_d2, g_n);
        const auto mats = load_matrix_file(g_mats.substr(5), 2 * g_m, model.n() * model.p_dim());
        for (int i = 0; i < g_m; ++i) {
          model.a[i] = mats[2 * i];
          model.b[i] = mats[2 * i + 1];
        }
      } else {
        throw InputError("unknown --mats kind for ginibre");
      }
      json pairings = json::array();
      bool ok = true;
      for (const auto& theta : enumerate_theta(g_m)) {
        const TermExponent t = pairing_term_exponent(theta, g_d1, g_d2, caps);
        json th = json::array();
        for (int v : theta.images()) th.push_back(v + 1);
        pairings.push_back({{"theta", th}, {"noncrossing", t.noncrossing}, {"M", t.M}, {"bound_ok", t.ok}});
        ok = ok && t.ok;
      }
      const Mat exact = exact_expectation(model, caps);
      json out = {{"m", g_m}, {"d1", g_d1}, {"d2", g_d2}, {"N", g_n}, {"pairings", pairings},
                  {"exact", matrix_to_json(exact)}, {"free", matrix_to_json(free_limit(model, caps))}};
      const BoundCheck bc = compare_bound(model, caps);
      out["deviation_norm"] = bc.deviation_norm;
      out["bound"] = bc.bound;
      if (bc.applicable) {
        out["bound_pass"] = bc.pass;
        ok = ok && bc.pass;
      } else {
        out["bound_pass"] = nullptr;
        out["notice"] = "bound check skipped: it requires d1 > d2";
      }
      if (mc_samples > 0) {
        const MonteCarlo mc = mc_expectation(model, mc_samples, cg.seed, cg.threads);
        out["mc"] = {{"samples", mc_samples}, {"max_z", max_z(exact, mc)}, {"estimate", matrix_to_json(mc.estimate)}};
      }
      out["pass"] = ok;
      emit(cg, out.dump(2) + "\n");
      if (!ok) rc = 1;
    } else if (*ver) {
      const json j = run_suite(suite, vopt, [](const CriterionResult& r) {
        std::cerr << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << "\n";
      });
      const std::string text = j.dump(2) + "\n";
      if (verify_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(verify_out);
        if (!f) throw InputError("cannot write " + verify_out);
        f << text;
      }
      if (!j.at("pass").get<bool>()) rc = 1;
    } else if (*dot) {
      const auto s = parse_sigmas(cd_);
      const int m = s.front().size();
      const TensorGraph g = dot_p > 0 ? build_moment(s, m, dot_p) : build(s, m);
      std::optional<BluePairing> b;
      if (!dot_ranks.empty()) {
        std::vector<std::uint32_t> ranks;
        std::stringstream ss(dot_ranks);
        std::string item;
        while (std::getline(ss, item, ',')) ranks.push_back(static_cast<std::uint32_t>(std::stoul(item)));
        b = BluePairing::from_ranks(g.k(), ranks);
        if (b->num_rects() != g.num_rects()) throw InputError("--pairing needs one rank per rectangle");
      } else if (dot_witness) {
        ExtremalResult local = m_local_search(g, 32, cd_.seed);
        SearchOptions so;
        so.node_limit = caps.pairings;
        so.incumbent = &local.witness;
        b = m_exhaustive(g, so).witness;
      }
      emit(cd_, to_dot(g, b ? &*b : nullptr));
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
