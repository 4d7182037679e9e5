// Batch front end: search, verify, simplicial constructions, manifold scans,
// analytic families.  Exit codes: 0 success, 1 usage/IO, 2 search exhausted,
// 3 verification failure.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "picode/codefile.hpp"
#include "picode/families.hpp"
#include "picode/kl.hpp"
#include "picode/optimizer.hpp"
#include "picode/oracle.hpp"
#include "picode/simplicial.hpp"

namespace {

using namespace pic;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitVerifyFail = 3;

std::string join_args(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
  return os.str();
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

std::pair<int, int> parse_range(const std::string& s) {
  const auto dash = s.find('-');
  if (dash == std::string::npos) {
    const int n = std::stoi(s);
    return {n, n};
  }
  return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
}

comb::Rational parse_ratio(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return comb::Rational(std::stoi(s));
  return comb::Rational(std::stoi(s.substr(0, slash)),
                        std::stoi(s.substr(slash + 1)));
}

json report_to_json(const kl::KLReport& rep) {
  json j;
  j["max_abs"] = rep.max_abs;
  j["cost"] = rep.cost;
  j["identity_count"] = rep.identity_count;
  return j;
}

int cmd_search(int t, int q_p, int q_l, const std::string& param,
               const std::string& n_range, int restarts, std::uint64_t seed,
               const std::string& out_dir, const std::string& cmdline) {
  Timer timer;
  const auto [n_lo, n_hi] = parse_range(n_range);
  const auto kind = opt::parse_param_kind(param);
  std::filesystem::create_directories(out_dir);

  opt::SearchConfig config;
  config.restarts = restarts;
  config.rng_seed = seed;

  std::ostringstream csv;
  csv << "n,t,restart,cost,iters,converged\n";
  std::vector<std::string> outputs;
  bool any_converged = false;

  for (int n = n_lo; n <= n_hi; ++n) {
    if (n < 4 * t + 1) {
      std::cerr << "n=" << n << " violates n >= 4t+1; skipped\n";
      continue;
    }
    if (kind == opt::ParamKind::kPRRestricted && n % 2 == 0) continue;
    CodeParams cp{n, q_p, q_l, t};
    opt::MinimizeOutcome mo =
        opt::minimize(opt::Parametrization::make(kind, cp), config);
    for (const auto& r : mo.restarts)
      csv << n << ',' << t << ',' << r.restart << ',' << r.cost << ','
          << r.iters << ',' << (r.converged ? 1 : 0) << '\n';
    if (mo.num_converged > 0) {
      any_converged = true;
      const std::string code_path =
          out_dir + "/code_n" + std::to_string(n) + "_t" + std::to_string(t) +
          ".json";
      io::CodeMetadata meta;
      meta.seed = mo.best.seed;
      meta.cost = mo.best.cost;
      meta.generator = "search " + opt::param_kind_name(kind);
      io::write_code_file(code_path, mo.best.table, meta);
      outputs.push_back(code_path);
      std::cout << "n=" << n << " converged, cost=" << mo.best.cost << "\n";
    } else {
      std::cout << "n=" << n << " not found under budget, best cost="
                << mo.best.cost << "\n";
    }
  }

  const std::string csv_path = out_dir + "/search.csv";
  io::write_text_atomic(csv_path, csv.str());
  outputs.push_back(csv_path);
  io::write_manifest(out_dir + "/manifest.json", cmdline, seed,
                     timer.seconds(), outputs);
  return any_converged ? kExitOk : kExitExhausted;
}

int cmd_verify(const std::string& file, int t_override, double tol,
               bool with_oracle) {
  io::CodeFile cf = io::read_code_file(file);
  CodewordTable table = cf.table;
  if (t_override >= 0) table = table.with_t(t_override);
  kl::KLReport rep = kl::qudit_residuals(table);
  json j = report_to_json(rep);
  j["t"] = table.params().t;
  j["pass"] = rep.max_abs <= tol;
  if (with_oracle) {
    double cap = 1;
    bool under_cap = true;
    for (int i = 0; i < table.params().n; ++i) {
      cap *= table.params().q_p;
      if (cap > static_cast<double>(oracle::kDenseCap)) {
        under_cap = false;
        break;
      }
    }
    if (under_cap) {
      kl::KLReport brute = oracle::brute_kl_residuals(table);
      j["oracle_max_abs"] = brute.max_abs;
      j["oracle_cost_discrepancy"] = std::abs(brute.cost - rep.cost);
    } else {
      j["oracle_skipped"] = "state dimension above cap";
    }
  }
  std::cout << j.dump(2) << "\n";
  return rep.max_abs <= tol ? kExitOk : kExitVerifyFail;
}

json simplicial_solution_json(const simp::SimplicialSolution& sol) {
  json j;
  j["t"] = sol.t;
  j["q"] = sol.spec.q;
  j["b"] = sol.spec.b;
  j["l_max"] = sol.spec.l_max;
  j["g"] = sol.g;
  j["delta"] = sol.delta;
  j["n"] = sol.n;
  json support = json::array();
  for (std::size_t k = 0; k < sol.support.size(); ++k) {
    json e;
    e["l"] = sol.support[k].entries;
    e["residue"] = sol.support[k].residue;
    std::ostringstream os;
    os << sol.f_sq[k];
    e["f_squared"] = os.str();  // exact rational as a string
    support.push_back(std::move(e));
  }
  j["support"] = std::move(support);
  return j;
}

int cmd_simplicial(const std::string& mode, int t, int q, int q_l, int b,
                   const std::string& ratio_str, int samples,
                   const std::string& out_dir, const std::string& cmdline) {
  Timer timer;
  if (mode == "lmax-table") {
    std::cout << "q,D,optimal_ratio\n";
    const int lo = (q > 0) ? q : 3;
    const int hi = (q > 0) ? q : 6;
    for (int qq = lo; qq <= hi; ++qq)
      std::cout << qq << ',' << (qq - 1) << ','
                << simp::optimal_lmax(qq - 1) << "\n";
    return kExitOk;
  }
  if (mode == "volume") {
    if (q < 3) throw CLI::ValidationError("--q", "need q >= 3");
    const int D = q - 1;
    std::cout << "ratio,volume\n";
    for (int s = 0; s <= samples; ++s) {
      const double r =
          1.0 / q + (0.5 - 1.0 / q) * static_cast<double>(s) / samples;
      std::cout << r << ',' << simp::volume(D, 1.0, r) << "\n";
    }
    return kExitOk;
  }

  const comb::Rational ratio = parse_ratio(ratio_str);
  if (ratio < comb::Rational(1, q) || ratio > comb::Rational(1, 2)) {
    std::cerr << "ratio must lie in [1/q, 1/2]\n";
    return kExitUsage;
  }
  std::optional<simp::SimplicialSolution> sol;
  if (mode == "min-b") {
    sol = simp::min_b_search(t, q, q_l, ratio);
  } else if (mode == "solve-at-b") {
    sol = simp::solve_at_b(t, q, q_l, b, ratio);
  } else {
    std::cerr << "unknown mode " << mode << "\n";
    return kExitUsage;
  }
  if (!sol) {
    std::cout << "no feasible solution\n";
    return kExitExhausted;
  }
  std::filesystem::create_directories(out_dir);
  std::cout << "b=" << sol->spec.b << " l_max=" << sol->spec.l_max
            << " n=" << sol->n << "\n";
  const std::string sol_path = out_dir + "/simplicial_solution.json";
  io::write_text_atomic(sol_path, simplicial_solution_json(*sol).dump(2) + "\n");
  CodewordTable table = simp::emit_codewords(*sol, q_l);
  const std::string code_path = out_dir + "/simplicial_code.json";
  io::CodeMetadata meta;
  meta.generator = "simplicial " + mode;
  meta.cost = kl::cost(table);
  io::write_code_file(code_path, table, meta);
  io::write_manifest(out_dir + "/manifest.json", cmdline, 0, timer.seconds(),
                     {sol_path, code_path});
  return kExitOk;
}

int cmd_scan(int n, int t, const std::string& pair_str, double step,
             std::uint64_t seed, int restarts, const std::string& out_dir,
             const std::string& cmdline) {
  Timer timer;
  const auto comma = pair_str.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--pair", "expected i,j");
  const int i = std::stoi(pair_str.substr(0, comma));
  const int j = std::stoi(pair_str.substr(comma + 1));
  opt::SearchConfig config;
  config.restarts = restarts;
  config.rng_seed = seed;
  auto points = opt::grid_scan(n, t, i, j, step, config);
  std::filesystem::create_directories(out_dir);
  std::ostringstream csv;
  csv << "a" << i << ",a" << j << ",cost,feasible\n";
  for (const auto& p : points) {
    // The three mirrored quadrants follow from the sign symmetries.
    for (const double sa : {1.0, -1.0})
      for (const double sb : {1.0, -1.0}) {
        if ((sa < 0 && p.a == 0) || (sb < 0 && p.b == 0)) continue;
        csv << sa * p.a << ',' << sb * p.b << ',' << p.cost << ','
            << (p.feasible ? 1 : 0) << '\n';
      }
  }
  const std::string csv_path = out_dir + "/scan.csv";
  io::write_text_atomic(csv_path, csv.str());
  io::write_manifest(out_dir + "/manifest.json", cmdline, seed,
                     timer.seconds(), {csv_path});
  return kExitOk;
}

int cmd_families(const std::string& name, int t, const std::string& from,
                 int q_p, const std::string& out_dir,
                 const std::string& cmdline) {
  Timer timer;
  std::filesystem::create_directories(out_dir);
  CodewordTable table(CodeParams{1, 2, 2, 0});
  std::string out_name;
  if (name == "aab") {
    table = fam::aab_code(fam::default_aab_params(t));
    out_name = "aab_t" + std::to_string(t) + ".json";
  } else if (name == "analytic7") {
    table = fam::analytic_7qubit();
    out_name = "analytic7.json";
  } else if (name == "pad") {
    if (from.empty())
      throw CLI::ValidationError("--from", "pad needs an input code file");
    io::CodeFile cf = io::read_code_file(from);
    table = fam::pad(cf.table, q_p);
    out_name = "padded_qp" + std::to_string(q_p) + ".json";
  } else {
    std::cerr << "unknown family " << name << "\n";
    return kExitUsage;
  }
  const std::string code_path = out_dir + "/" + out_name;
  io::CodeMetadata meta;
  meta.generator = "families " + name;
  meta.cost = kl::cost(table);
  io::write_code_file(code_path, table, meta);
  std::cout << "wrote " << code_path << " (n=" << table.params().n
            << ", cost=" << *meta.cost << ")\n";
  io::write_manifest(out_dir + "/manifest.json", cmdline, 0, timer.seconds(),
                     {code_path});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permutation-invariant code search and verification"};
  app.require_subcommand(1);
  const std::string cmdline = join_args(argc, argv);

  // search
  auto* search = app.add_subcommand("search", "multi-restart KL minimization");
  int s_t, s_qp = 2, s_ql = 2, s_restarts = 1000;
  std::string s_param = "complex", s_n, s_out = ".";
  std::uint64_t s_seed = 0;
  search->add_option("--t", s_t, "correctable weight")->required();
  search->add_option("--qp", s_qp, "physical local dimension");
  search->add_option("--ql", s_ql, "logical local dimension");
  search->add_option("--param", s_param, "parametrization kind");
  search->add_option("--n", s_n, "block length or range lo-hi")->required();
  search->add_option("--restarts", s_restarts, "restart budget");
  search->add_option("--seed", s_seed, "RNG seed");
  search->add_option("--out", s_out, "output directory");

  // verify
  auto* verify = app.add_subcommand("verify", "check KL conditions of a code file");
  std::string v_file;
  int v_t = -1;
  double v_tol = 1e-10;
  bool v_oracle = false;
  verify->add_option("--file", v_file, "code file")->required();
  verify->add_option("--t", v_t, "override correctable weight");
  verify->add_option("--tol", v_tol, "pass tolerance");
  verify->add_flag("--with-oracle", v_oracle, "cross-check against the dense oracle");

  // simplicial
  auto* simplicial = app.add_subcommand("simplicial", "LP-based qudit codes");
  std::string sp_mode, sp_ratio = "3/7", sp_out = ".";
  int sp_t = 1, sp_q = 0, sp_ql = 0, sp_b = 0, sp_samples = 50;
  simplicial->add_option("--mode", sp_mode, "min-b|solve-at-b|lmax-table|volume")
      ->required();
  simplicial->add_option("--t", sp_t, "correctable weight");
  simplicial->add_option("--q", sp_q, "physical local dimension");
  simplicial->add_option("--ql", sp_ql, "logical local dimension (default q)");
  simplicial->add_option("--b", sp_b, "scale parameter for solve-at-b");
  simplicial->add_option("--ratio", sp_ratio, "l_max/b as p/q");
  simplicial->add_option("--samples", sp_samples, "volume samples");
  simplicial->add_option("--out", sp_out, "output directory");

  // scan
  auto* scan = app.add_subcommand("scan", "grid scan over a fixed entry pair");
  int sc_n, sc_t, sc_restarts = 40;
  std::string sc_pair, sc_out = ".";
  double sc_step = 0.02;
  std::uint64_t sc_seed = 0;
  scan->add_option("--n", sc_n, "block length")->required();
  scan->add_option("--t", sc_t, "correctable weight")->required();
  scan->add_option("--pair", sc_pair, "fixed indices i,j")->required();
  scan->add_option("--step", sc_step, "grid step");
  scan->add_option("--seed", sc_seed, "RNG seed");
  scan->add_option("--restarts", sc_restarts, "restarts per grid point");
  scan->add_option("--out", sc_out, "output directory");

  // families
  auto* families = app.add_subcommand("families", "analytic code families");
  std::string f_name, f_from, f_out = ".";
  int f_t = 1, f_qp = 3;
  families->add_option("--name", f_name, "aab|pad|analytic7")->required();
  families->add_option("--t", f_t, "correctable weight");
  families->add_option("--from", f_from, "input code file (pad)");
  families->add_option("--qp", f_qp, "target local dimension (pad)");
  families->add_option("--out", f_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*search)
      return cmd_search(s_t, s_qp, s_ql, s_param, s_n, s_restarts, s_seed,
                        s_out, cmdline);
    if (*verify) return cmd_verify(v_file, v_t, v_tol, v_oracle);
    if (*simplicial) {
      // Without --q, lmax-table prints the whole q = 3..6 table; the other
      // modes fall back to q = 3.
      if (sp_q == 0 && sp_mode != "lmax-table") sp_q = 3;
      return cmd_simplicial(sp_mode, sp_t, sp_q, sp_ql > 0 ? sp_ql : sp_q,
                            sp_b, sp_ratio, sp_samples, sp_out, cmdline);
    }
    if (*scan)
      return cmd_scan(sc_n, sc_t, sc_pair, sc_step, sc_seed, sc_restarts,
                      sc_out, cmdline);
    if (*families)
      return cmd_families(f_name, f_t, f_from, f_qp, f_out, cmdline);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
