#include "bilin/affine.hpp"
#include "bilin/ar.hpp"
#include "bilin/error.hpp"
#include "bilin/experiment.hpp"
#include "bilin/generators.hpp"
#include "bilin/instance_io.hpp"
#include "bilin/oracle.hpp"
#include "bilin/pdb.hpp"
#include "bilin/reduction.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

using namespace bilin;
using Json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitModel = 2;
constexpr int kExitCap = 3;

struct Common {
  std::uint64_t seed = 0;
  double epsilon = 0.25;
  std::string out;
  std::optional<double> tol_feas;
  std::string config;
};

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

Json to_json(const ExtendedReal& v) { return v.infinite ? Json(nullptr) : Json(v.value); }

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  write_text_file(path, text);
  spdlog::info("wrote {}", path);
}

void emit(const std::string& path, const Json& j) { emit(path, j.dump(2) + "\n"); }

// Defaults from --config, then explicit flags on top.
ExperimentConfig base_config(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  return cfg;
}

SolverTolerances tolerances(const Common& c, const ExperimentConfig& cfg) {
  SolverTolerances tol = cfg.tol;
  if (c.tol_feas) tol.feas = *c.tol_feas;
  return tol;
}

template <class T>
T load_kind(const std::string& path) {
  AnyInstance any = read_instance_file(path);
  const T* inst = std::get_if<T>(&any);
  require(inst != nullptr, ErrorCode::kInvalidArgument,
          path + ": expected kind " + (std::is_same_v<T, PdbInstance> ? "pdb" : "ar"));
  return *inst;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidArgument, "bad number '" + tok + "' in list");
    }
  }
  return out;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasibleRestriction:
    case ErrorCode::kModelError:
    case ErrorCode::kUnboundedCoordinate:
      return kExitModel;
    case ErrorCode::kEnumerationTooLarge:
    case ErrorCode::kTooManyVariables:
      return kExitCap;
    default:
      return kExitFailure;
  }
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("bilin");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("BILIN_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept names it round-trips.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
    else spdlog::warn("ignoring BILIN_LOG={}", env);
  }
}

void add_common(CLI::App* sub, Common& c, bool epsilon = false) {
  sub->add_option("--seed", c.seed, "Master seed");
  if (epsilon) sub->add_option("--epsilon", c.epsilon, "Failure probability epsilon in (0, 1)");
  sub->add_option("--out", c.out, "Output path (default stdout)");
  sub->add_option("--tol-feas", c.tol_feas, "Primal feasibility tolerance");
  sub->add_option("--config", c.config, "JSON config supplying defaults");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Bilinear and two-stage robust optimization toolkit"};
  app.require_subcommand(1);
  Common c;

  std::string instance_path;
  auto* pdb = app.add_subcommand("solve-pdb", "Solve LP-PDB and round it to a near-integral solution");
  pdb->add_option("instance", instance_path, "Instance file (kind pdb)")->required();
  add_common(pdb, c, true);

  bool evaluate = false, separation = false;
  auto* ar = app.add_subcommand("solve-ar", "Solve the LP-AR restriction");
  ar->add_option("instance", instance_path, "Instance file (kind ar)")->required();
  ar->add_flag("--evaluate", evaluate, "Also compute c^T x + Q(x) exactly by vertex enumeration");
  ar->add_flag("--separation", separation, "Also round the separation LP at the LP-AR point");
  add_common(ar, c);

  auto* aff = app.add_subcommand("solve-affine", "Solve the affine-policy robust counterpart");
  aff->add_option("instance", instance_path, "Instance file (kind ar)")->required();
  add_common(aff, c);

  Index bench_n = 0, bench_l = 0;
  std::uint64_t bench_count = 0;
  std::optional<double> g_scale;
  auto* bench = app.add_subcommand("bench", "Run an experiment and write its CSV");
  bench->add_option("--n", bench_n, "Dimension n = m");
  bench->add_option("--L", bench_l, "Number of budget rows");
  bench->add_option("--seeds", bench_count, "Use seeds seed, seed+1, ..., seed+count-1");
  bench->add_option("--g-scale", g_scale, "Scale of the Gaussian perturbation G");
  add_common(bench, c, true);

  ChernoffParams ch;
  auto* chern = app.add_subcommand("chernoff", "Monte-Carlo check of the Chernoff tail bounds");
  chern->add_option("--r", ch.r, "Number of trials");
  chern->add_option("--weight", ch.weight, "Common weight in [0, 1]");
  chern->add_option("--prob", ch.prob, "Common success probability");
  chern->add_option("--delta", ch.delta, "Deviation delta > 0");
  chern->add_option("--samples", ch.samples, "Number of samples (>= 10000)");
  add_common(chern, c);

  bool check = false;
  auto* red = app.add_subcommand("reduce", "Build the covering bilinear instance from a p mnae formula");
  red->add_option("formula", instance_path, "Formula file")->required();
  red->add_flag("--check", check, "Also decide NAE satisfiability and the zero witness by exhaustion");
  add_common(red, c);

  std::string x_list;
  std::uint64_t cap = EnumerationOptions{}.cap;
  auto* orc = app.add_subcommand("oracle", "Exact optimum by vertex enumeration");
  orc->add_option("instance", instance_path, "Instance file (pdb or ar)")->required();
  orc->add_option("--x", x_list, "First-stage x for ar instances, comma separated (default: LP-AR x)");
  orc->add_option("--cap", cap, "Vertex enumeration cap");
  add_common(orc, c);

  std::string gen_kind;
  Index gen_n = 1, gen_m1 = 1, gen_m2 = 1, gen_l = 1;
  auto* gen = app.add_subcommand("generate", "Write a random instance file");
  gen->add_option("kind", gen_kind, "pdb or ar")->required()->check(CLI::IsMember({"pdb", "ar"}));
  gen->add_option("--n", gen_n, "Dimension");
  gen->add_option("--m1", gen_m1, "Rows of the x polytope (pdb)");
  gen->add_option("--m2", gen_m2, "Rows of the y polytope (pdb)");
  gen->add_option("--L", gen_l, "Budget rows (ar)");
  gen->add_option("--g-scale", g_scale, "Scale of the Gaussian perturbation G (ar)");
  add_common(gen, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFailure;
  }

  try {
    const ExperimentConfig cfg = base_config(c);
    const SolverTolerances tol = tolerances(c, cfg);
    const bool epsilon_given = pdb->count("--epsilon") + bench->count("--epsilon") > 0;
    const double epsilon = epsilon_given || c.config.empty() ? c.epsilon : cfg.epsilon;

    if (pdb->parsed()) {
      const auto inst = load_kind<PdbInstance>(instance_path);
      const PdbRelaxation relax = solve_lp_pdb(inst, tol);
      const PdbSolution sol = round_pdb(inst, relax, RoundingConfig(epsilon, c.seed), tol);
      spdlog::info("LP-PDB {} ; best of {} iterations {}", relax.value, sol.iterations_used, sol.objective);
      emit(c.out, Json{{"z_lp_pdb", relax.value},
                       {"objective", sol.objective},
                       {"found_feasible", sol.found_feasible},
                       {"meets_threshold", sol.meets_threshold},
                       {"near_integral", sol.near_integral},
                       {"iterations_used", sol.iterations_used},
                       {"best_iteration", sol.best_iteration},
                       {"zeta_x", sol.zeta_x},
                       {"zeta_y", sol.zeta_y},
                       {"theta", to_json(relax.theta)},
                       {"gamma", to_json(relax.gamma)},
                       {"omega", to_json(relax.omega)},
                       {"x", to_json(sol.x)},
                       {"y", to_json(sol.y)}});
      return kExitOk;
    }

    if (ar->parsed()) {
      const auto inst = load_kind<ArInstance>(instance_path);
      const ArSolution sol = solve_lp_ar(inst, tol);
      Json j{{"z_lp_ar", sol.z_lp_ar},
             {"eta", sol.tg.eta},
             {"beta", sol.tg.beta},
             {"lp_iterations", sol.lp_iterations},
             {"x", to_json(sol.x)},
             {"y0", to_json(sol.y0)},
             {"y", to_json(sol.y)},
             {"alpha", to_json(sol.alpha)},
             {"theta", to_json(sol.tg.theta)},
             {"gamma", to_json(sol.tg.gamma)}};
      if (evaluate) {
        const double v = evaluate_first_stage(inst, sol.x, {}, tol);
        j["first_stage_cost"] = std::isfinite(v) ? Json(v) : Json(nullptr);
      }
      if (separation) {
        const SeparationPoint sp = round_separation(inst, sol.tg, sol.x, sol.y0, c.seed, tol);
        j["separation"] = Json{{"h", to_json(sp.h)},           {"z", to_json(sp.z)},
                               {"objective", sp.objective},    {"qlp_value", sp.qlp_value},
                               {"success", sp.success},        {"attempts", sp.attempts}};
      }
      emit(c.out, j);
      return kExitOk;
    }

    if (aff->parsed()) {
      const auto inst = load_kind<ArInstance>(instance_path);
      const AffinePolicy pol = solve_affine(inst, tol);
      spdlog::info("affine counterpart solved in {:.3f} s, {} pivots", pol.seconds, pol.lp_iterations);
      emit(c.out, Json{{"z_aff", pol.z_aff},
                       {"seconds", pol.seconds},
                       {"lp_iterations", pol.lp_iterations},
                       {"x", to_json(pol.x)},
                       {"y0", to_json(pol.y0)},
                       {"Y", to_json(pol.y)}});
      return kExitOk;
    }

    if (bench->parsed()) {
      ExperimentConfig run = cfg;
      if (c.config.empty()) run.mode = ExperimentMode::kArVsAffine;
      if (bench_n > 0) run.n = run.m = bench_n;
      if (bench_l > 0) run.L = bench_l;
      if (bench->count("--seed") || bench_count > 0) {
        run.seeds.clear();
        for (std::uint64_t k = 0; k < std::max<std::uint64_t>(bench_count, 1); ++k) run.seeds.push_back(c.seed + k);
      }
      if (g_scale) run.g_scale = g_scale;
      run.epsilon = epsilon;
      run.tol = tol;
      if (!c.out.empty()) run.output = c.out;
      spdlog::info("mode {} n={} L={} seeds={} g_scale={}", to_string(run.mode), run.n, run.L, run.seeds.size(),
                   run.g_scale ? std::to_string(*run.g_scale) : "1/sqrt(m)");
      const ExperimentOutput out = run_experiment(run);
      emit(run.output, out.csv);
      if (!out.timing_csv.empty() && !run.output.empty() && run.output != "-")
        emit(run.output + ".timing.csv", out.timing_csv);
      if (!out.all_ok) spdlog::warn("some rows did not finish cleanly; see the status column");
      return kExitOk;
    }

    if (chern->parsed()) {
      ChernoffParams p = c.config.empty() ? ch : cfg.chernoff;
      if (chern->count("--r")) p.r = ch.r;
      if (chern->count("--weight")) p.weight = ch.weight;
      if (chern->count("--prob")) p.prob = ch.prob;
      if (chern->count("--delta")) p.delta = ch.delta;
      if (chern->count("--samples")) p.samples = ch.samples;
      const auto rep = chernoff_check(Vector::Constant(p.r, p.weight), Vector::Constant(p.r, p.prob), p.delta,
                                      p.samples, c.seed);
      emit(c.out, chernoff_csv(rep, p, c.seed));
      return kExitOk;
    }

    if (red->parsed()) {
      const MnaeInstance f = parse_mnae(read_text_file(instance_path));
      const CdbInstance cdb = reduce(f);
      std::string text = write_cdb(cdb);
      if (check) {
        const bool sat = nae_satisfiable(f);
        const bool witness = find_zero_witness(cdb).has_value();
        text += "# nae_satisfiable: " + std::string(sat ? "true" : "false") +
                "\n# zero_witness: " + std::string(witness ? "true" : "false") + "\n";
        if (sat != witness) spdlog::error("satisfiability and zero witness disagree");
      }
      emit(c.out, text);
      return kExitOk;
    }

    if (orc->parsed()) {
      EnumerationOptions opts;
      opts.cap = cap;
      AnyInstance any = read_instance_file(instance_path);
      if (const auto* p = std::get_if<PdbInstance>(&any)) {
        emit(c.out, Json{{"z_pdb", exact_pdb(*p, opts)}});
        return kExitOk;
      }
      const auto& inst = std::get<ArInstance>(any);
      Vector x;
      if (x_list.empty()) {
        x = solve_lp_ar(inst, tol).x;
      } else {
        const auto vals = parse_list(x_list);
        require(static_cast<Index>(vals.size()) == inst.n(), ErrorCode::kDimensionMismatch,
                "--x needs " + std::to_string(inst.n()) + " entries");
        x = Eigen::Map<const Vector>(vals.data(), inst.n());
      }
      const ExactQ q = exact_q(inst, x, opts, tol);
      emit(c.out, Json{{"x", to_json(x)},
                       {"q", to_json(q.value)},
                       {"first_stage_cost", q.value.infinite ? Json(nullptr) : Json(inst.c().dot(x) + q.value.value)},
                       {"worst_h", to_json(q.worst_h)}});
      return kExitOk;
    }

    if (gen->parsed()) {
      if (gen_kind == "pdb") {
        const auto g = generate_pdb_instance(gen_n, gen_m1, gen_m2, c.seed);
        if (g.patched_columns) spdlog::info("patched {} zero columns", g.patched_columns);
        emit(c.out, write_instance(g.instance));
      } else {
        ArGeneratorOptions opts;
        opts.g_scale = g_scale ? g_scale : cfg.g_scale;
        const auto g = generate_ar_instance(gen_n, gen_l, c.seed, opts);
        spdlog::info("g_scale {} after {} resamples", g.g_scale, g.resamples);
        emit(c.out, write_instance(g.instance));
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
