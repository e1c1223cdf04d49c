#include "bilin/experiment.hpp"

#include "bilin/affine.hpp"
#include "bilin/ar.hpp"
#include "bilin/error.hpp"
#include "bilin/generators.hpp"
#include "bilin/instance_io.hpp"
#include "bilin/pdb.hpp"
#include "bilin/reduction.hpp"
#include "bilin/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace bilin {

namespace {

using Json = nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string secs(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string error_tag(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return std::string(to_string(err->code()));
  return "Exception";
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    require(allowed.count(item.key()) > 0, ErrorCode::kInvalidArgument,
            "unknown key '" + item.key() + "' in " + where);
  }
}

template <class T>
void read_if(const Json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

ResultRow run_row(const ExperimentConfig& cfg, std::uint64_t seed) {
  ResultRow row;
  row.n = cfg.n;
  row.L = cfg.L;
  row.seed = seed;
  ArGeneratorOptions gopts;
  gopts.g_scale = cfg.g_scale;
  std::optional<GeneratedAr> gen;
  try {
    gen = generate_ar_instance(cfg.n, cfg.L, seed, gopts);
  } catch (const std::exception& e) {
    row.status = "generator:" + error_tag(e);
    return row;
  }
  const ArInstance& inst = gen->instance;
  row.resamples = gen->resamples;
  row.g_scale = gen->g_scale;
  const Index lr = inst.uncertainty_rows();
  row.lp_ar_vars = lp_ar_variable_count(inst.n(), lr);
  row.aff_vars = affine_variable_count(inst.n(), inst.m(), lr);

  std::vector<std::string> problems;
  try {
    const auto start = std::chrono::steady_clock::now();
    const ArThetaGamma tg = theta_gamma(inst, cfg.tol);
    row.t_tg_s = seconds_since(start);
    const auto lp_start = std::chrono::steady_clock::now();
    const ArSolution sol = solve_lp_ar(inst, tg, cfg.tol);
    row.t_lp_excl_s = seconds_since(lp_start);
    row.t_lp_s = seconds_since(start);
    row.z_lp_ar = sol.z_lp_ar;
    if (build_lp_ar(inst, tg).num_cols() != row.lp_ar_vars) problems.push_back("lp_ar_size");
  } catch (const std::exception& e) {
    problems.push_back("lp_ar:" + error_tag(e));
  }
  try {
    const AffinePolicy pol = solve_affine(inst, cfg.tol);
    row.t_aff_s = pol.seconds;
    row.z_aff = pol.z_aff;
    if (build_affine_lp(inst).num_cols() != row.aff_vars) problems.push_back("affine_size");
  } catch (const std::exception& e) {
    problems.push_back("affine:" + error_tag(e));
  }
  if (std::isfinite(row.z_lp_ar) && std::isfinite(row.z_aff)) {
    if (row.z_aff > 0.0) row.ratio = row.z_lp_ar / row.z_aff;
    else problems.push_back("z_aff_nonpositive");
  }
  if (!problems.empty()) {
    row.status.clear();
    for (const auto& p : problems) row.status += (row.status.empty() ? "" : ";") + p;
  }
  return row;
}

Vector constant(Index r, double v) { return Vector::Constant(r, v); }

}  // namespace

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kPdb: return "pdb";
    case ExperimentMode::kArVsAffine: return "ar-vs-affine";
    case ExperimentMode::kChernoff: return "chernoff";
    case ExperimentMode::kReduce: return "reduce";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  require(n >= 1 && m >= 1 && L >= 1, ErrorCode::kInvalidArgument, "n, m and L must be positive");
  require(!seeds.empty(), ErrorCode::kInvalidArgument, "seed list must not be empty");
  require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  if (mode == ExperimentMode::kArVsAffine)
    require(m == n, ErrorCode::kInvalidArgument, "ar-vs-affine instances have m = n");
  if (mode == ExperimentMode::kChernoff) {
    require(chernoff.r >= 1, ErrorCode::kInvalidArgument, "chernoff.r must be positive");
    require(chernoff.weight >= 0.0 && chernoff.weight <= 1.0, ErrorCode::kInvalidArgument,
            "chernoff.weight must lie in [0, 1]");
    require(chernoff.prob >= 0.0 && chernoff.prob <= 1.0, ErrorCode::kInvalidArgument,
            "chernoff.prob must lie in [0, 1]");
    require(chernoff.delta > 0.0, ErrorCode::kInvalidArgument, "chernoff.delta must be positive");
    require(chernoff.samples >= 10000, ErrorCode::kInvalidArgument, "chernoff.samples must be >= 10000");
  }
  if (mode == ExperimentMode::kReduce) {
    require(reduce_variables >= 1 && reduce_variables <= kMaxBruteForceVariables, ErrorCode::kInvalidArgument,
            "reduce.variables must lie in [1, " + std::to_string(kMaxBruteForceVariables) + "]");
    require(reduce_clauses >= 0, ErrorCode::kInvalidArgument, "reduce.clauses must be >= 0");
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  ExperimentConfig cfg;
  try {
    const Json j = Json::parse(json_text);
    require(j.is_object(), ErrorCode::kInvalidArgument, "config must be a JSON object");
    reject_unknown(j, {"mode", "n", "m", "L", "seeds", "epsilon", "output", "g_scale", "tolerances", "chernoff", "reduce"},
                   "config");
    if (j.contains("mode")) {
      const auto mode = j.at("mode").get<std::string>();
      if (mode == "pdb") cfg.mode = ExperimentMode::kPdb;
      else if (mode == "ar-vs-affine") cfg.mode = ExperimentMode::kArVsAffine;
      else if (mode == "chernoff") cfg.mode = ExperimentMode::kChernoff;
      else if (mode == "reduce") cfg.mode = ExperimentMode::kReduce;
      else fail(ErrorCode::kInvalidArgument, "unknown mode '" + mode + "'");
    }
    read_if(j, "n", cfg.n);
    cfg.m = cfg.n;
    read_if(j, "m", cfg.m);
    read_if(j, "L", cfg.L);
    read_if(j, "epsilon", cfg.epsilon);
    read_if(j, "output", cfg.output);
    if (j.contains("g_scale")) cfg.g_scale = j.at("g_scale").get<double>();
    if (j.contains("seeds")) {
      const Json& s = j.at("seeds");
      if (s.is_array()) {
        cfg.seeds = s.get<std::vector<std::uint64_t>>();
      } else {
        reject_unknown(s, {"first", "count"}, "seeds");
        const auto first = s.value("first", std::uint64_t{0});
        const auto count = s.at("count").get<std::uint64_t>();
        cfg.seeds.clear();
        for (std::uint64_t k = 0; k < count; ++k) cfg.seeds.push_back(first + k);
      }
    }
    if (j.contains("tolerances")) {
      const Json& t = j.at("tolerances");
      reject_unknown(t, {"feas", "opt", "pivot", "comp", "perturbation", "max_iterations"}, "tolerances");
      read_if(t, "feas", cfg.tol.feas);
      read_if(t, "opt", cfg.tol.opt);
      read_if(t, "pivot", cfg.tol.pivot);
      read_if(t, "comp", cfg.tol.comp);
      read_if(t, "perturbation", cfg.tol.perturbation);
      read_if(t, "max_iterations", cfg.tol.max_iterations);
    }
    if (j.contains("chernoff")) {
      const Json& c = j.at("chernoff");
      reject_unknown(c, {"r", "weight", "prob", "delta", "samples"}, "chernoff");
      read_if(c, "r", cfg.chernoff.r);
      read_if(c, "weight", cfg.chernoff.weight);
      read_if(c, "prob", cfg.chernoff.prob);
      read_if(c, "delta", cfg.chernoff.delta);
      read_if(c, "samples", cfg.chernoff.samples);
    }
    if (j.contains("reduce")) {
      const Json& r = j.at("reduce");
      reject_unknown(r, {"variables", "clauses"}, "reduce");
      read_if(r, "variables", cfg.reduce_variables);
      read_if(r, "clauses", cfg.reduce_clauses);
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

double median(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }),
               values.end());
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

std::vector<ResultRow> run_benchmark(const ExperimentConfig& config) {
  config.validate();
  require(config.mode == ExperimentMode::kArVsAffine, ErrorCode::kInvalidArgument,
          "run_benchmark needs mode ar-vs-affine");
  const auto count = static_cast<std::int64_t>(config.seeds.size());
  std::vector<ResultRow> rows(config.seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    rows[static_cast<std::size_t>(k)] = run_row(config, config.seeds[static_cast<std::size_t>(k)]);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.n, a.L, a.seed) < std::tie(b.n, b.L, b.seed);
  });
  return rows;
}

std::string benchmark_csv(const std::vector<ResultRow>& rows, bool include_timing) {
  std::ostringstream os;
  os << "n,L,seed,z_lp_ar,z_aff,ratio,t_lp_s,t_aff_s,status\n";
  std::vector<double> zl, za, ra, tl, ta;
  std::size_t ok = 0;
  for (const auto& r : rows) {
    os << r.n << ',' << r.L << ',' << r.seed << ',' << num(r.z_lp_ar) << ',' << num(r.z_aff) << ','
       << num(r.ratio) << ',' << (include_timing ? secs(r.t_lp_s) : "") << ','
       << (include_timing ? secs(r.t_aff_s) : "") << ',' << r.status << '\n';
    if (!r.ok()) continue;
    ++ok;
    zl.push_back(r.z_lp_ar);
    za.push_back(r.z_aff);
    ra.push_back(r.ratio);
    tl.push_back(r.t_lp_s);
    ta.push_back(r.t_aff_s);
  }
  const std::string n = rows.empty() ? "" : std::to_string(rows.front().n);
  const std::string l = rows.empty() ? "" : std::to_string(rows.front().L);
  os << n << ',' << l << ",median," << num(median(zl)) << ',' << num(median(za)) << ',' << num(median(ra)) << ','
     << (include_timing && ok ? secs(median(tl)) : "") << ',' << (include_timing && ok ? secs(median(ta)) : "")
     << ",summary:" << ok << '/' << rows.size() << "_ok\n";
  return os.str();
}

std::string benchmark_timing_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "n,L,seed,t_tg_s,t_lp_excl_s,t_lp_s,t_aff_s,lp_ar_vars,aff_vars,resamples,g_scale\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.L << ',' << r.seed << ',' << secs(r.t_tg_s) << ',' << secs(r.t_lp_excl_s) << ','
       << secs(r.t_lp_s) << ',' << secs(r.t_aff_s) << ',' << r.lp_ar_vars << ',' << r.aff_vars << ','
       << r.resamples << ',' << num(r.g_scale) << '\n';
  }
  return os.str();
}

bool ChernoffReport::within(double k) const {
  if (upper_frequency > upper_bound + k * upper_sigma) return false;
  return !has_lower || lower_frequency <= lower_bound + k * lower_sigma;
}

namespace {

constexpr long kChernoffChunk = 4096;

struct TailCounts {
  long upper = 0;
  long lower = 0;
};

ChernoffReport chernoff_setup(const Vector& weights, const Vector& probs, double delta, long samples) {
  require(weights.size() >= 1 && weights.size() == probs.size(), ErrorCode::kDimensionMismatch,
          "weights and probs must be non-empty and of equal length");
  require(weights.minCoeff() >= 0.0 && weights.maxCoeff() <= 1.0, ErrorCode::kInvalidArgument,
          "weights must lie in [0, 1]");
  require(probs.minCoeff() >= 0.0 && probs.maxCoeff() <= 1.0, ErrorCode::kInvalidArgument,
          "probs must lie in [0, 1]");
  require(delta > 0.0 && std::isfinite(delta), ErrorCode::kInvalidArgument, "delta must be positive");
  require(samples >= 10000, ErrorCode::kInvalidArgument, "at least 10000 samples are required");
  ChernoffReport rep;
  rep.samples = samples;
  rep.expectation = weights.dot(probs);
  rep.s = std::max(1.0, rep.expectation);
  rep.upper_threshold = (1.0 + delta) * rep.s;
  rep.upper_bound = std::exp(rep.s * (delta - (1.0 + delta) * std::log1p(delta)));
  rep.has_lower = delta < 1.0;
  if (rep.has_lower) {
    rep.lower_threshold = (1.0 - delta) * rep.expectation;
    rep.lower_bound = std::exp(-delta * delta * rep.expectation / 2.0);
  }
  return rep;
}

TailCounts chernoff_chunk(const Vector& weights, const Vector& probs, const ChernoffReport& rep,
                          std::uint64_t seed, long chunk) {
  Stream s = Stream(seed).split("chernoff").split(static_cast<std::uint64_t>(chunk));
  const long begin = chunk * kChernoffChunk;
  const long end = std::min(rep.samples, begin + kChernoffChunk);
  // The slack counts borderline sums as tail events, which can only make the test stricter.
  const double slack = 1e-12 * (1.0 + rep.upper_threshold);
  TailCounts c;
  for (long k = begin; k < end; ++k) {
    double xi = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
      if (s.bernoulli(probs[i])) xi += weights[i];
    }
    if (xi >= rep.upper_threshold - slack) ++c.upper;
    if (rep.has_lower && xi <= rep.lower_threshold + slack) ++c.lower;
  }
  return c;
}

void chernoff_finish(ChernoffReport& rep, const TailCounts& c) {
  const double n = static_cast<double>(rep.samples);
  rep.upper_frequency = static_cast<double>(c.upper) / n;
  rep.upper_sigma = std::sqrt(rep.upper_frequency * (1.0 - rep.upper_frequency) / n);
  if (rep.has_lower) {
    rep.lower_frequency = static_cast<double>(c.lower) / n;
    rep.lower_sigma = std::sqrt(rep.lower_frequency * (1.0 - rep.lower_frequency) / n);
  }
}

}  // namespace

ChernoffReport chernoff_check(const Vector& weights, const Vector& probs, double delta, long samples,
                              std::uint64_t seed) {
  ChernoffReport rep = chernoff_setup(weights, probs, delta, samples);
  const long chunks = (samples + kChernoffChunk - 1) / kChernoffChunk;
  long upper = 0, lower = 0;
#pragma omp parallel for schedule(static) reduction(+ : upper, lower)
  for (long k = 0; k < chunks; ++k) {
    const TailCounts c = chernoff_chunk(weights, probs, rep, seed, k);
    upper += c.upper;
    lower += c.lower;
  }
  chernoff_finish(rep, {upper, lower});
  return rep;
}

ChernoffReport chernoff_check_serial(const Vector& weights, const Vector& probs, double delta, long samples,
                                     std::uint64_t seed) {
  ChernoffReport rep = chernoff_setup(weights, probs, delta, samples);
  const long chunks = (samples + kChernoffChunk - 1) / kChernoffChunk;
  TailCounts total;
  for (long k = 0; k < chunks; ++k) {
    const TailCounts c = chernoff_chunk(weights, probs, rep, seed, k);
    total.upper += c.upper;
    total.lower += c.lower;
  }
  chernoff_finish(rep, total);
  return rep;
}

std::string chernoff_csv(const ChernoffReport& rep, const ChernoffParams& p, std::uint64_t seed) {
  std::ostringstream os;
  os << "tail,r,weight,prob,delta,samples,seed,expectation,threshold,frequency,bound,sigma,within_3sigma\n";
  auto line = [&](const char* tail, double thr, double f, double b, double sg) {
    os << tail << ',' << p.r << ',' << num(p.weight) << ',' << num(p.prob) << ',' << num(p.delta) << ','
       << rep.samples << ',' << seed << ',' << num(rep.expectation) << ',' << num(thr) << ',' << num(f) << ','
       << num(b) << ',' << num(sg) << ',' << (f <= b + 3.0 * sg ? "true" : "false") << '\n';
  };
  line("upper", rep.upper_threshold, rep.upper_frequency, rep.upper_bound, rep.upper_sigma);
  if (rep.has_lower) line("lower", rep.lower_threshold, rep.lower_frequency, rep.lower_bound, rep.lower_sigma);
  return os.str();
}

std::vector<PdbRow> run_pdb_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto count = static_cast<std::int64_t>(config.seeds.size());
  std::vector<PdbRow> rows(config.seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    PdbRow& row = rows[static_cast<std::size_t>(k)];
    row.n = config.n;
    row.m = config.m;
    row.seed = config.seeds[static_cast<std::size_t>(k)];
    try {
      const auto inst = generate_pdb_instance(config.n, config.m, config.m, row.seed).instance;
      const PdbRelaxation relax = solve_lp_pdb(inst, config.tol);
      const PdbSolution sol = round_pdb(inst, relax, RoundingConfig(config.epsilon, row.seed), config.tol);
      row.z_lp_pdb = relax.value;
      row.objective = sol.objective;
      row.found_feasible = sol.found_feasible;
      row.meets_threshold = sol.meets_threshold;
      row.near_integral = sol.near_integral;
      row.iterations_used = sol.iterations_used;
      row.best_iteration = sol.best_iteration;
      if (!sol.found_feasible) row.status = "no_feasible_iterate";
    } catch (const std::exception& e) {
      row.status = error_tag(e);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const PdbRow& a, const PdbRow& b) { return a.seed < b.seed; });
  return rows;
}

std::string pdb_csv(const std::vector<PdbRow>& rows) {
  std::ostringstream os;
  os << "n,m,seed,z_lp_pdb,objective,found_feasible,meets_threshold,near_integral,iterations_used,best_iteration,"
        "status\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.m << ',' << r.seed << ',' << num(r.z_lp_pdb) << ',' << num(r.objective) << ','
       << r.found_feasible << ',' << r.meets_threshold << ',' << r.near_integral << ',' << r.iterations_used << ','
       << r.best_iteration << ',' << r.status << '\n';
  }
  return os.str();
}

std::vector<ReduceRow> run_reduce_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ReduceRow> rows;
  for (std::uint64_t seed : config.seeds) {
    ReduceRow row;
    row.seed = seed;
    row.variables = config.reduce_variables;
    row.clauses = config.reduce_clauses;
    const auto f = random_mnae_instance(row.variables, row.clauses, seed);
    row.satisfiable = nae_satisfiable(f);
    row.zero_witness = find_zero_witness(reduce(f)).has_value();
    if (row.satisfiable != row.zero_witness) row.status = "mismatch";
    rows.push_back(row);
  }
  return rows;
}

std::string reduce_csv(const std::vector<ReduceRow>& rows) {
  std::ostringstream os;
  os << "seed,variables,clauses,nae_satisfiable,zero_witness,status\n";
  for (const auto& r : rows) {
    os << r.seed << ',' << r.variables << ',' << r.clauses << ',' << r.satisfiable << ',' << r.zero_witness << ','
       << r.status << '\n';
  }
  return os.str();
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentOutput out;
  switch (config.mode) {
    case ExperimentMode::kArVsAffine: {
      const auto rows = run_benchmark(config);
      out.csv = benchmark_csv(rows);
      out.timing_csv = benchmark_timing_csv(rows);
      out.all_ok = std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.ok(); });
      break;
    }
    case ExperimentMode::kPdb: {
      const auto rows = run_pdb_experiment(config);
      out.csv = pdb_csv(rows);
      out.all_ok = std::all_of(rows.begin(), rows.end(), [](const PdbRow& r) { return r.status == "ok"; });
      break;
    }
    case ExperimentMode::kChernoff: {
      const auto& p = config.chernoff;
      for (std::size_t k = 0; k < config.seeds.size(); ++k) {
        const auto rep = chernoff_check(constant(p.r, p.weight), constant(p.r, p.prob), p.delta, p.samples,
                                        config.seeds[k]);
        std::string csv = chernoff_csv(rep, p, config.seeds[k]);
        if (k > 0) csv.erase(0, csv.find('\n') + 1);
        out.csv += csv;
        out.all_ok = out.all_ok && rep.within();
      }
      break;
    }
    case ExperimentMode::kReduce: {
      const auto rows = run_reduce_experiment(config);
      out.csv = reduce_csv(rows);
      out.all_ok = std::all_of(rows.begin(), rows.end(), [](const ReduceRow& r) { return r.status == "ok"; });
      break;
    }
  }
  return out;
}

}  // namespace bilin
