#include "bilin/lp.hpp"

#include "bilin/error.hpp"
#include "bilin/kernels.hpp"
#include "bilin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace bilin {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

LpProblem LpProblem::create(Sense sense, Index num_cols, Index num_rows) {
  LpProblem p;
  p.sense = sense;
  p.objective = Vector::Zero(num_cols);
  p.rows = Matrix::Zero(num_rows, num_cols);
  p.relations.assign(static_cast<std::size_t>(num_rows), RowRelation::kLessEqual);
  p.rhs = Vector::Zero(num_rows);
  p.lower = Vector::Zero(num_cols);
  p.upper = Vector::Constant(num_cols, kInf);
  return p;
}

void LpProblem::set_row(Index i, RowRelation relation, double rhs_value) {
  relations[static_cast<std::size_t>(i)] = relation;
  rhs[i] = rhs_value;
}

void LpProblem::validate() const {
  const Index n = num_cols();
  const Index m = num_rows();
  require(rows.rows() == m && rows.cols() == n, ErrorCode::kDimensionMismatch,
          "constraint matrix is " + std::to_string(rows.rows()) + "x" + std::to_string(rows.cols()) +
              ", expected " + std::to_string(m) + "x" + std::to_string(n));
  require(static_cast<Index>(relations.size()) == m, ErrorCode::kDimensionMismatch,
          "relation count differs from row count");
  require(lower.size() == n && upper.size() == n, ErrorCode::kDimensionMismatch,
          "bound vectors differ from column count");
  require(variable_names.empty() || static_cast<Index>(variable_names.size()) == n,
          ErrorCode::kDimensionMismatch, "variable name count differs from column count");
  require(row_names.empty() || static_cast<Index>(row_names.size()) == m, ErrorCode::kDimensionMismatch,
          "row name count differs from row count");
  for (Index j = 0; j < n; ++j) {
    require(!(lower[j] > upper[j]) && !std::isnan(lower[j]) && !std::isnan(upper[j]),
            ErrorCode::kInvalidArgument, "bounds of column " + std::to_string(j) + " are inverted");
    require(lower[j] < kInf && upper[j] > -kInf, ErrorCode::kInvalidArgument,
            "column " + std::to_string(j) + " has an empty domain");
    require(std::isfinite(objective[j]), ErrorCode::kInvalidArgument, "objective must be finite");
  }
  require(rows.allFinite() && rhs.allFinite(), ErrorCode::kInvalidArgument, "constraint data must be finite");
}

std::string LpProblem::variable_name(Index j) const {
  if (!variable_names.empty()) return variable_names[static_cast<std::size_t>(j)];
  return "x" + std::to_string(j + 1);
}

std::string LpProblem::row_name(Index i) const {
  if (!row_names.empty()) return row_names[static_cast<std::size_t>(i)];
  return "c" + std::to_string(i + 1);
}

double primal_residual(const LpProblem& problem, const Vector& x) {
  double worst = 0.0;
  const Vector ax = problem.rows * x;
  for (Index i = 0; i < problem.num_rows(); ++i) {
    const double scale = 1.0 + std::abs(problem.rhs[i]);
    double v = 0.0;
    switch (problem.relations[static_cast<std::size_t>(i)]) {
      case RowRelation::kLessEqual: v = ax[i] - problem.rhs[i]; break;
      case RowRelation::kGreaterEqual: v = problem.rhs[i] - ax[i]; break;
      case RowRelation::kEqual: v = std::abs(ax[i] - problem.rhs[i]); break;
    }
    worst = std::max(worst, v / scale);
  }
  for (Index j = 0; j < problem.num_cols(); ++j) {
    if (std::isfinite(problem.lower[j]))
      worst = std::max(worst, (problem.lower[j] - x[j]) / (1.0 + std::abs(problem.lower[j])));
    if (std::isfinite(problem.upper[j]))
      worst = std::max(worst, (x[j] - problem.upper[j]) / (1.0 + std::abs(problem.upper[j])));
  }
  return worst;
}

namespace {

// Internal standard form: min cs^T xs, S xs (+slack/surplus/artificial) = beta,
// xs >= 0, beta >= 0.
//
// Each original column j maps onto one or two standard columns with
//   x_j = offset_j + sum_k sign_k * xs_k.
// Finite lower: offset = lower, sign +1 (plus an upper-bound row if upper is
// finite). Only a finite upper: offset = upper, sign -1. Free: split +1/-1.
struct StandardForm {
  Index num_orig_rows = 0;
  Index num_struct = 0;
  Matrix s;
  Vector beta;
  Vector cost;
  std::vector<RowRelation> relation;  // after normalization, beta >= 0
  std::vector<double> row_sign;      // +1 or -1 per standard row
  std::vector<Index> col_orig;
  std::vector<double> col_sign;
  Vector offset;
  double objective_sign = 1.0;  // +1 minimize, -1 maximize
};

StandardForm to_standard(const LpProblem& p) {
  StandardForm sf;
  const Index n = p.num_cols();
  const Index m = p.num_rows();
  sf.num_orig_rows = m;
  sf.objective_sign = p.sense == Sense::kMinimize ? 1.0 : -1.0;
  sf.offset = Vector::Zero(n);

  std::vector<std::pair<Index, double>> ub_rows;  // (standard column, bound)
  for (Index j = 0; j < n; ++j) {
    const bool lo = std::isfinite(p.lower[j]);
    const bool hi = std::isfinite(p.upper[j]);
    if (lo) {
      sf.offset[j] = p.lower[j];
      sf.col_orig.push_back(j);
      sf.col_sign.push_back(1.0);
      if (hi) ub_rows.emplace_back(static_cast<Index>(sf.col_orig.size()) - 1, p.upper[j] - p.lower[j]);
    } else if (hi) {
      sf.offset[j] = p.upper[j];
      sf.col_orig.push_back(j);
      sf.col_sign.push_back(-1.0);
    } else {
      sf.col_orig.push_back(j);
      sf.col_sign.push_back(1.0);
      sf.col_orig.push_back(j);
      sf.col_sign.push_back(-1.0);
    }
  }
  sf.num_struct = static_cast<Index>(sf.col_orig.size());
  const Index rows = m + static_cast<Index>(ub_rows.size());
  sf.s = Matrix::Zero(rows, sf.num_struct);
  sf.beta = Vector::Zero(rows);
  sf.cost = Vector::Zero(sf.num_struct);
  sf.relation.assign(static_cast<std::size_t>(rows), RowRelation::kLessEqual);
  sf.row_sign.assign(static_cast<std::size_t>(rows), 1.0);

  const Vector shift = p.rows * sf.offset;
  for (Index k = 0; k < sf.num_struct; ++k) {
    const Index j = sf.col_orig[static_cast<std::size_t>(k)];
    const double sign = sf.col_sign[static_cast<std::size_t>(k)];
    sf.cost[k] = sf.objective_sign * sign * p.objective[j];
    for (Index i = 0; i < m; ++i) sf.s(i, k) = sign * p.rows(i, j);
  }
  for (Index i = 0; i < m; ++i) {
    sf.beta[i] = p.rhs[i] - shift[i];
    sf.relation[static_cast<std::size_t>(i)] = p.relations[static_cast<std::size_t>(i)];
  }
  for (std::size_t u = 0; u < ub_rows.size(); ++u) {
    const Index i = m + static_cast<Index>(u);
    sf.s(i, ub_rows[u].first) = 1.0;
    sf.beta[i] = ub_rows[u].second;
  }

  auto flip = [&](Index i) {
    sf.s.row(i) *= -1.0;
    sf.beta[i] = -sf.beta[i];
    sf.row_sign[static_cast<std::size_t>(i)] *= -1.0;
    auto& rel = sf.relation[static_cast<std::size_t>(i)];
    if (rel == RowRelation::kLessEqual) rel = RowRelation::kGreaterEqual;
    else if (rel == RowRelation::kGreaterEqual) rel = RowRelation::kLessEqual;
  };
  for (Index i = 0; i < rows; ++i) {
    if (sf.beta[i] < 0.0) flip(i);
    // A >= row with zero right-hand side starts feasible as a <= row with a slack.
    if (sf.beta[i] == 0.0 && sf.relation[static_cast<std::size_t>(i)] == RowRelation::kGreaterEqual) flip(i);
  }
  return sf;
}

class Simplex {
 public:
  Simplex(const StandardForm& sf, const SolverTolerances& tol) : sf_(sf), tol_(tol) {
    rows_ = static_cast<std::size_t>(sf.s.rows());
    nstruct_ = static_cast<std::size_t>(sf.num_struct);

    // Column layout: [structural | slack/surplus | artificial | rhs].
    slack_of_row_.assign(rows_, kNone);
    art_of_row_.assign(rows_, kNone);
    std::size_t next = nstruct_;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (sf.relation[i] != RowRelation::kEqual) slack_of_row_[i] = next++;
    }
    first_art_ = next;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (sf.relation[i] != RowRelation::kLessEqual) art_of_row_[i] = next++;
    }
    ncols_ = next;
    rhs_col_ = ncols_;
    delta_col_ = ncols_ + 1;
    obj_row_ = rows_;
    phase1_row_ = rows_ + 1;

    // The delta column carries B^-1 times the rhs perturbation, so the
    // unperturbed basic values are always rhs - delta.
    t_ = Tableau(rows_ + 2, ncols_ + 2);
    basis_.assign(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double* row = t_.row(i);
      for (std::size_t k = 0; k < nstruct_; ++k) row[k] = sf.s(static_cast<Index>(i), static_cast<Index>(k));
      row[rhs_col_] = sf.beta[static_cast<Index>(i)];
      if (sf.relation[i] == RowRelation::kLessEqual && tol.perturbation > 0.0) {
        const double u = static_cast<double>(mix64(i + 1) >> 11) * 0x1.0p-53;
        const double delta = tol.perturbation * (1.0 + std::abs(row[rhs_col_])) * (0.5 + 0.5 * u);
        row[rhs_col_] += delta;
        row[delta_col_] = delta;
      }
      if (slack_of_row_[i] != kNone) {
        row[slack_of_row_[i]] = sf.relation[i] == RowRelation::kLessEqual ? 1.0 : -1.0;
      }
      if (art_of_row_[i] != kNone) {
        row[art_of_row_[i]] = 1.0;
        basis_[i] = art_of_row_[i];
      } else {
        basis_[i] = slack_of_row_[i];
      }
    }
    double* obj = t_.row(obj_row_);
    for (std::size_t k = 0; k < nstruct_; ++k) obj[k] = sf.cost[static_cast<Index>(k)];
    double* ph1 = t_.row(phase1_row_);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (art_of_row_[i] == kNone) continue;
      const double* row = t_.row(i);
      for (std::size_t j = 0; j < first_art_; ++j) ph1[j] -= row[j];
      ph1[rhs_col_] -= row[rhs_col_];
      ph1[delta_col_] -= row[delta_col_];
    }

    const std::size_t cells = t_.rows() * t_.cols();
    use_parallel_ = cells >= tol.parallel_pivot_cells;
    max_iterations_ = tol.max_iterations > 0 ? tol.max_iterations
                                             : 50 * static_cast<long>(rows_ + ncols_) + 1000;
    degenerate_limit_ = 3 * static_cast<long>(rows_ + ncols_);
  }

  LpStatus run() {
    if (first_art_ != ncols_) {
      if (iterate(phase1_row_, ncols_) == LpStatus::kUnbounded)
        fail(ErrorCode::kNumericalBreakdown, "phase-one objective diverged");
      double scale = 1.0;
      for (Index i = 0; i < sf_.beta.size(); ++i) scale = std::max(scale, std::abs(sf_.beta[i]));
      if (-t_(phase1_row_, rhs_col_) > tol_.feas * scale) return LpStatus::kInfeasible;
      drive_out_artificials();
    }
    const LpStatus status = iterate(obj_row_, first_art_);
    if (status == LpStatus::kOptimal) remove_perturbation();
    return status;
  }

  long iterations() const { return iterations_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  std::size_t num_struct() const { return nstruct_; }
  std::size_t slack_col(std::size_t i) const { return slack_of_row_[i]; }
  std::size_t art_col(std::size_t i) const { return art_of_row_[i]; }
  std::size_t first_artificial() const { return first_art_; }
  double tableau_value(std::size_t row) const { return t_(row, rhs_col_); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void do_pivot(std::size_t r, std::size_t s) {
    if (use_parallel_) pivot_parallel(t_, r, s);
    else pivot_serial(t_, r, s);
    basis_[r] = s;
    ++iterations_;
  }

  // Columns [0, allowed) may enter.
  LpStatus iterate(std::size_t objective_row, std::size_t allowed) {
    long degenerate_run = 0;
    bool bland = false;
    for (;;) {
      if (iterations_ >= max_iterations_)
        fail(ErrorCode::kNumericalBreakdown, "iteration limit " + std::to_string(max_iterations_) + " reached");

      const double* d = t_.row(objective_row);
      std::size_t enter = kNone;
      double best = -tol_.opt;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (d[j] < best) {
          enter = j;
          if (bland) break;
          best = d[j];
        }
      }
      if (enter == kNone) return LpStatus::kOptimal;

      std::size_t leave = kNone;
      double best_ratio = kInf;
      bool tiny_only = false;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = t_(r, enter);
        if (a <= tol_.pivot) {
          if (a > 0.0) tiny_only = true;
          continue;
        }
        const double ratio = std::max(t_(r, rhs_col_), 0.0) / a;
        const double tie = 1e-12 * (1.0 + best_ratio);
        if (leave == kNone || ratio < best_ratio - tie) {
          leave = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tie) {
          const bool better = bland ? basis_[r] < basis_[leave] : a > t_(leave, enter);
          if (better) {
            leave = r;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leave == kNone) {
        if (!tiny_only) return LpStatus::kUnbounded;
        if (bland)
          fail(ErrorCode::kNumericalBreakdown,
               "entering column " + std::to_string(enter) + " has only pivots below pivot tolerance");
        bland = true;
        continue;
      }

      const bool degenerate = t_(leave, rhs_col_) <= tol_.pivot;
      do_pivot(leave, enter);
      if (degenerate) {
        if (++degenerate_run > degenerate_limit_) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < first_art_) continue;
      std::size_t best = kNone;
      double best_abs = tol_.pivot;
      const double* row = t_.row(r);
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (std::abs(row[j]) > best_abs) {
          best_abs = std::abs(row[j]);
          best = j;
        }
      }
      if (best == kNone) continue;  // redundant row; the artificial stays basic at zero
      t_(r, rhs_col_) = 0.0;
      t_(r, delta_col_) = 0.0;
      do_pivot(r, best);
    }
  }

  // Drops the perturbation from the rhs column. The basis stays dual
  // feasible, so any basic value pushed below zero is repaired by dual
  // simplex pivots on the most negative row.
  void remove_perturbation() {
    for (std::size_t r = 0; r < rows_ + 2; ++r) {
      t_(r, rhs_col_) -= t_(r, delta_col_);
      t_(r, delta_col_) = 0.0;
    }
    const double* d = t_.row(obj_row_);
    for (;;) {
      if (iterations_ >= max_iterations_)
        fail(ErrorCode::kNumericalBreakdown, "iteration limit " + std::to_string(max_iterations_) + " reached");
      std::size_t leave = kNone;
      double worst = -tol_.feas;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double v = t_(r, rhs_col_) / (1.0 + std::abs(sf_.beta[static_cast<Index>(r)]));
        if (v < worst) {
          worst = v;
          leave = r;
        }
      }
      if (leave == kNone) return;
      const double* row = t_.row(leave);
      std::size_t enter = kNone;
      double best_ratio = kInf;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (row[j] >= -tol_.pivot) continue;
        const double ratio = std::max(d[j], 0.0) / -row[j];
        if (enter == kNone || ratio < best_ratio - 1e-12 * (1.0 + best_ratio) ||
            (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio) && -row[j] > -row[enter])) {
          enter = j;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      // No negative entry: the row proves infeasibility of the unperturbed
      // problem, which phase one ruled out up to tolerance. Stop and let the
      // residual check decide.
      if (enter == kNone) return;
      do_pivot(leave, enter);
    }
  }

  const StandardForm& sf_;
  const SolverTolerances& tol_;
  Tableau t_;
  std::size_t rows_ = 0, nstruct_ = 0, ncols_ = 0, first_art_ = 0;
  std::size_t rhs_col_ = 0, delta_col_ = 0, obj_row_ = 0, phase1_row_ = 0;
  std::vector<std::size_t> slack_of_row_, art_of_row_, basis_;
  bool use_parallel_ = false;
  long iterations_ = 0;
  long max_iterations_ = 0;
  long degenerate_limit_ = 0;
};

// Column `col` of the full standard-form matrix [S | slack/surplus | artificial].
Vector standard_column(const StandardForm& sf, const Simplex& spx, std::size_t col) {
  const Index rows = sf.s.rows();
  if (col < spx.num_struct()) return sf.s.col(static_cast<Index>(col));
  Vector e = Vector::Zero(rows);
  for (Index i = 0; i < rows; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (spx.slack_col(ui) == col) {
      e[i] = sf.relation[ui] == RowRelation::kLessEqual ? 1.0 : -1.0;
      return e;
    }
    if (spx.art_col(ui) == col) {
      e[i] = 1.0;
      return e;
    }
  }
  return e;
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SolverTolerances& tol) {
  problem.validate();
  const StandardForm sf = to_standard(problem);
  Simplex spx(sf, tol);

  LpSolution out;
  out.status = spx.run();
  out.iterations = spx.iterations();
  if (!out.optimal()) return out;

  const Index rows = sf.s.rows();
  const auto& basis = spx.basis();
  Vector xs_tab = Vector::Zero(sf.num_struct);
  Vector xs_lu = Vector::Zero(sf.num_struct);
  Vector ystd = Vector::Zero(rows);
  for (Index i = 0; i < rows; ++i) {
    const auto b = basis[static_cast<std::size_t>(i)];
    if (b < spx.num_struct()) xs_tab[static_cast<Index>(b)] = spx.tableau_value(static_cast<std::size_t>(i));
  }

  // Recompute the basic solution and the duals from the final basis itself.
  if (rows > 0) {
    Matrix basis_matrix(rows, rows);
    Vector cb = Vector::Zero(rows);
    for (Index i = 0; i < rows; ++i) {
      const auto b = basis[static_cast<std::size_t>(i)];
      basis_matrix.col(i) = standard_column(sf, spx, b);
      if (b < spx.num_struct()) cb[i] = sf.cost[static_cast<Index>(b)];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const Vector xb = lu.solve(sf.beta);
    ystd = lu.transpose().solve(cb);
    for (Index i = 0; i < rows; ++i) {
      const auto b = basis[static_cast<std::size_t>(i)];
      if (b < spx.num_struct()) xs_lu[static_cast<Index>(b)] = xb[i];
    }
  }

  auto to_original = [&](const Vector& xs) {
    Vector x = sf.offset;
    for (Index k = 0; k < sf.num_struct; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      x[sf.col_orig[uk]] += sf.col_sign[uk] * xs[k];
    }
    return x;
  };
  const Vector x_tab = to_original(xs_tab);
  const Vector x_lu = to_original(xs_lu);
  const double res_tab = primal_residual(problem, x_tab);
  const double res_lu = x_lu.allFinite() ? primal_residual(problem, x_lu) : kInf;
  out.primal = res_lu <= res_tab ? x_lu : x_tab;
  const double residual = std::min(res_lu, res_tab);
  if (residual > tol.feas)
    fail(ErrorCode::kNumericalBreakdown, "final primal residual " + std::to_string(residual) + " exceeds feas_tol");

  const Index m = problem.num_rows();
  const Index n = problem.num_cols();
  out.duals = Vector::Zero(m);
  for (Index i = 0; i < m; ++i)
    out.duals[i] = sf.objective_sign * sf.row_sign[static_cast<std::size_t>(i)] * ystd[i];
  if (!out.duals.allFinite()) out.duals.setZero();
  out.reduced_costs = problem.objective - problem.rows.transpose() * out.duals;
  out.objective = problem.objective.dot(out.primal);

  double dual_obj = problem.rhs.dot(out.duals);
  const bool maximize = problem.sense == Sense::kMaximize;
  for (Index j = 0; j < n; ++j) {
    const double rc = out.reduced_costs[j];
    const double bound = (rc > 0.0) == maximize ? problem.upper[j] : problem.lower[j];
    if (std::isfinite(bound)) dual_obj += rc * bound;
    else if (std::abs(rc) > tol.opt * (1.0 + std::abs(problem.objective[j])))
      dual_obj += maximize ? kInf : -kInf;
  }
  out.dual_objective = dual_obj;
  return out;
}

// ---------------------------------------------------------------------------
// LP text format

namespace {

std::string fmt_num(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& tok) {
  if (tok == "+inf" || tok == "inf") return kInf;
  if (tok == "-inf") return -kInf;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  require(end != tok.c_str() && *end == '\0', ErrorCode::kParseError, "bad number '" + tok + "'");
  return v;
}

bool valid_name(const std::string& s) {
  if (s.empty() || s == "0" || s == "+" || s == "-" || s.find(':') != std::string::npos) return false;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

template <class Row>
void write_expr(std::ostringstream& os, const LpProblem& p, const Row& coeffs,
                const std::vector<std::string>& names) {
  bool any = false;
  for (Index j = 0; j < p.num_cols(); ++j) {
    const double a = coeffs[j];
    if (a == 0.0) continue;
    os << (std::signbit(a) ? " - " : " + ") << fmt_num(std::abs(a)) << ' ' << names[static_cast<std::size_t>(j)];
    any = true;
  }
  if (!any) os << " 0";
}

}  // namespace

std::string export_lp(const LpProblem& problem) {
  problem.validate();
  std::vector<std::string> names;
  bool names_ok = true;
  for (Index j = 0; j < problem.num_cols(); ++j) {
    names.push_back(problem.variable_name(j));
    names_ok = names_ok && valid_name(names.back());
  }
  {
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    names_ok = names_ok && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }
  if (!names_ok) {
    for (Index j = 0; j < problem.num_cols(); ++j) names[static_cast<std::size_t>(j)] = "x" + std::to_string(j + 1);
  }

  std::ostringstream os;
  os << "\\ bilin LP export: " << problem.num_cols() << " columns, " << problem.num_rows() << " rows\n";
  os << (problem.sense == Sense::kMaximize ? "Maximize\n" : "Minimize\n");
  os << " obj:";
  write_expr(os, problem, problem.objective, names);
  os << '\n';
  if (problem.num_rows() > 0) {
    os << "Subject To\n";
    for (Index i = 0; i < problem.num_rows(); ++i) {
      std::string rn = problem.row_name(i);
      if (!valid_name(rn)) rn = "c" + std::to_string(i + 1);
      os << ' ' << rn << ':';
      write_expr(os, problem, problem.rows.row(i), names);
      switch (problem.relations[static_cast<std::size_t>(i)]) {
        case RowRelation::kLessEqual: os << " <= "; break;
        case RowRelation::kGreaterEqual: os << " >= "; break;
        case RowRelation::kEqual: os << " = "; break;
      }
      os << fmt_num(problem.rhs[i]) << '\n';
    }
  }
  os << "Bounds\n";
  for (Index j = 0; j < problem.num_cols(); ++j) {
    os << ' ' << fmt_num(problem.lower[j]) << " <= " << names[static_cast<std::size_t>(j)]
       << " <= " << fmt_num(problem.upper[j]) << '\n';
  }
  os << "End\n";
  return os.str();
}

LpProblem parse_lp(std::string_view text) {
  struct RowText {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    RowRelation rel;
    double rhs;
  };
  enum class Section { kNone, kObjective, kRows, kBounds, kEnd };

  Sense sense = Sense::kMaximize;
  std::vector<std::pair<std::string, double>> obj_terms;
  std::vector<RowText> rows;
  std::vector<std::string> names;
  std::map<std::string, Index> index_of;
  std::vector<double> lower, upper;

  auto parse_terms = [](std::istringstream& in, std::vector<std::pair<std::string, double>>& terms,
                        std::string& stop) {
    std::string tok;
    while (in >> tok) {
      if (tok == "<=" || tok == ">=" || tok == "=") {
        stop = tok;
        return;
      }
      if (tok == "0") continue;
      require(tok == "+" || tok == "-", ErrorCode::kParseError, "expected sign, got '" + tok + "'");
      const double sign = tok == "-" ? -1.0 : 1.0;
      std::string coef, name;
      require(static_cast<bool>(in >> coef >> name), ErrorCode::kParseError, "truncated term");
      terms.emplace_back(name, sign * parse_num(coef));
    }
  };

  Section section = Section::kNone;
  std::istringstream input{std::string(text)};
  std::string line;
  while (std::getline(input, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '\\') continue;
    const std::string trimmed = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (trimmed == "Maximize" || trimmed == "Minimize") {
      sense = trimmed == "Maximize" ? Sense::kMaximize : Sense::kMinimize;
      section = Section::kObjective;
      continue;
    }
    if (trimmed == "Subject To") { section = Section::kRows; continue; }
    if (trimmed == "Bounds") { section = Section::kBounds; continue; }
    if (trimmed == "End") { section = Section::kEnd; continue; }

    std::istringstream in(trimmed);
    switch (section) {
      case Section::kObjective: {
        std::string label, stop;
        in >> label;
        parse_terms(in, obj_terms, stop);
        require(stop.empty(), ErrorCode::kParseError, "relation in objective");
        break;
      }
      case Section::kRows: {
        RowText row;
        in >> row.name;
        require(!row.name.empty() && row.name.back() == ':', ErrorCode::kParseError, "row label missing ':'");
        row.name.pop_back();
        std::string stop, rhs;
        parse_terms(in, row.terms, stop);
        require(!stop.empty() && static_cast<bool>(in >> rhs), ErrorCode::kParseError,
                "row '" + row.name + "' lacks a relation");
        row.rel = stop == "<=" ? RowRelation::kLessEqual
                  : stop == ">=" ? RowRelation::kGreaterEqual
                                 : RowRelation::kEqual;
        row.rhs = parse_num(rhs);
        rows.push_back(std::move(row));
        break;
      }
      case Section::kBounds: {
        std::string lo, le1, name, le2, hi;
        require(static_cast<bool>(in >> lo >> le1 >> name >> le2 >> hi) && le1 == "<=" && le2 == "<=",
                ErrorCode::kParseError, "bad bounds line '" + trimmed + "'");
        require(index_of.emplace(name, static_cast<Index>(names.size())).second, ErrorCode::kParseError,
                "duplicate variable '" + name + "'");
        names.push_back(name);
        lower.push_back(parse_num(lo));
        upper.push_back(parse_num(hi));
        break;
      }
      default: fail(ErrorCode::kParseError, "content outside of a section: '" + trimmed + "'");
    }
  }
  require(section == Section::kEnd, ErrorCode::kParseError, "missing End");

  const auto n = static_cast<Index>(names.size());
  const auto m = static_cast<Index>(rows.size());
  LpProblem p = LpProblem::create(sense, n, m);
  auto column = [&](const std::string& name) {
    const auto it = index_of.find(name);
    require(it != index_of.end(), ErrorCode::kParseError, "variable '" + name + "' has no bounds entry");
    return it->second;
  };
  for (const auto& [name, v] : obj_terms) p.objective[column(name)] += v;
  for (Index i = 0; i < m; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (const auto& [name, v] : row.terms) p.rows(i, column(name)) += v;
    p.set_row(i, row.rel, row.rhs);
    p.row_names.push_back(row.name);
  }
  for (Index j = 0; j < n; ++j) {
    p.lower[j] = lower[static_cast<std::size_t>(j)];
    p.upper[j] = upper[static_cast<std::size_t>(j)];
  }
  p.variable_names = names;
  p.validate();
  return p;
}

}  // namespace bilin
