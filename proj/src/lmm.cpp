#include "simtext/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "simtext/csv.hpp"
#include "simtext/distributions.hpp"
#include "simtext/error.hpp"
#include "simtext/format.hpp"

namespace simtext::lmm {

namespace {

constexpr double kPi = 3.14159265358979323846;

double parse_number(const std::string& text, const std::string& origin,
                    std::size_t line, const std::string& column) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(value)) {
    throw IoError(origin + ":" + std::to_string(line) +
                  ": non-numeric value \"" + text + "\" in column \"" + column +
                  "\"");
  }
  return value;
}

}  // namespace

std::size_t TrialTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw IoError(origin + ": missing column \"" + name + "\"");
}

TrialTable load_trial_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");
  TrialTable table;
  table.origin = path;
  std::vector<std::string> fields;
  std::size_t line = 1;
  std::size_t consumed = 0;
  if (!csv::read_record(in, fields, &consumed)) {
    throw IoError(path + ": empty file");
  }
  table.columns = fields;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t j = i + 1; j < fields.size(); ++j) {
      if (fields[i] == fields[j]) {
        throw IoError(path + ":1: duplicate column \"" + fields[i] + "\"");
      }
    }
  }
  line += consumed;
  while (csv::read_record(in, fields, &consumed)) {
    if (fields.size() == 1 && fields[0].empty()) {
      line += consumed;
      continue;  // blank line
    }
    if (fields.size() != table.columns.size()) {
      throw IoError(path + ":" + std::to_string(line) + ": expected " +
                    std::to_string(table.columns.size()) + " fields, got " +
                    std::to_string(fields.size()));
    }
    table.rows.push_back(fields);
    table.row_lines.push_back(line);
    line += consumed;
  }
  if (table.rows.empty()) throw IoError(path + ": no data rows");
  return table;
}

MixedData build_mixed_data(const TrialTable& table, const std::string& response,
                           const std::vector<std::string>& fixed_terms,
                           const std::string& participant_col,
                           const std::string& stimulus_col) {
  const std::size_t yc = table.column(response);
  const std::size_t pc = table.column(participant_col);
  const std::size_t sc = table.column(stimulus_col);
  std::vector<std::size_t> fc;
  for (const auto& term : fixed_terms) fc.push_back(table.column(term));

  const std::size_t n = table.rows.size();
  MixedData data;
  data.y.resize(static_cast<Eigen::Index>(n));
  data.X.resize(static_cast<Eigen::Index>(n),
                static_cast<Eigen::Index>(1 + fixed_terms.size()));
  data.term_names.push_back("(Intercept)");
  for (const auto& term : fixed_terms) data.term_names.push_back(term);
  data.participant.reserve(n);
  data.stimulus.reserve(n);

  std::map<std::string, int> pmap;
  std::map<std::string, int> smap;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.row_lines[i];
    const auto idx = static_cast<Eigen::Index>(i);
    data.y(idx) = parse_number(row[yc], table.origin, line, response);
    data.X(idx, 0) = 1.0;
    for (std::size_t j = 0; j < fc.size(); ++j) {
      data.X(idx, static_cast<Eigen::Index>(j + 1)) =
          parse_number(row[fc[j]], table.origin, line, fixed_terms[j]);
    }
    const std::string& pid = row[pc];
    const std::string& sid = row[sc];
    if (pid.empty()) {
      throw IoError(table.origin + ":" + std::to_string(line) +
                    ": empty participant id");
    }
    if (sid.empty()) {
      throw IoError(table.origin + ":" + std::to_string(line) +
                    ": empty stimulus id");
    }
    auto [pit, pnew] = pmap.emplace(pid, static_cast<int>(pmap.size()));
    if (pnew) data.participant_levels.push_back(pid);
    data.participant.push_back(pit->second);
    auto [sit, snew] = smap.emplace(sid, static_cast<int>(smap.size()));
    if (snew) data.stimulus_levels.push_back(sid);
    data.stimulus.push_back(sit->second);
  }
  return data;
}

namespace {

// Theta-independent cross-products.  Z stacks the indicator blocks of the
// active grouping factors; only W = Z'Z + D^-1 changes with the variance
// ratios, so everything else is computed once.
struct Precomp {
  Eigen::MatrixXd ZtZ;
  Eigen::MatrixXd ZtX;
  Eigen::VectorXd Zty;
  Eigen::MatrixXd XtX;
  Eigen::VectorXd Xty;
  double yty = 0.0;
  std::vector<int> block_sizes;  // levels per active factor
  int n = 0;
  int p = 0;
};

Precomp precompute(const MixedData& data, const std::vector<const std::vector<int>*>& factors,
                   const std::vector<int>& levels) {
  Precomp pc;
  pc.n = static_cast<int>(data.y.size());
  pc.p = static_cast<int>(data.X.cols());
  pc.block_sizes = levels;
  int q = 0;
  for (int l : levels) q += l;
  pc.ZtZ = Eigen::MatrixXd::Zero(q, q);
  pc.ZtX = Eigen::MatrixXd::Zero(q, pc.p);
  pc.Zty = Eigen::VectorXd::Zero(q);
  pc.XtX = data.X.transpose() * data.X;
  pc.Xty = data.X.transpose() * data.y;
  pc.yty = data.y.squaredNorm();

  std::vector<int> offset(factors.size(), 0);
  for (std::size_t f = 1; f < factors.size(); ++f) {
    offset[f] = offset[f - 1] + levels[f - 1];
  }
  for (int i = 0; i < pc.n; ++i) {
    std::vector<int> cols;
    cols.reserve(factors.size());
    for (std::size_t f = 0; f < factors.size(); ++f) {
      cols.push_back(offset[f] + (*factors[f])[static_cast<std::size_t>(i)]);
    }
    for (int a : cols) {
      for (int b : cols) pc.ZtZ(a, b) += 1.0;
      pc.ZtX.row(a) += data.X.row(i);
      pc.Zty(a) += data.y(i);
    }
  }
  return pc;
}

struct Solution {
  Eigen::VectorXd beta;
  Eigen::MatrixXd fixed_info_inv;  // (X' V*^-1 X)^-1
  double sigma2 = 0.0;             // profiled residual variance
};

// Profiled REML criterion (-2 restricted log-likelihood) at the given
// variance ratios; +inf when the penalized system is not positive definite.
double reml_criterion(const Precomp& pc, const std::vector<double>& gamma,
                      Solution* out) {
  const double inf = std::numeric_limits<double>::infinity();
  const int q = static_cast<int>(pc.ZtZ.rows());
  double logdet_vstar = 0.0;
  Eigen::MatrixXd A = pc.XtX;
  Eigen::VectorXd b = pc.Xty;
  double y_vinv_y = pc.yty;

  if (q > 0) {
    Eigen::MatrixXd W = pc.ZtZ;
    int off = 0;
    for (std::size_t f = 0; f < gamma.size(); ++f) {
      const double g = gamma[f];
      if (!(g > 0.0)) return inf;
      for (int j = 0; j < pc.block_sizes[f]; ++j) W(off + j, off + j) += 1.0 / g;
      logdet_vstar += pc.block_sizes[f] * std::log(g);
      off += pc.block_sizes[f];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(W);
    if (llt.info() != Eigen::Success) return inf;
    for (int j = 0; j < q; ++j) {
      logdet_vstar += 2.0 * std::log(llt.matrixLLT()(j, j));
    }
    const Eigen::MatrixXd WinvZtX = llt.solve(pc.ZtX);
    const Eigen::VectorXd WinvZty = llt.solve(pc.Zty);
    A -= pc.ZtX.transpose() * WinvZtX;
    b -= pc.ZtX.transpose() * WinvZty;
    y_vinv_y -= pc.Zty.dot(WinvZty);
  }

  Eigen::LLT<Eigen::MatrixXd> allt(A);
  if (allt.info() != Eigen::Success) return inf;
  double logdet_a = 0.0;
  for (int j = 0; j < pc.p; ++j) {
    logdet_a += 2.0 * std::log(allt.matrixLLT()(j, j));
  }
  const Eigen::VectorXd beta = allt.solve(b);
  const double quad = std::max(y_vinv_y - beta.dot(b), 1e-300);
  const int df = pc.n - pc.p;
  const double sigma2 = quad / df;
  const double dev =
      logdet_vstar + logdet_a + df * (std::log(2.0 * kPi * sigma2) + 1.0);
  if (out != nullptr) {
    out->beta = beta;
    out->fixed_info_inv =
        allt.solve(Eigen::MatrixXd::Identity(pc.p, pc.p));
    out->sigma2 = sigma2;
  }
  return dev;
}

struct SimplexResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Nelder-Mead over the log variance ratios.
SimplexResult nelder_mead(const Precomp& pc, std::vector<double> start,
                          double tol, int max_iterations) {
  const std::size_t d = start.size();
  auto objective = [&](const std::vector<double>& x) {
    std::vector<double> gamma(d);
    for (std::size_t i = 0; i < d; ++i) gamma[i] = std::exp(x[i]);
    return reml_criterion(pc, gamma, nullptr);
  };

  std::vector<std::vector<double>> verts(d + 1, start);
  for (std::size_t i = 0; i < d; ++i) verts[i + 1][i] += 0.5;
  std::vector<double> fvals(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fvals[i] = objective(verts[i]);

  SimplexResult result;
  std::vector<std::size_t> order(d + 1);
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (std::size_t i = 0; i <= d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[d];
    const std::size_t second = order[d - 1];
    if (std::isfinite(fvals[best]) &&
        fvals[worst] - fvals[best] < tol * (1.0 + std::fabs(fvals[best]))) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < d; ++j) centroid[j] += verts[i][j];
    }
    for (std::size_t j = 0; j < d; ++j) centroid[j] /= static_cast<double>(d);

    auto blend = [&](double coef) {
      std::vector<double> pt(d);
      for (std::size_t j = 0; j < d; ++j) {
        pt[j] = centroid[j] + coef * (centroid[j] - verts[worst][j]);
      }
      return pt;
    };

    const auto reflect = blend(1.0);
    const double fr = objective(reflect);
    if (fr < fvals[best]) {
      const auto expand = blend(2.0);
      const double fe = objective(expand);
      if (fe < fr) {
        verts[worst] = expand;
        fvals[worst] = fe;
      } else {
        verts[worst] = reflect;
        fvals[worst] = fr;
      }
    } else if (fr < fvals[second]) {
      verts[worst] = reflect;
      fvals[worst] = fr;
    } else {
      const auto contract = blend(fr < fvals[worst] ? 0.5 : -0.5);
      const double fc = objective(contract);
      if (fc < std::min(fr, fvals[worst])) {
        verts[worst] = contract;
        fvals[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < d; ++j) {
            verts[i][j] = verts[best][j] + 0.5 * (verts[i][j] - verts[best][j]);
          }
          fvals[i] = objective(verts[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= d; ++i) {
    if (fvals[i] < fvals[best]) best = i;
  }
  result.x = verts[best];
  result.f = fvals[best];
  return result;
}

// Newton refinement of the simplex solution via central finite differences.
// The f-spread stopping rule of Nelder-Mead leaves the parameters O(sqrt(tol))
// from the optimum; a couple of Newton steps on the smooth profiled criterion
// recover them to near machine precision.
void newton_polish(const Precomp& pc, std::vector<double>& x, double& fx) {
  const std::size_t d = x.size();
  if (d == 0) return;
  auto objective = [&](const std::vector<double>& pt) {
    std::vector<double> gamma(d);
    for (std::size_t i = 0; i < d; ++i) gamma[i] = std::exp(pt[i]);
    return reml_criterion(pc, gamma, nullptr);
  };
  const double h = 1e-4;
  for (int iter = 0; iter < 6; ++iter) {
    Eigen::VectorXd grad(d);
    Eigen::MatrixXd hess(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      auto xp = x;
      auto xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fp = objective(xp);
      const double fm = objective(xm);
      if (!std::isfinite(fp) || !std::isfinite(fm)) return;
      grad(static_cast<Eigen::Index>(i)) = (fp - fm) / (2.0 * h);
      hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
          (fp - 2.0 * fx + fm) / (h * h);
    }
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        auto xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        const double v = (objective(xpp) - objective(xpm) - objective(xmp) +
                          objective(xmm)) /
                         (4.0 * h * h);
        if (!std::isfinite(v)) return;
        hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() != Eigen::Success) return;  // saddle or boundary; keep x
    const Eigen::VectorXd step = llt.solve(grad);
    if (!step.allFinite() || step.norm() > 2.0) return;
    auto cand = x;
    for (std::size_t i = 0; i < d; ++i) {
      cand[i] -= step(static_cast<Eigen::Index>(i));
    }
    const double fc = objective(cand);
    if (!std::isfinite(fc) || fc > fx + 1e-12 * (1.0 + std::fabs(fx))) return;
    x = cand;
    fx = fc;
    if (step.norm() < 1e-10) return;
  }
}

void compute_tests(MixedModelFit& fit) {
  const int df = fit.df_resid;
  const auto p = fit.beta.size();
  fit.t.resize(p);
  fit.p.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (fit.se(j) > 0.0) {
      fit.t(j) = fit.beta(j) / fit.se(j);
      const double tail = 1.0 - stats::t_cdf(std::fabs(fit.t(j)), df);
      fit.p(j) = std::clamp(2.0 * tail, 0.0, 1.0);
    } else {
      fit.t(j) = fit.beta(j) == 0.0
                     ? 0.0
                     : std::numeric_limits<double>::infinity() *
                           (fit.beta(j) > 0.0 ? 1.0 : -1.0);
      fit.p(j) = fit.beta(j) == 0.0 ? 1.0 : 0.0;
    }
  }
}

}  // namespace

MixedModelFit fit_lmm(const MixedData& data, const LmmOptions& opts) {
  const auto n = data.y.size();
  const auto p = data.X.cols();
  if (n == 0) throw AnalysisError("mixed model needs data rows");
  if (data.X.rows() != n) {
    throw AnalysisError("design matrix row count does not match response");
  }
  if (static_cast<Eigen::Index>(data.term_names.size()) != p) {
    throw AnalysisError("term name count does not match design columns");
  }
  if (n <= p) {
    throw AnalysisError("mixed model needs more rows than fixed effects");
  }

  std::vector<const std::vector<int>*> factors;
  std::vector<int> levels;
  std::vector<int> which;  // 0 = participant, 1 = stimulus
  auto add_factor = [&](const std::vector<int>& codes, const char* name,
                        int tag) {
    if (codes.empty()) return;
    if (codes.size() != static_cast<std::size_t>(n)) {
      throw AnalysisError(std::string(name) +
                          " factor length does not match data rows");
    }
    int max_code = 0;
    for (int c : codes) {
      if (c < 0) throw AnalysisError(std::string(name) + " code is negative");
      max_code = std::max(max_code, c);
    }
    if (max_code < 1) {
      throw AnalysisError(std::string(name) +
                          " grouping factor needs at least 2 levels");
    }
    factors.push_back(&codes);
    levels.push_back(max_code + 1);
    which.push_back(tag);
  };
  add_factor(data.participant, "participant", 0);
  add_factor(data.stimulus, "stimulus", 1);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(data.X);
  if (qr.rank() < p) {
    throw AnalysisError("fixed-effects design is rank deficient");
  }

  MixedModelFit fit;
  fit.term_names = data.term_names;
  fit.n_obs = static_cast<int>(n);
  fit.n_participants = data.participant.empty()
                           ? 0
                           : *std::max_element(data.participant.begin(),
                                               data.participant.end()) +
                                 1;
  fit.n_stimuli = data.stimulus.empty()
                      ? 0
                      : *std::max_element(data.stimulus.begin(),
                                          data.stimulus.end()) +
                            1;
  fit.df_resid = static_cast<int>(n - p);

  // Degenerate fast path: the fixed effects already reproduce y exactly, so
  // every variance component collapses and the REML surface has no interior.
  const Eigen::VectorXd beta_ols = qr.solve(data.y);
  const double ssr = (data.y - data.X * beta_ols).squaredNorm();
  if (ssr <= 1e-12 * std::max(1.0, data.y.squaredNorm())) {
    fit.beta = beta_ols;
    fit.sigma2_resid = ssr / fit.df_resid;
    const Eigen::MatrixXd xtx_inv =
        (data.X.transpose() * data.X)
            .ldlt()
            .solve(Eigen::MatrixXd::Identity(p, p));
    fit.se.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      fit.se(j) = std::sqrt(std::max(fit.sigma2_resid * xtx_inv(j, j), 0.0));
    }
    fit.converged = true;
    fit.reml_deviance = -std::numeric_limits<double>::infinity();
    compute_tests(fit);
    fit.r2m = 1.0;
    fit.r2c = 1.0;
    return fit;
  }

  const Precomp pc = precompute(data, factors, levels);
  const std::size_t d = factors.size();

  Solution sol;
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  bool converged = false;
  if (d == 0) {
    best_f = reml_criterion(pc, {}, &sol);
    best_x = {};
    converged = true;
  } else {
    const double starts2[3][2] = {{0.0, 0.0}, {-3.0, -3.0}, {2.0, -2.0}};
    for (const auto& s : starts2) {
      std::vector<double> start(s, s + d);
      SimplexResult r = nelder_mead(pc, start, opts.tol, opts.max_iterations);
      if (r.f < best_f) {
        best_f = r.f;
        best_x = r.x;
        converged = r.converged;
      }
    }
    if (!std::isfinite(best_f)) {
      throw AnalysisError("mixed model criterion is not finite at any start");
    }
    newton_polish(pc, best_x, best_f);
    std::vector<double> gamma(d);
    for (std::size_t i = 0; i < d; ++i) {
      gamma[i] = std::max(std::exp(best_x[i]), opts.ratio_floor);
    }
    best_f = reml_criterion(pc, gamma, &sol);
    for (std::size_t i = 0; i < d; ++i) {
      const double component = gamma[i] * sol.sigma2;
      if (which[i] == 0) {
        fit.sigma2_participant = component;
      } else {
        fit.sigma2_stimulus = component;
      }
    }
  }

  fit.converged = converged;
  fit.reml_deviance = best_f;
  fit.beta = sol.beta;
  fit.sigma2_resid = sol.sigma2;
  fit.se.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.se(j) = std::sqrt(std::max(sol.sigma2 * sol.fixed_info_inv(j, j), 0.0));
  }
  compute_tests(fit);
  auto [r2m, r2c] = nakagawa_r2(fit, data);
  fit.r2m = r2m;
  fit.r2c = r2c;
  return fit;
}

double profiled_deviance(const MixedData& data, double ratio_participant,
                         double ratio_stimulus) {
  const auto n = data.y.size();
  if (data.X.rows() != n) {
    throw AnalysisError("design matrix row count does not match response");
  }
  if (n <= data.X.cols()) {
    throw AnalysisError("mixed model needs more rows than fixed effects");
  }
  std::vector<const std::vector<int>*> factors;
  std::vector<int> levels;
  std::vector<double> gamma;
  auto add = [&](const std::vector<int>& codes, double ratio,
                 const char* name) {
    if (codes.empty()) return;
    if (codes.size() != static_cast<std::size_t>(n)) {
      throw AnalysisError(std::string(name) +
                          " factor length does not match data rows");
    }
    factors.push_back(&codes);
    levels.push_back(*std::max_element(codes.begin(), codes.end()) + 1);
    gamma.push_back(ratio);
  };
  add(data.participant, ratio_participant, "participant");
  add(data.stimulus, ratio_stimulus, "stimulus");
  const Precomp pc = precompute(data, factors, levels);
  return reml_criterion(pc, gamma, nullptr);
}

std::pair<double, double> nakagawa_r2(const MixedModelFit& fit,
                                      const MixedData& data) {
  const auto n = data.y.size();
  if (fit.beta.size() != data.X.cols() || data.X.rows() != n) {
    throw AnalysisError("fit does not match data dimensions");
  }
  const Eigen::VectorXd fitted = data.X * fit.beta;
  const double mean = fitted.mean();
  double var_f = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = fitted(i) - mean;
    var_f += c * c;
  }
  var_f /= (n > 1 ? static_cast<double>(n - 1) : 1.0);
  const double denom =
      var_f + fit.sigma2_participant + fit.sigma2_stimulus + fit.sigma2_resid;
  if (denom <= 0.0) {
    throw AnalysisError("total variance is zero; R2 undefined");
  }
  const double r2m = var_f / denom;
  const double r2c =
      (var_f + fit.sigma2_participant + fit.sigma2_stimulus) / denom;
  return {r2m, r2c};
}

namespace {

std::string format_p(double p) {
  if (p < 1e-4) return "<0.0001";
  return format_fixed(p, 4);
}

}  // namespace

std::string fit_table(const MixedModelFit& fit) {
  std::ostringstream out;
  std::size_t width = 4;
  for (const auto& t : fit.term_names) width = std::max(width, t.size());
  auto pad = [&](const std::string& s, std::size_t w) {
    std::string r = s;
    if (r.size() < w) r.append(w - r.size(), ' ');
    return r;
  };
  out << pad("term", width) << "  " << pad("B", 10) << "  " << pad("SE", 10)
      << "  " << pad("t", 9) << "  p\n";
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    out << pad(fit.term_names[static_cast<std::size_t>(j)], width) << "  "
        << pad(format_fixed(fit.beta(j), 4), 10) << "  "
        << pad(format_fixed(fit.se(j), 4), 10) << "  "
        << pad(format_fixed(fit.t(j), 3), 9) << "  " << format_p(fit.p(j))
        << "\n";
  }
  out << "\n";
  out << "sigma2_participant  " << format_fixed(fit.sigma2_participant, 5)
      << "\n";
  out << "sigma2_stimulus     " << format_fixed(fit.sigma2_stimulus, 5) << "\n";
  out << "sigma2_resid        " << format_fixed(fit.sigma2_resid, 5) << "\n";
  out << "R2_marginal         " << format_fixed(fit.r2m, 5) << "\n";
  out << "R2_conditional      " << format_fixed(fit.r2c, 5) << "\n";
  out << "n_obs " << fit.n_obs << "  participants " << fit.n_participants
      << "  stimuli " << fit.n_stimuli << "  df " << fit.df_resid
      << "  converged " << (fit.converged ? "yes" : "no") << "\n";
  return out.str();
}

std::string fit_json(const MixedModelFit& fit) {
  nlohmann::json j;
  j["terms"] = fit.term_names;
  j["beta"] = std::vector<double>(fit.beta.data(), fit.beta.data() + fit.beta.size());
  j["se"] = std::vector<double>(fit.se.data(), fit.se.data() + fit.se.size());
  j["t"] = std::vector<double>(fit.t.data(), fit.t.data() + fit.t.size());
  std::vector<double> pv(fit.p.data(), fit.p.data() + fit.p.size());
  j["p"] = pv;
  j["sigma2_participant"] = fit.sigma2_participant;
  j["sigma2_stimulus"] = fit.sigma2_stimulus;
  j["sigma2_resid"] = fit.sigma2_resid;
  j["r2_marginal"] = fit.r2m;
  j["r2_conditional"] = fit.r2c;
  j["reml_deviance"] =
      std::isfinite(fit.reml_deviance) ? nlohmann::json(fit.reml_deviance)
                                       : nlohmann::json();
  j["converged"] = fit.converged;
  j["df_resid"] = fit.df_resid;
  j["n_obs"] = fit.n_obs;
  j["n_participants"] = fit.n_participants;
  j["n_stimuli"] = fit.n_stimuli;
  return j.dump(2) + "\n";
}

}  // namespace simtext::lmm
