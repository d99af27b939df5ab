#include "tsa/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "tsa/errors.hpp"

namespace tsa {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// A^T A for a whitened design matrix.
Matrix normal_matrix(const Matrix& a) {
  const std::size_t m = a.cols();
  Matrix g(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j; k < m; ++k) {
      const double v = dot(a.col(j), a.col(k));
      g(j, k) = v;
      g(k, j) = v;
    }
  }
  return g;
}

[[noreturn]] void throw_collinear(const Matrix& g, const std::vector<std::string>& labels,
                                  std::size_t pivot) {
  if (pivot == 0 || g(pivot, pivot) <= 0.0) {
    throw CollinearityError("design column '" + labels[pivot] + "' carries no signal",
                            {labels[pivot]});
  }
  std::size_t worst = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < pivot; ++j) {
    const double denom = std::sqrt(g(j, j) * g(pivot, pivot));
    const double corr = denom > 0.0 ? std::abs(g(j, pivot)) / denom : 0.0;
    if (corr > best) {
      best = corr;
      worst = j;
    }
  }
  throw CollinearityError("collinear design columns '" + labels[worst] + "' and '" +
                              labels[pivot] + "'",
                          {labels[worst], labels[pivot]});
}

Matrix inverse_or_collinear(const Matrix& g, const std::vector<std::string>& labels) {
  try {
    return spd_inverse(g);
  } catch (const FactorizationError& e) {
    throw_collinear(g, labels, e.pivot());
  }
}

std::vector<double> mat_vec(const Matrix& m, std::span<const double> v) {
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto c = m.col(j);
    const double vj = v[j];
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] += c[i] * vj;
  }
  return out;
}

}  // namespace

WlsSolution wls_fit(const DesignMatrix& design, const CholeskyFactor& chol,
                    std::span<const double> y) {
  const std::size_t n = design.a.rows();
  if (chol.dim() != n || y.size() != n) {
    throw DomainError("wls_fit: dimension mismatch between design, covariance and data");
  }
  const Matrix b = chol.whiten_columns(design.a);
  const std::vector<double> z = chol.whiten(y);

  const Matrix g = normal_matrix(b);
  const Matrix cx = inverse_or_collinear(g, design.labels);

  std::vector<double> bty(design.a.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) bty[j] = dot(b.col(j), z);

  WlsSolution sol;
  sol.x = mat_vec(cx, bty);
  sol.cx = cx;
  return sol;
}

double log_likelihood(const CholeskyFactor& chol, std::span<const double> residuals) {
  if (chol.dim() != residuals.size()) {
    throw DomainError("log_likelihood: dimension mismatch");
  }
  const std::vector<double> z = chol.whiten(residuals);
  const double n = static_cast<double>(residuals.size());
  const double ln2pi = std::log(2.0 * std::numbers::pi);
  return -0.5 * (n * ln2pi + chol.ln_det + dot(z, z));
}

double sigma_from_residuals(const CholeskyFactor& chol_unit,
                            std::span<const double> residuals) {
  if (chol_unit.dim() != residuals.size()) {
    throw DomainError("sigma_from_residuals: dimension mismatch");
  }
  const std::vector<double> z = chol_unit.whiten(residuals);
  return std::sqrt(dot(z, z) / static_cast<double>(residuals.size()));
}

// ---- Nelder-Mead -----------------------------------------------------------

MinimizerResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> start,
                            const MinimizerOptions& options) {
  const std::size_t d = start.size();
  if (d == 0) throw DomainError("nelder_mead: empty parameter vector");

  MinimizerResult res;
  auto eval = [&](std::span<const double> x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw DomainError("nelder_mead: objective returned a non-finite value");
    }
    ++res.evaluations;
    return v;
  };

  std::vector<std::vector<double>> sim(d + 1, std::vector<double>(start.begin(), start.end()));
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i < d; ++i) sim[i + 1][i] += options.step;
  for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(sim[i]);

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), xr(d), xe(d), xc(d);

  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  for (res.iterations = 0; res.iterations < options.max_iter; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });

    const auto& best = sim[order[0]];
    double spread = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        spread = std::max(spread, std::abs(sim[order[i]][k] - best[k]));
      }
    }
    if (spread < options.xatol) {
      res.converged = true;
      break;
    }

    const std::size_t iw = order[d];       // worst
    const std::size_t is = order[d - 1];   // second worst
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) centroid[k] += sim[order[i]][k];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    for (std::size_t k = 0; k < d; ++k) {
      xr[k] = centroid[k] + kReflect * (centroid[k] - sim[iw][k]);
    }
    const double fr = eval(xr);

    if (fr < fv[order[0]]) {
      for (std::size_t k = 0; k < d; ++k) {
        xe[k] = centroid[k] + kExpand * (centroid[k] - sim[iw][k]);
      }
      const double fe = eval(xe);
      if (fe < fr) {
        sim[iw] = xe;
        fv[iw] = fe;
      } else {
        sim[iw] = xr;
        fv[iw] = fr;
      }
      continue;
    }
    if (fr < fv[is]) {
      sim[iw] = xr;
      fv[iw] = fr;
      continue;
    }

    bool shrink = false;
    if (fr < fv[iw]) {
      for (std::size_t k = 0; k < d; ++k) {
        xc[k] = centroid[k] + kContract * (xr[k] - centroid[k]);
      }
      const double fc = eval(xc);
      if (fc <= fr) {
        sim[iw] = xc;
        fv[iw] = fc;
      } else {
        shrink = true;
      }
    } else {
      for (std::size_t k = 0; k < d; ++k) {
        xc[k] = centroid[k] - kContract * (centroid[k] - sim[iw][k]);
      }
      const double fc = eval(xc);
      if (fc < fv[iw]) {
        sim[iw] = xc;
        fv[iw] = fc;
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      const auto best_vertex = sim[order[0]];
      for (std::size_t i = 0; i <= d; ++i) {
        if (i == order[0]) continue;
        for (std::size_t k = 0; k < d; ++k) {
          sim[i][k] = best_vertex[k] + kShrink * (sim[i][k] - best_vertex[k]);
        }
        fv[i] = eval(sim[i]);
      }
    }
  }

  std::size_t ibest = 0;
  for (std::size_t i = 1; i <= d; ++i) {
    if (fv[i] < fv[ibest]) ibest = i;
  }
  res.x = sim[ibest];
  res.fmin = fv[ibest];
  return res;
}

// ---- Maximum likelihood fit -------------------------------------------------

std::size_t FreeParams::shape_count() const noexcept {
  return static_cast<std::size_t>(kappa) + static_cast<std::size_t>(kappa2) +
         static_cast<std::size_t>(phi) + static_cast<std::size_t>(phi_mix);
}

FreeParams FreeParams::all_for(NoiseKind kind) {
  FreeParams fp;
  fp.sigma = true;
  switch (kind) {
    case NoiseKind::PowerLaw:
      fp.kappa = true;
      break;
    case NoiseKind::Ggm:
      fp.kappa = true;
      fp.phi = true;
      break;
    case NoiseKind::Figgm:
      fp.kappa = true;
      fp.kappa2 = true;
      fp.phi = true;
      break;
    case NoiseKind::PowerLawPlusWhite:
      fp.kappa = true;
      fp.phi_mix = true;
      break;
    default:
      break;
  }
  return fp;
}

namespace {

constexpr double kKappaSearchMax = 0.1;  // soft upper clamp during search
constexpr double kPenaltyScale = 1e8;
constexpr double kRestartTol = 1e-6;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) {
  p = std::clamp(p, 1e-6, 1.0 - 1e-6);
  return std::log(p / (1.0 - p));
}

enum class ParKind { Kappa, Kappa2, Phi, PhiMix, Sigma, SigmaPl, SigmaW };

struct Par {
  ParKind kind;
  double init;
};

// Decode one search coordinate into a model parameter, accumulating the
// boundary penalty that keeps the objective finite outside the admissible
// region.
double decode_par(ParKind kind, double theta, double* penalty) {
  switch (kind) {
    case ParKind::Kappa:
    case ParKind::Kappa2: {
      const double lo = kKappaMin;
      const double hi = kKappaSearchMax;
      double v = theta;
      if (v < lo) {
        *penalty += kPenaltyScale * (lo - v);
        v = lo;
      } else if (v > hi) {
        *penalty += kPenaltyScale * (v - hi);
        v = hi;
      }
      return v;
    }
    case ParKind::Phi:
    case ParKind::PhiMix:
      return std::clamp(logistic(theta), 1e-10, 1.0);
    case ParKind::Sigma:
    case ParKind::SigmaPl:
    case ParKind::SigmaW:
      return std::abs(theta);
  }
  return theta;
}

struct Evaluation {
  double neg_lnl = 0.0;
  double sigma_hat = 0.0;
  std::vector<double> x;
  Matrix cx;  // unit-amplitude scale when profiled
  double rq = 0.0;
  double ln_det = 0.0;
};

// Generalized least squares plus likelihood under the given model, dense
// exact-covariance route. With profiled = true the covariance is built at
// unit driver amplitude and sigma is maximized in closed form.
Evaluation evaluate_dense(const NoiseModel& model, const DesignMatrix& design,
                          std::span<const double> y, bool profiled) {
  const std::size_t n = y.size();
  NoiseModel mc = model;
  if (profiled) mc.sigma = 1.0;

  const CholeskyFactor chol = cholesky(build_covariance(mc, n));
  const Matrix b = chol.whiten_columns(design.a);
  const std::vector<double> z = chol.whiten(y);

  const Matrix g = normal_matrix(b);
  Evaluation ev;
  ev.cx = inverse_or_collinear(g, design.labels);

  std::vector<double> bty(b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) bty[j] = dot(b.col(j), z);
  ev.x = mat_vec(ev.cx, bty);

  const std::vector<double> bx = mat_vec(b, ev.x);
  double rq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = z[i] - bx[i];
    rq += e * e;
  }
  ev.rq = rq;
  ev.ln_det = chol.ln_det;

  const double nd = static_cast<double>(n);
  const double ln2pi = std::log(2.0 * std::numbers::pi);
  if (profiled) {
    const double s2 = rq / nd;
    ev.sigma_hat = std::sqrt(s2);
    ev.neg_lnl = 0.5 * (nd * ln2pi + nd * std::log(s2) + chol.ln_det + nd);
  } else {
    ev.sigma_hat = model.sigma;
    ev.neg_lnl = 0.5 * (nd * ln2pi + chol.ln_det + rq);
  }
  return ev;
}

// Same contract on the stationary Toeplitz approximation, Levinson route.
Evaluation evaluate_toeplitz(const NoiseModel& model, const DesignMatrix& design,
                             std::span<const double> y, bool profiled,
                             std::size_t history) {
  const std::size_t n = y.size();
  const std::size_t m = design.a.cols();
  NoiseModel mc = model;
  if (profiled) mc.sigma = 1.0;

  const std::vector<double> row = stationary_autocovariance(mc, n, history);

  Matrix rhs(n, m + 1);
  for (std::size_t j = 0; j < m; ++j) {
    const auto src = design.a.col(j);
    std::copy(src.begin(), src.end(), rhs.col(j).begin());
  }
  std::copy(y.begin(), y.end(), rhs.col(m).begin());

  const ToeplitzSolution sol = toeplitz_solve_multi(row, rhs);

  Matrix g(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j; k < m; ++k) {
      const double v = 0.5 * (dot(design.a.col(j), sol.x.col(k)) +
                              dot(design.a.col(k), sol.x.col(j)));
      g(j, k) = v;
      g(k, j) = v;
    }
  }

  Evaluation ev;
  ev.cx = inverse_or_collinear(g, design.labels);

  std::vector<double> aty(m);
  for (std::size_t j = 0; j < m; ++j) aty[j] = dot(design.a.col(j), sol.x.col(m));
  ev.x = mat_vec(ev.cx, aty);

  // C^-1 r = C^-1 y - sum_k x_k C^-1 a_k, reusing the shared solves.
  std::vector<double> ciry(sol.x.col(m).begin(), sol.x.col(m).end());
  for (std::size_t k = 0; k < m; ++k) {
    const auto wk = sol.x.col(k);
    const double xk = ev.x[k];
    for (std::size_t i = 0; i < n; ++i) ciry[i] -= xk * wk[i];
  }
  const std::vector<double> ax = mat_vec(design.a, ev.x);
  double rq = 0.0;
  for (std::size_t i = 0; i < n; ++i) rq += (y[i] - ax[i]) * ciry[i];
  rq = std::max(rq, 0.0);
  ev.rq = rq;
  ev.ln_det = sol.ln_det;

  const double nd = static_cast<double>(n);
  const double ln2pi = std::log(2.0 * std::numbers::pi);
  if (profiled) {
    const double s2 = rq / nd;
    ev.sigma_hat = std::sqrt(s2);
    ev.neg_lnl = 0.5 * (nd * ln2pi + nd * std::log(s2) + sol.ln_det + nd);
  } else {
    ev.sigma_hat = model.sigma;
    ev.neg_lnl = 0.5 * (nd * ln2pi + sol.ln_det + rq);
  }
  return ev;
}

double ols_sigma(const DesignMatrix& design, std::span<const double> y) {
  const Matrix g = normal_matrix(design.a);
  const Matrix inv = inverse_or_collinear(g, design.labels);
  std::vector<double> aty(design.a.cols());
  for (std::size_t j = 0; j < design.a.cols(); ++j) aty[j] = dot(design.a.col(j), y);
  const std::vector<double> x = mat_vec(inv, aty);
  const std::vector<double> ax = mat_vec(design.a, x);
  double rq = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = y[i] - ax[i];
    rq += e * e;
  }
  return std::sqrt(rq / static_cast<double>(y.size()));
}

void check_free_params(const NoiseModel& family, const FreeParams& fp) {
  const NoiseKind k = family.kind;
  const bool kappa_ok = k == NoiseKind::PowerLaw || k == NoiseKind::Ggm ||
                        k == NoiseKind::Figgm || k == NoiseKind::PowerLawPlusWhite;
  if (fp.kappa && !kappa_ok) {
    throw SpecError("mle_fit: kappa is fixed by noise model '" +
                    std::string(noise_kind_name(k)) + "'");
  }
  if (fp.phi && k != NoiseKind::Ggm && k != NoiseKind::Figgm) {
    throw SpecError("mle_fit: phi applies only to ggm/figgm models");
  }
  if (fp.kappa2 && k != NoiseKind::Figgm) {
    throw SpecError("mle_fit: kappa2 applies only to figgm models");
  }
  if (fp.phi_mix && k != NoiseKind::PowerLawPlusWhite) {
    throw SpecError("mle_fit: phi_mix applies only to plwn models");
  }
}

}  // namespace

FitResult mle_fit(const TimeSeries& series, const TrajectoryModel& trajectory,
                  const NoiseModel& family, const FreeParams& free_params,
                  const FitOptions& options) {
  series.validate_uniform();
  family.validate();
  check_free_params(family, free_params);

  const std::size_t n = series.size();
  const std::vector<double> t = series.epochs_years();
  const DesignMatrix design = build_design_matrix(trajectory, t);
  const std::size_t m = design.a.cols();
  const std::span<const double> y(series.values);

  const std::size_t n_free = free_params.shape_count() +
                             static_cast<std::size_t>(free_params.sigma);
  if (free_params.any() && n < 8) {
    throw DomainError("mle_fit: noise estimation needs at least 8 samples");
  }
  if (free_params.any() && n < m + n_free + 1) {
    throw DomainError("mle_fit: too few samples for the requested free parameters");
  }

  const bool profiled =
      free_params.sigma && options.amplitude_mode == AmplitudeMode::Profiled;

  auto run_eval = [&](const NoiseModel& model) {
    return options.path == SolvePath::Dense
               ? evaluate_dense(model, design, y, profiled)
               : evaluate_toeplitz(model, design, y, profiled,
                                   options.toeplitz_history == 0
                                       ? n
                                       : options.toeplitz_history);
  };

  auto finish = [&](const NoiseModel& model, const Evaluation& ev, bool converged,
                    bool at_boundary, std::size_t evaluations, std::size_t restarts) {
    FitResult fr;
    fr.coefficients = ev.x;
    fr.labels = design.labels;
    fr.residuals.resize(n);
    const std::vector<double> ax = mat_vec(design.a, ev.x);
    for (std::size_t i = 0; i < n; ++i) fr.residuals[i] = y[i] - ax[i];
    fr.noise = model;
    fr.noise.sigma = ev.sigma_hat;
    fr.cx = ev.cx;
    if (profiled) {
      const double s2 = ev.sigma_hat * ev.sigma_hat;
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) fr.cx(j, k) *= s2;
      }
    }
    fr.ln_likelihood = -ev.neg_lnl;
    fr.converged = converged;
    fr.at_boundary = at_boundary;
    fr.evaluations = evaluations;
    fr.restarts = restarts;
    return fr;
  };

  // Nothing free: one generalized least-squares pass under the given model.
  if (!free_params.any()) {
    const Evaluation ev = run_eval(family);
    return finish(family, ev, true, false, 0, 0);
  }

  // Assemble the search coordinates.
  const double sigma0 = ols_sigma(design, y);
  std::vector<Par> pars;
  if (free_params.kappa) pars.push_back({ParKind::Kappa, -0.5});
  if (free_params.kappa2) pars.push_back({ParKind::Kappa2, -0.5});
  if (free_params.phi) pars.push_back({ParKind::Phi, logit(0.5)});
  if (free_params.phi_mix) pars.push_back({ParKind::PhiMix, logit(0.5)});
  if (free_params.sigma && !profiled) {
    if (family.kind == NoiseKind::PowerLawPlusWhite) {
      pars.push_back({ParKind::SigmaPl, sigma0 * std::numbers::sqrt2 / 2.0});
      pars.push_back({ParKind::SigmaW, sigma0 * std::numbers::sqrt2 / 2.0});
    } else {
      pars.push_back({ParKind::Sigma, sigma0});
    }
  }

  auto decode = [&](std::span<const double> theta, double* penalty) {
    NoiseModel model = family;
    double sigma_pl = -1.0, sigma_w = -1.0;
    for (std::size_t i = 0; i < pars.size(); ++i) {
      const double v = decode_par(pars[i].kind, theta[i], penalty);
      switch (pars[i].kind) {
        case ParKind::Kappa: model.kappa = v; break;
        case ParKind::Kappa2: model.kappa2 = v; break;
        case ParKind::Phi: model.phi = v; break;
        case ParKind::PhiMix: model.phi_mix = v; break;
        case ParKind::Sigma: model.sigma = v; break;
        case ParKind::SigmaPl: sigma_pl = v; break;
        case ParKind::SigmaW: sigma_w = v; break;
      }
    }
    if (sigma_pl >= 0.0) {
      model.sigma = std::hypot(sigma_pl, sigma_w);
      model.phi_mix =
          model.sigma > 0.0 ? sigma_pl * sigma_pl / (model.sigma * model.sigma) : 0.0;
    }
    return model;
  };

  // Closed form: amplitude is the only free parameter.
  if (pars.empty()) {
    const Evaluation ev = run_eval(family);
    return finish(family, ev, true, false, 0, 0);
  }

  auto objective = [&](std::span<const double> theta) {
    double penalty = 0.0;
    const NoiseModel model = decode(theta, &penalty);
    try {
      return run_eval(model).neg_lnl + penalty;
    } catch (const FactorizationError&) {
      return 1e12 + penalty;
    } catch (const ConditioningError&) {
      return 1e12 + penalty;
    }
  };

  std::vector<double> theta0(pars.size());
  for (std::size_t i = 0; i < pars.size(); ++i) theta0[i] = pars[i].init;

  MinimizerResult best = nelder_mead(objective, theta0, options.minimizer);
  std::size_t evaluations = best.evaluations;
  std::size_t restarts = 0;
  bool stable = false;
  while (restarts < options.max_restarts) {
    MinimizerResult again = nelder_mead(objective, best.x, options.minimizer);
    evaluations += again.evaluations;
    ++restarts;
    const bool improved_little = best.fmin - again.fmin < kRestartTol;
    if (again.fmin <= best.fmin) best = std::move(again);
    if (improved_little) {
      stable = true;
      break;
    }
  }

  double penalty = 0.0;
  const NoiseModel fitted = decode(best.x, &penalty);
  const Evaluation ev = run_eval(fitted);

  bool at_boundary = false;
  const double edge = options.minimizer.xatol + 1e-9;
  for (std::size_t i = 0; i < pars.size(); ++i) {
    switch (pars[i].kind) {
      case ParKind::Kappa:
      case ParKind::Kappa2: {
        const double v = std::clamp(best.x[i], kKappaMin, kKappaSearchMax);
        if (v <= kKappaMin + edge || v >= kKappaSearchMax - edge) at_boundary = true;
        break;
      }
      case ParKind::Phi:
      case ParKind::PhiMix: {
        const double v = logistic(best.x[i]);
        if (v <= 0.005 || v >= 0.995) at_boundary = true;
        break;
      }
      case ParKind::SigmaPl:
      case ParKind::SigmaW: {
        if (std::abs(best.x[i]) <= 1e-3 * std::max(sigma0, 1e-12)) at_boundary = true;
        break;
      }
      case ParKind::Sigma:
        break;
    }
  }

  return finish(fitted, ev, best.converged && stable, at_boundary, evaluations,
                restarts);
}

}  // namespace tsa
