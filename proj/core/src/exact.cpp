// Copyright 2026 The bdre Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdre/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/special_functions/lambert_w.hpp>
#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_hyperg.h>

#include "bdre/errors.hpp"

namespace bdre {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_tmin(double t, const char* what) {
  if (!(t >= kTMin)) {
    throw StabilityError(std::string(what) +
                         ": Hartman-Watson evaluation unstable for small t "
                         "(t < 0.3)");
  }
}

// Tricomi U(alpha, 1/2, x).
double tricomi_u_half(double alpha, double x) {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
  gsl_sf_result r;
  const int status = gsl_sf_hyperg_U_e(alpha, 0.5, x, &r);
  if (status == GSL_EUNDRFLW) return 0.0;
  if (status != GSL_SUCCESS || !std::isfinite(r.val)) {
    throw AccuracyError("Tricomi U evaluation failed at x=" +
                        std::to_string(x));
  }
  return r.val;
}

// Smallest y with r cosh(y) - y >= 45 (beyond it exp(-r cosh y) sinh y is
// negligible).
double cosh_damping_cutoff(double r) {
  double y = std::acosh(std::max(1.0, 45.0 / r));
  for (int i = 0; i < 8; ++i) {
    y = std::acosh(std::max(1.0, (45.0 + y) / r));
  }
  return y + 0.5;
}

// Raw oscillatory integral of theta_r(t) without the r-dependent prefactor.
QuadratureResult theta_integral(double r, double t,
                                const QuadratureSettings& q) {
  const double upper =
      std::min(oscillatory_cutoff(t, 1.0, q), cosh_damping_cutoff(r));
  const double inv2t = 0.5 / t;
  const double w = kPi / t;
  Integrand f = [=](double y) {
    const double e = -y * y * inv2t - r * std::cosh(y);
    if (e < -745.0) return 0.0;
    return std::exp(e) * std::sinh(y) * std::sin(w * y);
  };
  return integrate_oscillatory(f, t, upper, q);
}

double theta_prefactor(double r, double t) {
  return r * std::exp(kPi * kPi / (2.0 * t)) /
         std::sqrt(2.0 * kPi * kPi * kPi * t);
}

// Clamp rule shared by all density evaluators.
double clamp_noise(double value, double error, double abs_tol,
                   const char* what) {
  if (value >= 0.0) return value;
  if (-value <= std::max(abs_tol, error)) return 0.0;
  throw AccuracyError(std::string(what) + ": negative value " +
                      std::to_string(value) + " beyond error bar " +
                      std::to_string(error));
}

// a with a + log(a) = x.
double a_from_x(double x) {
  if (x < -30.0) {
    double a = std::exp(x);
    a = std::exp(x - a);
    return a;
  }
  return boost::math::lambert_w0(std::exp(x));
}

PointValue density_general_raw(double v, double beta, double a,
                               const QuadratureSettings& q) {
  const double alpha = 0.5 * (beta + 1.0);
  const double log_pref = -0.5 * beta * beta * v + kPi * kPi / (2.0 * v) - a -
                          alpha * std::log(a) + std::lgamma(0.5 * beta + 1.0) +
                          std::lgamma(alpha) -
                          std::log(std::sqrt(2.0) * kPi * kPi * std::sqrt(v));
  const double inv2v = 0.5 / v;
  const double w = kPi / v;
  Integrand f = [=](double xi) {
    const double g = -xi * xi * inv2v;
    if (g < -745.0) return 0.0;
    const double c = std::cosh(xi);
    return std::exp(g) * std::sinh(xi) * std::sin(w * xi) *
           tricomi_u_half(alpha, a * c * c);
  };
  const QuadratureResult r =
      integrate_oscillatory(f, v, oscillatory_cutoff(v, 1.0, q), q);
  const double pref = std::exp(log_pref);
  return PointValue{pref * r.value, pref * r.total_error(), r.panels};
}

PointValue density_critical_raw(double t, double a,
                                const QuadratureSettings& q) {
  const double pref = std::sqrt(2.0) * std::exp(kPi * kPi / (8.0 * t)) /
                      std::sqrt(kPi * kPi * t) / std::sqrt(a);
  // Cutoff where a cosh^2 y - y >= 45.
  double y_a = std::acosh(std::max(1.0, std::sqrt(45.0 / a)));
  for (int i = 0; i < 8; ++i) {
    y_a = std::acosh(std::max(1.0, std::sqrt((45.0 + y_a) / a)));
  }
  const double upper = std::min(oscillatory_cutoff(t, 1.0, q), y_a + 0.5);
  const double inv2t = 0.5 / t;
  const double w = kPi / (2.0 * t);
  Integrand f = [=](double y) {
    const double c = std::cosh(y);
    const double e = -a * c * c - y * y * inv2t;
    if (e < -745.0) return 0.0;
    return std::exp(e) * c * std::cos(w * y);
  };
  const QuadratureResult r = integrate_oscillatory(f, t, upper, q);
  return PointValue{pref * r.value, pref * r.total_error(), r.panels};
}

PointValue density_raw(double v, double beta, double a,
                       const QuadratureSettings& q, DensityForm form) {
  require_tmin(v, "density_inv_two_A");
  if (!(beta > -1.0)) {
    throw DomainError("density of 1/(2A): formula requires beta > -1");
  }
  if (beta < kBetaMinDensity) {
    throw DomainError("density of 1/(2A): beta < -0.9 is not supported");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("density of 1/(2A): a must be finite and > 0");
  }
  if (form == DensityForm::kCritical && beta != 0.0) {
    throw DomainError("critical density form requires beta == 0");
  }
  if (form == DensityForm::kCritical ||
      (form == DensityForm::kAuto && beta == 0.0)) {
    return density_critical_raw(v, a, q);
  }
  return density_general_raw(v, beta, a, q);
}

}  // namespace

double hartman_watson_theta(double r, double t, const QuadratureSettings& q) {
  require_tmin(t, "hartman_watson_theta");
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("hartman_watson_theta: r must be finite and > 0");
  }
  const QuadratureResult res = theta_integral(r, t, q);
  const double pref = theta_prefactor(r, t);
  return clamp_noise(pref * res.value, pref * res.total_error(), q.abs_tol,
                     "hartman_watson_theta");
}

double girsanov_tilt(double beta, double t, double x) {
  return std::exp(beta * x - 0.5 * beta * beta * t);
}

namespace {

// (1/u) exp(-(1 + e^{2x}) / (2u)) theta_{e^x/u}(t).
double driftless_kernel(double t, double x, double u,
                        const QuadratureSettings& q) {
  require_tmin(t, "joint_density");
  if (!(u > 0.0)) throw DomainError("joint_density: u must be > 0");
  const double e = (1.0 + std::exp(2.0 * x)) / (2.0 * u);
  if (e > 745.0) return 0.0;
  const double r = std::exp(x) / u;
  if (!(r > 0.0) || !std::isfinite(r)) return 0.0;
  return std::exp(-e) / u * hartman_watson_theta(r, t, q);
}

}  // namespace

double bridge_density(double t, double x, double u,
                      const QuadratureSettings& q) {
  return std::sqrt(2.0 * kPi * t) * std::exp(x * x / (2.0 * t)) *
         driftless_kernel(t, x, u, q);
}

double joint_density(double beta, double t, double x, double u,
                     const QuadratureSettings& q) {
  return girsanov_tilt(beta, t, x) * driftless_kernel(t, x, u, q);
}

PointValue density_inv_two_A_detail(double v, double beta, double a,
                                    const QuadratureSettings& q,
                                    DensityForm form) {
  PointValue p = density_raw(v, beta, a, q, form);
  p.value = clamp_noise(p.value, p.error, q.abs_tol, "density_inv_two_A");
  return p;
}

double density_inv_two_A(double v, double beta, double a,
                         const QuadratureSettings& q, DensityForm form) {
  return density_inv_two_A_detail(v, beta, a, q, form).value;
}

double DensityGrid::integrate(const std::function<double(double)>& g) const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    acc += weights[i] * g(abscissae[i]) * values[i];
  }
  if (!abscissae.empty()) acc += g(abscissae.back()) * upper_tail;
  return acc.value();
}

double DensityGrid::integrate_error(
    const std::function<double(double)>& g) const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    acc += weights[i] * std::abs(g(abscissae[i])) * errors[i];
  }
  return acc.value();
}

double DensityGrid::total_mass() const {
  return integrate([](double) { return 1.0; });
}

double DensityGrid::mean() const {
  return integrate([](double a) { return a; });
}

DensityGrid build_density_grid(double v, double beta,
                               const QuadratureSettings& q,
                               const DensityGridOptions& options) {
  if (!(options.step > 0.0) || !(options.a_max > 1.0)) {
    throw ConfigError("density grid: step must be > 0 and a_max > 1");
  }
  DensityGrid grid;
  grid.v = v;
  grid.beta = beta;
  const double h = options.step;
  const double x_hi = options.a_max + std::log(options.a_max);

  std::vector<double> as, ps, errs;
  double peak = 0.0;
  double prev_j = std::numeric_limits<double>::infinity();
  for (int k = 0;; ++k) {
    const double x = x_hi - h * k;
    const double a = a_from_x(x);
    if (x < -700.0 || !(a > 0.0)) break;
    const PointValue p = density_raw(v, beta, a, q, DensityForm::kAuto);
    ++grid.evaluations;
    grid.panels += p.panels;
    const double g = options.weight ? std::abs(options.weight(a)) : 1.0;
    const double j = g * std::abs(p.value) * a / (1.0 + a);
    const double j_err = g * p.error * a / (1.0 + a);
    if (k > 2 && j_err > options.noise_ratio * j) {
      grid.truncated_by_noise = true;
      if (options.strict && prev_j > options.strict_ratio * peak) {
        throw AccuracyError(
            "density grid: lower tail unresolved (v=" + std::to_string(v) +
            ", beta=" + std::to_string(beta) + ", a=" + std::to_string(a) +
            ")");
      }
      break;
    }
    peak = std::max(peak, j);
    as.push_back(a);
    ps.push_back(clamp_noise(p.value, p.error, q.abs_tol, "density grid"));
    errs.push_back(p.error);
    if (k > 2 && j <= prev_j && j < options.drop_ratio * peak) break;
    prev_j = j;
  }
  if (as.size() < 3) throw AccuracyError("density grid: too few points");
  if (as.size() % 2 == 0) {
    as.pop_back();
    ps.pop_back();
    errs.pop_back();
  }
  std::reverse(as.begin(), as.end());
  std::reverse(ps.begin(), ps.end());
  std::reverse(errs.begin(), errs.end());
  const std::size_t n = as.size();
  grid.abscissae = as;
  grid.values = ps;
  grid.errors = errs;
  grid.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    grid.weights[i] = h / 3.0 * c * as[i] / (1.0 + as[i]);
  }
  // Envelope p(a) ~ p(a_max) e^{-(a - a_max)} (a / a_max)^{-(beta+1)/2}.
  const double a_top = as.back();
  const double k_exp = 0.5 * (beta + 1.0);
  Integrand env = [=](double y) {
    return std::exp(-y) * std::pow(1.0 + y / a_top, -k_exp);
  };
  grid.upper_tail = ps.back() * integrate_to_infinity(env, 0.0, q).value;
  return grid;
}

double phi_beta(double beta, double a, const QuadratureSettings& q) {
  if (!(beta > 0.0 && beta < 2.0)) {
    throw DomainError("phi_beta: beta must lie in (0, 2)");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("phi_beta: a must be finite and > 0");
  }
  const double alpha = 0.5 * (beta + 1.0);
  // Upper end: cosh^2 must stay finite and xi e^{-beta xi} small.
  const double xi_hi = 340.0;
  double xi_cut = xi_hi;
  for (double xi = 1.0; xi < xi_hi; xi += 1.0) {
    if (a * std::cosh(xi) * std::cosh(xi) > 1e6 &&
        std::log(xi) - beta * xi < -40.0) {
      xi_cut = xi;
      break;
    }
  }
  Integrand f = [=](double xi) {
    const double c = std::cosh(xi);
    return xi * std::sinh(xi) * tricomi_u_half(alpha, a * c * c);
  };
  // Split at the bend where a cosh^2 ~ 1 so the adaptive rule sees the peak.
  const double bend = std::acosh(std::max(1.0, 1.0 / std::sqrt(a)));
  QuadratureResult left = integrate_interval(f, 0.0, std::min(bend, xi_cut), q);
  QuadratureResult right =
      bend < xi_cut ? integrate_interval(f, bend, xi_cut, q)
                    : QuadratureResult{};
  double integral = left.value + right.value;
  // Leading-order tail: U ~ x^{-alpha}, xi sinh(xi) (a cosh^2)^{-alpha} ~
  // a^{-alpha} 2^{2 alpha - 1} xi e^{-beta xi}.
  integral += std::pow(a, -alpha) * std::pow(2.0, 2.0 * alpha - 1.0) *
              std::exp(-beta * xi_cut) * (xi_cut / beta + 1.0 / (beta * beta));
  const double log_pref = std::lgamma(0.5 * beta + 1.0) + std::lgamma(alpha) -
                          std::log(std::sqrt(2.0) * kPi) - a -
                          alpha * std::log(a);
  return std::exp(log_pref) * integral;
}

double laplace_conditional(const ModelParams& params, double z, double lam,
                           const EnvPath& path) {
  params.validate();
  if (params.theta != 0.0) {
    throw DomainError(
        "laplace_conditional: Laplace transform with immigration unsupported");
  }
  if (!(z >= 0.0)) throw DomainError("laplace_conditional: z must be >= 0");
  if (!(lam >= 0.0)) throw DomainError("laplace_conditional: lam must be >= 0");
  if (lam == 0.0 || z == 0.0) return 1.0;
  const double denom = half_time_change_total(path, params.sigma_b2) +
                       (std::isinf(lam) ? 0.0 : std::exp(-path.values.back()) / lam);
  if (std::isinf(z)) return 0.0;
  return std::exp(-z / denom);
}

double survival_conditional(const ModelParams& params, double z,
                            const EnvPath& path) {
  params.validate();
  if (params.theta != 0.0) {
    throw DomainError("survival_conditional: requires theta = 0");
  }
  if (path.values.empty()) {
    throw DomainError("survival_conditional: empty path");
  }
  if (!(z >= 0.0)) throw DomainError("survival_conditional: z must be >= 0");
  if (z == 0.0) return 0.0;
  return -std::expm1(-z / half_time_change_total(path, params.sigma_b2));
}

namespace {

void check_survival_inputs(const ModelParams& params, double z, double t) {
  params.validate();
  if (params.sigma_e2 == 0.0) {
    throw DomainError("survival_exact: requires sigma_e2 > 0");
  }
  if (params.theta != 0.0) {
    throw DomainError("survival_exact: requires theta = 0");
  }
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw DomainError("survival_exact: z must be finite and >= 0");
  }
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("survival_exact: t must be finite and > 0");
  }
  if (t * params.sigma_e2 / 4.0 < kTMin) {
    throw StabilityError(
        "survival_exact: t * sigma_e2 / 4 below 0.3, quadrature unstable");
  }
}

}  // namespace

SurvivalResult survival_via_density(const ModelParams& params, double z,
                                    double t, const QuadratureSettings& q) {
  check_survival_inputs(params, z, t);
  SurvivalResult out;
  out.method = "density";
  const double beta = beta_of(params);
  if (beta < kBetaMinDensity) {
    throw DomainError("survival via density: beta must be >= -0.9");
  }
  if (z == 0.0) return out;
  const double v = t * params.sigma_e2 / 4.0;
  DensityGridOptions opt;
  opt.weight = [&params, z](double a) { return f_eval(params, z * a); };
  opt.strict = false;
  opt.drop_ratio = 1e-13;
  const DensityGrid grid = build_density_grid(v, beta, q, opt);
  out.value = grid.integrate(opt.weight);
  out.error = grid.integrate_error(opt.weight);
  if (grid.truncated_by_noise) {
    // Unresolved mass below the grid: f(z a) <= c z a.
    out.error += params.sigma_e2 / params.sigma_b2 * z * grid.abscissae.front();
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

namespace {

// pref * int dx tilt(x) int dy e^{-y^2/2v} sinh y sin(pi y / v) K(x, C)
// with C = cosh x + cosh y: expectations of functionals of 1/(2A_v^{(beta)})
// whose Laplace-kernel integral over the Bessel variable is available in
// closed form.
PointValue joint_route(double beta, double v,
                       const std::function<double(double, double)>& kernel,
                       const QuadratureSettings& q) {
  const double inv2v = 0.5 / v;
  const double w = kPi / v;
  const double y_cut = oscillatory_cutoff(v, 1.0, q);
  double worst = 0.0;
  Integrand outer = [&](double x) {
    const double chx = std::cosh(x);
    Integrand inner = [&, chx](double y) {
      const double g = -y * y * inv2v;
      if (g < -745.0) return 0.0;
      return std::exp(g) * std::sinh(y) * std::sin(w * y) *
             kernel(x, chx + std::cosh(y));
    };
    const QuadratureResult r = integrate_oscillatory(inner, v, y_cut, q);
    const double tilt = girsanov_tilt(beta, v, x);
    worst = std::max(worst, tilt * r.total_error());
    return tilt * r.value;
  };
  // The tilted integrand is bounded by the N(beta v, v) density, which is
  // below 1e-17 outside this window; further out the tilt only amplifies the
  // cancellation floor of the inner integral.
  const double spread = 9.0 * std::sqrt(v) + 1.0;
  const double lo = beta * v - spread;
  const double hi = beta * v + spread;
  QuadratureSettings outer_q = q;
  outer_q.rel_tol = std::max(q.rel_tol, 1e-10);
  const QuadratureResult res = integrate_interval(outer, lo, hi, outer_q);
  const double pref =
      std::exp(kPi * kPi / (2.0 * v)) / std::sqrt(2.0 * kPi * kPi * kPi * v);
  return PointValue{pref * res.value, pref * (res.error + worst * (hi - lo)),
                    res.panels};
}

constexpr double kJointMaxError = 1e-6;

void check_joint_beta(double beta) {
  if (beta > 1.0) {
    throw DomainError(
        "joint density route: beta > 1 amplifies cancellation; use the "
        "density route");
  }
}

}  // namespace

SurvivalResult survival_via_joint_density(const ModelParams& params, double z,
                                          double t,
                                          const QuadratureSettings& q) {
  check_survival_inputs(params, z, t);
  SurvivalResult out;
  out.method = "joint_density";
  const double beta = beta_of(params);
  check_joint_beta(beta);
  if (z == 0.0) return out;
  const double v = t * params.sigma_e2 / 4.0;
  const double c = params.sigma_e2 / params.sigma_b2;
  // For fixed x the r-integral is done in closed form:
  // int_0^inf (1 - e^{-k r}) e^{-r C} dr = k / (C (C + k)).
  const PointValue r = joint_route(
      beta, v,
      [&](double x, double cc) {
        const double k = 0.5 * c * z * std::exp(-x);
        return k / (cc * (cc + k));
      },
      q);
  if (!(r.error <= kJointMaxError)) {
    throw AccuracyError(fmt::format(
        "survival via joint density: error estimate {:.3g} exceeds {:.0e} "
        "(beta={}, v={}); the drift tilt amplifies cancellation",
        r.error, kJointMaxError, beta, v));
  }
  out.value = std::clamp(r.value, 0.0, 1.0);
  out.error = r.error;
  return out;
}

PointValue mean_inv_two_A_joint(double beta, double v,
                                const QuadratureSettings& q) {
  check_joint_beta(beta);
  if (!(v >= kTMin)) {
    throw StabilityError("mean_inv_two_A_joint: v below the stable range");
  }
  // z-derivative at 0 of the survival kernel.
  return joint_route(
      beta, v,
      [](double x, double cc) { return 0.5 * std::exp(-x) / (cc * cc); }, q);
}

SurvivalResult survival_exact_detail(const ModelParams& params, double z,
                                     double t, const QuadratureSettings& q) {
  check_survival_inputs(params, z, t);
  if (beta_of(params) < kBetaMinDensity) {
    return survival_via_joint_density(params, z, t, q);
  }
  return survival_via_density(params, z, t, q);
}

double survival_exact(const ModelParams& params, double z, double t,
                      const QuadratureSettings& q) {
  return survival_exact_detail(params, z, t, q).value;
}

GammaLaw gamma_limit(double a, double b) {
  if (!(b > 0.0)) {
    throw DomainError("gamma_limit: b <= 0 makes the integral diverge");
  }
  if (a == 0.0 || !std::isfinite(a)) {
    throw DomainError("gamma_limit: a must be finite and non-zero");
  }
  return GammaLaw{2.0 * b / (a * a), 0.5 * a * a};
}

}  // namespace bdre
