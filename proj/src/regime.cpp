#include "h22/regime.hpp"

#include <cmath>
#include <stdexcept>

namespace h22 {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLog2 = 0.6931471805599453;

void require_exponents(double alpha, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (!(alpha - gamma > 3.0)) throw std::invalid_argument("need alpha - gamma > 3");
}

double growth_coefficient(double alpha) {
  if (!(alpha > 3.0)) throw std::invalid_argument("need alpha > 3");
  return (2.0 / 3.0) * std::exp(-kSqrt2 * (alpha - 1.0) / (alpha - 3.0));
}

}  // namespace

RegimeConstants regime_constants(double alpha, double gamma, double kappa) {
  require_exponents(alpha, gamma);
  if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in (0, 1]");
  const double ratio = (alpha - gamma - 1.0) / (alpha - gamma - 3.0);
  RegimeConstants rc;
  rc.alpha = alpha;
  rc.gamma = gamma;
  rc.kappa = kappa;
  rc.c1 = growth_coefficient(alpha);
  rc.c4 = std::min((2.0 * kLog2 / 3.0) * std::exp(-kSqrt2 * ratio) * kappa, 1.0 / 16.0);
  rc.c3 = rc.c4 / kLog2;
  rc.wbar0 = -std::log(kappa / 36.0) / (2.0 * rc.c4);
  rc.cdelta_bound = std::exp(kSqrt2 * ratio);
  return rc;
}

AdmissibilityReport check_admissible(double kappa, double wbar, double m, double alpha) {
  if (!(kappa > 0.0) || std::isnan(kappa)) throw std::invalid_argument("kappa must be positive");
  const double c1 = growth_coefficient(alpha);
  AdmissibilityReport report;
  report.kappa_limit = 1.0 / (16.0 * c1 * kLog2);
  report.wbar_threshold = std::log2(36.0 / kappa) / (2.0 * c1 * kappa);
  report.exponent_limit = c1 * kappa * wbar;
  if (kappa > 1.0) report.reasons.push_back("kappa outside (0, 1]");
  if (kappa > report.kappa_limit) report.reasons.push_back("kappa above limit");
  if (wbar < report.wbar_threshold) report.reasons.push_back("wbar below threshold");
  if (m > report.exponent_limit) report.reasons.push_back("exponent above limit");
  report.admissible = report.reasons.empty();
  return report;
}

RegimeChoice power_regime(double alpha, double wbar, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("power regime needs s in (0, 1)");
  if (!(wbar > 1.0)) throw std::invalid_argument("power regime needs wbar > 1");
  RegimeChoice choice;
  choice.kappa = std::pow(wbar, -s);
  const double c1 = growth_coefficient(alpha);
  choice.exponent_limit = c1 * choice.kappa * wbar;
  choice.wbar_large_enough = check_admissible(choice.kappa, wbar, 0.0, alpha).admissible;
  return choice;
}

double log_coefficient_threshold(double alpha) {
  return 1.0 / (2.0 * growth_coefficient(alpha) * kLog2);
}

double default_log_coefficient(double alpha) {
  return 1.06 * log_coefficient_threshold(alpha);
}

RegimeChoice log_regime(double alpha, double wbar, double c2) {
  if (!(wbar > 1.0)) throw std::invalid_argument("log regime needs wbar > 1");
  if (!(c2 > log_coefficient_threshold(alpha))) {
    throw std::invalid_argument("log regime coefficient below threshold");
  }
  RegimeChoice choice;
  choice.kappa = c2 * std::log(wbar) / wbar;
  const double c1 = growth_coefficient(alpha);
  choice.exponent_limit = c1 * choice.kappa * wbar;
  choice.wbar_large_enough =
      choice.kappa <= 1.0 && check_admissible(choice.kappa, wbar, 0.0, alpha).admissible;
  return choice;
}

CutoffTerm cutoff_schedule(double alpha, double gamma, double wbar, int j, double kappa) {
  if (j < 1) throw std::invalid_argument("schedule index starts at 1");
  const RegimeConstants rc = regime_constants(alpha, gamma, kappa);
  CutoffTerm term;
  term.delta = std::pow(static_cast<double>(j), -(alpha - gamma - 1.0));
  term.power = 4.0 * rc.c4 * wbar * std::pow(static_cast<double>(j), alpha);
  return term;
}

double sqrt_delta_partial_sum(double alpha, double gamma, long terms) {
  require_exponents(alpha, gamma);
  if (terms < 0) throw std::invalid_argument("negative term count");
  const double q = (alpha - gamma - 1.0) / 2.0;
  double sum = 0.0;
  double carry = 0.0;
  for (long l = terms; l >= 1; --l) {  // ascending magnitude
    const double y = std::pow(static_cast<double>(l), -q) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double sqrt_delta_sum_bound(double alpha, double gamma) {
  require_exponents(alpha, gamma);
  return (alpha - gamma - 1.0) / (alpha - gamma - 3.0);
}

AmplificationBound protection_amplification(double alpha, double gamma) {
  require_exponents(alpha, gamma);
  const double q = (alpha - gamma - 1.0) / 2.0;
  const long cutoff = 200000;
  const double partial = sqrt_delta_partial_sum(alpha, gamma, cutoff);
  // sum_{l > L} l^{-q} <= integral_L^inf t^{-q} dt = L^{1-q}/(q-1), q > 1.
  const double tail = std::pow(static_cast<double>(cutoff), 1.0 - q) / (q - 1.0);
  AmplificationBound bound;
  bound.lower = std::exp(kSqrt2 * partial);
  bound.upper = std::exp(kSqrt2 * (partial + tail));
  return bound;
}

double special_case_wbar0(double alpha) {
  const double c1 = growth_coefficient(alpha);
  return std::max(16.0 * std::log(6.0), std::log2(6.0) / c1);
}

}  // namespace h22
