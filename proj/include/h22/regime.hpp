#pragma once

#include <string>
#include <vector>

namespace h22 {

// The explicit constants of the quantitative theorems for exponents alpha,
// gamma and protection budget kappa.
struct RegimeConstants {
  double alpha;
  double gamma;
  double kappa;
  double c1;            // (2/3) exp(-sqrt(2)(alpha-1)/(alpha-3))
  double c3;            // c4 / log 2
  double c4;            // min{(2 log 2 / 3) exp(-sqrt(2)(a-g-1)/(a-g-3)) kappa, 1/16}
  double wbar0;         // -log(kappa/36) / (2 c4)
  double cdelta_bound;  // exp(sqrt(2)(a-g-1)/(a-g-3))
};

// Requires alpha - gamma > 3, gamma >= 0, kappa in (0, 1].
RegimeConstants regime_constants(double alpha, double gamma, double kappa);

// The three admissibility clauses for the cosh-moment bound; reasons lists
// every failed clause so reports can say which hypothesis is unmet.
struct AdmissibilityReport {
  bool admissible = false;
  double kappa_limit = 0.0;     // 1 / (16 c1 log 2)
  double wbar_threshold = 0.0;  // (1 / (2 c1 kappa)) log2(36 / kappa)
  double exponent_limit = 0.0;  // c1 kappa wbar
  std::vector<std::string> reasons;
};
AdmissibilityReport check_admissible(double kappa, double wbar, double m, double alpha);

// Parameter choices from the theorem's bullet list: kappa = wbar^{-s} for
// s in (0,1), or kappa = c2 log(wbar)/wbar for c2 above its threshold.
struct RegimeChoice {
  double kappa;
  double exponent_limit;  // c1 kappa wbar
  bool wbar_large_enough;
};
RegimeChoice power_regime(double alpha, double wbar, double s);
RegimeChoice log_regime(double alpha, double wbar, double c2);

// Smallest admissible coefficient is 1/(2 c1 log 2); the default sits 6%
// above it.
double log_coefficient_threshold(double alpha);
double default_log_coefficient(double alpha);

// Protection schedule delta_j = j^{-(alpha-gamma-1)}, p_j = 4 c4 wbar j^alpha.
struct CutoffTerm {
  double delta;
  double power;
};
CutoffTerm cutoff_schedule(double alpha, double gamma, double wbar, int j, double kappa = 1.0);

double sqrt_delta_partial_sum(double alpha, double gamma, long terms);
double sqrt_delta_sum_bound(double alpha, double gamma);  // (a-g-1)/(a-g-3)

// Certified two-sided enclosure of exp(sqrt(2) sum_l sqrt(delta_l)); the
// lower bound uses a partial sum only, the upper adds an integral tail.
struct AmplificationBound {
  double lower;
  double upper;
};
AmplificationBound protection_amplification(double alpha, double gamma);

// Closed form of wbar0 at kappa = 1, gamma = 0:
// max{16 log 6, (3/2) exp(sqrt(2)(alpha-1)/(alpha-3)) log2 6}.
double special_case_wbar0(double alpha);

}  // namespace h22
