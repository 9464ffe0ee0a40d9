#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "h22/detbounds.hpp"
#include "h22/graph.hpp"
#include "h22/model.hpp"

namespace h22 {

// A scalar function of the field configuration. log_eval is provided for
// observables that can overflow in linear scale (large products of B powers);
// it may return -infinity where the observable vanishes.
struct Observable {
  std::string name;
  bool needs_s = false;
  std::function<double(const PinnedGraph&, const FieldConfig&)> eval;
  std::function<double(const PinnedGraph&, const FieldConfig&)> log_eval;  // optional
};

// (cosh u_i)^m
Observable cosh_power(int vertex, double exponent);

// (cosh(u_i - u_j))^m, either index may be kPinnedVertex
Observable cosh_gap_power(int vertex_a, int vertex_b, double exponent);

// s_i^2
Observable field_square(int vertex);

// Product of B_e^{m_e} over the listed vertex pairs, each optionally
// protected by the indicator B_e < 1 + delta_e (delta infinite or the list
// empty means unprotected). Carries a log evaluator.
Observable interaction_product(const std::vector<std::pair<int, int>>& pairs,
                               const std::vector<double>& exponents,
                               const std::vector<double>& deltas = {});

// prod B_e^{m_e} * prod 1{B_e < 1+delta_e} * det(Id - M Gamma), the protected
// localization integrand, over an explicit edge system (so zero-weight edges
// may carry exponents).
Observable deficit_product(const EdgeSystem& edges, const Eigen::VectorXd& exponents,
                           const Eigen::VectorXd& deltas);

}  // namespace h22
