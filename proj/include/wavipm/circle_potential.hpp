#pragma once

#include <vector>

#include "wavipm/coefficients.hpp"

namespace wavipm {

/// Square-wave bump potential for the oscillating-circle family: amplitude
/// n^-(eta-1), alternating sign per half-period, vanishing at every node
/// k/(2n).
struct PotentialSpec {
  int eta = 1;
  int n = 1;
  double beta = 0.0;
  int bump_order = 1;

  void validate() const;
};

/// H1(t) = (-1)^floor(2nt) n^-(eta-1) lambda(2n(t - floor(2nt)/(2n))).
double potential_h1(double t, const PotentialSpec& spec);

/// n^-(beta+1) * int_0^1 H1(t) sin(2 pi n t) dt by periodic trapezoid;
/// strictly positive. Requires quad_nodes >= 32 n.
double cost_integral(const PotentialSpec& spec, int quad_nodes);

/// Exact sup of int f(t) sin(2 pi n t) dt over the unit ball of the
/// periodic order-(eta-1) L2 Sobolev space: n^-(eta-1)/sqrt(2).
double sobolev_sup(int n, int eta);

struct ExampleRow {
  int n = 0;
  double displacement = 0;  // W1 proxy for the radial transport
  double pairing = 0;       // full 2-D potential against (mu_n, T_# mu_n)
  double cost = 0;          // 1-D cost integral
  double d_one = 0;         // dual-norm surrogate at gamma = 1
  double d_eta = 0;         // dual-norm surrogate at gamma = eta
  double d_half = 0;        // gamma = 1/2 extension
  double ratio = 0;         // pairing / cost
};

struct ExampleReport {
  std::vector<ExampleRow> rows;
  double slope_displacement = 0;
  double slope_pairing = 0;
  double slope_cost = 0;
  double slope_d_one = 0;
  double slope_d_eta = 0;
  double slope_d_half = 0;
};

/// End-to-end run of the oscillating-circle construction over ascending n:
/// displacement cost, full 2-D potential pairing (theta the outward circle
/// normal, curve parameter recovered by atan2), cost integral and dual-norm
/// distances, with log-log slopes over n.
ExampleReport example_report(double beta, int eta,
                             const std::vector<int>& n_list, int quad_nodes,
                             int max_level);

}  // namespace wavipm
