#pragma once

#include <vector>

#include "qlocal/errors.hpp"

namespace qlocal {

// Model constants entering every envelope: interaction range a, max number of
// mutually intersecting supports Z, strongest local generator norm, and the
// shell-growth fit (count of shell-n supports <= m * n^kappa).
struct BoundParams {
  double range_a = 1;
  int max_neighbors = 1;
  double term_norm = 1;
  double growth_prefactor = 1;
  double growth_exponent = 0;
};

// Information propagation speed e * Z * ||l||.
double lr_velocity(const BoundParams& p);

// Light-cone envelope for || K_X tau(r,t) O_Y ||:
//   (min(vol_x_ext, vol_y_ext) / Z) * norm_k * norm_o
//     * exp(v (t-r) - distance / a).
// Needs r <= t; a zero range with positive distance gives 0.
double lr_bound(const BoundParams& p, int vol_x_ext, int vol_y_ext,
                double distance, double r, double t, double norm_k,
                double norm_o);

// Truncation envelope for || tau(r,t) O_Y - tau_V(r,t) O_Y || at cone depth
// D = ceil(dist(Y, complement V) / a):
//   (2 m / Z) * norm_o * D^kappa * exp(v (t-r) - D).
// Valid for D > 2 kappa + 1 (D > 1 when kappa = 0); otherwise refuses.
double quasi_locality_bound(const BoundParams& p, int cone_depth, double r,
                            double t, double norm_o);

// One-slice product error dt^2 * Z * volume * ||l||^2 * exp(dt ||l||).
double slice_trotter_bound(double dt, int max_neighbors, int vol_v_ext,
                           double term_norm);

struct TrotterBoundBreakdown {
  double total = 0;
  double truncation = 0;  // summed cone-truncation envelopes
  double trotter = 0;     // summed slice product errors
};

// Full circuit envelope: per slice n the truncation envelope at depth
// cone_depths[n] (infinite depth = nothing truncated = zero contribution)
// plus the slice product error. times = {t_0 ... t_N} nondecreasing;
// cone_depths and volumes have one entry per slice.
TrotterBoundBreakdown trotter_total_bound(const BoundParams& p,
                                          const std::vector<double>& times,
                                          const std::vector<double>& cone_depths,
                                          const std::vector<int>& volumes);

struct TailSum {
  double exact = 0;
  double bound = 0;
};

// Exponential tail sum_{n >= start} x^n / n! with its envelope e^{x e - start}.
TailSum partial_exp_sum(double x, int start);

// Polynomial-weighted tail sum_{n >= start} n^kappa e^{-n} with envelope
// 2 e start^kappa e^{-start}. Needs start > 2 kappa + 1 for kappa > 0 and
// start >= 1 for kappa = 0.
TailSum exp_tail_sum(double kappa, int start);

}  // namespace qlocal
