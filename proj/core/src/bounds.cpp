#include "qlocal/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qlocal {

namespace {

const double kE = std::exp(1.0);

void check_params(const BoundParams& p, const char* who) {
  if (p.range_a < 0) throw precondition_error(std::string(who) + ": range < 0");
  if (p.max_neighbors < 1)
    throw precondition_error(std::string(who) + ": max_neighbors < 1");
  if (p.term_norm < 0)
    throw precondition_error(std::string(who) + ": term_norm < 0");
  if (p.growth_prefactor < 0)
    throw precondition_error(std::string(who) + ": growth_prefactor < 0");
  if (p.growth_exponent < 0)
    throw precondition_error(std::string(who) + ": growth_exponent < 0");
}

// Neumaier-compensated accumulation keeps long tails exact to double precision.
struct CompensatedSum {
  double sum = 0, comp = 0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

double lr_velocity(const BoundParams& p) {
  check_params(p, "lr_velocity");
  return kE * p.max_neighbors * p.term_norm;
}

double lr_bound(const BoundParams& p, int vol_x_ext, int vol_y_ext,
                double distance, double r, double t, double norm_k,
                double norm_o) {
  check_params(p, "lr_bound");
  if (t < r) throw precondition_error("lr_bound: need r <= t");
  if (distance < 0) throw precondition_error("lr_bound: distance < 0");
  if (vol_x_ext < 0 || vol_y_ext < 0)
    throw precondition_error("lr_bound: negative volume");
  if (norm_k < 0 || norm_o < 0)
    throw precondition_error("lr_bound: negative norm");
  const double vols = std::min(vol_x_ext, vol_y_ext);
  double ratio;
  if (p.range_a == 0)
    ratio = distance > 0 ? std::numeric_limits<double>::infinity() : 0;
  else
    ratio = distance / p.range_a;
  const double v = lr_velocity(p);
  return vols / p.max_neighbors * norm_k * norm_o *
         std::exp(v * (t - r) - ratio);
}

double quasi_locality_bound(const BoundParams& p, int cone_depth, double r,
                            double t, double norm_o) {
  check_params(p, "quasi_locality_bound");
  if (t < r) throw precondition_error("quasi_locality_bound: need r <= t");
  if (norm_o < 0) throw precondition_error("quasi_locality_bound: negative norm");
  const double kappa = p.growth_exponent;
  if (static_cast<double>(cone_depth) <= 2 * kappa + 1)
    throw precondition_error(
        "quasi_locality_bound: cone depth " + std::to_string(cone_depth) +
        " not above validity threshold 2*kappa+1 = " +
        std::to_string(2 * kappa + 1));
  const double v = lr_velocity(p);
  return 2.0 * p.growth_prefactor / p.max_neighbors * norm_o *
         std::pow(cone_depth, kappa) * std::exp(v * (t - r) - cone_depth);
}

double slice_trotter_bound(double dt, int max_neighbors, int vol_v_ext,
                           double term_norm) {
  if (dt < 0) throw precondition_error("slice_trotter_bound: dt < 0");
  if (max_neighbors < 1)
    throw precondition_error("slice_trotter_bound: max_neighbors < 1");
  if (vol_v_ext < 0)
    throw precondition_error("slice_trotter_bound: negative volume");
  if (term_norm < 0)
    throw precondition_error("slice_trotter_bound: term_norm < 0");
  return dt * dt * max_neighbors * vol_v_ext * term_norm * term_norm *
         std::exp(dt * term_norm);
}

TrotterBoundBreakdown trotter_total_bound(const BoundParams& p,
                                          const std::vector<double>& times,
                                          const std::vector<double>& cone_depths,
                                          const std::vector<int>& volumes) {
  check_params(p, "trotter_total_bound");
  if (times.size() < 2)
    throw precondition_error("trotter_total_bound: need at least one slice");
  const size_t n_slices = times.size() - 1;
  if (cone_depths.size() != n_slices || volumes.size() != n_slices)
    throw precondition_error(
        "trotter_total_bound: need one cone depth and one volume per slice");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (times[i + 1] < times[i])
      throw precondition_error("trotter_total_bound: times must not decrease");

  const double kappa = p.growth_exponent;
  const double v = lr_velocity(p);
  TrotterBoundBreakdown out;
  for (size_t n = 0; n < n_slices; ++n) {
    const double dt = times[n + 1] - times[n];
    double trunc = 0;
    const double depth = cone_depths[n];
    if (!std::isinf(depth)) {
      if (depth <= 2 * kappa + 1)
        throw precondition_error(
            "trotter_total_bound: slice " + std::to_string(n + 1) +
            " cone depth not above validity threshold");
      trunc = 2.0 * p.growth_prefactor / p.max_neighbors *
              std::pow(depth, kappa) *
              std::exp(v * (times[n + 1] - times.front()) - depth);
    }
    out.truncation += trunc;
    out.trotter +=
        slice_trotter_bound(dt, p.max_neighbors, volumes[n], p.term_norm);
  }
  out.total = out.truncation + out.trotter;
  return out;
}

TailSum partial_exp_sum(double x, int start) {
  if (x < 0) throw precondition_error("partial_exp_sum: x < 0");
  if (start < 0) throw precondition_error("partial_exp_sum: start < 0");
  TailSum out;
  out.bound = std::exp(x * kE - start);
  // term_n = x^n / n!, built forward from n = start to keep full precision
  // even when the tail is tiny (no cancellation against e^x).
  double term = 1.0;
  for (int k = 1; k <= start; ++k) term *= x / k;
  CompensatedSum acc;
  int n = start;
  while (true) {
    acc.add(term);
    ++n;
    term *= x / n;
    if (term <= acc.value() * 1e-20 || term < 1e-300) break;
    if (n > start + 100000) break;
  }
  out.exact = acc.value();
  return out;
}

TailSum exp_tail_sum(double kappa, int start) {
  if (kappa < 0) throw precondition_error("exp_tail_sum: kappa < 0");
  if (kappa == 0) {
    if (start < 1) throw precondition_error("exp_tail_sum: need start >= 1");
  } else if (static_cast<double>(start) <= 2 * kappa + 1) {
    throw precondition_error(
        "exp_tail_sum: start must exceed 2*kappa+1 when kappa > 0");
  }
  TailSum out;
  out.bound = 2.0 * kE * std::pow(start, kappa) * std::exp(-start);
  CompensatedSum acc;
  for (int n = start;; ++n) {
    const double term = std::exp(kappa * std::log(double(n)) - n);
    acc.add(term);
    // terms decay at least like e^{-1} each once n > kappa
    if (n > kappa && term <= acc.value() * 1e-20) break;
    if (n > start + 100000) break;
  }
  out.exact = acc.value();
  return out;
}

}  // namespace qlocal
