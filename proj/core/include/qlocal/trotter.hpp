#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qlocal/propagator.hpp"

namespace qlocal {

// A slicing of [t_0, t_N] with one region per slice. Regions must be
// nondecreasing (V_n inside V_{n+1}) and each must contain the observable
// region the schedule is meant for.
struct Schedule {
  std::vector<double> times;   // t_0 ... t_N, nondecreasing
  std::vector<Region> regions; // V_1 ... V_N
};

// Ball-growth schedule around y: slice n covers all sites within distance
// a * (d0 + ceil(v * n * dt)) of y, times t0 + n*dt capped at t0 + t_total.
Schedule light_cone_schedule(const LiouvillianSpec& spec, const Region& y,
                             double t0, double t_total, double dt, int d0,
                             double velocity);

struct ScheduleInfo {
  std::vector<Region> extensions;   // closure of each slice region
  std::vector<int> volumes;         // supports inside each closure
  std::vector<bool> saturated;      // closure holds every support of the model
  // ceil(dist(y, complement V_n)/a); +inf when saturated or complement empty,
  // i.e. when the slice truncates nothing.
  std::vector<double> cone_depths;
};

ScheduleInfo analyze_schedule(const LiouvillianSpec& spec, const Schedule& sched,
                              const Region& y);

enum class ChannelOrdering { Lexicographic, EvenOdd, SeededRandom };

ChannelOrdering ordering_from_string(const std::string& s);
std::string to_string(ChannelOrdering o);

// One product factor: the combined generator of every term living on
// `support`, integrated over [t0, t1]. When `amplitudes` is non-empty the
// profiles are replaced by these constants (interval averages).
struct Channel {
  int slice = 0;  // 1-based
  Region support;
  std::vector<int> term_indices;  // into spec.terms, ascending
  double t0 = 0, t1 = 0;
  std::vector<double> amplitudes;
};

// Channels are listed in operator-product order: the LAST channel in the list
// acts on the observable first.
struct TrotterCircuit {
  Schedule schedule;
  std::vector<Channel> channels;
};

TrotterCircuit build_circuit(const LiouvillianSpec& spec, const Schedule& sched,
                             ChannelOrdering ordering, bool averaged,
                             std::uint64_t seed = 0);

// Applies the circuit to o (whose region must contain every channel support).
// Channel propagators are matrix exponentials for constant or averaged
// amplitudes and integrated channels otherwise, applied through local
// contraction kernels.
Op apply_circuit(const LiouvillianSpec& spec, const TrotterCircuit& circuit,
                 const Op& o, const SolverConfig& solver = {},
                 SolverStats* stats = nullptr);

// Deterministic observable set on y: a Hermitian operator basis first (Pauli
// strings on qubits), then alternating seeded random Hermitian and random
// rank-one operators, all normalized to unit operator norm.
std::vector<Op> sample_observables(const SiteDims& dims, const Region& y,
                                   int count, std::uint64_t seed,
                                   std::vector<std::string>* kinds = nullptr);

// Precomputed comparison data: reference evolutions of the samples over the
// circuit's full span on a fixed window. Reusable across circuits sharing the
// same model, window and time span (e.g. a sweep over slice sizes). The
// window must contain every interaction support, so the references are exact
// comparators (up to the solver estimate); smaller windows are refused.
struct ErrorProbe {
  Region window;
  std::vector<Op> samples;     // embedded on window, unit norm
  std::vector<std::string> kinds;
  std::vector<Op> references;  // tau(t0, tN) applied to each sample
  double solver_err = 0;       // worst reference Richardson estimate
  // What the comparator truncates: always 0 for an admitted window.
  double comparator_truncation = 0;
};

ErrorProbe make_error_probe(const LiouvillianSpec& spec, const Region& y,
                            const Region& window, double t0, double t1,
                            int count, std::uint64_t seed,
                            const SolverConfig& solver = {});

struct ErrorSample {
  std::string kind;
  double ratio = 0;  // ||circuit(O) - tau(O)|| / ||O||
};

struct CircuitError {
  double observed_sup = 0;
  std::vector<ErrorSample> samples;
  double solver_err = 0;
  double comparator_truncation = 0;
};

// Worst-case circuit error over the probe's observables.
CircuitError measure_error(const LiouvillianSpec& spec,
                           const TrotterCircuit& circuit, const ErrorProbe& probe,
                           const SolverConfig& solver = {});

// Line-oriented text form: one channel per line in product order plus header
// comments carrying the slice times.
void serialize_circuit(const LiouvillianSpec& spec, const TrotterCircuit& circuit,
                       std::ostream& os);
std::string serialize_circuit(const LiouvillianSpec& spec,
                              const TrotterCircuit& circuit);

}  // namespace qlocal
