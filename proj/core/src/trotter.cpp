#include "qlocal/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qlocal/format.hpp"

namespace qlocal {

Schedule light_cone_schedule(const LiouvillianSpec& spec, const Region& y,
                             double t0, double t_total, double dt, int d0,
                             double velocity) {
  if (y.empty()) throw input_error("light_cone_schedule: empty observable region");
  if (t_total <= 0 || dt <= 0)
    throw input_error("light_cone_schedule: need positive span and slice");
  if (d0 < 0 || velocity < 0)
    throw input_error("light_cone_schedule: need d0 >= 0 and velocity >= 0");
  const InteractionHypergraph hg = spec.hypergraph();
  const double a = interaction_range(spec.geometry, hg);
  const long n_slices =
      std::max<long>(1, static_cast<long>(std::ceil(t_total / dt - 1e-9)));
  Schedule sched;
  sched.times.push_back(t0);
  for (long n = 1; n <= n_slices; ++n) {
    sched.times.push_back(std::min(t0 + n * dt, t0 + t_total));
    const double depth =
        d0 + std::ceil(velocity * (n * dt) - 1e-9);
    sched.regions.push_back(spec.geometry.ball(y, a * depth));
  }
  sched.times.back() = t0 + t_total;
  return sched;
}

namespace {

void validate_schedule(const Schedule& sched) {
  if (sched.times.size() < 2)
    throw input_error("schedule: need at least one slice");
  if (sched.regions.size() != sched.times.size() - 1)
    throw input_error("schedule: need one region per slice");
  for (size_t i = 0; i + 1 < sched.times.size(); ++i)
    if (sched.times[i + 1] < sched.times[i])
      throw input_error("schedule: times must not decrease");
  for (size_t i = 0; i + 1 < sched.regions.size(); ++i)
    if (!sched.regions[i + 1].contains(sched.regions[i]))
      throw input_error("schedule: regions must be nested");
  for (const Region& r : sched.regions)
    if (r.empty()) throw input_error("schedule: empty region");
}

}  // namespace

ScheduleInfo analyze_schedule(const LiouvillianSpec& spec, const Schedule& sched,
                              const Region& y) {
  validate_schedule(sched);
  const InteractionHypergraph hg = spec.hypergraph();
  ScheduleInfo info;
  for (const Region& v : sched.regions) {
    if (!v.contains(y))
      throw input_error("schedule: slice region must contain the observable");
    const Region ext = extension(hg, v);
    const int vol = volume(hg, ext);
    const bool sat = vol == hg.size();
    info.extensions.push_back(ext);
    info.volumes.push_back(vol);
    info.saturated.push_back(sat);
    info.cone_depths.push_back(
        sat ? std::numeric_limits<double>::infinity()
            : cone_depth(spec.geometry, hg, y, v));
  }
  return info;
}

ChannelOrdering ordering_from_string(const std::string& s) {
  if (s == "lexicographic") return ChannelOrdering::Lexicographic;
  if (s == "even_odd") return ChannelOrdering::EvenOdd;
  if (s == "random") return ChannelOrdering::SeededRandom;
  throw input_error("unknown channel ordering \"" + s + "\"");
}

std::string to_string(ChannelOrdering o) {
  switch (o) {
    case ChannelOrdering::Lexicographic: return "lexicographic";
    case ChannelOrdering::EvenOdd: return "even_odd";
    case ChannelOrdering::SeededRandom: return "random";
  }
  return "?";
}

TrotterCircuit build_circuit(const LiouvillianSpec& spec, const Schedule& sched,
                             ChannelOrdering ordering, bool averaged,
                             std::uint64_t seed) {
  validate_schedule(sched);
  const InteractionHypergraph hg = spec.hypergraph();
  std::map<Region, std::vector<int>> terms_on;
  for (size_t k = 0; k < spec.terms.size(); ++k)
    terms_on[spec.terms[k].support].push_back(static_cast<int>(k));

  TrotterCircuit circuit;
  circuit.schedule = sched;
  for (size_t n = 0; n < sched.regions.size(); ++n) {
    const Region ext = extension(hg, sched.regions[n]);
    std::vector<Region> slice_supports;
    for (const Region& z : hg.supports())
      if (ext.contains(z)) slice_supports.push_back(z);
    // hg.supports() is sorted, so this list starts lexicographic.
    switch (ordering) {
      case ChannelOrdering::Lexicographic:
        break;
      case ChannelOrdering::EvenOdd:
        std::stable_partition(slice_supports.begin(), slice_supports.end(),
                              [](const Region& z) {
                                return z.sites().front() % 2 == 0;
                              });
        break;
      case ChannelOrdering::SeededRandom: {
        auto rng =
            rng_from_seed(seed ^ (0x9e3779b97f4a7c15ull * (n + 1)));
        std::shuffle(slice_supports.begin(), slice_supports.end(), rng);
        break;
      }
    }
    const double t0 = sched.times[n], t1 = sched.times[n + 1];
    for (const Region& z : slice_supports) {
      Channel ch;
      ch.slice = static_cast<int>(n + 1);
      ch.support = z;
      ch.term_indices = terms_on.at(z);
      ch.t0 = t0;
      ch.t1 = t1;
      if (averaged)
        for (int idx : ch.term_indices)
          ch.amplitudes.push_back(spec.terms[idx].profile.average(t0, t1));
      circuit.channels.push_back(std::move(ch));
    }
  }
  return circuit;
}

namespace {

struct ChannelKey {
  std::vector<SiteId> sites;
  double t0 = 0, t1 = 0;
  bool averaged = false;

  bool operator<(const ChannelKey& o) const {
    if (sites != o.sites) return sites < o.sites;
    if (t0 != o.t0) return t0 < o.t0;
    if (t1 != o.t1) return t1 < o.t1;
    return averaged < o.averaged;
  }
};

// Propagator superoperator of one channel on its own support.
Matrix channel_superop(const LiouvillianSpec& spec, const Channel& ch,
                       const SolverConfig& solver, SolverStats* stats) {
  std::vector<Matrix> bases;
  bases.reserve(ch.term_indices.size());
  for (int idx : ch.term_indices)
    bases.push_back(
        term_superop_base(spec.terms[idx], spec.dims, ch.support).mat);
  const double dt = ch.t1 - ch.t0;
  const long dd = bases.empty() ? 0 : bases[0].rows();

  const bool averaged = !ch.amplitudes.empty();
  bool constant = true;
  for (int idx : ch.term_indices)
    constant = constant && spec.terms[idx].profile.is_constant();

  if (averaged || constant) {
    Matrix gen = Matrix::Zero(dd, dd);
    for (size_t k = 0; k < bases.size(); ++k) {
      const double c = averaged
                           ? ch.amplitudes[k]
                           : spec.terms[ch.term_indices[k]].profile.value(ch.t0);
      gen += c * bases[k];
    }
    return (dt * gen).exp();
  }

  // Live profiles: integrate dM/du = S(t1 - u) M from the identity.
  std::vector<const TimeProfile*> profiles;
  for (int idx : ch.term_indices)
    profiles.push_back(&spec.terms[idx].profile);
  Matrix gen(dd, dd);
  const MatrixRhs rhs = [&](double u, const Matrix& y, Matrix& out) {
    const double sigma = ch.t1 - u;
    gen.setZero();
    for (size_t k = 0; k < bases.size(); ++k)
      gen += profiles[k]->value(sigma) * bases[k];
    out.noalias() = gen * y;
  };
  std::vector<double> cuts;
  for (const auto* p : profiles)
    for (double b : p->breakpoints_in(ch.t0, ch.t1)) cuts.push_back(ch.t1 - b);
  std::sort(cuts.begin(), cuts.end());
  double strength = 0;
  for (size_t k = 0; k < bases.size(); ++k)
    strength += inf_norm(bases[k]) * profiles[k]->sup_abs(ch.t0, ch.t1);
  const double h0 = solver.step_override > 0
                        ? solver.step_override
                        : std::min(solver.max_step,
                                   solver.step_scale / std::max(strength, 1e-12));
  return integrate_fixed_rk4(rhs, Matrix::Identity(dd, dd), dt, cuts, {},
                             nullptr, h0, solver, stats);
}

}  // namespace

Op apply_circuit(const LiouvillianSpec& spec, const TrotterCircuit& circuit,
                 const Op& o, const SolverConfig& solver, SolverStats* stats) {
  if (stats) *stats = SolverStats{};
  std::map<ChannelKey, Matrix> channel_cache;
  std::map<Region, SlotMap> slot_cache;
  Matrix acc = o.mat;
  // The last listed channel acts on the observable first.
  for (auto it = circuit.channels.rbegin(); it != circuit.channels.rend(); ++it) {
    const Channel& ch = *it;
    if (!o.region.contains(ch.support))
      throw input_error("apply_circuit: observable region must contain " +
                        to_string(ch.support));
    if (ch.t1 == ch.t0) continue;
    // constant-profile channels depend only on the duration: share the cache
    // entry across slices by shifting the interval to start at zero
    bool shiftable = true;
    for (int idx : ch.term_indices)
      shiftable = shiftable && spec.terms[idx].profile.is_constant();
    ChannelKey key{ch.support.sites(), shiftable ? 0 : ch.t0,
                   shiftable ? ch.t1 - ch.t0 : ch.t1, !ch.amplitudes.empty()};
    auto cached = channel_cache.find(key);
    if (cached == channel_cache.end()) {
      SolverStats ch_stats;
      Matrix e = channel_superop(spec, ch, solver, &ch_stats);
      if (stats) stats->absorb(ch_stats);
      cached = channel_cache.emplace(std::move(key), std::move(e)).first;
    }
    auto slot = slot_cache.find(ch.support);
    if (slot == slot_cache.end())
      slot = slot_cache
                 .emplace(ch.support, SlotMap(o.region, ch.support, spec.dims))
                 .first;
    acc = slot->second.super(cached->second, acc);
  }
  return Op{o.region, o.dims, std::move(acc)};
}

std::vector<Op> sample_observables(const SiteDims& dims, const Region& y,
                                   int count, std::uint64_t seed,
                                   std::vector<std::string>* kinds) {
  if (count < 1) throw input_error("sample_observables: need count >= 1");
  if (y.empty()) throw input_error("sample_observables: empty region");
  const long d = dims.total_dim(y);
  std::vector<Op> out;
  std::vector<std::string> labels;

  if (dims.all_qubits(y)) {
    const int m = y.size();
    const long n_strings = 1L << (2 * m);  // 4^m
    const char* alphabet = "ixyz";
    // s = 0 is the identity string, invariant under every unital map: skip it
    for (long s = 1; s < n_strings && static_cast<int>(out.size()) < count; ++s) {
      std::string chars(m, 'i');
      long rest = s;
      for (int k = m - 1; k >= 0; --k) {
        chars[k] = alphabet[rest % 4];
        rest /= 4;
      }
      out.push_back(pauli_string(y, chars));
      labels.push_back("pauli:" + chars);
    }
  } else {
    for (long k = 0; k < d && static_cast<int>(out.size()) < count; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(k, k) = 1;
      out.push_back(Op{y, dims.dims(y), std::move(m)});
      labels.push_back("diag" + std::to_string(k));
    }
    for (long k = 0; k < d && static_cast<int>(out.size()) < count; ++k)
      for (long l = k + 1; l < d && static_cast<int>(out.size()) < count; ++l) {
        Matrix m = Matrix::Zero(d, d);
        m(k, l) = m(l, k) = 1 / std::sqrt(2.0);
        out.push_back(Op{y, dims.dims(y), std::move(m)});
        labels.push_back("sym" + std::to_string(k) + "_" + std::to_string(l));
      }
  }

  auto rng = rng_from_seed(seed);
  int extra = 0;
  while (static_cast<int>(out.size()) < count) {
    if (extra % 2 == 0) {
      out.push_back(Op{y, dims.dims(y), random_hermitian(d, rng)});
      labels.push_back("herm" + std::to_string(extra / 2));
    } else {
      const Vector u = random_unit_vector(d, rng);
      const Vector v = random_unit_vector(d, rng);
      out.push_back(Op{y, dims.dims(y), u * v.adjoint()});
      labels.push_back("rank1_" + std::to_string(extra / 2));
    }
    ++extra;
  }
  for (auto& op : out) {
    const double nrm = inf_norm(op.mat);
    if (nrm > 0) op.mat /= nrm;
  }
  if (kinds) *kinds = std::move(labels);
  return out;
}

ErrorProbe make_error_probe(const LiouvillianSpec& spec, const Region& y,
                            const Region& window, double t0, double t1,
                            int count, std::uint64_t seed,
                            const SolverConfig& solver) {
  // A window that cuts off interaction supports would make the references
  // truncated evolutions, not exact comparators; refuse instead of measuring
  // against a silently wrong baseline.
  const InteractionHypergraph hg = spec.hypergraph();
  if (volume(hg, window) != hg.size())
    throw precondition_error(
        "make_error_probe: window must contain every interaction support");
  ErrorProbe probe;
  probe.window = window;
  std::vector<Op> small = sample_observables(spec.dims, y, count, seed,
                                             &probe.kinds);
  for (const Op& o : small) probe.samples.push_back(embed(o, window, spec.dims));
  for (const Op& o : probe.samples) {
    SolverStats st;
    probe.references.push_back(
        evolve_observable(spec, window, o, t0, t1, solver, &st));
    if (!std::isnan(st.err_estimate))
      probe.solver_err = std::max(probe.solver_err, st.err_estimate);
  }
  return probe;
}

CircuitError measure_error(const LiouvillianSpec& spec,
                           const TrotterCircuit& circuit, const ErrorProbe& probe,
                           const SolverConfig& solver) {
  if (probe.samples.size() != probe.references.size() ||
      probe.samples.size() != probe.kinds.size())
    throw input_error("measure_error: inconsistent probe");
  CircuitError err;
  err.solver_err = probe.solver_err;
  err.comparator_truncation = probe.comparator_truncation;
  for (size_t i = 0; i < probe.samples.size(); ++i) {
    SolverStats st;
    const Op circ = apply_circuit(spec, circuit, probe.samples[i], solver, &st);
    if (!std::isnan(st.err_estimate))
      err.solver_err = std::max(err.solver_err, st.err_estimate);
    const double denom = std::max(inf_norm(probe.samples[i]), 1e-300);
    const double ratio =
        inf_norm(Matrix(circ.mat - probe.references[i].mat)) / denom;
    err.samples.push_back(ErrorSample{probe.kinds[i], ratio});
    err.observed_sup = std::max(err.observed_sup, ratio);
  }
  return err;
}

void serialize_circuit(const LiouvillianSpec& spec, const TrotterCircuit& circuit,
                       std::ostream& os) {
  const bool averaged =
      !circuit.channels.empty() && !circuit.channels.front().amplitudes.empty();
  os << "# trotter-circuit v1\n";
  os << "# slices=" << circuit.schedule.regions.size()
     << " channels=" << circuit.channels.size()
     << " averaged=" << (averaged ? 1 : 0) << "\n";
  os << "# times:";
  for (double t : circuit.schedule.times) os << ' ' << format_g17(t);
  os << "\n";
  os << "# columns: slice sites t_start t_end generator order\n";
  int slice = -1, order = 0;
  for (const Channel& ch : circuit.channels) {
    if (ch.slice != slice) {
      slice = ch.slice;
      order = 0;
    }
    os << ch.slice << ' ';
    const auto& sites = ch.support.sites();
    for (size_t i = 0; i < sites.size(); ++i) {
      if (i) os << ',';
      os << sites[i];
    }
    os << ' ' << format_g17(ch.t0) << ' ' << format_g17(ch.t1) << ' ';
    for (size_t k = 0; k < ch.term_indices.size(); ++k) {
      if (k) os << '+';
      const std::string& label = spec.terms[ch.term_indices[k]].label;
      os << (label.empty() ? "term" + std::to_string(ch.term_indices[k]) : label);
    }
    if (!ch.amplitudes.empty()) {
      os << "|avg=";
      for (size_t k = 0; k < ch.amplitudes.size(); ++k) {
        if (k) os << ',';
        os << format_g17(ch.amplitudes[k]);
      }
    }
    os << ' ' << order++ << "\n";
  }
}

std::string serialize_circuit(const LiouvillianSpec& spec,
                              const TrotterCircuit& circuit) {
  std::ostringstream os;
  serialize_circuit(spec, circuit, os);
  return os.str();
}

}  // namespace qlocal
