#include "qlocal/presets.hpp"

#include <cmath>
#include <cstdio>

namespace qlocal {
namespace presets {

namespace {
std::string fmt_param(const char* name, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s=%g", name, v);
  return buf;
}
}  // namespace

LiouvillianSpec dissipative_ising_chain(int n_sites, double j_coupling,
                                        double g_field, double gamma) {
  if (n_sites < 2) throw input_error("dissipative_ising_chain: need >= 2 sites");
  if (gamma < 0) throw input_error("dissipative_ising_chain: gamma must be >= 0");
  LiouvillianSpec spec;
  spec.geometry = Geometry::chain(n_sites);
  spec.dims = SiteDims(2);

  const Matrix zz = kron(pauli('z'), pauli('z'));
  for (int i = 0; i + 1 < n_sites; ++i)
    spec.terms.push_back(make_term(Region{i, i + 1}, spec.dims, j_coupling * zz,
                                   {}, TimeProfile::constant(1.0),
                                   "zz(" + fmt_param("J", j_coupling) + ")"));
  for (int i = 0; i < n_sites; ++i) {
    std::vector<Matrix> jumps;
    if (gamma > 0) jumps.push_back(std::sqrt(gamma) * pauli('-'));
    spec.terms.push_back(make_term(
        Region{i}, spec.dims, g_field * pauli('x'), std::move(jumps),
        TimeProfile::constant(1.0),
        "x(" + fmt_param("g", g_field) + ")+damp(" + fmt_param("gamma", gamma) +
            ")"));
  }
  spec.validate();
  return spec;
}

LiouvillianSpec xy_dephasing_chain(int n_sites, double j_coupling, double gamma) {
  if (n_sites < 2) throw input_error("xy_dephasing_chain: need >= 2 sites");
  if (gamma < 0) throw input_error("xy_dephasing_chain: gamma must be >= 0");
  LiouvillianSpec spec;
  spec.geometry = Geometry::chain(n_sites);
  spec.dims = SiteDims(2);

  const Matrix xy = 0.5 * (kron(pauli('x'), pauli('x')) +
                           kron(pauli('y'), pauli('y')));
  for (int i = 0; i + 1 < n_sites; ++i)
    spec.terms.push_back(make_term(Region{i, i + 1}, spec.dims, j_coupling * xy,
                                   {}, TimeProfile::constant(1.0),
                                   "xy(" + fmt_param("J", j_coupling) + ")"));
  for (int i = 0; i < n_sites; ++i) {
    std::vector<Matrix> jumps;
    if (gamma > 0) jumps.push_back(std::sqrt(gamma) * pauli('z'));
    spec.terms.push_back(make_term(Region{i}, spec.dims, Matrix::Zero(2, 2),
                                   std::move(jumps), TimeProfile::constant(1.0),
                                   "dephase(" + fmt_param("gamma", gamma) + ")"));
  }
  spec.validate();
  return spec;
}

LiouvillianSpec random_chain_model(int n_sites, std::uint64_t seed,
                                   double strength) {
  if (n_sites < 2) throw input_error("random_chain_model: need >= 2 sites");
  LiouvillianSpec spec;
  spec.geometry = Geometry::chain(n_sites);
  spec.dims = SiteDims(2);
  auto rng = rng_from_seed(seed);
  for (int i = 0; i + 1 < n_sites; ++i)
    spec.terms.push_back(make_term(
        Region{i, i + 1}, spec.dims, strength * random_hermitian(4, rng), {},
        TimeProfile::constant(1.0), "hpair" + std::to_string(i)));
  for (int i = 0; i < n_sites; ++i)
    spec.terms.push_back(make_term(
        Region{i}, spec.dims, Matrix::Zero(2, 2),
        {strength * random_matrix(2, rng)}, TimeProfile::constant(1.0),
        "jump" + std::to_string(i)));
  spec.validate();
  return spec;
}

}  // namespace presets
}  // namespace qlocal
