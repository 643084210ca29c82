#pragma once

#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "qlocal/algebra.hpp"
#include "qlocal/kernels.hpp"

namespace qlocal {

// Scalar coefficient c(t) multiplying a fixed local generator.
class TimeProfile {
 public:
  enum class Kind { Constant, Piecewise, Sinusoid, Quench };

  static TimeProfile constant(double value);
  // value = values[k] on (breakpoints[k-1], breakpoints[k]]-style cells:
  // values.size() == breakpoints.size() + 1, breakpoints strictly increasing.
  static TimeProfile piecewise(std::vector<double> breakpoints,
                               std::vector<double> values);
  static TimeProfile sinusoid(double offset, double amplitude, double omega,
                              double phase);
  static TimeProfile quench(double t_switch, double before, double after);

  double value(double t) const;
  // sup |c(t)| over [t0, t1], exact per kind (includes interior extrema).
  double sup_abs(double t0, double t1) const;
  // (1/(t1-t0)) * integral of c over [t0, t1]; value(t0) when t1 == t0.
  double average(double t0, double t1) const;
  // Interior discontinuity locations within (t0, t1), ascending.
  std::vector<double> breakpoints_in(double t0, double t1) const;
  bool is_constant() const { return kind_ == Kind::Constant; }

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  bool operator==(const TimeProfile& o) const;

 private:
  Kind kind_ = Kind::Constant;
  // Constant: {value}; Sinusoid: {offset, amplitude, omega, phase};
  // Piecewise/Quench: breakpoints in breaks_, cell values in params_.
  std::vector<double> params_;
  std::vector<double> breaks_;
};

// One local generator: A |-> c(t) * ( i[H, A] + sum_n ( L_n^dag A L_n
//   - (1/2) { L_n^dag L_n, A } ) ), supported on a fixed region.
struct LocalTerm {
  Region support;
  Op hamiltonian;           // Hermitian; a zero matrix disables the commutator
  std::vector<Op> lindblads;
  TimeProfile profile = TimeProfile::constant(1.0);
  std::string label;        // stable name used in circuit serialization
};

LocalTerm make_term(const Region& support, const SiteDims& dims, Matrix hamiltonian,
                    std::vector<Matrix> lindblads,
                    TimeProfile profile = TimeProfile::constant(1.0),
                    std::string label = {});

// A lattice model: geometry, site dimensions, and a list of local terms.
// Several terms may share a support; together they form that support's
// generator.
struct LiouvillianSpec {
  Geometry geometry;
  SiteDims dims;
  std::vector<LocalTerm> terms;

  InteractionHypergraph hypergraph() const;  // distinct supports
  bool time_independent() const;
  // Hermiticity of every Hamiltonian (1e-12), supports within the lattice,
  // matrix dimensions consistent with `dims`.
  void validate() const;
};

// Heisenberg action of one term at time t on an operator whose region
// contains the term's support.
Op apply_term(const LocalTerm& term, const SiteDims& dims, double t, const Op& o);

// Sum of apply_term over all terms with support inside v. Every such support
// must lie inside o's region.
Op apply_truncated(const LiouvillianSpec& spec, const Region& v, double t,
                   const Op& o);

// Dense superoperator of one term's generator with the profile factored out
// (coefficient 1). `window` must contain the support.
SuperOp term_superop_base(const LocalTerm& term, const SiteDims& dims,
                          const Region& window);
// As above but scaled by c(t).
SuperOp term_superop(const LocalTerm& term, const SiteDims& dims, double t,
                     const Region& window);
// Dense superoperator of the truncated generator at time t on `window`.
SuperOp truncated_superop(const LiouvillianSpec& spec, const Region& v, double t,
                          const Region& window);

// sup over [t0, t1] of the inf->inf norm of the generator living on one
// support (all terms sharing that support combined). Exact profile extrema
// are used for a single term; several profiles on one support fall back to a
// grid of `grid_points` norm evaluations plus profile breakpoints.
double support_norm_sup(const LiouvillianSpec& spec, const Region& support,
                        double t0, double t1, const NormOptions& opts = {},
                        int grid_points = 129);

// Max of support_norm_sup over all distinct supports: the model's local
// strength entering every bound.
double model_term_norm(const LiouvillianSpec& spec, double t0, double t1,
                       const NormOptions& opts = {}, int grid_points = 129);

// Term with the profile replaced by its average over [t0, t1].
LocalTerm averaged_term(const LocalTerm& term, double t0, double t1);

using SpMat = Eigen::SparseMatrix<cxd>;

// Hot-path realization of a truncated Liouvillian on a fixed window: terms are
// grouped by identical profile and their embedded operators cached sparsely,
// so one RHS evaluation costs a handful of sparse-dense products.
class CompiledLiouvillian {
 public:
  CompiledLiouvillian(const LiouvillianSpec& spec, const Region& v,
                      const Region& window);

  const Region& window() const { return window_; }
  long dim() const { return dim_; }
  int term_count() const { return term_count_; }
  bool time_independent() const { return time_independent_; }

  // out = L_V(t)[o] (Heisenberg picture), o and out are dim x dim.
  void apply(double t, const Matrix& o, Matrix& out) const;
  // out = adjoint generator at t applied to rho (Schrodinger picture).
  void apply_adjoint(double t, const Matrix& rho, Matrix& out) const;

  // Cheap upper bound on the strongest included support generator over
  // [t0, t1]; used only to pick integrator step sizes.
  double step_norm_bound(double t0, double t1) const;
  // Max-neighbors of the included supports (1 when nothing is included).
  int included_max_neighbors() const;
  // Union of profile discontinuities within (t0, t1), ascending.
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  struct Group {
    TimeProfile profile;
    bool has_h = false;
    bool has_d = false;
    SpMat h;                  // combined embedded Hamiltonian
    std::vector<SpMat> l;     // embedded Lindblad operators
    std::vector<SpMat> ldag;
    SpMat j;                  // combined embedded sum of L^dag L
  };

  struct StepTerm {
    Region support;
    double base;  // cheap norm bound of the unscaled generator
    TimeProfile profile;
  };

  Region window_;
  long dim_ = 0;
  int term_count_ = 0;
  bool time_independent_ = true;
  std::vector<Group> groups_;
  std::vector<StepTerm> step_terms_;
  int included_max_neighbors_ = 1;
  mutable Matrix tmp_;  // workspace for sparse products
};

}  // namespace qlocal
