#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlocal/lattice.hpp"

namespace qlocal {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Largest operator-space dimension (dim^2) we materialize as a dense
// superoperator matrix.
inline constexpr long kMaxSuperOpDim = 4096;

// Per-site Hilbert-space dimensions: a default dimension plus sparse overrides.
class SiteDims {
 public:
  SiteDims() = default;
  explicit SiteDims(int default_dim);

  void set(SiteId site, int dim);
  int dim(SiteId site) const;
  std::vector<int> dims(const Region& r) const;
  long total_dim(const Region& r) const;  // product of site dimensions
  bool all_qubits(const Region& r) const;

 private:
  int default_dim_ = 2;
  std::map<SiteId, int> overrides_;
};

// An operator supported on a region. Matrix indices run over the tensor
// product of the region's sites in ascending site order, leftmost factor =
// smallest site, row index = sum_k b_k * prod_{j>k} d_j.
struct Op {
  Region region;
  std::vector<int> dims;
  Matrix mat;

  long dim() const { return mat.rows(); }
};

Op make_op(const Region& region, const SiteDims& dims, Matrix mat);
Op identity_op(const Region& region, const SiteDims& dims);
Op zero_op(const Region& region, const SiteDims& dims);
Op single_site_op(SiteId site, const Matrix& mat);

// A superoperator on a region, stored in column-stacking vectorization:
// vec(A)_(i + d*j) = A(i,j), so vec(X A Y) = (Y^T (x) X) vec(A).
struct SuperOp {
  Region region;
  std::vector<int> dims;
  Matrix mat;

  long op_dim() const;  // dimension d of the underlying operators
};

SuperOp make_superop(const Region& region, const SiteDims& dims, Matrix mat);
SuperOp identity_superop(const Region& region, const SiteDims& dims);
// Hilbert-Schmidt adjoint (conjugate transpose of the matrix).
SuperOp adjoint(const SuperOp& t);
Op apply(const SuperOp& t, const Op& o);

Matrix kron(const Matrix& a, const Matrix& b);
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, long rows);

// Embed an operator into a larger region by tensoring with identity.
Op embed(const Op& o, const Region& target, const SiteDims& dims);

// Operator norm (largest singular value) and trace norm (sum of singular
// values), computed from the spectrum of A^dag A.
double inf_norm(const Matrix& a);
double inf_norm(const Op& o);
double trace_norm(const Matrix& a);
double trace_norm(const Op& o);

// Choi matrix: J[(m,p),(n,q)] = sum over basis of T(E_mn) entries, index
// (m,p) = m*d + p. Complete positivity of T <=> J >= 0.
Matrix choi(const SuperOp& t);

struct CptReport {
  bool cpt = false;
  double min_choi_eig = 0;   // most negative Choi eigenvalue (>= -tol required)
  double trace_dev = 0;      // deviation of the partial trace of Choi from identity
  double herm_dev = 0;       // max-abs deviation of Choi from Hermiticity
  double tol = 0;
};

// Checks that t is a completely positive trace-preserving map acting on
// states (a Schrodinger-picture channel). For a Heisenberg-picture channel
// pass adjoint(t).
CptReport cpt_check(const SuperOp& t, double tol = 1e-9);

struct NormOptions {
  int restarts = 32;             // seeded random restarts on top of the fixed start
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  double tol = 1e-10;            // relative convergence tolerance of the ascent
  int max_iters = 400;
  bool exact_small = false;      // qubit maps only: dense grid scan + polish
};

struct NormEstimate {
  double value = 0;        // certified lower bound on the norm
  int restarts = 0;        // total starts attempted
  int converged = 0;       // starts whose ascent converged
  int best_restart = -1;   // start achieving `value`
};

// 1->1 norm sup ||T(A)||_1 / ||A||_1 via alternating ascent over rank-one
// inputs (which attain the supremum). Returns a certified lower bound.
NormEstimate one_to_one_norm(const SuperOp& t, const NormOptions& opts = {});

// inf->inf norm sup ||T(A)||_inf / ||A||_inf, dual route: equals the 1->1
// norm of the Hilbert-Schmidt adjoint.
NormEstimate inf_inf_norm(const SuperOp& t, const NormOptions& opts = {});

// inf->inf norm computed on the primal side, ascending over unitary inputs
// (extreme points of the unit ball). Independent route for cross-checks.
NormEstimate inf_inf_norm_direct(const SuperOp& t, const NormOptions& opts = {});

// Pauli matrices: 'i','x','y','z' plus ladder operators '+','-'.
const Matrix& pauli(char c);
// One Pauli character per site of the region (qubit sites only).
Op pauli_string(const Region& region, const std::string& chars);

std::mt19937_64 rng_from_seed(std::uint64_t seed);
Matrix random_matrix(long d, std::mt19937_64& rng);     // iid complex Gaussian
Matrix random_hermitian(long d, std::mt19937_64& rng);
Vector random_unit_vector(long d, std::mt19937_64& rng);
// Generic superoperator with iid Gaussian matrix entries.
SuperOp random_superop(const Region& region, const SiteDims& dims,
                       std::mt19937_64& rng);
// Random Schrodinger-picture channel with `kraus` Kraus operators.
SuperOp random_cpt_superop(const Region& region, const SiteDims& dims, int kraus,
                           std::mt19937_64& rng);

}  // namespace qlocal
