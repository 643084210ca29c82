#include "qlocal/algebra.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "qlocal/kernels.hpp"

namespace qlocal {

SiteDims::SiteDims(int default_dim) : default_dim_(default_dim) {
  if (default_dim < 2) throw input_error("SiteDims: dimension must be >= 2");
}

void SiteDims::set(SiteId site, int dim) {
  if (dim < 2) throw input_error("SiteDims: dimension must be >= 2");
  overrides_[site] = dim;
}

int SiteDims::dim(SiteId site) const {
  auto it = overrides_.find(site);
  return it == overrides_.end() ? default_dim_ : it->second;
}

std::vector<int> SiteDims::dims(const Region& r) const {
  std::vector<int> out;
  out.reserve(r.sites().size());
  for (SiteId s : r.sites()) out.push_back(dim(s));
  return out;
}

long SiteDims::total_dim(const Region& r) const {
  long d = 1;
  for (SiteId s : r.sites()) {
    d *= dim(s);
    if (d > (1L << 30)) throw input_error("total_dim: region dimension overflow");
  }
  return d;
}

bool SiteDims::all_qubits(const Region& r) const {
  for (SiteId s : r.sites())
    if (dim(s) != 2) return false;
  return true;
}

Op make_op(const Region& region, const SiteDims& dims, Matrix mat) {
  const long d = dims.total_dim(region);
  if (mat.rows() != d || mat.cols() != d)
    throw input_error("make_op: matrix is " + std::to_string(mat.rows()) + "x" +
                      std::to_string(mat.cols()) + " but region " +
                      to_string(region) + " has dimension " + std::to_string(d));
  return Op{region, dims.dims(region), std::move(mat)};
}

Op identity_op(const Region& region, const SiteDims& dims) {
  const long d = dims.total_dim(region);
  return Op{region, dims.dims(region), Matrix::Identity(d, d)};
}

Op zero_op(const Region& region, const SiteDims& dims) {
  const long d = dims.total_dim(region);
  return Op{region, dims.dims(region), Matrix::Zero(d, d)};
}

Op single_site_op(SiteId site, const Matrix& mat) {
  if (mat.rows() != mat.cols() || mat.rows() < 2)
    throw input_error("single_site_op: matrix must be square, dim >= 2");
  return Op{Region{site}, {static_cast<int>(mat.rows())}, mat};
}

long SuperOp::op_dim() const {
  long d = 1;
  for (int k : dims) d *= k;
  return d;
}

SuperOp make_superop(const Region& region, const SiteDims& dims, Matrix mat) {
  const long d = dims.total_dim(region);
  if (d * d > kMaxSuperOpDim)
    throw precondition_error("make_superop: operator space dimension " +
                             std::to_string(d * d) + " exceeds limit " +
                             std::to_string(kMaxSuperOpDim));
  if (mat.rows() != d * d || mat.cols() != d * d)
    throw input_error("make_superop: matrix must be " + std::to_string(d * d) +
                      " square");
  return SuperOp{region, dims.dims(region), std::move(mat)};
}

SuperOp identity_superop(const Region& region, const SiteDims& dims) {
  const long d = dims.total_dim(region);
  return make_superop(region, dims, Matrix::Identity(d * d, d * d));
}

SuperOp adjoint(const SuperOp& t) {
  return SuperOp{t.region, t.dims, t.mat.adjoint()};
}

Op apply(const SuperOp& t, const Op& o) {
  if (t.region != o.region)
    throw input_error("apply: superoperator on " + to_string(t.region) +
                      " cannot act on operator on " + to_string(o.region));
  return Op{o.region, o.dims, unvec(t.mat * vec(o.mat), o.mat.rows())};
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long r = 0; r < a.rows(); ++r)
    for (long c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

Vector vec(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvec(const Vector& v, long rows) {
  if (rows <= 0 || v.size() % rows != 0)
    throw input_error("unvec: size not divisible by row count");
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

Op embed(const Op& o, const Region& target, const SiteDims& dims) {
  if (o.region == target) return o;
  if (!target.contains(o.region))
    throw input_error("embed: target " + to_string(target) +
                      " does not contain " + to_string(o.region));
  SlotMap map(target, o.region, dims);
  Matrix id = Matrix::Identity(map.dw(), map.dw());
  return Op{target, dims.dims(target), map.left(o.mat, id)};
}

namespace {

Eigen::VectorXd squared_singular_values(const Matrix& a) {
  const Matrix h = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

double inf_norm(const Matrix& a) {
  if (a.size() == 0) return 0;
  const auto sq = squared_singular_values(a);
  return std::sqrt(std::max(0.0, sq.maxCoeff()));
}

double inf_norm(const Op& o) { return inf_norm(o.mat); }

double trace_norm(const Matrix& a) {
  if (a.size() == 0) return 0;
  const auto sq = squared_singular_values(a);
  double sum = 0;
  for (long i = 0; i < sq.size(); ++i) sum += std::sqrt(std::max(0.0, sq(i)));
  return sum;
}

double trace_norm(const Op& o) { return trace_norm(o.mat); }

Matrix choi(const SuperOp& t) {
  const long d = t.op_dim();
  Matrix j(d * d, d * d);
  for (long m = 0; m < d; ++m)
    for (long p = 0; p < d; ++p)
      for (long n = 0; n < d; ++n)
        for (long q = 0; q < d; ++q)
          j(m * d + p, n * d + q) = t.mat(p + d * q, m + d * n);
  return j;
}

CptReport cpt_check(const SuperOp& t, double tol) {
  const long d = t.op_dim();
  const Matrix j = choi(t);
  CptReport rep;
  rep.tol = tol;
  rep.herm_dev = (j - Matrix(j.adjoint())).cwiseAbs().maxCoeff();
  const Matrix jh = 0.5 * (j + Matrix(j.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(jh, Eigen::EigenvaluesOnly);
  rep.min_choi_eig = es.eigenvalues().minCoeff();
  // Trace preservation: tracing the output factor of Choi must give identity.
  Matrix pt = Matrix::Zero(d, d);
  for (long m = 0; m < d; ++m)
    for (long n = 0; n < d; ++n)
      for (long p = 0; p < d; ++p) pt(m, n) += j(m * d + p, n * d + p);
  rep.trace_dev = (pt - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  rep.cpt = rep.herm_dev <= tol && rep.min_choi_eig >= -tol && rep.trace_dev <= tol;
  return rep;
}

namespace {

// One alternating-ascent pass for the 1->1 norm from a rank-one start.
// Returns the certified value; sets `converged`.
double ascend_one_to_one(const Matrix& s, const Matrix& s_adj, Vector psi,
                         Vector phi, double tol, int max_iters, bool* converged) {
  const long d = psi.size();
  double val = 0, prev = -1;
  *converged = false;
  for (int it = 0; it < max_iters; ++it) {
    const Matrix x = unvec(s * vec(psi * phi.adjoint()), d);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    val = svd.singularValues().sum();
    if (it > 0 && std::abs(val - prev) <= tol * std::max(1.0, std::abs(val))) {
      *converged = true;
      break;
    }
    prev = val;
    const Matrix w = svd.matrixU() * svd.matrixV().adjoint();
    const Matrix k = unvec(s_adj * vec(w), d).conjugate();
    Eigen::JacobiSVD<Matrix> ksvd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
    psi = ksvd.matrixU().col(0).conjugate();
    phi = ksvd.matrixV().col(0).conjugate();
  }
  return val;
}

// Dense scan over pure-state pairs for qubit maps; exact up to grid + polish.
double qubit_grid_scan(const Matrix& s, Vector* best_psi, Vector* best_phi) {
  constexpr int n_theta = 25, n_alpha = 48;
  const double pi = std::acos(-1.0);
  std::vector<Vector> states;
  states.reserve(n_theta * n_alpha);
  for (int i = 0; i < n_theta; ++i) {
    const double th = 0.5 * pi * i / (n_theta - 1);
    for (int k = 0; k < n_alpha; ++k) {
      const double al = 2 * pi * k / n_alpha;
      Vector v(2);
      v << std::cos(th), std::sin(th) * std::exp(cxd(0, al));
      states.push_back(std::move(v));
    }
  }
  double best = -1;
  for (const Vector& psi : states) {
    for (const Vector& phi : states) {
      Vector in(4);
      in << psi(0) * std::conj(phi(0)), psi(1) * std::conj(phi(0)),
          psi(0) * std::conj(phi(1)), psi(1) * std::conj(phi(1));
      const Vector out = s * in;
      // 2x2 trace norm: sqrt(frob^2 + 2|det|)
      const double frob2 = out.squaredNorm();
      const double det =
          std::abs(out(0) * out(3) - out(1) * out(2));
      const double tn = std::sqrt(frob2 + 2 * det);
      if (tn > best) {
        best = tn;
        *best_psi = psi;
        *best_phi = phi;
      }
    }
  }
  return best;
}

}  // namespace

NormEstimate one_to_one_norm(const SuperOp& t, const NormOptions& opts) {
  const long d = t.op_dim();
  const Matrix s_adj = t.mat.adjoint();
  NormEstimate est;

  if (opts.exact_small) {
    if (d != 2)
      throw precondition_error("one_to_one_norm: exact_small needs a qubit map");
    Vector psi, phi;
    qubit_grid_scan(t.mat, &psi, &phi);
    bool conv = false;
    est.value = ascend_one_to_one(t.mat, s_adj, psi, phi, opts.tol,
                                  opts.max_iters, &conv);
    est.restarts = 1;
    est.converged = conv ? 1 : 0;
    est.best_restart = 0;
    return est;
  }

  std::mt19937_64 rng = rng_from_seed(opts.seed);
  const int total = 1 + std::max(0, opts.restarts);
  for (int r = 0; r < total; ++r) {
    Vector psi, phi;
    if (r == 0) {
      psi = Vector::Constant(d, cxd(1.0 / std::sqrt(double(d)), 0));
      phi = psi;
    } else {
      psi = random_unit_vector(d, rng);
      phi = random_unit_vector(d, rng);
    }
    bool conv = false;
    const double val =
        ascend_one_to_one(t.mat, s_adj, psi, phi, opts.tol, opts.max_iters, &conv);
    if (conv) ++est.converged;
    if (val > est.value) {
      est.value = val;
      est.best_restart = r;
    }
  }
  est.restarts = total;
  return est;
}

NormEstimate inf_inf_norm(const SuperOp& t, const NormOptions& opts) {
  return one_to_one_norm(adjoint(t), opts);
}

namespace {

// One ascent pass for the inf->inf norm over unitary inputs.
double ascend_inf_inf(const Matrix& s, const Matrix& s_adj, Matrix u, double tol,
                      int max_iters, bool* converged) {
  const long d = u.rows();
  double val = 0, prev = -1;
  *converged = false;
  for (int it = 0; it < max_iters; ++it) {
    const Matrix x = unvec(s * vec(u), d);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    val = svd.singularValues()(0);
    if (it > 0 && std::abs(val - prev) <= tol * std::max(1.0, std::abs(val))) {
      *converged = true;
      break;
    }
    prev = val;
    const Matrix grad = svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
    const Matrix a = unvec(s_adj * vec(grad), d);
    Eigen::JacobiSVD<Matrix> asvd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    u = asvd.matrixU() * asvd.matrixV().adjoint();
  }
  return val;
}

}  // namespace

NormEstimate inf_inf_norm_direct(const SuperOp& t, const NormOptions& opts) {
  const long d = t.op_dim();
  const Matrix s_adj = t.mat.adjoint();
  NormEstimate est;
  std::mt19937_64 rng = rng_from_seed(opts.seed);
  const int total = 1 + std::max(0, opts.restarts);
  for (int r = 0; r < total; ++r) {
    Matrix u;
    if (r == 0) {
      u = Matrix::Identity(d, d);
    } else {
      Eigen::HouseholderQR<Matrix> qr(random_matrix(d, rng));
      u = qr.householderQ() * Matrix::Identity(d, d);
    }
    bool conv = false;
    const double val =
        ascend_inf_inf(t.mat, s_adj, u, opts.tol, opts.max_iters, &conv);
    if (conv) ++est.converged;
    if (val > est.value) {
      est.value = val;
      est.best_restart = r;
    }
  }
  est.restarts = total;
  return est;
}

const Matrix& pauli(char c) {
  static const Matrix id = (Matrix(2, 2) << 1, 0, 0, 1).finished();
  static const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  static const Matrix y =
      (Matrix(2, 2) << 0, cxd(0, -1), cxd(0, 1), 0).finished();
  static const Matrix z = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  static const Matrix plus = (Matrix(2, 2) << 0, 1, 0, 0).finished();
  static const Matrix minus = (Matrix(2, 2) << 0, 0, 1, 0).finished();
  switch (c) {
    case 'i': return id;
    case 'x': return x;
    case 'y': return y;
    case 'z': return z;
    case '+': return plus;
    case '-': return minus;
    default: throw input_error(std::string("pauli: unknown symbol '") + c + "'");
  }
}

Op pauli_string(const Region& region, const std::string& chars) {
  if (static_cast<int>(chars.size()) != region.size())
    throw input_error("pauli_string: need one symbol per site");
  Matrix m = Matrix::Identity(1, 1);
  for (char c : chars) m = kron(m, pauli(c));
  return Op{region, std::vector<int>(region.sites().size(), 2), std::move(m)};
}

std::mt19937_64 rng_from_seed(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

Matrix random_matrix(long d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(d, d);
  for (long c = 0; c < d; ++c)
    for (long r = 0; r < d; ++r) m(r, c) = cxd(gauss(rng), gauss(rng));
  return m;
}

Matrix random_hermitian(long d, std::mt19937_64& rng) {
  const Matrix m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

Vector random_unit_vector(long d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  for (long i = 0; i < d; ++i) v(i) = cxd(gauss(rng), gauss(rng));
  return v / v.norm();
}

SuperOp random_superop(const Region& region, const SiteDims& dims,
                       std::mt19937_64& rng) {
  const long d = dims.total_dim(region);
  return make_superop(region, dims, random_matrix(d * d, rng));
}

SuperOp random_cpt_superop(const Region& region, const SiteDims& dims, int kraus,
                           std::mt19937_64& rng) {
  if (kraus < 1) throw input_error("random_cpt_superop: need >= 1 Kraus term");
  const long d = dims.total_dim(region);
  Eigen::HouseholderQR<Matrix> qr(random_matrix(d * kraus, rng)
                                      .block(0, 0, d * kraus, d)
                                      .eval());
  const Matrix q = qr.householderQ() * Matrix::Identity(d * kraus, d);
  Matrix s = Matrix::Zero(d * d, d * d);
  for (int m = 0; m < kraus; ++m) {
    const Matrix k = q.block(m * d, 0, d, d);
    s += kron(k.conjugate(), k);
  }
  return make_superop(region, dims, std::move(s));
}

}  // namespace qlocal
