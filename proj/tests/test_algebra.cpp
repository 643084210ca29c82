#include "qlocal/algebra.hpp"

#include <cmath>
#include <complex>

#include <doctest.h>

#include "qlocal/kernels.hpp"

using namespace qlocal;
using doctest::Approx;

namespace {
const SiteDims kQubits{};

Matrix random_4x4(std::uint64_t seed) {
  auto rng = rng_from_seed(seed);
  return random_matrix(4, rng);
}
}  // namespace

TEST_CASE("site dimensions") {
  SiteDims d;
  CHECK(d.dim(0) == 2);
  d.set(3, 3);
  CHECK(d.dim(3) == 3);
  CHECK(d.total_dim(Region{0, 3}) == 6);
  CHECK(d.dims(Region{0, 3}) == std::vector<int>{2, 3});
  CHECK(!d.all_qubits(Region{0, 3}));
  CHECK(d.all_qubits(Region{0, 1}));
  CHECK(d.total_dim(Region{}) == 1);
  CHECK_THROWS_AS(SiteDims{1}, input_error);
  CHECK_THROWS_AS(d.set(0, 1), input_error);
}

TEST_CASE("operator construction") {
  Op o = make_op(Region{0, 1}, kQubits, Matrix::Identity(4, 4));
  CHECK(o.dim() == 4);
  CHECK(o.dims == std::vector<int>{2, 2});
  CHECK_THROWS_AS(make_op(Region{0, 1}, kQubits, Matrix::Identity(2, 2)), input_error);

  Op id = identity_op(Region{0, 1, 2}, kQubits);
  CHECK(id.mat.isApprox(Matrix::Identity(8, 8)));
  CHECK(zero_op(Region{5}, kQubits).mat.isZero());

  Op z = single_site_op(7, pauli('z'));
  CHECK(z.region == Region{7});
  CHECK(z.mat(1, 1) == cxd(-1, 0));
  CHECK_THROWS_AS(single_site_op(0, Matrix::Identity(2, 3)), input_error);
}

TEST_CASE("kron, vec, unvec and the vectorization identity") {
  Matrix a = random_4x4(11), x = random_4x4(12), b = random_4x4(13);
  // column stacking: vec(A X B) = (B^T (x) A) vec(X)
  Vector lhs = vec(a * x * b);
  Vector rhs = kron(b.transpose(), a) * vec(x);
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
  CHECK(unvec(vec(x), 4).isApprox(x));
  CHECK_THROWS_AS(unvec(Vector::Zero(6), 4), input_error);
  // kron sizes and a hand value
  Matrix k = kron(pauli('x'), pauli('z'));
  CHECK(k.rows() == 4);
  CHECK(k(0, 2) == cxd(1, 0));
  CHECK(k(1, 3) == cxd(-1, 0));
}

TEST_CASE("embedding tensors with identity") {
  auto rng = rng_from_seed(21);
  Matrix a = random_matrix(2, rng), b = random_matrix(2, rng);

  SUBCASE("single site into a window") {
    Op o = make_op(Region{2}, kQubits, a);
    Op e = embed(o, Region{1, 2, 3}, kQubits);
    CHECK(e.mat.isApprox(kron(kron(Matrix::Identity(2, 2), a), Matrix::Identity(2, 2))));
  }
  SUBCASE("non-contiguous slots keep site order") {
    Op o = make_op(Region{0, 2}, kQubits, kron(a, b));  // a on 0, b on 2
    Op e = embed(o, Region{0, 1, 2}, kQubits);
    CHECK(e.mat.isApprox(kron(kron(a, Matrix::Identity(2, 2)), b)));
  }
  SUBCASE("embedding into the same region is the identity") {
    Op o = make_op(Region{0, 2}, kQubits, kron(a, b));
    CHECK(embed(o, Region{0, 2}, kQubits).mat.isApprox(o.mat));
  }
  SUBCASE("norm is preserved") {
    auto rng2 = rng_from_seed(33);
    Op o = make_op(Region{1, 4}, kQubits, random_matrix(4, rng2));
    Op e = embed(o, Region{0, 1, 3, 4, 5}, kQubits);
    CHECK(inf_norm(e) == Approx(inf_norm(o)).epsilon(1e-12));
  }
  SUBCASE("region must be inside the target") {
    Op o = make_op(Region{0, 2}, kQubits, kron(a, b));
    CHECK_THROWS_AS(embed(o, Region{0, 1}, kQubits), input_error);
  }
}

TEST_CASE("operator norms") {
  CHECK(inf_norm(pauli('z')) == Approx(1.0));
  CHECK(inf_norm(Matrix::Zero(4, 4)) == 0.0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = -5;
  CHECK(inf_norm(d) == Approx(5.0));
  CHECK(trace_norm(d) == Approx(8.0));
  CHECK(trace_norm(Matrix::Identity(2, 2)) == Approx(2.0));
  CHECK(trace_norm(pauli('z')) == Approx(2.0));
  // rank one |psi><phi| with unit vectors has trace norm 1
  auto rng = rng_from_seed(5);
  Vector psi = random_unit_vector(4, rng), phi = random_unit_vector(4, rng);
  CHECK(trace_norm(Matrix(psi * phi.adjoint())) == Approx(1.0));
}

TEST_CASE("superoperators: construction, apply, adjoint") {
  SuperOp id = identity_superop(Region{0, 1}, kQubits);
  CHECK(id.op_dim() == 4);
  CHECK(id.mat.isApprox(Matrix::Identity(16, 16)));

  auto rng = rng_from_seed(9);
  Op o = make_op(Region{0, 1}, kQubits, random_matrix(4, rng));
  CHECK(apply(id, o).mat.isApprox(o.mat));
  CHECK_THROWS_AS(apply(id, single_site_op(0, pauli('x'))), input_error);

  SuperOp t = random_superop(Region{0}, kQubits, rng);
  CHECK(adjoint(t).mat.isApprox(t.mat.adjoint()));
  CHECK_THROWS_AS(make_superop(Region{0}, kQubits, Matrix::Identity(3, 3)), input_error);
  // operator space dimension above the dense limit is refused
  Region big{0, 1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(make_superop(big, kQubits, Matrix::Identity(1, 1)), precondition_error);
}

TEST_CASE("choi matrix and channel verification") {
  SUBCASE("identity map: rank-one on the maximally entangled vector") {
    SuperOp id = identity_superop(Region{0}, kQubits);
    Matrix j = choi(id);
    Vector omega = vec(Matrix::Identity(2, 2));
    CHECK(j.isApprox(Matrix(omega * omega.adjoint())));
    auto report = cpt_check(id);
    CHECK(report.cpt);
    CHECK(report.min_choi_eig >= -1e-12);
    CHECK(report.trace_dev <= 1e-12);
  }
  SUBCASE("random channels pass") {
    auto rng = rng_from_seed(17);
    for (int kraus : {1, 2, 4}) {
      SuperOp t = random_cpt_superop(Region{0, 1}, kQubits, kraus, rng);
      auto report = cpt_check(t);
      CHECK(report.cpt);
      CHECK(report.min_choi_eig >= -1e-9);
      CHECK(report.trace_dev <= 1e-9);
      CHECK(report.herm_dev <= 1e-9);
    }
  }
  SUBCASE("scaled identity is not trace preserving") {
    SuperOp half = identity_superop(Region{0}, kQubits);
    half.mat *= 0.5;
    CHECK(!cpt_check(half).cpt);
  }
  SUBCASE("transpose map is positive but not completely positive") {
    // vec(A^T)[i + 2j] = A(j, i) = vec(A)[j + 2i]: a permutation matrix
    Matrix k = Matrix::Zero(4, 4);
    k(0, 0) = k(3, 3) = 1;
    k(1, 2) = k(2, 1) = 1;
    auto report = cpt_check(make_superop(Region{0}, kQubits, k));
    CHECK(!report.cpt);
    CHECK(report.min_choi_eig == Approx(-1.0));
    CHECK(report.trace_dev <= 1e-12);  // transposition preserves the trace
  }
}

TEST_CASE("induced norms: closed forms") {
  SUBCASE("left multiplication: 1->1 norm equals the operator norm of A") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 3;
    a(1, 1) = -5;
    SuperOp t = make_superop(Region{0}, kQubits, kron(Matrix::Identity(2, 2), a));
    NormOptions opts;
    opts.exact_small = true;
    CHECK(one_to_one_norm(t, opts).value == Approx(5.0).epsilon(1e-8));
  }
  SUBCASE("commutator with sigma z has inf->inf norm 2") {
    const cxd im(0, 1);
    Matrix z = pauli('z');
    Matrix c = im * (kron(Matrix::Identity(2, 2), z) - kron(z.transpose(), Matrix::Identity(2, 2)));
    SuperOp t = make_superop(Region{0}, kQubits, c);
    NormOptions opts;
    opts.exact_small = true;
    CHECK(inf_inf_norm(t, opts).value == Approx(2.0).epsilon(1e-8));
    CHECK(inf_inf_norm_direct(t, opts).value == Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("identity map has norm 1 in both senses") {
    SuperOp id = identity_superop(Region{0}, kQubits);
    CHECK(one_to_one_norm(id).value == Approx(1.0).epsilon(1e-9));
    CHECK(inf_inf_norm(id).value == Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("induced norms: duality and independent routes agree") {
  auto rng = rng_from_seed(101);
  for (int i = 0; i < 8; ++i) {
    SuperOp t = random_superop(Region{0}, kQubits, rng);
    NormOptions opts;
    opts.exact_small = true;
    const double via_dual = inf_inf_norm(t, opts).value;
    const double direct = inf_inf_norm_direct(t, opts).value;
    CHECK(std::abs(via_dual - direct) <= 1e-6 * std::max(1.0, via_dual));
    // the dual route is literally the 1->1 norm of the adjoint
    CHECK(one_to_one_norm(adjoint(t), opts).value == Approx(via_dual).epsilon(1e-12));
  }
}

TEST_CASE("induced norms: channels have unit 1->1 norm") {
  auto rng = rng_from_seed(202);
  for (int i = 0; i < 6; ++i) {
    SuperOp t = random_cpt_superop(Region{0}, kQubits, 2 + i % 3, rng);
    NormOptions opts;
    opts.exact_small = true;
    CHECK(one_to_one_norm(t, opts).value == Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("norm estimates report their search") {
  auto rng = rng_from_seed(7);
  SuperOp t = random_superop(Region{0}, kQubits, rng);
  NormOptions opts;
  opts.restarts = 5;
  NormEstimate e = one_to_one_norm(t, opts);
  CHECK(e.value > 0);
  CHECK(e.restarts >= 5);
  CHECK(e.converged >= 1);
  CHECK(e.best_restart >= 0);
  CHECK_THROWS_AS([&] {
    NormOptions bad;
    bad.exact_small = true;
    SiteDims d;
    d.set(0, 3);
    auto rng2 = rng_from_seed(1);
    one_to_one_norm(random_superop(Region{0}, d, rng2), bad);
  }(), precondition_error);
}

TEST_CASE("pauli matrices and strings") {
  CHECK(pauli('i').isApprox(Matrix::Identity(2, 2)));
  CHECK(pauli('x')(0, 1) == cxd(1, 0));
  CHECK(pauli('y')(0, 1) == cxd(0, -1));
  CHECK(pauli('z')(1, 1) == cxd(-1, 0));
  CHECK(pauli('+')(0, 1) == cxd(1, 0));  // raising: |1> -> |0> in big-endian bit order
  CHECK(pauli('-')(1, 0) == cxd(1, 0));
  CHECK_THROWS_AS(pauli('q'), input_error);

  Op xz = pauli_string(Region{0, 1}, "xz");
  CHECK(xz.mat.isApprox(kron(pauli('x'), pauli('z'))));
  CHECK(xz.mat.isApprox(xz.mat.adjoint()));  // Hermitian for x/y/z letters
  CHECK(pauli_string(Region{3}, "y").mat.isApprox(pauli('y')));
  CHECK_THROWS_AS(pauli_string(Region{0, 1}, "x"), input_error);
}

TEST_CASE("random generators are seeded and well formed") {
  auto r1 = rng_from_seed(42), r2 = rng_from_seed(42);
  CHECK(random_matrix(3, r1).isApprox(random_matrix(3, r2)));

  auto rng = rng_from_seed(43);
  Matrix h = random_hermitian(4, rng);
  CHECK(h.isApprox(h.adjoint()));
  CHECK(random_unit_vector(8, rng).norm() == Approx(1.0).epsilon(1e-12));
  SuperOp t = random_superop(Region{0}, kQubits, rng);
  CHECK(t.mat.rows() == 4);
  CHECK_THROWS_AS(random_cpt_superop(Region{0}, kQubits, 0, rng), input_error);
}

TEST_CASE("slot maps act like embedded operators") {
  const Region window{0, 1, 2};
  auto rng = rng_from_seed(55);
  Matrix x = random_matrix(8, rng);

  SUBCASE("middle slot") {
    SlotMap sm(window, Region{1}, kQubits);
    CHECK(sm.dz() == 2);
    CHECK(sm.drest() == 4);
    CHECK(sm.dw() == 8);
    Matrix a = random_matrix(2, rng);
    Matrix big = embed(make_op(Region{1}, kQubits, a), window, kQubits).mat;
    CHECK(sm.left(a, x).isApprox(big * x));
    CHECK(sm.right(a, x).isApprox(x * big));
  }
  SUBCASE("non-contiguous slots") {
    SlotMap sm(window, Region{0, 2}, kQubits);
    Matrix a = random_matrix(4, rng);
    Matrix big = embed(make_op(Region{0, 2}, kQubits, a), window, kQubits).mat;
    CHECK(sm.left(a, x).isApprox(big * x));
    CHECK(sm.right(a, x).isApprox(x * big));
  }
  SUBCASE("superoperator action matches sandwiching") {
    SlotMap sm(window, Region{0, 2}, kQubits);
    Matrix b = random_matrix(4, rng), c = random_matrix(4, rng);
    // column stacking: E = C^T (x) B encodes A -> B A C on the slots
    Matrix e = kron(c.transpose(), b);
    Matrix bb = embed(make_op(Region{0, 2}, kQubits, b), window, kQubits).mat;
    Matrix cc = embed(make_op(Region{0, 2}, kQubits, c), window, kQubits).mat;
    CHECK(sm.super(e, x).isApprox(bb * x * cc));
  }
  SUBCASE("slots equal to the window") {
    SlotMap sm(window, window, kQubits);
    Matrix a = random_matrix(8, rng);
    CHECK(sm.left(a, x).isApprox(a * x));
  }
  SUBCASE("slot sites must lie in the window") {
    CHECK_THROWS_AS(SlotMap(window, Region{3}, kQubits), input_error);
    SlotMap sm(window, Region{1}, kQubits);
    CHECK_THROWS_AS(sm.left(Matrix::Identity(2, 2), Matrix::Identity(4, 4)), input_error);
  }
}
