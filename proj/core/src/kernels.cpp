#include "qlocal/kernels.hpp"

namespace qlocal {

SlotMap::SlotMap(const Region& window, const Region& slots, const SiteDims& dims) {
  if (!window.contains(slots))
    throw input_error("SlotMap: slots " + to_string(slots) +
                      " not inside window " + to_string(window));
  const auto& wsites = window.sites();
  const int m = static_cast<int>(wsites.size());
  std::vector<long> site_dim(m);
  std::vector<bool> is_slot(m);
  for (int k = 0; k < m; ++k) {
    site_dim[k] = dims.dim(wsites[k]);
    is_slot[k] = slots.contains(wsites[k]);
    dw_ *= site_dim[k];
    (is_slot[k] ? dz_ : drest_) *= site_dim[k];
  }
  gather_.assign(dw_, 0);
  std::vector<long> digit(m, 0);
  for (long idx = 0; idx < dw_; ++idx) {
    long rest = idx;
    for (int k = m - 1; k >= 0; --k) {
      digit[k] = rest % site_dim[k];
      rest /= site_dim[k];
    }
    long z = 0, r = 0;
    for (int k = 0; k < m; ++k) {
      if (is_slot[k])
        z = z * site_dim[k] + digit[k];
      else
        r = r * site_dim[k] + digit[k];
    }
    gather_[z + dz_ * r] = idx;
  }
}

Matrix SlotMap::left(const Matrix& a, const Matrix& x) const {
  if (a.rows() != dz_ || a.cols() != dz_ || x.rows() != dw_)
    throw input_error("SlotMap::left: dimension mismatch");
  const long cols = x.cols();
  Matrix xp(dw_, cols);
  for (long p = 0; p < dw_; ++p) xp.row(p) = x.row(gather_[p]);
  Matrix yp(dw_, cols);
  // Column-major reshape: element (z, r + drest*c) of the map sits at
  // z + dz*(r + drest*c) = p + dw*c, i.e. exactly xp's storage order.
  Eigen::Map<const Matrix> xm(xp.data(), dz_, drest_ * cols);
  Eigen::Map<Matrix> ym(yp.data(), dz_, drest_ * cols);
  ym.noalias() = a * xm;
  Matrix y(dw_, cols);
  for (long p = 0; p < dw_; ++p) y.row(gather_[p]) = yp.row(p);
  return y;
}

Matrix SlotMap::right(const Matrix& a, const Matrix& x) const {
  if (x.cols() != dw_) throw input_error("SlotMap::right: dimension mismatch");
  // X (A (x) 1) = ((A^T (x) 1) X^T)^T
  return left(a.transpose(), x.transpose()).transpose();
}

Matrix SlotMap::super(const Matrix& e, const Matrix& x) const {
  if (e.rows() != dz_ * dz_ || e.cols() != dz_ * dz_ || x.rows() != dw_ ||
      x.cols() != dw_)
    throw input_error("SlotMap::super: dimension mismatch");
  Matrix q(dz_ * dz_, drest_ * drest_);
  for (long rc = 0; rc < drest_; ++rc)
    for (long zc = 0; zc < dz_; ++zc) {
      const long col = gather_[zc + dz_ * rc];
      for (long rr = 0; rr < drest_; ++rr)
        for (long zr = 0; zr < dz_; ++zr)
          q(zr + dz_ * zc, rr + drest_ * rc) = x(gather_[zr + dz_ * rr], col);
    }
  Matrix s(dz_ * dz_, drest_ * drest_);
  s.noalias() = e * q;
  Matrix y(dw_, dw_);
  for (long rc = 0; rc < drest_; ++rc)
    for (long zc = 0; zc < dz_; ++zc) {
      const long col = gather_[zc + dz_ * rc];
      for (long rr = 0; rr < drest_; ++rr)
        for (long zr = 0; zr < dz_; ++zr)
          y(gather_[zr + dz_ * rr], col) = s(zr + dz_ * zc, rr + drest_ * rc);
    }
  return y;
}

}  // namespace qlocal
