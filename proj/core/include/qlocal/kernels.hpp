#pragma once

#include "qlocal/algebra.hpp"

namespace qlocal {

// Index machinery for acting with operators (or superoperators) that live on
// a sub-region ("slots") of a larger window region, without materializing the
// embedded matrix. Rows of the window space are permuted so that the combined
// slot index varies fastest: permuted index p = z + dz * rest.
class SlotMap {
 public:
  SlotMap(const Region& window, const Region& slots, const SiteDims& dims);

  long dz() const { return dz_; }
  long drest() const { return drest_; }
  long dw() const { return dw_; }

  // (A (x) 1_rest) X with A acting on the slot sites; X has dw rows.
  Matrix left(const Matrix& a, const Matrix& x) const;
  // X (A (x) 1_rest); X has dw columns.
  Matrix right(const Matrix& a, const Matrix& x) const;
  // (E (x) id)(X) for a superoperator E on the slots (dz^2 x dz^2,
  // column-stacking convention); X is dw x dw.
  Matrix super(const Matrix& e, const Matrix& x) const;

 private:
  long dz_ = 1, drest_ = 1, dw_ = 1;
  std::vector<long> gather_;  // gather_[z + dz*rest] = canonical window index
};

}  // namespace qlocal
