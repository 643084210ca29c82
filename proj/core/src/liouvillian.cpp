#include "qlocal/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace qlocal {

namespace {
constexpr cxd kI{0.0, 1.0};
constexpr double kHermTol = 1e-12;
}  // namespace

TimeProfile TimeProfile::constant(double value) {
  TimeProfile p;
  p.kind_ = Kind::Constant;
  p.params_ = {value};
  return p;
}

TimeProfile TimeProfile::piecewise(std::vector<double> breakpoints,
                                   std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1)
    throw input_error("piecewise profile: need one more value than breakpoints");
  for (size_t i = 1; i < breakpoints.size(); ++i)
    if (breakpoints[i] <= breakpoints[i - 1])
      throw input_error("piecewise profile: breakpoints must increase strictly");
  TimeProfile p;
  p.kind_ = Kind::Piecewise;
  p.breaks_ = std::move(breakpoints);
  p.params_ = std::move(values);
  return p;
}

TimeProfile TimeProfile::sinusoid(double offset, double amplitude, double omega,
                                  double phase) {
  TimeProfile p;
  p.kind_ = Kind::Sinusoid;
  p.params_ = {offset, amplitude, omega, phase};
  return p;
}

TimeProfile TimeProfile::quench(double t_switch, double before, double after) {
  TimeProfile p;
  p.kind_ = Kind::Quench;
  p.breaks_ = {t_switch};
  p.params_ = {before, after};
  return p;
}

double TimeProfile::value(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return params_[0];
    case Kind::Sinusoid:
      return params_[0] + params_[1] * std::sin(params_[2] * t + params_[3]);
    case Kind::Piecewise:
    case Kind::Quench: {
      // right-continuous: the value at a breakpoint is the next cell's value
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
      return params_[it - breaks_.begin()];
    }
  }
  return 0;
}

double TimeProfile::sup_abs(double t0, double t1) const {
  if (t1 < t0) throw input_error("sup_abs: need t0 <= t1");
  switch (kind_) {
    case Kind::Constant:
      return std::abs(params_[0]);
    case Kind::Sinusoid: {
      double best = std::max(std::abs(value(t0)), std::abs(value(t1)));
      const double omega = params_[2], phase = params_[3];
      if (omega != 0) {
        const double pi = std::acos(-1.0);
        // stationary points: omega*t + phase = pi/2 + k*pi
        const double k0 =
            std::ceil((omega * t0 + phase - pi / 2) / pi - 1e-12);
        for (double k = k0;; k += 1) {
          const double ts = (pi / 2 + k * pi - phase) / omega;
          if (ts > t1 + 1e-12) break;
          if (ts >= t0 - 1e-12) best = std::max(best, std::abs(value(ts)));
        }
      }
      return best;
    }
    case Kind::Piecewise:
    case Kind::Quench: {
      double best = std::max(std::abs(value(t0)), std::abs(value(t1)));
      for (size_t cell = 0; cell < params_.size(); ++cell) {
        const double lo = cell == 0 ? t0 : std::max(t0, breaks_[cell - 1]);
        const double hi =
            cell == breaks_.size() ? t1 : std::min(t1, breaks_[cell]);
        if (hi > lo) best = std::max(best, std::abs(params_[cell]));
      }
      return best;
    }
  }
  return 0;
}

double TimeProfile::average(double t0, double t1) const {
  if (t1 < t0) throw input_error("average: need t0 <= t1");
  if (t1 == t0) return value(t0);
  switch (kind_) {
    case Kind::Constant:
      return params_[0];
    case Kind::Sinusoid: {
      const double off = params_[0], amp = params_[1], omega = params_[2],
                   phase = params_[3];
      if (omega == 0) return off + amp * std::sin(phase);
      return off + amp * (std::cos(omega * t0 + phase) -
                          std::cos(omega * t1 + phase)) /
                       (omega * (t1 - t0));
    }
    case Kind::Piecewise:
    case Kind::Quench: {
      double acc = 0;
      for (size_t cell = 0; cell < params_.size(); ++cell) {
        const double lo =
            cell == 0 ? t0 : std::max(t0, breaks_[cell - 1]);
        const double hi =
            cell == breaks_.size() ? t1 : std::min(t1, breaks_[cell]);
        if (hi > lo) acc += params_[cell] * (hi - lo);
      }
      return acc / (t1 - t0);
    }
  }
  return 0;
}

std::vector<double> TimeProfile::breakpoints_in(double t0, double t1) const {
  std::vector<double> out;
  for (double b : breaks_)
    if (b > t0 && b < t1) out.push_back(b);
  return out;
}

bool TimeProfile::operator==(const TimeProfile& o) const {
  return kind_ == o.kind_ && params_ == o.params_ && breaks_ == o.breaks_;
}

LocalTerm make_term(const Region& support, const SiteDims& dims, Matrix hamiltonian,
                    std::vector<Matrix> lindblads, TimeProfile profile,
                    std::string label) {
  if (support.empty()) throw input_error("make_term: empty support");
  Op h = make_op(support, dims, std::move(hamiltonian));
  if ((h.mat - Matrix(h.mat.adjoint())).cwiseAbs().maxCoeff() > kHermTol)
    throw input_error("make_term: Hamiltonian on " + to_string(support) +
                      " is not Hermitian");
  LocalTerm term;
  term.support = support;
  term.hamiltonian = std::move(h);
  for (auto& l : lindblads)
    term.lindblads.push_back(make_op(support, dims, std::move(l)));
  term.profile = std::move(profile);
  term.label = std::move(label);
  return term;
}

InteractionHypergraph LiouvillianSpec::hypergraph() const {
  std::vector<Region> supports;
  supports.reserve(terms.size());
  for (const auto& t : terms) supports.push_back(t.support);
  return InteractionHypergraph(std::move(supports));
}

bool LiouvillianSpec::time_independent() const {
  return std::all_of(terms.begin(), terms.end(),
                     [](const LocalTerm& t) { return t.profile.is_constant(); });
}

void LiouvillianSpec::validate() const {
  const Region lattice = geometry.all_sites();
  for (const auto& term : terms) {
    if (!lattice.contains(term.support))
      throw input_error("model: support " + to_string(term.support) +
                        " outside the lattice");
    const long d = dims.total_dim(term.support);
    const Matrix& h = term.hamiltonian.mat;
    if (h.rows() != d || h.cols() != d)
      throw input_error("model: Hamiltonian dimension mismatch on " +
                        to_string(term.support));
    if ((h - Matrix(h.adjoint())).cwiseAbs().maxCoeff() > kHermTol)
      throw input_error("model: Hamiltonian on " + to_string(term.support) +
                        " is not Hermitian");
    for (const auto& l : term.lindblads)
      if (l.mat.rows() != d || l.mat.cols() != d)
        throw input_error("model: Lindblad dimension mismatch on " +
                          to_string(term.support));
  }
}

Op apply_term(const LocalTerm& term, const SiteDims& dims, double t, const Op& o) {
  if (!o.region.contains(term.support))
    throw input_error("apply_term: operator region " + to_string(o.region) +
                      " does not contain support " + to_string(term.support));
  const double c = term.profile.value(t);
  SlotMap map(o.region, term.support, dims);
  Matrix out = Matrix::Zero(o.dim(), o.dim());
  if (c == 0) return Op{o.region, o.dims, std::move(out)};
  if (!term.hamiltonian.mat.isZero(0)) {
    const Matrix& h = term.hamiltonian.mat;
    out += (kI * c) * (map.left(h, o.mat) - map.right(h, o.mat));
  }
  if (!term.lindblads.empty()) {
    Matrix j = Matrix::Zero(map.dz(), map.dz());
    for (const auto& l : term.lindblads) {
      out += c * map.left(l.mat.adjoint(), map.right(l.mat, o.mat));
      j += l.mat.adjoint() * l.mat;
    }
    out -= (0.5 * c) * (map.left(j, o.mat) + map.right(j, o.mat));
  }
  return Op{o.region, o.dims, std::move(out)};
}

Op apply_truncated(const LiouvillianSpec& spec, const Region& v, double t,
                   const Op& o) {
  Op acc = zero_op(o.region, spec.dims);
  for (const auto& term : spec.terms) {
    if (!v.contains(term.support)) continue;
    if (!o.region.contains(term.support))
      throw input_error("apply_truncated: operator region must contain " +
                        to_string(term.support));
    acc.mat += apply_term(term, spec.dims, t, o).mat;
  }
  return acc;
}

SuperOp term_superop_base(const LocalTerm& term, const SiteDims& dims,
                          const Region& window) {
  if (!window.contains(term.support))
    throw input_error("term_superop_base: window must contain the support");
  const long d = dims.total_dim(window);
  if (d * d > kMaxSuperOpDim)
    throw precondition_error(
        "term_superop_base: window too large to materialize");
  const Matrix id = Matrix::Identity(d, d);
  Matrix s = Matrix::Zero(d * d, d * d);
  const Matrix h = embed(term.hamiltonian, window, dims).mat;
  if (!h.isZero(0))
    s += kI * (kron(id, h) - kron(h.transpose(), id));
  if (!term.lindblads.empty()) {
    Matrix j = Matrix::Zero(d, d);
    for (const auto& lop : term.lindblads) {
      const Matrix l = embed(lop, window, dims).mat;
      s += kron(l.transpose(), l.adjoint());
      j += l.adjoint() * l;
    }
    s -= 0.5 * (kron(id, j) + kron(j.transpose(), id));
  }
  return make_superop(window, dims, std::move(s));
}

SuperOp term_superop(const LocalTerm& term, const SiteDims& dims, double t,
                     const Region& window) {
  SuperOp s = term_superop_base(term, dims, window);
  s.mat *= term.profile.value(t);
  return s;
}

SuperOp truncated_superop(const LiouvillianSpec& spec, const Region& v, double t,
                          const Region& window) {
  const long d = spec.dims.total_dim(window);
  if (d * d > kMaxSuperOpDim)
    throw precondition_error("truncated_superop: window too large");
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const auto& term : spec.terms)
    if (v.contains(term.support))
      s += term_superop(term, spec.dims, t, window).mat;
  return make_superop(window, spec.dims, std::move(s));
}

double support_norm_sup(const LiouvillianSpec& spec, const Region& support,
                        double t0, double t1, const NormOptions& opts,
                        int grid_points) {
  if (t1 < t0) throw input_error("support_norm_sup: need t0 <= t1");
  std::vector<const LocalTerm*> terms;
  for (const auto& term : spec.terms)
    if (term.support == support) terms.push_back(&term);
  if (terms.empty()) return 0;

  if (terms.size() == 1) {
    // Scalar profiles factor out of the norm exactly.
    const double base =
        inf_inf_norm(term_superop_base(*terms[0], spec.dims, support), opts).value;
    return base * terms[0]->profile.sup_abs(t0, t1);
  }

  std::vector<Matrix> bases;
  bases.reserve(terms.size());
  for (const auto* term : terms)
    bases.push_back(term_superop_base(*term, spec.dims, support).mat);

  std::set<double> times{t0, t1};
  for (const auto* term : terms)
    for (double b : term->profile.breakpoints_in(t0, t1)) times.insert(b);
  if (t1 > t0)
    for (int k = 0; k < grid_points; ++k)
      times.insert(t0 + (t1 - t0) * k / double(grid_points - 1));

  double best = 0;
  for (double t : times) {
    Matrix s = Matrix::Zero(bases[0].rows(), bases[0].cols());
    for (size_t k = 0; k < terms.size(); ++k)
      s += terms[k]->profile.value(t) * bases[k];
    best = std::max(
        best, inf_inf_norm(make_superop(support, spec.dims, std::move(s)), opts)
                  .value);
  }
  return best;
}

double model_term_norm(const LiouvillianSpec& spec, double t0, double t1,
                       const NormOptions& opts, int grid_points) {
  double best = 0;
  const InteractionHypergraph hg = spec.hypergraph();
  for (const Region& z : hg.supports())
    best = std::max(best, support_norm_sup(spec, z, t0, t1, opts, grid_points));
  return best;
}

LocalTerm averaged_term(const LocalTerm& term, double t0, double t1) {
  LocalTerm out = term;
  out.profile = TimeProfile::constant(term.profile.average(t0, t1));
  return out;
}

namespace {

void append_embedded_triplets(const Op& small, const Region& window,
                              const SiteDims& dims,
                              std::vector<Eigen::Triplet<cxd>>* out) {
  const Matrix dense = embed(small, window, dims).mat;
  for (long c = 0; c < dense.cols(); ++c)
    for (long r = 0; r < dense.rows(); ++r)
      if (dense(r, c) != cxd(0, 0))
        out->emplace_back(static_cast<int>(r), static_cast<int>(c), dense(r, c));
}

SpMat sparse_from_triplets(long dim, std::vector<Eigen::Triplet<cxd>> trips) {
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

}  // namespace

CompiledLiouvillian::CompiledLiouvillian(const LiouvillianSpec& spec,
                                         const Region& v, const Region& window)
    : window_(window), dim_(spec.dims.total_dim(window)) {
  struct Builder {
    TimeProfile profile;
    std::vector<Eigen::Triplet<cxd>> h, j;
    std::vector<SpMat> l, ldag;
  };
  std::vector<Builder> builders;
  std::vector<Region> included_supports;

  for (const auto& term : spec.terms) {
    if (!v.contains(term.support)) continue;
    if (!window.contains(term.support))
      throw input_error("CompiledLiouvillian: window must contain support " +
                        to_string(term.support));
    ++term_count_;
    included_supports.push_back(term.support);
    time_independent_ = time_independent_ && term.profile.is_constant();

    Builder* b = nullptr;
    for (auto& cand : builders)
      if (cand.profile == term.profile) b = &cand;
    if (!b) {
      builders.push_back(Builder{term.profile, {}, {}, {}, {}});
      b = &builders.back();
    }

    double base = 0;
    if (!term.hamiltonian.mat.isZero(0)) {
      append_embedded_triplets(term.hamiltonian, window, spec.dims, &b->h);
      base += 2 * inf_norm(term.hamiltonian.mat);
    }
    if (!term.lindblads.empty()) {
      const long dsup = spec.dims.total_dim(term.support);
      Matrix jsmall = Matrix::Zero(dsup, dsup);
      for (const auto& l : term.lindblads) {
        std::vector<Eigen::Triplet<cxd>> lt;
        append_embedded_triplets(l, window, spec.dims, &lt);
        b->l.push_back(sparse_from_triplets(dim_, lt));
        b->ldag.push_back(SpMat(b->l.back().adjoint()));
        jsmall += l.mat.adjoint() * l.mat;
        const double ln = inf_norm(l.mat);
        base += 2 * ln * ln;
      }
      append_embedded_triplets(Op{term.support, spec.dims.dims(term.support),
                                  std::move(jsmall)},
                               window, spec.dims, &b->j);
    }
    step_terms_.push_back(StepTerm{term.support, base, term.profile});
  }

  for (auto& b : builders) {
    Group g;
    g.profile = b.profile;
    g.has_h = !b.h.empty();
    g.has_d = !b.l.empty();
    g.h = sparse_from_triplets(dim_, std::move(b.h));
    g.j = sparse_from_triplets(dim_, std::move(b.j));
    g.l = std::move(b.l);
    g.ldag = std::move(b.ldag);
    groups_.push_back(std::move(g));
  }

  if (!included_supports.empty())
    included_max_neighbors_ =
        max_neighbors(InteractionHypergraph(std::move(included_supports)));
  tmp_.resize(dim_, dim_);
}

void CompiledLiouvillian::apply(double t, const Matrix& o, Matrix& out) const {
  out.resize(dim_, dim_);
  out.setZero();
  for (const auto& g : groups_) {
    const double c = g.profile.value(t);
    if (c == 0) continue;
    if (g.has_h) {
      tmp_.noalias() = g.h * o;
      out += (kI * c) * tmp_;
      tmp_.noalias() = o * g.h;
      out -= (kI * c) * tmp_;
    }
    if (g.has_d) {
      for (size_t k = 0; k < g.l.size(); ++k) {
        tmp_.noalias() = o * g.l[k];
        out += c * (g.ldag[k] * tmp_);
      }
      tmp_.noalias() = g.j * o;
      out -= (0.5 * c) * tmp_;
      tmp_.noalias() = o * g.j;
      out -= (0.5 * c) * tmp_;
    }
  }
}

void CompiledLiouvillian::apply_adjoint(double t, const Matrix& rho,
                                        Matrix& out) const {
  out.resize(dim_, dim_);
  out.setZero();
  for (const auto& g : groups_) {
    const double c = g.profile.value(t);
    if (c == 0) continue;
    if (g.has_h) {
      tmp_.noalias() = g.h * rho;
      out -= (kI * c) * tmp_;
      tmp_.noalias() = rho * g.h;
      out += (kI * c) * tmp_;
    }
    if (g.has_d) {
      for (size_t k = 0; k < g.l.size(); ++k) {
        tmp_.noalias() = g.l[k] * rho;
        out += c * (tmp_ * g.ldag[k]);
      }
      tmp_.noalias() = g.j * rho;
      out -= (0.5 * c) * tmp_;
      tmp_.noalias() = rho * g.j;
      out -= (0.5 * c) * tmp_;
    }
  }
}

double CompiledLiouvillian::step_norm_bound(double t0, double t1) const {
  std::map<Region, double> per_support;
  for (const auto& st : step_terms_)
    per_support[st.support] += st.base * st.profile.sup_abs(t0, t1);
  double best = 0;
  for (const auto& [support, bound] : per_support) best = std::max(best, bound);
  return best;
}

int CompiledLiouvillian::included_max_neighbors() const {
  return included_max_neighbors_;
}

std::vector<double> CompiledLiouvillian::breakpoints(double t0, double t1) const {
  std::set<double> cuts;
  for (const auto& g : groups_)
    for (double b : g.profile.breakpoints_in(t0, t1)) cuts.insert(b);
  return std::vector<double>(cuts.begin(), cuts.end());
}

}  // namespace qlocal
