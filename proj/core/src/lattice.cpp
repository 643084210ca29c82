#include "qlocal/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace qlocal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Tolerance for comparing metric values; all shipped metrics are integral.
constexpr double kMetricEps = 1e-9;
}  // namespace

Region::Region(std::vector<SiteId> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

Region::Region(std::initializer_list<SiteId> sites)
    : Region(std::vector<SiteId>(sites)) {}

bool Region::contains(SiteId s) const {
  return std::binary_search(sites_.begin(), sites_.end(), s);
}

bool Region::contains(const Region& other) const {
  return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(),
                       other.sites_.end());
}

bool Region::intersects(const Region& other) const {
  auto a = sites_.begin();
  auto b = other.sites_.begin();
  while (a != sites_.end() && b != other.sites_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      return true;
    }
  }
  return false;
}

int Region::index_of(SiteId s) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || *it != s) return -1;
  return static_cast<int>(it - sites_.begin());
}

Region region_union(const Region& a, const Region& b) {
  std::vector<SiteId> out;
  out.reserve(a.sites().size() + b.sites().size());
  std::set_union(a.sites().begin(), a.sites().end(), b.sites().begin(),
                 b.sites().end(), std::back_inserter(out));
  return Region(std::move(out));
}

Region region_intersection(const Region& a, const Region& b) {
  std::vector<SiteId> out;
  std::set_intersection(a.sites().begin(), a.sites().end(), b.sites().begin(),
                        b.sites().end(), std::back_inserter(out));
  return Region(std::move(out));
}

Region region_difference(const Region& a, const Region& b) {
  std::vector<SiteId> out;
  std::set_difference(a.sites().begin(), a.sites().end(), b.sites().begin(),
                      b.sites().end(), std::back_inserter(out));
  return Region(std::move(out));
}

std::string to_string(const Region& r) {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < r.sites().size(); ++i) {
    if (i) os << ',';
    os << r.sites()[i];
  }
  os << '}';
  return os.str();
}

Geometry Geometry::chain(int n_sites) {
  if (n_sites <= 0) throw input_error("chain: need at least one site");
  Geometry g;
  g.dist_.resize(n_sites, n_sites);
  for (int i = 0; i < n_sites; ++i)
    for (int j = 0; j < n_sites; ++j) g.dist_(i, j) = std::abs(i - j);
  g.label_ = "chain(" + std::to_string(n_sites) + ")";
  return g;
}

Geometry Geometry::make_grid(const std::vector<int>& shape,
                             const std::string& metric,
                             const std::string& name) {
  for (int s : shape)
    if (s <= 0) throw input_error(name + ": all grid extents must be positive");
  const bool linf = metric == "linf";
  if (!linf && metric != "l1")
    throw input_error(name + ": metric must be \"l1\" or \"linf\"");

  int n = 1;
  for (int s : shape) n *= s;
  std::vector<std::vector<int>> coord(n, std::vector<int>(shape.size()));
  for (int id = 0; id < n; ++id) {
    int rest = id;
    for (int axis = static_cast<int>(shape.size()) - 1; axis >= 0; --axis) {
      coord[id][axis] = rest % shape[axis];
      rest /= shape[axis];
    }
  }
  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int l1 = 0, lmax = 0;
      for (size_t axis = 0; axis < shape.size(); ++axis) {
        int d = std::abs(coord[i][axis] - coord[j][axis]);
        l1 += d;
        lmax = std::max(lmax, d);
      }
      dist(i, j) = linf ? lmax : l1;
    }
  }
  std::string label = name + "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) label += "x";
    label += std::to_string(shape[i]);
  }
  label += "," + metric + ")";
  Geometry g;
  g.dist_ = std::move(dist);
  g.label_ = std::move(label);
  return g;
}

Geometry Geometry::grid2d(int nx, int ny, const std::string& metric) {
  return make_grid({nx, ny}, metric, "grid2d");
}

Geometry Geometry::grid3d(int nx, int ny, int nz, const std::string& metric) {
  return make_grid({nx, ny, nz}, metric, "grid3d");
}

double Geometry::distance(SiteId a, SiteId b) const {
  if (a < 0 || b < 0 || a >= size() || b >= size())
    throw input_error("distance: site out of range");
  return dist_(a, b);
}

double Geometry::distance(const Region& x, const Region& y) const {
  if (x.empty() || y.empty())
    throw input_error("distance: regions must be non-empty");
  double best = kInf;
  for (SiteId a : x.sites())
    for (SiteId b : y.sites()) best = std::min(best, distance(a, b));
  return best;
}

double Geometry::diameter(const Region& x) const {
  double best = 0;
  for (SiteId a : x.sites())
    for (SiteId b : x.sites()) best = std::max(best, distance(a, b));
  return best;
}

Region Geometry::all_sites() const {
  std::vector<SiteId> s(size());
  std::iota(s.begin(), s.end(), 0);
  return Region(std::move(s));
}

Region Geometry::ball(const Region& center, double radius) const {
  if (center.empty()) throw input_error("ball: center must be non-empty");
  std::vector<SiteId> out;
  for (SiteId s = 0; s < size(); ++s)
    if (distance(Region{s}, center) <= radius + kMetricEps) out.push_back(s);
  return Region(std::move(out));
}

InteractionHypergraph::InteractionHypergraph(std::vector<Region> supports)
    : supports_(std::move(supports)) {
  for (const Region& r : supports_)
    if (r.empty()) throw input_error("hypergraph: empty support");
  std::sort(supports_.begin(), supports_.end());
  supports_.erase(std::unique(supports_.begin(), supports_.end()),
                  supports_.end());
}

double interaction_range(const Geometry& g, const InteractionHypergraph& h) {
  double a = 0;
  for (const Region& z : h.supports()) a = std::max(a, g.diameter(z));
  return a;
}

Region extension(const InteractionHypergraph& h, const Region& v) {
  Region out;
  for (const Region& z : h.supports())
    if (z.intersects(v)) out = region_union(out, z);
  return out;
}

int volume(const InteractionHypergraph& h, const Region& v) {
  int n = 0;
  for (const Region& z : h.supports())
    if (v.contains(z)) ++n;
  return n;
}

int max_neighbors(const InteractionHypergraph& h) {
  if (h.size() == 0)
    throw precondition_error("max_neighbors: hypergraph has no supports");
  int best = 0;
  for (const Region& z : h.supports()) {
    int n = 0;
    for (const Region& w : h.supports())
      if (z.intersects(w)) ++n;
    best = std::max(best, n);
  }
  return best;
}

std::vector<Region> shell_terms(const Geometry& g, const InteractionHypergraph& h,
                                SiteId y, int n) {
  if (n < 0) throw input_error("shell_terms: shell index must be >= 0");
  const double a = interaction_range(g, h);
  const Region ys{y};
  std::vector<Region> out;
  for (const Region& z : h.supports()) {
    const double d = g.distance(z, ys);
    bool in_shell;
    if (a == 0) {
      in_shell = (n == 0 && d <= kMetricEps);
    } else {
      in_shell = (d >= n * a - kMetricEps && d < (n + 1) * a - kMetricEps);
    }
    if (in_shell) out.push_back(z);
  }
  return out;
}

double fit_growth_prefactor(const Geometry& g, const InteractionHypergraph& h,
                            double kappa) {
  if (kappa < 0) throw input_error("fit_growth_prefactor: kappa must be >= 0");
  const double a = interaction_range(g, h);
  double m = 0;
  for (SiteId y = 0; y < g.size(); ++y) {
    // Largest shell index that can be non-empty on a finite lattice.
    int n_max = 1;
    if (a > 0) {
      double far = 0;
      const Region ys{y};
      for (const Region& z : h.supports()) far = std::max(far, g.distance(z, ys));
      n_max = static_cast<int>(std::floor(far / a + kMetricEps)) + 1;
    }
    for (int n = 1; n <= n_max; ++n) {
      const auto shell = shell_terms(g, h, y, n);
      if (shell.empty()) continue;
      m = std::max(m, static_cast<double>(shell.size()) / std::pow(n, kappa));
    }
  }
  return m;
}

std::uint64_t count_paths(const InteractionHypergraph& h, const Region& x,
                          const Region& y, int n) {
  if (x.empty() || y.empty())
    throw input_error("count_paths: regions must be non-empty");
  if (n < 0) throw input_error("count_paths: length must be >= 0");
  if (n == 0) return x.intersects(y) ? 1 : 0;

  const auto& zs = h.supports();
  const int m = static_cast<int>(zs.size());
  // successors[i] = supports contained in the extension of zs[i]
  std::vector<std::vector<int>> successors(m);
  std::vector<Region> ext(m);
  for (int i = 0; i < m; ++i) ext[i] = extension(h, zs[i]);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (ext[i].contains(zs[j])) successors[i].push_back(j);

  // paths[i] = number of admissible continuations of a path ending at zs[i]
  std::vector<std::uint64_t> paths(m), next(m);
  for (int i = 0; i < m; ++i) paths[i] = zs[i].intersects(y) ? 1 : 0;
  for (int step = 1; step < n; ++step) {
    for (int i = 0; i < m; ++i) {
      std::uint64_t acc = 0;
      for (int j : successors[i]) acc += paths[j];
      next[i] = acc;
    }
    paths.swap(next);
  }
  const Region ext_x = extension(h, x);
  std::uint64_t total = 0;
  for (int i = 0; i < m; ++i)
    if (ext_x.contains(zs[i])) total += paths[i];
  return total;
}

double cone_depth(const Geometry& g, const InteractionHypergraph& h,
                  const Region& y, const Region& v) {
  const Region comp = region_difference(g.all_sites(), v);
  if (comp.empty()) return kInf;
  const double d = g.distance(y, comp);
  if (d <= kMetricEps) return 0;
  const double a = interaction_range(g, h);
  if (a == 0) return kInf;
  return std::ceil(d / a - kMetricEps);
}

}  // namespace qlocal
