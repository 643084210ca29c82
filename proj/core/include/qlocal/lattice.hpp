#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlocal/errors.hpp"

namespace qlocal {

using SiteId = int;

// A finite set of lattice sites, stored sorted and duplicate-free.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<SiteId> sites);
  Region(std::initializer_list<SiteId> sites);

  const std::vector<SiteId>& sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  bool contains(SiteId s) const;
  bool contains(const Region& other) const;  // superset test
  bool intersects(const Region& other) const;
  // Position of a site within the sorted site list, -1 if absent.
  int index_of(SiteId s) const;

  bool operator==(const Region& o) const { return sites_ == o.sites_; }
  bool operator!=(const Region& o) const { return sites_ != o.sites_; }
  bool operator<(const Region& o) const { return sites_ < o.sites_; }

 private:
  std::vector<SiteId> sites_;
};

Region region_union(const Region& a, const Region& b);
Region region_intersection(const Region& a, const Region& b);
Region region_difference(const Region& a, const Region& b);
std::string to_string(const Region& r);  // "{0,1,2}"

// A finite lattice with an explicit metric. Sites are labeled 0..size()-1.
class Geometry {
 public:
  Geometry() = default;

  static Geometry chain(int n_sites);
  // Row-major site ids: (x, y) -> x*ny + y. Metric "l1" or "linf".
  static Geometry grid2d(int nx, int ny, const std::string& metric = "l1");
  static Geometry grid3d(int nx, int ny, int nz, const std::string& metric = "l1");

  int size() const { return static_cast<int>(dist_.rows()); }
  double distance(SiteId a, SiteId b) const;
  // min over site pairs; both regions must be non-empty
  double distance(const Region& x, const Region& y) const;
  double diameter(const Region& x) const;  // 0 for empty and singleton regions
  Region all_sites() const;
  Region ball(const Region& center, double radius) const;
  const std::string& label() const { return label_; }

 private:
  static Geometry make_grid(const std::vector<int>& shape,
                            const std::string& metric, const std::string& name);

  Eigen::MatrixXd dist_;
  std::string label_;
};

// The set of distinct interaction supports of a model (each support once).
class InteractionHypergraph {
 public:
  InteractionHypergraph() = default;
  explicit InteractionHypergraph(std::vector<Region> supports);

  const std::vector<Region>& supports() const { return supports_; }
  int size() const { return static_cast<int>(supports_.size()); }

 private:
  std::vector<Region> supports_;
};

// Largest support diameter; 0 when every support is a single site.
double interaction_range(const Geometry& g, const InteractionHypergraph& h);

// Union of all supports that intersect v (the sites v talks to in one step).
Region extension(const InteractionHypergraph& h, const Region& v);

// Number of supports entirely contained in v.
int volume(const InteractionHypergraph& h, const Region& v);

// Max over supports Z of the number of supports intersecting Z (self included).
int max_neighbors(const InteractionHypergraph& h);

// Supports whose distance from site y lies in [n*a, (n+1)*a), a = range.
// With range 0 only the n = 0 shell (supports touching y at distance 0) exists.
std::vector<Region> shell_terms(const Geometry& g, const InteractionHypergraph& h,
                                SiteId y, int n);

// Smallest m with (number of supports in shell n of y) <= m * n^kappa for all
// sites y and all shells n >= 1.
double fit_growth_prefactor(const Geometry& g, const InteractionHypergraph& h,
                            double kappa);

// Number of support chains Z_1,...,Z_n with Z_1 inside the extension of x,
// Z_{i+1} inside the extension of Z_i, and Z_n intersecting y. For n = 0 the
// count is 1 if x intersects y and 0 otherwise.
std::uint64_t count_paths(const InteractionHypergraph& h, const Region& x,
                          const Region& y, int n);

// ceil(distance(y, complement of v) / range). +inf when the complement is
// empty, or when the range is 0 and the distance is positive.
double cone_depth(const Geometry& g, const InteractionHypergraph& h,
                  const Region& y, const Region& v);

}  // namespace qlocal
