#pragma once

#include <optional>
#include <vector>

#include "escort/address.hpp"
#include "escort/expoly.hpp"
#include "escort/potential.hpp"
#include "escort/sampling.hpp"
#include "escort/types.hpp"

namespace escort {

struct PointId {
  int orbit = 0;
  int step = 0;
  bool operator==(const PointId&) const = default;
};

struct MarkedPoint {
  PointId id;
  PotentialRep potential;
  Symbol symbol = 0;
  std::optional<Complex> coordinate;  // empty for symbolic-tail points

  bool symbolic() const { return !coordinate; }
  /// t + 2 pi i s / d.
  Complex pinned() const;
  /// The numeric coordinate, or the pinned one for symbolic points.
  Complex position() const { return coordinate ? *coordinate : pinned(); }
};

class PostSingularSet {
 public:
  int degree() const { return degree_; }
  int orbit_count() const { return static_cast<int>(orbits_.size()); }
  /// Points stored per orbit (numeric ones first, then symbolic).
  int stored_depth() const { return orbits_.empty() ? 0 : static_cast<int>(orbits_[0].size()); }
  /// Number of leading numeric points in orbit i.
  int numeric_count(int orbit) const;

  const MarkedPoint& at(PointId id) const;
  const std::vector<MarkedPoint>& orbit(int i) const { return orbits_.at(static_cast<std::size_t>(i)); }
  const ExternalAddress& address(int orbit) const { return addresses_.at(static_cast<std::size_t>(orbit)); }
  const PotentialRep& base_potential(int orbit) const { return base_.at(static_cast<std::size_t>(orbit)); }
  std::vector<MarkedPoint> points() const;

  /// Potential of a_ij for any j (not limited to stored points).
  PotentialRep potential(PointId id) const;
  Symbol symbol(PointId id) const { return address(id.orbit).entry(static_cast<std::size_t>(id.step)); }

  /// Largest |g(a_ij) - a_i(j+1)| over consecutive numeric pairs.
  Real forward_residual() const { return forward_residual_; }

  /// Copy with numeric coordinates replaced, orbit by orbit.
  PostSingularSet with_coordinates(const std::vector<std::vector<Complex>>& coordinates) const;

 private:
  friend PostSingularSet build_psset(const ExpPolyMap&, const std::vector<ExternalAddress>&,
                                     const std::vector<PotentialRep>&, int, int);
  friend PostSingularSet make_psset(int, const std::vector<ExternalAddress>&, const std::vector<PotentialRep>&,
                                    const std::vector<std::vector<Complex>>&, int);
  int degree_ = 1;
  std::vector<ExternalAddress> addresses_;
  std::vector<PotentialRep> base_;
  std::vector<std::vector<MarkedPoint>> orbits_;
  Real forward_residual_ = 0;
};

/// Traces a_ij on the rays of shift(s_i, j) at F^j(T_i) for j < numeric_depth
/// (and while numeric), stores symbolic points up to total_depth. Rejects
/// overlapping addresses.
PostSingularSet build_psset(const ExpPolyMap& g, const std::vector<ExternalAddress>& addresses,
                            const std::vector<PotentialRep>& potentials, int numeric_depth, int total_depth);

/// Set with given numeric coordinates (orbit i gets coordinates[i].size()
/// numeric points), symbolic points up to total_depth.
PostSingularSet make_psset(int degree, const std::vector<ExternalAddress>& addresses,
                           const std::vector<PotentialRep>& potentials,
                           const std::vector<std::vector<Complex>>& coordinates, int total_depth);

struct Cluster {
  PotentialRep potential;
  Symbol symbol = 0;
  std::vector<PointId> members;
};

std::vector<Cluster> find_clusters(const PostSingularSet& ps);

/// Same potential and first symbol.
bool same_cluster(const PostSingularSet& ps, PointId a, PointId b);

/// Smallest n >= 1 with a_{i(j+n)}, a_{k(l+n)} in different clusters. Throws
/// ErrorKind::PreconditionViolated if the points are not clustered and
/// ErrorKind::AddressDepth when the addresses agree as far as known.
int horizon_H(const PostSingularSet& ps, PointId a, PointId b);

/// Smallest n >= 1 with both predecessors defined and in different clusters.
std::optional<int> history_L(const PostSingularSet& ps, PointId a, PointId b);

/// log (F^{oH})'(t) = sum_r log F'(F^r(t)).
Real log_iterate_derivative(const PotentialRep& t, int H);

struct Beta {
  Real value = 0;  // signed; 0 when underflowed
  Real log_abs = 0;
  bool same_cluster = false;
  bool underflow = false;
  int H = 0;
  Symbol delta_s = 0;
};

Beta beta(const PostSingularSet& ps, PointId a, PointId b);

struct AnnularSector {
  Real x = 1;
  int n = 0;

  /// e^{-x/3} + ... + e^{-F^n(x)/3}.
  Real bound(int degree) const;
  /// |log|alpha|| and |Arg alpha| below the bound; closed allows equality.
  bool contains(Complex alpha, int degree, bool closed = false) const;
};

bool sector_contains(const AnnularSector& sec, Complex alpha, int degree);

struct ProductLawReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  Real worst_ratio = 0;  // max over samples of max(|log|prod||, |Arg prod|) / bound
};

/// Samples alpha_i in A_{F^{i-1}(x),0} and checks alpha_1 ... alpha_k in A_{x,k-1}.
ProductLawReport sector_product_law(Rng& rng, Real x, int k, std::size_t samples, int degree);

struct RotationRatio {
  Real t = 0;
  std::size_t samples = 0;
  std::size_t inside = 0;
  Real worst_ratio = 0;  // max of max(|log|alpha||, |Arg alpha|) / B_{t,0}
};

struct RotationScan {
  std::vector<RotationRatio> rows;
  std::optional<Real> threshold;  // smallest scanned t from which every row is fully inside
};

/// For pairs z_r = t + 2 pi i s/d + eta_r with |eta_r| < e^{-t/2}, tests whether
/// (g(z_1) - g(z_2)) / (F'(t)(z_1 - z_2)) lies in A_{t,0}.
RotationScan rotation_ratio_scan(Rng& rng, const ExpPolyMap& g, const std::vector<Real>& ts, std::size_t pairs);

struct ClusterDisk {
  Complex center;
  Real radius = 0;
  bool contains(Complex z) const { return std::abs(z - center) < radius; }
};

ClusterDisk cluster_disk(const PostSingularSet& ps, PointId a, PointId b);

struct ClusterEstimate {
  int H = 0;
  Real t = 0;
  Complex nu;
  Complex delta;
  ClusterDisk disk;
  Real sector_bound = 0;
  bool nu_in_sector = false;
  bool delta_in_disk = false;
  /// a_kl - a_ij rebuilt from (nu, delta, H, t, delta s) and the stored value.
  Complex rebuilt;
  Complex difference;
};

ClusterEstimate verify_cluster_estimate(const PostSingularSet& ps, PointId a, PointId b);

struct BetaReport {
  std::optional<int> j0;  // smallest step from which every checked pair passes
  std::size_t pairs = 0;  // pairs with min step >= j0
  std::size_t excluded = 0;
  Real min_lower_ratio = 0;  // min |a - b| / |beta|
  Real max_upper_ratio = 0;  // max |a - b| / |beta| over same-cluster pairs
  bool any_same_cluster = false;
};

BetaReport check_beta_inequalities(const PostSingularSet& ps);

struct PartitionRadius {
  bool conclusive = false;
  Real t_prime = 0;
  std::vector<Real> rho;                   // admissible midpoints above t'
  std::vector<std::vector<int>> N;         // N[r][i] = N_i(rho[r])
  Real gap_margin = 0;                     // min potential gap above t' minus 2
  Real modulus_margin = 0;                 // min |a_kl| - |a_ij| - 2
  std::vector<Real> split_margin;          // per rho
};

PartitionRadius good_partition_radius(const PostSingularSet& ps);

/// N_i(rho) for all orbits: the largest j with |a_ij| < rho (-1 if none).
std::vector<int> points_inside(const PostSingularSet& ps, Real rho);

}  // namespace escort
