#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlh/cochains.hpp"
#include "nlh/cohomology.hpp"
#include "nlh/hodge.hpp"
#include "nlh/kernels.hpp"
#include "nlh/neighborhoods.hpp"
#include "nlh/space.hpp"

namespace nlh {

/// A nonempty intersection of big balls, with its restricted tuple sets.
struct Intersection {
  std::vector<int> members;  ///< ball indices, increasing
  std::vector<int> points;   ///< point indices, increasing
  std::vector<char> mask;    ///< per point
  std::vector<std::shared_ptr<const TupleSet>> tuples;  ///< degrees 0..top
};

/**
 * Cover by open balls B(y, eps + 2 eta) with shrinking V = B(y, eps + eta).
 * Balls are ordered by center index.  All nonempty intersections and their
 * admissible tuples (degrees 0..top_degree) are materialized.
 */
class CoverSystem {
 public:
  CoverSystem(const MetricMeasureSpace& space, const NeighborhoodSystem& system, double eps, double eta,
              std::vector<int> centers, int top_degree);

  const MetricMeasureSpace& space() const { return space_; }
  const NeighborhoodSystem& system() const { return system_; }
  double eps() const { return eps_; }
  double eta() const { return eta_; }
  double big_radius() const { return eps_ + 2.0 * eta_; }
  double shrunken_radius() const { return eps_ + eta_; }
  const std::vector<int>& centers() const { return centers_; }
  std::size_t ball_count() const { return centers_.size(); }
  int top_degree() const { return top_; }

  /// Global admissible tuples of the working system.
  const TupleSet& tuples(int p) const { return *global_.at(static_cast<std::size_t>(p)); }
  const std::shared_ptr<const TupleSet>& tuple_set(int p) const { return global_.at(static_cast<std::size_t>(p)); }

  const std::vector<Intersection>& intersections() const { return inters_; }
  /// Index of the intersection with these (sorted) members, -1 if empty.
  long intersection_index(std::span<const int> members) const;
  /// Intersections with q+1 members, in order.
  const std::vector<std::size_t>& of_order(int q) const;
  /// Largest q with a nonempty (q+1)-fold intersection.
  int nerve_dimension() const { return static_cast<int>(by_order_.size()) - 1; }

  /// Coboundary of an intersection's own complex, degree p -> p+1.
  CoboundaryOperator local_coboundary(std::size_t intersection, int p) const;

 private:
  MetricMeasureSpace space_;
  NeighborhoodSystem system_;
  double eps_, eta_;
  std::vector<int> centers_;
  int top_;
  std::vector<std::shared_ptr<const TupleSet>> global_;
  std::vector<Intersection> inters_;
  std::vector<std::vector<std::size_t>> by_order_;
};

/// Throws std::invalid_argument when the eta-balls miss points (listed) or centers are empty.
CoverSystem build_ball_cover(const MetricMeasureSpace& space, double eps, double eta, std::vector<int> centers,
                             std::optional<NeighborhoodSystem> system = std::nullopt, int top_degree = 3);

/**
 * Telescoping partition of unity built from hat functions
 * phi = clamp((eps + 2 eta - d) / eta, 0, 1).
 */
class PartitionOfUnity {
 public:
  PartitionOfUnity(const CoverSystem& cover, int degree);
  int degree() const { return degree_; }
  const std::vector<PointFunction>& bumps() const { return bumps_; }
  /// chi_alpha at a tuple (any arity; symmetric in the entries).
  double chi(std::size_t alpha, std::span<const int> tuple) const;
  Eigen::VectorXd values(std::size_t alpha, const TupleSet& tuples) const;

 private:
  int degree_;
  std::vector<PointFunction> bumps_;
};

PartitionOfUnity build_partition(const CoverSystem& cover, int p);

struct MvRow {
  int q = 0;
  std::size_t dim_domain = 0;
  std::size_t rank_in = 0;
  std::size_t dim_kernel = 0;
  bool exact = false;
};

struct MvCertificate {
  int p = 0;
  std::vector<MvRow> rows;
  double reconstruction_residual = 0.0;
  double reconstruction_tolerance = 1e-10;
  bool ranks_exact() const;
  bool reconstruction_ok() const { return reconstruction_residual <= reconstruction_tolerance; }
  bool pass() const { return ranks_exact() && reconstruction_ok(); }
  Json to_json() const;
};

enum class Reconstruction { partition, drop_partition };

/// Restriction r from the global degree-p cochains into the product over single balls.
Eigen::SparseMatrix<int> restriction_matrix(const CoverSystem& cover, int p);
/// Cech difference from the q-th to the (q+1)-th product, degree p cochains.
Eigen::SparseMatrix<int> cech_difference(const CoverSystem& cover, int p, int q);
/// Offsets of each order-q intersection inside the q-th product, plus the total.
std::vector<std::size_t> product_offsets(const CoverSystem& cover, int p, int q);

/// q_max < 0 selects the nerve dimension.
MvCertificate mayer_vietoris_check(const CoverSystem& cover, const PartitionOfUnity& pu, int p, int q_max = -1,
                                   Reconstruction mode = Reconstruction::partition);

/// Cech cohomology of the cover with locally constant coefficients (components per intersection).
BettiReport cech_nerve_betti(const CoverSystem& cover, int q_max = -1);
/// Connected components of an intersection: label per entry of its point list.
std::vector<int> intersection_components(const CoverSystem& cover, std::size_t intersection);

class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HomotopyOperator {
  std::size_t intersection = 0;
  std::vector<int> slice;  ///< W
  double slice_mass = 0.0;
  int max_degree = 0;  ///< slice condition checked at degrees 1..max_degree
};

/// max_degree < 0 selects the cover's top degree.  Throws AssumptionViolation if W is empty.
HomotopyOperator build_slice_and_psi(const CoverSystem& cover, std::size_t intersection, int max_degree = -1);
/// Psi from degree p to p-1 on the intersection's complex, 1 <= p <= max_degree.
Eigen::SparseMatrix<double> psi_matrix(const CoverSystem& cover, const HomotopyOperator& psi, int p);
Cochain psi_apply(const CoverSystem& cover, const HomotopyOperator& psi, const Cochain& F);
/// max |Psi d + d Psi - I| at degree p (needs p + 1 <= max_degree).
double homotopy_defect(const CoverSystem& cover, const HomotopyOperator& psi, int p);

struct CoverParams {
  double eps = 0.0;
  double eta = 0.0;
  std::vector<int> centers;
};

/// A bundled generator space with its working system and default cover.
struct BundledCover {
  std::string name;
  MetricMeasureSpace space;
  NeighborhoodSystem system;
  CoverParams params;
  CoverSystem build(int top_degree = 3) const;
};
BundledCover default_circle_cover();
BundledCover default_interval_cover();

/// Betti numbers of the sampled object for degrees 0..p_max.
std::vector<int> reference_betti(const SpaceMetadata& meta, int p_max);

struct DeRhamConfig {
  NeighborhoodSystem system;
  KernelModel kernel;
  int p_max = 1;
  std::optional<CoverParams> cover;
  TolerancePolicy tolerance;
};

struct DeRhamReport {
  std::vector<int> reference;
  std::vector<HodgeReport> hodge;
  BettiReport exact;
  std::optional<BettiReport> nerve;
  bool spectral_ok = false, exact_ok = false, nerve_ok = true, uncertain = false;
  bool pass() const { return spectral_ok && exact_ok && nerve_ok; }
  std::string detail;
  Json to_json() const;
};

DeRhamReport deRham_recovery_report(const MetricMeasureSpace& space, const DeRhamConfig& config);

}  // namespace nlh
