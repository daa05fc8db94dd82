#pragma once

#include <span>
#include <string>
#include <vector>

#include "nlh/exact_rank.hpp"
#include "nlh/hodge.hpp"

namespace nlh {

enum class ExactField { primary_prime, secondary_prime, rational };
std::string field_name(ExactField f);

struct BettiReport {
  std::vector<int> betti;          ///< degrees 0..p_max
  std::vector<std::size_t> dims;   ///< cochain dimensions 0..p_max
  std::vector<std::size_t> ranks;  ///< rank of the coboundary out of each degree 0..p_max
  std::string method = "exact-field";
  std::string field = "GF(2147483647)";
  Json params = Json::object();
  Json to_json() const;
};

/// Rank of an integer coboundary over the given field.
std::size_t exact_rank(const CoboundaryOperator& op, ExactField field);

/**
 * Betti numbers 0..p_max from integer coboundaries; ops[p] goes from degree p
 * to p+1 and must exist for p = 0..p_max.  Weights never enter.
 */
BettiReport exact_betti(std::span<const CoboundaryOperator> ops, std::span<const std::size_t> dims, int p_max,
                        ExactField field = ExactField::primary_prime);
BettiReport exact_betti(const WeightedComplex& cx, ExactField field = ExactField::primary_prime);

/// Numeric counterpart assembled from harmonic dimensions.
BettiReport numeric_betti(std::span<const HodgeReport> hodge);

struct DegreeAgreement {
  int degree = 0;
  int numeric = 0;
  int exact = 0;
  bool agree = false;
  bool uncertain = false;
  std::vector<double> spectral_neighborhood;  ///< eigenvalues around the threshold
};

struct AgreementReport {
  std::vector<DegreeAgreement> degrees;
  bool all_agree = true;
  std::string field;
  Json to_json() const;
  std::string describe() const;
};

/// Per-degree comparison; fills oracle_betti and agree into the reports.
AgreementReport compare_numeric_exact(std::span<HodgeReport> hodge, const BettiReport& betti);

/**
 * Compare, and on disagreement recompute the oracle with the second prime,
 * then with rationals.  `betti` is replaced by the last oracle used.
 */
AgreementReport cross_validate(const WeightedComplex& cx, std::span<HodgeReport> hodge, BettiReport& betti);

}  // namespace nlh
