#include "nlh/cohomology.hpp"

#include <sstream>

#include "nlh/parallel.hpp"

namespace nlh {

std::string field_name(ExactField f) {
  switch (f) {
    case ExactField::primary_prime: return "GF(" + std::to_string(kPrimaryPrime) + ")";
    case ExactField::secondary_prime: return "GF(" + std::to_string(kSecondaryPrime) + ")";
    case ExactField::rational: return "Q";
  }
  return "?";
}

Json BettiReport::to_json() const {
  return Json{{"schema", 1},      {"method", method}, {"field", field}, {"betti", betti},
              {"dims", dims},     {"ranks", ranks},   {"params", params}};
}

std::size_t exact_rank(const CoboundaryOperator& op, ExactField field) {
  IntColumns cols = to_columns(op.matrix);
  switch (field) {
    case ExactField::primary_prime: return rank_mod_prime(cols, kPrimaryPrime);
    case ExactField::secondary_prime: return rank_mod_prime(cols, kSecondaryPrime);
    case ExactField::rational: return rank_rational(cols);
  }
  return 0;
}

BettiReport exact_betti(std::span<const CoboundaryOperator> ops, std::span<const std::size_t> dims, int p_max,
                        ExactField field) {
  if (p_max < 0 || static_cast<int>(ops.size()) < p_max + 1 || static_cast<int>(dims.size()) < p_max + 1)
    throw std::invalid_argument("exact_betti: need coboundaries out of degrees 0..p_max");
  BettiReport r;
  r.field = field_name(field);
  r.ranks.assign(static_cast<std::size_t>(p_max + 1), 0);
  // one chunk per degree
  const auto deg = static_cast<std::size_t>(p_max + 1);
  parallel_chunks(deg, deg, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t p = b; p < e; ++p) r.ranks[p] = exact_rank(ops[p], field);
  });
  for (int p = 0; p <= p_max; ++p) {
    auto P = static_cast<std::size_t>(p);
    r.dims.push_back(dims[P]);
    long b = static_cast<long>(dims[P]) - static_cast<long>(r.ranks[P]) - (p > 0 ? static_cast<long>(r.ranks[P - 1]) : 0);
    if (b < 0) throw std::logic_error("exact_betti: negative Betti number; coboundaries do not compose to zero");
    r.betti.push_back(static_cast<int>(b));
  }
  return r;
}

BettiReport exact_betti(const WeightedComplex& cx, ExactField field) {
  std::vector<CoboundaryOperator> ops;
  std::vector<std::size_t> dims;
  for (int p = 0; p <= cx.p_max(); ++p) {
    ops.push_back(cx.coboundary(p));
    dims.push_back(cx.dim(p));
  }
  return exact_betti(ops, dims, cx.p_max(), field);
}

BettiReport numeric_betti(std::span<const HodgeReport> hodge) {
  BettiReport r;
  r.method = "numeric";
  r.field = "R";
  for (const auto& h : hodge) {
    r.betti.push_back(h.harmonic_dim);
    r.dims.push_back(h.dim);
  }
  return r;
}

Json AgreementReport::to_json() const {
  Json ds = Json::array();
  for (const auto& d : degrees)
    ds.push_back(Json{{"degree", d.degree},
                      {"numeric", d.numeric},
                      {"exact", d.exact},
                      {"agree", d.agree},
                      {"uncertain", d.uncertain},
                      {"spectral_neighborhood", d.spectral_neighborhood}});
  return Json{{"field", field}, {"all_agree", all_agree}, {"degrees", ds}};
}

std::string AgreementReport::describe() const {
  std::ostringstream os;
  for (const auto& d : degrees) {
    os << "degree " << d.degree << ": numeric " << d.numeric << ", exact " << d.exact
       << (d.agree ? " (agree)" : " (DISAGREE)") << (d.uncertain ? " [uncertain gap]" : "");
    if (!d.agree) {
      os << " eigenvalues near threshold:";
      for (double v : d.spectral_neighborhood) os << " " << v;
    }
    os << "\n";
  }
  return os.str();
}

AgreementReport compare_numeric_exact(std::span<HodgeReport> hodge, const BettiReport& betti) {
  AgreementReport a;
  a.field = betti.field;
  for (auto& h : hodge) {
    DegreeAgreement d;
    d.degree = h.degree;
    d.numeric = h.harmonic_dim;
    if (h.degree < 0 || h.degree >= static_cast<int>(betti.betti.size()))
      throw std::invalid_argument("compare_numeric_exact: degree missing from the oracle");
    d.exact = betti.betti[static_cast<std::size_t>(h.degree)];
    d.agree = d.numeric == d.exact;
    d.uncertain = h.uncertain;
    const Eigen::Index lo = std::max<Eigen::Index>(0, h.harmonic_dim - 3);
    const Eigen::Index hi = std::min<Eigen::Index>(h.eigenvalues.size(), h.harmonic_dim + 3);
    for (Eigen::Index i = lo; i < hi; ++i) d.spectral_neighborhood.push_back(h.eigenvalues(i));
    h.oracle_betti = d.exact;
    h.agree = d.agree;
    a.all_agree = a.all_agree && d.agree;
    a.degrees.push_back(std::move(d));
  }
  return a;
}

AgreementReport cross_validate(const WeightedComplex& cx, std::span<HodgeReport> hodge, BettiReport& betti) {
  AgreementReport a = compare_numeric_exact(hodge, betti);
  for (ExactField f : {ExactField::secondary_prime, ExactField::rational}) {
    if (a.all_agree) break;
    BettiReport params_holder = betti;
    betti = exact_betti(cx, f);
    betti.params = params_holder.params;
    a = compare_numeric_exact(hodge, betti);
  }
  return a;
}

}  // namespace nlh
