#include "nlh/covers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "nlh/parallel.hpp"

namespace nlh {

namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

CoverSystem::CoverSystem(const MetricMeasureSpace& space, const NeighborhoodSystem& system, double eps, double eta,
                         std::vector<int> centers, int top_degree)
    : space_(space), system_(system), eps_(eps), eta_(eta), centers_(std::move(centers)), top_(top_degree) {
  if (!(eps > 0.0) || !(eta > 0.0)) throw std::invalid_argument("ball cover: eps and eta must be positive");
  if (centers_.empty()) throw std::invalid_argument("ball cover: no centers");
  if (top_ < 0) throw std::invalid_argument("ball cover: negative top degree");
  const int n = space_.size();
  for (int c : centers_)
    if (c < 0 || c >= n) throw std::invalid_argument("ball cover: center index out of range");
  std::sort(centers_.begin(), centers_.end());
  centers_.erase(std::unique(centers_.begin(), centers_.end()), centers_.end());

  std::vector<int> uncovered;
  for (int x = 0; x < n; ++x) {
    bool hit = std::any_of(centers_.begin(), centers_.end(), [&](int y) { return space_.distance(x, y) < eta_; });
    if (!hit) uncovered.push_back(x);
  }
  if (!uncovered.empty())
    throw std::invalid_argument("ball cover: eta-balls miss points " + join(uncovered));

  for (auto& s : enumerate_tuple_sets(space_, system_, top_)) global_.push_back(std::make_shared<const TupleSet>(std::move(s)));

  const std::size_t m = centers_.size();
  std::vector<std::vector<char>> big(m, std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<std::vector<int>> shrunk(m);
  for (std::size_t a = 0; a < m; ++a)
    for (int x = 0; x < n; ++x) {
      double d = space_.distance(x, centers_[a]);
      big[a][static_cast<std::size_t>(x)] = d < big_radius();
      if (d < shrunken_radius()) shrunk[a].push_back(x);
    }

  // the working system must sit inside the one generated by the shrunken balls
  NeighborhoodSystem shrunken_system = NeighborhoodSystem::cover(shrunk);
  for (const auto& ts : global_)
    for (std::size_t i = 0; i < ts->size(); ++i)
      if (!shrunken_system.admits(space_, (*ts)[i])) {
        std::vector<int> t((*ts)[i].begin(), (*ts)[i].end());
        throw std::invalid_argument("ball cover: admissible tuple (" + join(t) +
                                    ") lies in no shrunken ball; increase eta");
      }

  // all nonempty intersections, depth first
  std::vector<std::pair<std::vector<int>, std::vector<char>>> found;
  std::vector<int> members;
  std::function<void(std::size_t, const std::vector<char>&)> grow = [&](std::size_t next, const std::vector<char>& mask) {
    for (std::size_t b = next; b < m; ++b) {
      std::vector<char> mk(mask.size());
      bool any = false;
      for (std::size_t x = 0; x < mask.size(); ++x) {
        mk[x] = mask[x] && big[b][x];
        any = any || mk[x];
      }
      if (!any) continue;
      members.push_back(static_cast<int>(b));
      found.emplace_back(members, mk);
      grow(b + 1, mk);
      members.pop_back();
    }
  };
  grow(0, std::vector<char>(static_cast<std::size_t>(n), 1));
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });

  inters_.resize(found.size());
  parallel_chunks(found.size(), default_chunks(found.size() * 64), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      Intersection& I = inters_[i];
      I.members = found[i].first;
      I.mask = found[i].second;
      for (int x = 0; x < n; ++x)
        if (I.mask[static_cast<std::size_t>(x)]) I.points.push_back(x);
      for (const auto& g : global_) I.tuples.push_back(std::make_shared<const TupleSet>(restrict_tuples(*g, I.mask)));
    }
  });
  for (std::size_t i = 0; i < inters_.size(); ++i) {
    std::size_t q = inters_[i].members.size() - 1;
    if (by_order_.size() <= q) by_order_.resize(q + 1);
    by_order_[q].push_back(i);
  }
}

long CoverSystem::intersection_index(std::span<const int> members) const {
  if (members.empty()) return -1;
  const std::size_t q = members.size() - 1;
  if (q >= by_order_.size()) return -1;
  const auto& idx = by_order_[q];
  auto it = std::lower_bound(idx.begin(), idx.end(), members, [&](std::size_t a, std::span<const int> key) {
    const auto& mm = inters_[a].members;
    return std::lexicographical_compare(mm.begin(), mm.end(), key.begin(), key.end());
  });
  if (it != idx.end() && std::equal(members.begin(), members.end(), inters_[*it].members.begin(),
                                    inters_[*it].members.end()))
    return static_cast<long>(*it);
  return -1;
}

const std::vector<std::size_t>& CoverSystem::of_order(int q) const {
  static const std::vector<std::size_t> none;
  if (q < 0 || q >= static_cast<int>(by_order_.size())) return none;
  return by_order_[static_cast<std::size_t>(q)];
}

CoboundaryOperator CoverSystem::local_coboundary(std::size_t i, int p) const {
  const auto& I = inters_.at(i);
  return build_coboundary(*I.tuples.at(static_cast<std::size_t>(p)), *I.tuples.at(static_cast<std::size_t>(p + 1)));
}

CoverSystem build_ball_cover(const MetricMeasureSpace& space, double eps, double eta, std::vector<int> centers,
                             std::optional<NeighborhoodSystem> system, int top_degree) {
  NeighborhoodSystem sys = system ? *system : NeighborhoodSystem::hausdorff(eps);
  return CoverSystem(space, sys, eps, eta, std::move(centers), top_degree);
}

// ---------------------------------------------------------------- partition

PartitionOfUnity::PartitionOfUnity(const CoverSystem& cover, int degree) : degree_(degree) {
  const int n = cover.space().size();
  const double outer = cover.big_radius(), eta = cover.eta();
  for (int c : cover.centers()) {
    PointFunction phi(n);
    for (int x = 0; x < n; ++x) phi(x) = std::clamp((outer - cover.space().distance(x, c)) / eta, 0.0, 1.0);
    bumps_.push_back(std::move(phi));
  }
}

double PartitionOfUnity::chi(std::size_t alpha, std::span<const int> t) const {
  // chi_k = Phi_k prod_{l<k} (1 - Phi_l), Phi = tensor power of the bump
  double rest = 1.0;
  for (std::size_t l = 0; l <= alpha; ++l) {
    double Phi = 1.0;
    for (int x : t) Phi *= bumps_[l](x);
    if (l == alpha) return Phi * rest;
    rest *= 1.0 - Phi;
  }
  return 0.0;
}

Eigen::VectorXd PartitionOfUnity::values(std::size_t alpha, const TupleSet& tuples) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(tuples.size()));
  for (std::size_t i = 0; i < tuples.size(); ++i) v(static_cast<Eigen::Index>(i)) = chi(alpha, tuples[i]);
  return v;
}

PartitionOfUnity build_partition(const CoverSystem& cover, int p) { return PartitionOfUnity(cover, p); }

// ---------------------------------------------------------------- Mayer-Vietoris

std::vector<std::size_t> product_offsets(const CoverSystem& cover, int p, int q) {
  std::vector<std::size_t> off{0};
  for (std::size_t i : cover.of_order(q))
    off.push_back(off.back() + cover.intersections()[i].tuples.at(static_cast<std::size_t>(p))->size());
  return off;
}

Eigen::SparseMatrix<int> restriction_matrix(const CoverSystem& cover, int p) {
  const auto off = product_offsets(cover, p, 0);
  const TupleSet& global = cover.tuples(p);
  std::vector<Eigen::Triplet<int>> trips;
  const auto& order0 = cover.of_order(0);
  for (std::size_t k = 0; k < order0.size(); ++k) {
    const TupleSet& loc = *cover.intersections()[order0[k]].tuples[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < loc.size(); ++i)
      trips.emplace_back(static_cast<int>(off[k] + i), static_cast<int>(global.index_of(loc[i])), 1);
  }
  Eigen::SparseMatrix<int> r(static_cast<Eigen::Index>(off.back()), static_cast<Eigen::Index>(global.size()));
  r.setFromTriplets(trips.begin(), trips.end());
  return r;
}

Eigen::SparseMatrix<int> cech_difference(const CoverSystem& cover, int p, int q) {
  const auto off_lo = product_offsets(cover, p, q);
  const auto off_hi = product_offsets(cover, p, q + 1);
  const auto& lo = cover.of_order(q);
  const auto& hi = cover.of_order(q + 1);
  // position of an order-q intersection inside `lo`
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t k = 0; k < lo.size(); ++k) pos[lo[k]] = k;
  std::vector<Eigen::Triplet<int>> trips;
  std::vector<int> face;
  for (std::size_t k = 0; k < hi.size(); ++k) {
    const Intersection& T = cover.intersections()[hi[k]];
    const TupleSet& ts = *T.tuples[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < T.members.size(); ++i) {
      face = T.members;
      face.erase(face.begin() + static_cast<long>(i));
      const std::size_t f = static_cast<std::size_t>(cover.intersection_index(face));
      const std::size_t fk = pos.at(f);
      const TupleSet& fs = *cover.intersections()[f].tuples[static_cast<std::size_t>(p)];
      for (std::size_t s = 0; s < ts.size(); ++s)
        trips.emplace_back(static_cast<int>(off_hi[k] + s), static_cast<int>(off_lo[fk] + fs.index_of(ts[s])),
                           (i % 2) ? -1 : 1);
    }
  }
  Eigen::SparseMatrix<int> d(static_cast<Eigen::Index>(off_hi.back()), static_cast<Eigen::Index>(off_lo.back()));
  d.setFromTriplets(trips.begin(), trips.end());
  return d;
}

bool MvCertificate::ranks_exact() const {
  return std::all_of(rows.begin(), rows.end(), [](const MvRow& r) { return r.exact; });
}

Json MvCertificate::to_json() const {
  Json rs = Json::array();
  for (const auto& r : rows)
    rs.push_back(Json{{"q", r.q},
                      {"dim_domain", r.dim_domain},
                      {"rank_in", r.rank_in},
                      {"dim_kernel", r.dim_kernel},
                      {"exact", r.exact}});
  return Json{{"degree", p}, {"rows", rs}, {"reconstruction_residual", reconstruction_residual}};
}

namespace {

std::size_t int_rank(const Eigen::SparseMatrix<int>& m, ExactField field) {
  IntColumns c = to_columns(m);
  if (field == ExactField::rational) return rank_rational(c);
  return rank_mod_prime(c, field == ExactField::primary_prime ? kPrimaryPrime : kSecondaryPrime);
}

/// Value of the product cochain at member list `ordered` (any order) and sorted tuple t, 0 where undefined.
double product_value(const CoverSystem& cover, int p, int q, const std::vector<std::size_t>& off,
                     const std::map<std::size_t, std::size_t>& pos, const Eigen::VectorXd& F,
                     std::vector<int> ordered, std::span<const int> t) {
  auto [sorted, sign] = sort_with_sign(ordered);
  if (sign == 0) return 0.0;
  long idx = cover.intersection_index(sorted);
  if (idx < 0) return 0.0;
  (void)q;
  const TupleSet& ts = *cover.intersections()[static_cast<std::size_t>(idx)].tuples[static_cast<std::size_t>(p)];
  long k = ts.index_of(t);
  if (k < 0) return 0.0;
  return sign * F(static_cast<Eigen::Index>(off[pos.at(static_cast<std::size_t>(idx))] + static_cast<std::size_t>(k)));
}

}  // namespace

MvCertificate mayer_vietoris_check(const CoverSystem& cover, const PartitionOfUnity& pu, int p, int q_max,
                                   Reconstruction mode) {
  if (p < 0 || p > cover.top_degree()) throw std::out_of_range("mayer_vietoris_check: degree out of range");
  if (q_max < 0) q_max = cover.nerve_dimension();
  MvCertificate cert;
  cert.p = p;

  Eigen::SparseMatrix<int> r = restriction_matrix(cover, p);
  std::vector<Eigen::SparseMatrix<int>> d;
  for (int q = 0; q <= q_max; ++q) d.push_back(cech_difference(cover, p, q));

  auto ranks_with = [&](ExactField field) {
    std::vector<std::size_t> rk(d.size() + 1);
    rk[0] = int_rank(r, field);
    const std::size_t jobs = d.size();
    parallel_chunks(jobs, jobs, [&](std::size_t b, std::size_t e, std::size_t) {
      for (std::size_t q = b; q < e; ++q) rk[q + 1] = int_rank(d[q], field);
    });
    return rk;
  };
  auto build_rows = [&](const std::vector<std::size_t>& rk) {
    std::vector<MvRow> rows;
    MvRow top;
    top.q = -1;
    top.dim_domain = static_cast<std::size_t>(r.cols());
    top.rank_in = 0;
    top.dim_kernel = top.dim_domain - rk[0];
    top.exact = top.dim_kernel == 0;
    rows.push_back(top);
    for (int q = 0; q <= q_max; ++q) {
      MvRow row;
      row.q = q;
      row.dim_domain = static_cast<std::size_t>(d[static_cast<std::size_t>(q)].cols());
      row.rank_in = rk[static_cast<std::size_t>(q)];
      row.dim_kernel = row.dim_domain - rk[static_cast<std::size_t>(q) + 1];
      row.exact = row.rank_in == row.dim_kernel;
      rows.push_back(row);
    }
    return rows;
  };
  cert.rows = build_rows(ranks_with(ExactField::primary_prime));
  if (!cert.ranks_exact()) cert.rows = build_rows(ranks_with(ExactField::rational));

  // reconstruction through the partition of unity
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(p));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const std::size_t balls = cover.ball_count();
  double worst = 0.0;
  for (int q = 0; q <= q_max; ++q) {
    const auto off_q = product_offsets(cover, p, q);
    std::map<std::size_t, std::size_t> pos_q;
    for (std::size_t k = 0; k < cover.of_order(q).size(); ++k) pos_q[cover.of_order(q)[k]] = k;
    Eigen::VectorXd F;
    if (q == 0) {
      Eigen::VectorXd G0(r.cols());
      for (Eigen::Index i = 0; i < G0.size(); ++i) G0(i) = unif(rng);
      F = r.cast<double>() * G0;
      // G = sum_alpha chi_alpha F_alpha, extended by zero
      const TupleSet& global = cover.tuples(p);
      Eigen::VectorXd G(G0.size());
      for (std::size_t s = 0; s < global.size(); ++s) {
        double v = 0.0;
        for (std::size_t a = 0; a < balls; ++a) {
          double w = mode == Reconstruction::partition ? pu.chi(a, global[s]) : 1.0;
          if (w != 0.0) v += w * product_value(cover, p, 0, off_q, pos_q, F, {static_cast<int>(a)}, global[s]);
        }
        G(static_cast<Eigen::Index>(s)) = v;
      }
      if (G0.size() > 0)
        worst = std::max(worst, (G - G0).cwiseAbs().maxCoeff() / std::max(1e-300, G0.cwiseAbs().maxCoeff()));
      continue;
    }
    // F = d H for random H one level down; rebuild a preimage G and compare dG with F
    const auto off_prev = product_offsets(cover, p, q - 1);
    const auto& dprev = d[static_cast<std::size_t>(q - 1)];
    Eigen::VectorXd H(dprev.cols());
    for (Eigen::Index i = 0; i < H.size(); ++i) H(i) = unif(rng);
    F = dprev.cast<double>() * H;
    if (F.size() == 0 || F.cwiseAbs().maxCoeff() == 0.0) continue;
    Eigen::VectorXd G = Eigen::VectorXd::Zero(H.size());
    const auto& prev = cover.of_order(q - 1);
    for (std::size_t k = 0; k < prev.size(); ++k) {
      const Intersection& B = cover.intersections()[prev[k]];
      const TupleSet& ts = *B.tuples[static_cast<std::size_t>(p)];
      for (std::size_t s = 0; s < ts.size(); ++s) {
        double v = 0.0;
        for (std::size_t a = 0; a < balls; ++a) {
          double w = mode == Reconstruction::partition ? pu.chi(a, ts[s]) : 1.0;
          if (w == 0.0) continue;
          std::vector<int> ordered{static_cast<int>(a)};
          ordered.insert(ordered.end(), B.members.begin(), B.members.end());
          v += w * product_value(cover, p, q, off_q, pos_q, F, ordered, ts[s]);
        }
        G(static_cast<Eigen::Index>(off_prev[k] + s)) = v;
      }
    }
    Eigen::VectorXd dG = dprev.cast<double>() * G;
    worst = std::max(worst, (dG - F).cwiseAbs().maxCoeff() / F.cwiseAbs().maxCoeff());
  }
  cert.reconstruction_residual = worst;
  return cert;
}

// ---------------------------------------------------------------- nerve

std::vector<int> intersection_components(const CoverSystem& cover, std::size_t i) {
  const Intersection& I = cover.intersections().at(i);
  const std::size_t m = I.points.size();
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  auto local = [&](int x) {
    return static_cast<int>(std::lower_bound(I.points.begin(), I.points.end(), x) - I.points.begin());
  };
  if (I.tuples.size() > 1) {
    const TupleSet& pairs = *I.tuples[1];
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      int a = find(local(pairs[k][0])), b = find(local(pairs[k][1]));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  // labels in order of first appearance
  std::vector<int> label(m, -1), root_label(m, -1);
  int next = 0;
  for (std::size_t k = 0; k < m; ++k) {
    int r = find(static_cast<int>(k));
    if (root_label[static_cast<std::size_t>(r)] < 0) root_label[static_cast<std::size_t>(r)] = next++;
    label[k] = root_label[static_cast<std::size_t>(r)];
  }
  return label;
}

BettiReport cech_nerve_betti(const CoverSystem& cover, int q_max) {
  if (q_max < 0) q_max = cover.nerve_dimension();
  const auto& inters = cover.intersections();
  std::vector<std::vector<int>> comps(inters.size());
  std::vector<int> ncomp(inters.size());
  for (std::size_t i = 0; i < inters.size(); ++i) {
    comps[i] = intersection_components(cover, i);
    ncomp[i] = comps[i].empty() ? 0 : *std::max_element(comps[i].begin(), comps[i].end()) + 1;
  }
  auto offsets = [&](int q) {
    std::vector<std::size_t> off{0};
    for (std::size_t i : cover.of_order(q)) off.push_back(off.back() + static_cast<std::size_t>(ncomp[i]));
    return off;
  };
  std::vector<CoboundaryOperator> ops;
  std::vector<std::size_t> dims;
  for (int q = 0; q <= q_max; ++q) {
    auto lo = offsets(q), hi = offsets(q + 1);
    dims.push_back(lo.back());
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t k = 0; k < cover.of_order(q).size(); ++k) pos[cover.of_order(q)[k]] = k;
    std::vector<Eigen::Triplet<int>> trips;
    const auto& upper = cover.of_order(q + 1);
    for (std::size_t k = 0; k < upper.size(); ++k) {
      const Intersection& T = inters[upper[k]];
      // one representative point per component of T
      std::vector<int> rep(static_cast<std::size_t>(ncomp[upper[k]]), -1);
      for (std::size_t s = 0; s < T.points.size(); ++s)
        if (rep[static_cast<std::size_t>(comps[upper[k]][s])] < 0) rep[static_cast<std::size_t>(comps[upper[k]][s])] = T.points[s];
      for (std::size_t i = 0; i < T.members.size(); ++i) {
        std::vector<int> face = T.members;
        face.erase(face.begin() + static_cast<long>(i));
        std::size_t f = static_cast<std::size_t>(cover.intersection_index(face));
        const Intersection& Fi = inters[f];
        for (std::size_t c = 0; c < rep.size(); ++c) {
          auto at = std::lower_bound(Fi.points.begin(), Fi.points.end(), rep[c]) - Fi.points.begin();
          int fc = comps[f][static_cast<std::size_t>(at)];
          trips.emplace_back(static_cast<int>(hi[k] + c), static_cast<int>(lo[pos.at(f)] + static_cast<std::size_t>(fc)),
                             (i % 2) ? -1 : 1);
        }
      }
    }
    CoboundaryOperator op;
    op.degree = q;
    Eigen::SparseMatrix<int> m(static_cast<Eigen::Index>(hi.back()), static_cast<Eigen::Index>(lo.back()));
    m.setFromTriplets(trips.begin(), trips.end());
    op.matrix = m;
    ops.push_back(std::move(op));
  }
  BettiReport rep = exact_betti(ops, dims, q_max, ExactField::primary_prime);
  rep.method = "cech-nerve";
  rep.params = Json{{"balls", cover.ball_count()}, {"eps", cover.eps()}, {"eta", cover.eta()}};
  return rep;
}

// ---------------------------------------------------------------- homotopy

HomotopyOperator build_slice_and_psi(const CoverSystem& cover, std::size_t i, int max_degree) {
  if (max_degree < 0) max_degree = cover.top_degree();
  if (max_degree < 1 || max_degree > cover.top_degree())
    throw std::out_of_range("build_slice_and_psi: degree beyond the materialized tuples");
  const Intersection& I = cover.intersections().at(i);
  HomotopyOperator h;
  h.intersection = i;
  h.max_degree = max_degree;
  std::vector<int> aug;
  for (int t : I.points) {
    bool ok = true;
    for (int q = 1; q <= max_degree && ok; ++q) {
      const TupleSet& lower = *I.tuples[static_cast<std::size_t>(q - 1)];
      for (std::size_t s = 0; s < lower.size() && ok; ++s) {
        auto x = lower[s];
        if (std::find(x.begin(), x.end(), t) != x.end()) continue;  // diagonal
        aug.assign(1, t);
        aug.insert(aug.end(), x.begin(), x.end());
        ok = cover.system().admits(cover.space(), aug);
      }
    }
    if (ok) {
      h.slice.push_back(t);
      h.slice_mass += cover.space().weight(t);
    }
  }
  if (h.slice.empty())
    throw AssumptionViolation("empty slice on intersection {" + join(I.members) + "}");
  return h;
}

Eigen::SparseMatrix<double> psi_matrix(const CoverSystem& cover, const HomotopyOperator& psi, int p) {
  if (p < 1 || p > psi.max_degree) throw std::out_of_range("psi_matrix: degree out of range");
  const Intersection& I = cover.intersections().at(psi.intersection);
  const TupleSet& lower = *I.tuples[static_cast<std::size_t>(p - 1)];
  const TupleSet& upper = *I.tuples[static_cast<std::size_t>(p)];
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<int> aug;
  for (std::size_t s = 0; s < lower.size(); ++s) {
    auto x = lower[s];
    for (int t : psi.slice) {
      aug.assign(1, t);
      aug.insert(aug.end(), x.begin(), x.end());
      auto [sorted, sign] = sort_with_sign(aug);
      if (sign == 0) continue;
      long col = upper.index_of(sorted);
      if (col < 0) throw std::logic_error("psi_matrix: slice condition broken");
      trips.emplace_back(static_cast<int>(s), static_cast<int>(col), sign * cover.space().weight(t) / psi.slice_mass);
    }
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(lower.size()), static_cast<Eigen::Index>(upper.size()));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Cochain psi_apply(const CoverSystem& cover, const HomotopyOperator& psi, const Cochain& F) {
  const Intersection& I = cover.intersections().at(psi.intersection);
  const int p = F.degree();
  if (!(F.tuples() == *I.tuples.at(static_cast<std::size_t>(p))))
    throw std::invalid_argument("psi_apply: cochain does not live on this intersection");
  Eigen::VectorXd v = psi_matrix(cover, psi, p) * F.values();
  return Cochain(I.tuples[static_cast<std::size_t>(p - 1)], std::move(v));
}

double homotopy_defect(const CoverSystem& cover, const HomotopyOperator& psi, int p) {
  if (p < 1 || p + 1 > psi.max_degree) throw std::out_of_range("homotopy_defect: needs Psi one degree up");
  Eigen::SparseMatrix<double> up = psi_matrix(cover, psi, p + 1) * cover.local_coboundary(psi.intersection, p).real();
  Eigen::SparseMatrix<double> down =
      cover.local_coboundary(psi.intersection, p - 1).real() * psi_matrix(cover, psi, p);
  Eigen::MatrixXd D = Eigen::MatrixXd(up) + Eigen::MatrixXd(down);
  D -= Eigen::MatrixXd::Identity(D.rows(), D.cols());
  return D.size() == 0 ? 0.0 : D.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- bundled covers

CoverSystem BundledCover::build(int top_degree) const {
  return CoverSystem(space, system, params.eps, params.eta, params.centers, top_degree);
}

BundledCover default_circle_cover() {
  MetricMeasureSpace s = gen_circle(24, 1.0);
  std::vector<int> centers;
  for (int i = 0; i < 24; i += 2) centers.push_back(i);
  return BundledCover{"circle", s, NeighborhoodSystem::hausdorff(0.6), CoverParams{0.6, 0.27, centers}};
}

BundledCover default_interval_cover() {
  MetricMeasureSpace s = gen_interval(21);
  std::vector<int> centers;
  for (int i = 0; i < 21; i += 2) centers.push_back(i);
  return BundledCover{"interval", s, NeighborhoodSystem::hausdorff(0.16), CoverParams{0.16, 0.06, centers}};
}

std::vector<int> reference_betti(const SpaceMetadata& meta, int p_max) {
  std::vector<int> b(static_cast<std::size_t>(p_max + 1), 0);
  const std::string& g = meta.generator;
  if (g == "circle") {
    b[0] = 1;
    if (p_max >= 1) b[1] = 1;
  } else if (g == "interval") {
    b[0] = 1;
  } else if (g == "sphere") {
    b[0] = 1;
    if (p_max >= 2) b[2] = 1;
  } else if (g == "two_components") {
    b[0] = 2;
  } else {
    throw std::invalid_argument("no reference Betti numbers for generator '" + g + "'");
  }
  return b;
}

Json DeRhamReport::to_json() const {
  Json hs = Json::array();
  for (const auto& h : hodge) hs.push_back(h.to_json());
  Json j{{"schema", 1},           {"reference", reference}, {"hodge", hs},
         {"exact", exact.to_json()}, {"spectral_ok", spectral_ok}, {"exact_ok", exact_ok},
         {"nerve_ok", nerve_ok},  {"uncertain", uncertain}, {"pass", pass()}};
  j["nerve"] = nerve ? nerve->to_json() : Json(nullptr);
  j["detail"] = detail;
  return j;
}

DeRhamReport deRham_recovery_report(const MetricMeasureSpace& space, const DeRhamConfig& config) {
  DeRhamReport rep;
  rep.reference = reference_betti(space.metadata(), config.p_max);
  WeightedComplex cx = WeightedComplex::build(space, config.system, config.kernel, config.p_max);
  for (int p = 0; p <= config.p_max; ++p) rep.hodge.push_back(harmonic_dimension(cx, p, config.tolerance));
  rep.exact = exact_betti(cx);
  AgreementReport agree = cross_validate(cx, rep.hodge, rep.exact);
  std::ostringstream detail;
  rep.exact_ok = rep.exact.betti == rep.reference;
  std::vector<int> numeric;
  for (const auto& h : rep.hodge) {
    numeric.push_back(h.harmonic_dim);
    rep.uncertain = rep.uncertain || h.uncertain;
  }
  rep.spectral_ok = numeric == rep.reference;
  detail << "reference " << join(rep.reference) << "; spectral " << join(numeric) << "; exact "
         << join(rep.exact.betti);
  if (!agree.all_agree) detail << "\n" << agree.describe();
  if (config.cover) {
    CoverSystem cover(space, config.system, config.cover->eps, config.cover->eta, config.cover->centers,
                      std::max(1, config.p_max));
    rep.nerve = cech_nerve_betti(cover);
    std::vector<int> nb = rep.nerve->betti;
    nb.resize(rep.reference.size(), 0);
    // nerve classes above p_max must vanish too
    bool tail_zero = std::all_of(rep.nerve->betti.begin() + static_cast<long>(std::min(rep.nerve->betti.size(), rep.reference.size())),
                                 rep.nerve->betti.end(), [](int v) { return v == 0; });
    rep.nerve_ok = nb == rep.reference && tail_zero;
    detail << "; nerve " << join(rep.nerve->betti);
  }
  rep.detail = detail.str();
  return rep;
}

}  // namespace nlh
