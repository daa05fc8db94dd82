#include <doctest.h>

#include "nlh/covers.hpp"
#include "oracles.hpp"

using namespace nlh;

TEST_CASE("default covers build and carry all intersections") {
  for (const BundledCover& bc : {default_circle_cover(), default_interval_cover()}) {
    CoverSystem cover = bc.build(3);
    // brute force: every subset of balls with a common point of the big balls
    std::size_t count = 0;
    const std::size_t m = cover.ball_count();
    REQUIRE(m < 16);
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      bool any = false;
      for (int x = 0; x < bc.space.size() && !any; ++x) {
        bool all = true;
        for (std::size_t a = 0; a < m; ++a)
          if (mask & (1u << a)) all = all && bc.space.distance(x, cover.centers()[a]) < cover.big_radius();
        any = all;
      }
      if (any) ++count;
    }
    CHECK(cover.intersections().size() == count);
    for (std::size_t i = 0; i < cover.intersections().size(); ++i)
      CHECK(cover.intersection_index(cover.intersections()[i].members) == static_cast<long>(i));
  }
}

TEST_CASE("cover construction rejects bad input") {
  MetricMeasureSpace s = gen_interval(21);
  CHECK_THROWS_AS(build_ball_cover(s, 0.16, 0.06, {}), std::invalid_argument);
  try {
    build_ball_cover(s, 0.16, 0.06, {0, 4});
    FAIL("expected uncovered points");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("miss points") != std::string::npos);
  }
  // admissible pairs that fit in no shrunken ball
  std::vector<int> centers;
  for (int i = 0; i < 21; i += 2) centers.push_back(i);
  CHECK_THROWS_AS(build_ball_cover(s, 0.05, 0.06, centers, NeighborhoodSystem::rips(0.5)), std::invalid_argument);
}

TEST_CASE("partition of unity") {
  CoverSystem cover = default_circle_cover().build(3);
  PartitionOfUnity pu(cover, 2);
  for (int p = 0; p <= 3; ++p) {
    const TupleSet& ts = cover.tuples(p);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double sum = 0.0;
      for (std::size_t a = 0; a < cover.ball_count(); ++a) {
        double c = pu.chi(a, ts[i]);
        CHECK(c >= 0.0);
        if (c > 0.0)
          for (int x : ts[i]) CHECK(cover.space().distance(x, cover.centers()[a]) < cover.big_radius());
        sum += c;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-14);
    }
  }
  // symmetric in the tuple entries
  std::vector<int> t{3, 4}, r{4, 3};
  CHECK(pu.chi(1, t) == pu.chi(1, r));
}

TEST_CASE("homotopy identity on every intersection") {
  for (const BundledCover& bc : {default_circle_cover(), default_interval_cover()}) {
    CoverSystem cover = bc.build(3);
    for (std::size_t i = 0; i < cover.intersections().size(); ++i) {
      HomotopyOperator h = build_slice_and_psi(cover, i);
      CHECK(!h.slice.empty());
      for (int p = 1; p <= 2; ++p) CHECK(homotopy_defect(cover, h, p) <= 1e-12);
    }
  }
}

TEST_CASE("Psi applied to a cochain matches its matrix") {
  CoverSystem cover = default_interval_cover().build(3);
  HomotopyOperator h = build_slice_and_psi(cover, 0);
  const Intersection& I = cover.intersections()[0];
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(I.tuples[1]->size()), -1, 1);
  Cochain F(I.tuples[1], v);
  Cochain G = psi_apply(cover, h, F);
  CHECK(G.degree() == 0);
  CHECK((G.values() - psi_matrix(cover, h, 1) * v).norm() == 0.0);
  // by hand at one point: sum over the slice of weighted F(t, x)
  int x = I.points.front();
  double ref = 0.0;
  for (int t : h.slice)
    if (t != x) {
      int tt[] = {t, x};
      ref += cover.space().weight(t) * F.at(tt);
    }
  CHECK(G.values()(0) == doctest::Approx(ref / h.slice_mass));
  CHECK_THROWS_AS(homotopy_defect(cover, h, 3), std::out_of_range);
}

TEST_CASE("rips slices can be empty") {
  MetricMeasureSpace s = gen_circle(24);
  std::vector<int> centers;
  for (int i = 0; i < 24; i += 2) centers.push_back(i);
  CoverSystem cover(s, NeighborhoodSystem::rips(0.6), 0.6, 0.27, centers, 3);
  bool violated = false;
  for (std::size_t i = 0; i < cover.intersections().size() && !violated; ++i) {
    try {
      build_slice_and_psi(cover, i);
    } catch (const AssumptionViolation&) {
      violated = true;
    }
  }
  CHECK(violated);
}

TEST_CASE("Mayer-Vietoris certificate and its negative control") {
  for (const BundledCover& bc : {default_circle_cover(), default_interval_cover()}) {
    CoverSystem cover = bc.build(3);
    PartitionOfUnity pu(cover, 0);
    for (int p = 0; p <= 2; ++p) {
      MvCertificate c = mayer_vietoris_check(cover, pu, p);
      CHECK(c.ranks_exact());
      CHECK(c.reconstruction_ok());
      CHECK(c.rows.front().q == -1);
      CHECK(c.rows.back().q == cover.nerve_dimension());
      MvCertificate bad = mayer_vietoris_check(cover, pu, p, -1, Reconstruction::drop_partition);
      CHECK(!bad.reconstruction_ok());
    }
  }
}

TEST_CASE("Cech differences square to zero") {
  CoverSystem cover = default_interval_cover().build(3);
  for (int p = 0; p <= 2; ++p) {
    Eigen::SparseMatrix<int> r = restriction_matrix(cover, p);
    Eigen::SparseMatrix<int> d0 = cech_difference(cover, p, 0);
    Eigen::SparseMatrix<int> z = d0 * r;
    z.prune(0);
    CHECK(z.nonZeros() == 0);
    for (int q = 0; q + 1 < cover.nerve_dimension(); ++q) {
      Eigen::SparseMatrix<int> zz = cech_difference(cover, p, q + 1) * cech_difference(cover, p, q);
      zz.prune(0);
      CHECK(zz.nonZeros() == 0);
    }
  }
}

TEST_CASE("nerve cohomology") {
  CHECK(cech_nerve_betti(default_circle_cover().build(1)).betti == std::vector<int>{1, 1, 0, 0, 0});
  std::vector<int> nerve = cech_nerve_betti(default_interval_cover().build(1)).betti;
  CHECK(nerve[0] == 1);
  for (std::size_t q = 1; q < nerve.size(); ++q) CHECK(nerve[q] == 0);
  // three wide arcs: every pairwise intersection falls apart into two pieces
  MetricMeasureSpace s = gen_circle(12);
  CoverSystem three(s, NeighborhoodSystem::rips(0.6), 0.6, 1.1, {0, 4, 8}, 1);
  for (std::size_t i : three.of_order(1)) {
    std::vector<int> comp = intersection_components(three, i);
    CHECK(*std::max_element(comp.begin(), comp.end()) == 1);
  }
  BettiReport b = cech_nerve_betti(three);
  CHECK(b.betti[0] == 1);
  CHECK(b.betti[1] == 1);
  CHECK(b.betti[1] == oracle::betti(12, 1, oracle::rips(s, 0.6))[1]);
}

TEST_CASE("reference Betti numbers and the recovery report") {
  CHECK(reference_betti(gen_sphere(10).metadata(), 2) == std::vector<int>{1, 0, 1});
  CHECK(reference_betti(gen_two_components(3, 1.0).metadata(), 1) == std::vector<int>{2, 0});
  CHECK_THROWS(reference_betti(SpaceMetadata{}, 1));
  MetricMeasureSpace s = gen_circle(32);
  std::vector<int> centers;
  for (int i = 0; i < 32; i += 4) centers.push_back(i);
  DeRhamConfig cfg{NeighborhoodSystem::rips(0.5), KernelModel::fractional(1, 0.5), 1, CoverParams{0.5, 0.4, centers}, {}};
  DeRhamReport r = deRham_recovery_report(s, cfg);
  CHECK(r.pass());
  CHECK(r.nerve.has_value());
  CHECK(r.to_json()["schema"] == 1);
}
