#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "reflexive/error.hpp"
#include "reflexive/families.hpp"
#include "reflexive/reflexive_solver.hpp"

using namespace reflexive;

namespace {

constexpr double kEll = 0.5;
const double kB = dumbbell_reflexive_height(kEll);

void check_trace(const HeightField& f, const SolveResult& r) {
  REQUIRE_FALSE(r.trace.empty());
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(f.in_domain(r.trace[i].u));
    if (i > 0) CHECK(r.trace[i].height < r.trace[i - 1].height);
  }
  CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations) + 1);
}

}  // namespace

TEST_CASE("push descent from (2.5, 0.8) reaches the reflexive point") {
  const FamilySetup s = dumbbell_family(kEll);
  const SolveResult r = push_descent(s.field, s.push, Eigen::Vector2d(2.5, 0.8));
  CHECK(r.status == SolveStatus::reflexive);
  CHECK(r.h_star < 1e-12);
  CHECK((r.u_star - Eigen::Vector2d(kB, kB)).cwiseAbs().maxCoeff() < 1e-6);
  check_trace(s.field, r);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK((r.trace[i].curve == "alpha1" || r.trace[i].curve == "alpha2"));
}

TEST_CASE("already reflexive start takes no steps") {
  const FamilySetup s = dumbbell_family(kEll);
  const SolveResult r = push_descent(s.field, s.push, Eigen::Vector2d(kB, kB));
  CHECK(r.status == SolveStatus::reflexive);
  CHECK(r.iterations == 0);
}

TEST_CASE("stacked field stalls with H unchanged") {
  const FamilySetup s = stacked_family();
  for (const Eigen::Vector4d u0 : {Eigen::Vector4d(0.3, 0.3, 0.5, 0.5), Eigen::Vector4d(0.1, 0.7, 0.0, 0.9)}) {
    const double h0 = s.field.height(u0);
    const SolveResult r = push_descent(s.field, s.push, u0);
    CHECK(r.status == SolveStatus::stalled);
    CHECK(r.h_star == h0);
    CHECK(r.iterations == 0);
    SolveOptions g;
    g.mode = SolveMode::gradient_descent;
    const SolveResult rg = solve(s.field, s.push, u0, g);
    CHECK(rg.status == SolveStatus::stalled);
    CHECK(rg.h_star == h0);
  }
}

TEST_CASE("start outside the domain is rejected") {
  const FamilySetup s = dumbbell_family(kEll);
  CHECK_THROWS_WITH_AS(push_descent(s.field, s.push, Eigen::Vector2d(0.1, 3.0)), doctest::Contains("out_of_domain"),
                       Error);
  SolveOptions bad;
  bad.backtrack = 1.0;
  CHECK_THROWS_AS(push_descent(s.field, s.push, Eigen::Vector2d(1.0, 1.0), bad), Error);
}

TEST_CASE("iteration cap is reported") {
  const FamilySetup s = dumbbell_family(kEll);
  SolveOptions o;
  o.max_iters = 2;
  const SolveResult r = push_descent(s.field, s.push, Eigen::Vector2d(2.5, 0.8), o);
  CHECK(r.status == SolveStatus::max_iters);
  CHECK(r.iterations == 2);
}

TEST_CASE("steps near the slit boundary stay strictly inside") {
  const FamilySetup s = dumbbell_family(kEll);
  const SolveResult r = push_descent(s.field, s.push, Eigen::Vector2d(kEll + 1e-4, 2.9));
  CHECK(r.status == SolveStatus::reflexive);
  check_trace(s.field, r);
}

TEST_CASE("push and gradient modes agree") {
  const FamilySetup s = dumbbell_family(kEll);
  SolveOptions g;
  g.mode = SolveMode::gradient_descent;
  const SolveResult a = solve(s.field, s.push, Eigen::Vector2d(2.5, 0.8));
  const SolveResult b = solve(s.field, s.push, Eigen::Vector2d(2.5, 0.8), g);
  CHECK(b.status == SolveStatus::reflexive);
  check_trace(s.field, b);
  CHECK((a.u_star - b.u_star).norm() < 1e-5);
}

TEST_CASE("twenty random starts converge to the same point") {
  const FamilySetup s = dumbbell_family(kEll);
  std::mt19937_64 gen(99);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d u0(fixtures::uniform(gen, 0.6, 3.0), fixtures::uniform(gen, 0.6, 3.0));
    const SolveResult r = push_descent(s.field, s.push, u0);
    CHECK(r.status == SolveStatus::reflexive);
    CHECK((r.u_star - Eigen::Vector2d(kB, kB)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("grid scan of the dumbbell box") {
  const FamilySetup s = dumbbell_family(kEll);
  const ScanTable t = grid_scan(s.field, Box{Eigen::Vector2d(0.6, 0.6), Eigen::Vector2d(3.0, 3.0)}, {241, 241});
  CHECK(t.rows() == 58081);
  CHECK(t.cols == 5);
  CHECK(t.h_min < 1e-3);
  CHECK((t.argmin() - Eigen::Vector2d(kB, kB)).cwiseAbs().maxCoeff() <= 0.01);
  const SolveResult r = push_descent(s.field, s.push, Eigen::Vector2d(2.5, 0.8));
  CHECK((t.argmin() - r.u_star).norm() <= 0.01 * std::sqrt(2.0));
  // last parameter varies fastest
  CHECK(t.at(0, 0) == t.at(1, 0));
  CHECK(t.at(1, 1) > t.at(0, 1));
}

TEST_CASE("single-point scan at the reflexive point") {
  const FamilySetup s = dumbbell_family(kEll);
  const ScanTable t = grid_scan(s.field, Box{Eigen::Vector2d(kB, kB), Eigen::Vector2d(3.0, 3.0)}, {1, 1});
  REQUIRE(t.rows() == 1);
  CHECK(t.h_min < 1e-12);
}

TEST_CASE("stacked scan is flat and guard-filtered") {
  const FamilySetup s = stacked_family();
  const ScanTable t = grid_scan(s.field, s.box, {6, 6, 3, 3});
  CHECK(t.rows() < 6u * 6u * 9u);
  for (std::size_t r = 0; r < t.rows(); ++r) CHECK(std::abs(t.at(r, t.cols - 1) - t.h_min) < 1e-12);
  CHECK(t.argmin_row == 0);
}

TEST_CASE("scan errors") {
  const FamilySetup s = dumbbell_family(kEll);
  CHECK_THROWS_WITH_AS(grid_scan(s.field, Box{Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.4, 0.4)}, {3, 3}),
                       doctest::Contains("empty_grid_after_guard"), Error);
  CHECK_THROWS_AS(grid_scan(s.field, s.box, {3}), Error);
  CHECK_THROWS_AS(grid_scan(s.field, s.box, {0, 3}), Error);
}

TEST_CASE("scan CSV layout") {
  const FamilySetup s = dumbbell_family(kEll);
  const ScanTable t = grid_scan(s.field, Box{Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(2.0, 2.0)}, {2, 1});
  std::ostringstream os;
  write_scan_csv(os, t);
  CHECK(os.str() ==
        "b,c,m_alpha1,m_alpha2,H\n"
        "1,1,0.69314718055994529,0.69314718055994529,0.96090602783640278\n"
        "2,1,-1.0986122886681098,0.69314718055994529,1.6874019747307836\n");
}

TEST_CASE("certificates") {
  const HeightField f = make_dumbbell_field(kEll);
  const ReflexiveCertificate at = certify_reflexive(f, Eigen::Vector2d(kB, kB), 1e-9);
  CHECK(at.certified);
  for (const auto& m : at.matches) CHECK(m.residual < 1e-12);

  const ReflexiveCertificate off = certify_reflexive(f, Eigen::Vector2d(1.0, 1.0), 1e-9);
  CHECK_FALSE(off.certified);
  CHECK(off.matches[0].abs_mismatch == doctest::Approx(0.69314718055994529).epsilon(1e-14));
  CHECK(off.matches[0].residual == doctest::Approx(1.0));

  const ReflexiveCertificate loose = certify_reflexive(f, Eigen::Vector2d(2.9, 0.7), 10.0);
  CHECK(loose.certified);
  CHECK(loose.tol == 10.0);
  CHECK_THROWS_WITH_AS(certify_reflexive(f, Eigen::Vector2d(0.2, 1.0), 1e-9), doctest::Contains("out_of_domain"), Error);
}
