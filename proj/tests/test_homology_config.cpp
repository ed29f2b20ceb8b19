#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "reflexive/error.hpp"
#include "reflexive/homology_config.hpp"

using namespace reflexive;

namespace {

bool check_passed(const ValidationReport& r, const char* name) {
  const ValidationCheck* c = r.find(name);
  REQUIRE(c != nullptr);
  return c->passed;
}

}  // namespace

TEST_CASE("dumbbell datum is valid") {
  const ConfigurationDatum d = fixtures::dumbbell_datum();
  CHECK(d.rank() == 4);
  const ValidationReport r = validate_datum(d);
  CHECK(r.ok());
  CHECK(check_passed(r, "relations_span_kernel"));
}

TEST_CASE("index-2 sublattice does not generate") {
  ConfigurationDatum d = fixtures::toy_datum();
  d.iota = {{2, 0}, {0, 1}};
  const ValidationReport r = validate_datum(d);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(check_passed(r, "iota_generates"));
}

TEST_CASE("sigma must preserve edge types") {
  ConfigurationDatum d = fixtures::toy_datum();
  d.sigma = {1, 0};
  const ValidationReport r = validate_datum(d);
  CHECK_FALSE(check_passed(r, "tau_sigma_compat"));
  CHECK(check_passed(r, "sigma_bijection"));
}

TEST_CASE("sigma must be a bijection") {
  ConfigurationDatum d = fixtures::toy_datum();
  d.sigma = {0, 0};
  CHECK_FALSE(check_passed(validate_datum(d), "sigma_bijection"));
}

TEST_CASE("inconsistent lengths are malformed") {
  ConfigurationDatum d = fixtures::toy_datum();
  d.tau.pop_back();
  CHECK_THROWS_WITH_AS(validate_datum(d), doctest::Contains("malformed"), Error);
  d = fixtures::toy_datum();
  d.iota[1] = {0, 1, 0};
  CHECK_THROWS_AS(validate_datum(d), Error);
}

TEST_CASE("relations outside the kernel and incomplete kernels are reported") {
  ConfigurationDatum d = fixtures::closed_pair_datum();
  CHECK(validate_datum(d).ok());

  d.relations = {{1, 1, 0, 0}};
  CHECK_FALSE(check_passed(validate_datum(d), "relations_in_kernel"));

  d.relations = {};
  const ValidationReport r = validate_datum(d);
  CHECK(check_passed(r, "relations_in_kernel"));
  CHECK_FALSE(check_passed(r, "relations_span_kernel"));

  const ConfigurationDatum completed = complete_kernel(d);
  REQUIRE(completed.relations.size() == 1);
  CHECK(std::abs(completed.relations[0][0]) == 1);
  CHECK(completed.relations[0][0] == -completed.relations[0][1]);
  CHECK(validate_datum(completed).ok());
}

TEST_CASE("non-saturated relations do not span the kernel") {
  ConfigurationDatum d = fixtures::closed_pair_datum();
  d.relations = {{2, -2, 0, 0}};
  CHECK_FALSE(check_passed(validate_datum(d), "relations_span_kernel"));
}

TEST_CASE("distinguished edge must be horizontal") {
  ConfigurationDatum d = fixtures::toy_datum();
  CHECK(d.distinguished_edge() == 0);
  d.e0 = 1;
  CHECK_FALSE(check_passed(validate_datum(d), "e0_horizontal"));
  CHECK_THROWS_WITH_AS(d.distinguished_edge(), doctest::Contains("e0_not_horizontal"), Error);
}

TEST_CASE("constraint space of the unconstrained orthant") {
  const VCSpace v = build_vc_space(fixtures::toy_datum());
  CHECK(v.dim == 2);
  CHECK(v.basis.rows() == 2);
  CHECK(std::abs(v.basis.determinant()) > 1e-9);
}

TEST_CASE("one relation on four edges leaves three dimensions") {
  CHECK(build_vc_space(fixtures::closed_pair_datum()).dim == 3);
  CHECK(build_vc_space(fixtures::dumbbell_datum()).dim == 3);
}

TEST_CASE("relation x1 + x2 = 0 gives an empty slice") {
  ConfigurationDatum d;
  d.genus = 0;
  d.punctures = 2;
  d.edges = {"e1", "e2"};
  d.iota = {{1}, {-1}};
  d.relations = {{1, 1}};
  d.tau = {EdgeType::horizontal, EdgeType::horizontal};
  d.sigma = {0, 1};
  REQUIRE(validate_datum(d).ok());
  const VCSpace v = build_vc_space(d);
  REQUIRE(v.dim == 1);
  CHECK(std::abs(v.basis(0, 0) + v.basis(1, 0)) < 1e-12);
  CHECK_THROWS_WITH_AS(build_slice_chart(d), doctest::Contains("empty_slice"), Error);
}

TEST_CASE("invalid datum is rejected by the constraint space") {
  ConfigurationDatum d = fixtures::toy_datum();
  d.iota = {{2, 0}, {0, 1}};
  CHECK_THROWS_WITH_AS(build_vc_space(d), doctest::Contains("invalid_datum"), Error);
}

TEST_CASE("dumbbell slice chart") {
  const SliceChart c = build_slice_chart(fixtures::dumbbell_datum(), 0);
  REQUIRE(c.dim() == 2);
  CHECK(c.params()[0] == "x_b1");
  CHECK(c.params()[1] == "x_b2");
  const Eigen::VectorXd x = c.embed(Eigen::Vector2d(2.0, 3.0));
  CHECK(x.isApprox(Eigen::Vector4d(1, 1, 2, 3), 1e-14));
  const Eigen::VectorXcd z = c.periods(Eigen::Vector2d(2.0, 3.0));
  CHECK(std::abs(z(2) - std::complex<double>(0, 2)) < 1e-14);
  CHECK(c.in_domain(Eigen::Vector2d(0.1, 3.0)));
  CHECK_FALSE(c.in_domain(Eigen::Vector2d(-0.1, 3.0)));
  const SliceChart guarded = c.with_guard([](const Eigen::VectorXd& p) { return p.minCoeff() > 0.5; });
  CHECK_FALSE(guarded.in_domain(Eigen::Vector2d(0.1, 3.0)));
  CHECK(c.in_domain(c.interior_point()));
}

TEST_CASE("single horizontal edge gives a zero-dimensional slice") {
  ConfigurationDatum d;
  d.genus = 0;
  d.punctures = 2;
  d.edges = {"e1"};
  d.iota = {{1}};
  d.tau = {EdgeType::horizontal};
  d.sigma = {0};
  const SliceChart c = build_slice_chart(d);
  CHECK(c.dim() == 0);
  const Eigen::VectorXd x = c.embed(Eigen::VectorXd());
  REQUIRE(x.size() == 1);
  CHECK(x(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("slice points satisfy every relation") {
  const ConfigurationDatum d = fixtures::closed_pair_datum();
  const SliceChart c = build_slice_chart(d);
  std::mt19937_64 gen(5);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(c.dim()));
    for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = fixtures::uniform(gen, -1.0, 5.0);
    if (!c.in_domain(p)) continue;
    ++checked;
    const Eigen::VectorXcd z = c.periods(p);
    CHECK(std::abs(z(c.e0()) - 1.0) < 1e-12);
    for (const auto& r : d.relations) {
      std::complex<double> s = 0.0;
      for (std::size_t e = 0; e < r.size(); ++e) s += static_cast<double>(r[e]) * z(static_cast<Eigen::Index>(e));
      CHECK(std::abs(s) < 1e-12);
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("max-min coordinate linear program") {
  // x = (1, p, 1 - p): best minimum is 1/2 at p = 1/2
  Eigen::Vector3d offset(1.0, 0.0, 1.0);
  Eigen::MatrixXd dir(3, 1);
  dir << 0.0, 1.0, -1.0;
  const auto [t, p] = max_min_coordinate(offset, dir);
  CHECK(t == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-12));
}
