// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "properties.hpp"
#include "reflexive/families.hpp"
#include "reflexive/flat_surfaces.hpp"
#include "reflexive/hypothesis_audit.hpp"
#include "reflexive/reflexive_solver.hpp"

using namespace reflexive;
using boost::multiprecision::cpp_rational;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kEll = 0.5;
const double kB = dumbbell_reflexive_height(kEll);

struct Outcome {
  bool ok = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Eigen::Vector2d box_point(std::mt19937_64& gen) {
  return {fixtures::uniform(gen, 0.6, 3.0), fixtures::uniform(gen, 0.6, 3.0)};
}

Outcome reflexive_point() {
  const FamilySetup s = dumbbell_family(kEll);
  std::mt19937_64 gen(1001);
  double worst_err = 0.0, worst_h = 0.0, worst_t = 0.0;
  bool all_reflexive = true;
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d u0 = box_point(gen);
    const auto t0 = Clock::now();
    const SolveResult r = push_descent(s.field, s.push, u0);
    worst_t = std::max(worst_t, seconds_since(t0));
    all_reflexive = all_reflexive && r.status == SolveStatus::reflexive;
    worst_err = std::max(worst_err, (r.u_star - Eigen::Vector2d(kB, kB)).cwiseAbs().maxCoeff());
    worst_h = std::max(worst_h, s.field.height(r.u_star));
  }
  return {all_reflexive && worst_err <= 1e-6 && worst_h < 1e-12 && worst_t < 1.0,
          fmt("20 starts: max |u*-b_l| = %.3g, max H = %.3g, slowest solve %.3g s", worst_err, worst_h, worst_t)};
}

Outcome closed_form_lengths() {
  std::mt19937_64 gen(1002);
  double worst_rel = 0.0;
  bool exact = true;
  for (int i = 0; i < 1000; ++i) {
    const double ell = fixtures::uniform(gen, 0.05, 2.0);
    const double b = ell + fixtures::uniform(gen, 0.1, 3.0);
    const double c = ell + fixtures::uniform(gen, 0.1, 3.0);
    const cpp_rational qb(b), qc(c), ql(ell);
    const auto q = dumbbell_closed_form(qb, qc, ql);
    exact = exact && q[0] * (qb - ql) == 1 && q[1] == qb && q[2] * (qc - ql) == 1 && q[3] == qc;
    const DumbbellCoreLengths l = dumbbell_core_extremal_lengths({b, c, ell});
    const double got[4] = {l.alpha1, l.beta1, l.alpha2, l.beta2};
    for (int k = 0; k < 4; ++k) {
      const double ref = static_cast<double>(q[static_cast<std::size_t>(k)]);
      worst_rel = std::max(worst_rel, std::abs(got[k] - ref) / std::abs(ref));
    }
  }
  return {exact && worst_rel <= 1e-14,
          std::string(exact ? "exact rational identities hold" : "rational identities FAILED") +
              fmt(", max float rel err %.3g over 1000 triples", worst_rel)};
}

Outcome height_formula() {
  const HeightField f = make_dumbbell_field(kEll);
  std::mt19937_64 gen(1003);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector2d u = box_point(gen);
    const double lb = std::log(u(0) * (u(0) - kEll)), lc = std::log(u(1) * (u(1) - kEll));
    worst = std::max(worst, std::abs(f.height(u) - (lb * lb + lc * lc)));
  }
  return {worst <= 1e-12, fmt("max |H - closed form| = %.3g over 1000 points", worst)};
}

Outcome regularity_positive() {
  const FamilySetup s = dumbbell_family(kEll);
  const auto samples = quasi_random_samples(s.field, s.box, 50, 1004);
  double worst = 0.0;
  for (const auto& u : samples) {
    const Eigen::MatrixXd jI = log_ext_jacobian(s.field, u, Side::I);
    const Eigen::MatrixXd jII = log_ext_jacobian(s.field, u, Side::II);
    Eigen::Matrix2d eI = Eigen::Matrix2d::Zero(), eII = Eigen::Matrix2d::Zero();
    eI.diagonal() << -1.0 / (u(0) - kEll), -1.0 / (u(1) - kEll);
    eII.diagonal() << 1.0 / u(0), 1.0 / u(1);
    worst = std::max({worst, (jI - eI).cwiseAbs().maxCoeff(), (jII - eII).cwiseAbs().maxCoeff()});
  }
  const AuditReport r = audit_regularity(s.field, samples);
  return {samples.size() == 50 && worst <= 1e-5 && r.verdict == reflexive::Verdict::pass,
          fmt("max Jacobian entry error %.3g at 50 samples; H1 verdict ", worst) + to_string(r.verdict)};
}

Outcome regularity_negative() {
  const FamilySetup s = stacked_family();
  const auto samples = quasi_random_samples(s.field, s.box, 50, 1005);
  const AuditReport r = audit_regularity(s.field, samples);
  double worst = 0.0;
  for (const auto& e : r.evidence)
    for (const auto& [k, v] : e.quantities)
      if (k.rfind("jacobian_norm_", 0) == 0) worst = std::max(worst, v);
  const double h0 = s.field.height(s.reference);
  const SolveResult sr = push_descent(s.field, s.push, s.reference);
  const bool stalled = sr.status == SolveStatus::stalled && sr.h_star == h0;
  return {r.verdict == reflexive::Verdict::fail && worst < 1e-8 && stalled,
          "H1 verdict " + to_string(r.verdict) + fmt(", max Jacobian norm %.3g; solver ", worst) + to_string(sr.status) +
              fmt(" with H %.17g -> %.17g", h0, sr.h_star)};
}

Outcome degeneration() {
  const HeightField f = make_dumbbell_field(kEll);
  const double near_slit = f.mismatches(Eigen::Vector2d(kEll + 1e-2, 2.0)).cwiseAbs().maxCoeff();
  const double stretched = f.mismatches(Eigen::Vector2d(100.0, 2.0)).cwiseAbs().maxCoeff();
  const FamilySetup s = dumbbell_family(kEll);
  std::vector<Ray> rays = s.rays;
  rays.push_back(Ray{"b->l+", Eigen::Vector2d(kEll, 2.0), Eigen::Vector2d(1.0, 0.0), {1, 1}});
  rays.push_back(Ray{"b->inf", Eigen::Vector2d(0.0, 2.0), Eigen::Vector2d(1.0, 0.0), {-1, 1}});
  DegenerationOptions o;
  o.blow_threshold = 5.0;
  const AuditReport r = audit_degeneration(f, rays, o);
  return {near_slit > 5.27 && stretched > 9.20 && r.verdict == reflexive::Verdict::pass,
          fmt("max|m| = %.6f at b-l = 1e-2, %.6f at b = 100; ", near_slit, stretched) + "H2 verdict " +
              to_string(r.verdict) + " over " + std::to_string(rays.size()) + " rays"};
}

Outcome pushability() {
  const FamilySetup s = dumbbell_family(kEll);
  const auto samples = quasi_random_samples(s.field, s.box, 100, 1007);
  double worst = 0.0;
  for (const auto& u : samples) {
    const Eigen::VectorXd v = s.push.base(u, 0);
    const double fd = mismatch_directional_fd(s.field, u, v)(0);
    const double exact = -(1.0 + u(0) / (u(0) - kEll));
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  bool singleton = true;
  for (std::size_t g = 0; g < s.push.incidence.size(); ++g)
    singleton = singleton && s.push.incidence[g] == std::vector<std::size_t>{g};
  const AuditReport r = audit_pushability(s.field, s.push, samples);
  return {samples.size() == 100 && worst <= 1e-6 && singleton && r.verdict == reflexive::Verdict::pass,
          fmt("max rel error of dm(V) %.3g at 100 samples; H3 verdict ", worst) + to_string(r.verdict)};
}

Outcome oracle_agreement() {
  const FamilySetup s = dumbbell_family(kEll);
  const ScanTable t = grid_scan(s.field, Box{Eigen::Vector2d(0.6, 0.6), Eigen::Vector2d(3.0, 3.0)}, {241, 241});
  const SolveResult r = push_descent(s.field, s.push, Eigen::Vector2d(2.5, 0.8));
  const double gap = (t.argmin() - r.u_star).cwiseAbs().maxCoeff();

  std::mt19937_64 gen(1008);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const EuclideanCylinder cyl(fixtures::uniform(gen, 0.5, 3.0), fixtures::uniform(gen, 0.5, 3.0));
    for (int n : {32, 64}) {
      const double exact = cylinder_extremal_length(cyl);
      worst = std::max(worst, std::abs(discrete_extremal_length_oracle(cyl, n) - exact) / exact);
    }
  }
  return {gap <= 0.01 && worst <= 0.01,
          fmt("scan argmin vs descent: %.4g per coordinate (cell 0.01); oracle max rel err %.3g", gap, worst)};
}

Outcome property_suites() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, properties::Outcome>> suites = {
      {"cone scaling", properties::cone_scaling(1009)},
      {"round trip", properties::admissibility_round_trip(1010)},
      {"side swap", properties::side_swap(1011)},
      {"H zero set", properties::height_zero_set(1012)},
      {"monotone descent", properties::monotone_descent(1013)}};
  const double secs = seconds_since(t0);
  Outcome v{secs < 10.0, ""};
  for (const auto& [name, o] : suites) {
    v.ok = v.ok && o.ok;
    v.detail += name + (o.ok ? " ok" : " FAILED (" + o.detail + ")") + "; ";
  }
  v.detail += fmt("%.3g s total", secs);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"dumbbell reflexive point", reflexive_point},
      {"closed-form extremal lengths", closed_form_lengths},
      {"mismatch/height formulas", height_formula},
      {"regularity audit, positive control", regularity_positive},
      {"regularity audit, negative control", regularity_negative},
      {"degeneration probe", degeneration},
      {"pushability derivative", pushability},
      {"oracle agreement", oracle_agreement},
      {"property suites", property_suites}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.ok;
    std::printf("%s [%zu] %s: %s\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
