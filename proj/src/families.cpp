#include "reflexive/families.hpp"

#include <cmath>
#include <limits>

#include "reflexive/error.hpp"
#include "reflexive/flat_surfaces.hpp"

namespace reflexive {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double dumbbell_reflexive_height(double ell) { return (ell + std::sqrt(ell * ell + 4.0)) / 2.0; }

HeightField make_dumbbell_field(double ell) {
  if (!(ell > 0.0 && std::isfinite(ell))) throw Error("invalid_argument", "slit length must be positive");
  ParamDomain dom = ParamDomain::box({"b", "c"}, Eigen::Vector2d(ell, ell), Eigen::Vector2d(kInf, kInf));

  ExtremalLengthAssignment ext_I;
  ext_I.provenance = Provenance::closed_form_dumbbell;
  ext_I.eval = [ell](const Eigen::VectorXd& u, std::size_t curve) {
    const DumbbellCoreLengths l = dumbbell_core_extremal_lengths({u(0), u(1), ell});
    return curve == 0 ? l.alpha1 : l.alpha2;
  };
  ExtremalLengthAssignment ext_II;
  ext_II.provenance = Provenance::closed_form_dumbbell;
  ext_II.eval = [ell](const Eigen::VectorXd& u, std::size_t curve) {
    const DumbbellCoreLengths l = relabel_by_J(dumbbell_core_extremal_lengths({u(0), u(1), ell}));
    return curve == 0 ? l.alpha1 : l.alpha2;
  };
  return HeightField(std::move(dom), AdmissibleCurveSet::with_identity_pairing({"alpha1", "alpha2"}),
                     std::move(ext_I), std::move(ext_II));
}

FamilySetup dumbbell_family(double ell) {
  HeightField f = make_dumbbell_field(ell);
  PushFieldSpec push = coordinate_scaling_push(f);
  const double lo = ell + 0.1;
  const double hi = std::max(3.0, ell + 2.5);
  Box box{Eigen::Vector2d(lo, lo), Eigen::Vector2d(hi, hi)};
  Eigen::VectorXd ref = Eigen::Vector2d(ell + 1.0, ell + 1.0);
  std::vector<Ray> rays = default_rays(f, ref);
  return FamilySetup{"dumbbell", std::move(f), std::move(push), std::move(box), std::move(ref), std::move(rays)};
}

HeightField make_stacked_field(double w, double comparison_w) {
  if (!(w > 0.0 && comparison_w > 0.0)) throw Error("invalid_argument", "circumferences must be positive");
  ParamDomain dom = ParamDomain::box({"h1", "h2", "t1", "t2"}, Eigen::Vector4d(0.0, 0.0, 0.0, 0.0),
                                     Eigen::Vector4d(1.0, 1.0, 1.0, 1.0));
  dom.lower_closed = {false, false, true, true};
  dom.extra = [](const Eigen::VectorXd& u) { return u(0) + u(1) < 1.0; };

  auto surface = [](const Eigen::VectorXd& u, double circumference) {
    StackedCylinderSurface s;
    s.w = circumference;
    s.h1 = u(0);
    s.h2 = u(1);
    s.h3 = 1.0 - (u(0) + u(1));  // makes h1 + h2 + h3 round to exactly 1
    s.t1 = u(2) * circumference;
    s.t2 = u(3) * circumference;
    return s;
  };
  ExtremalLengthAssignment ext_I;
  ext_I.provenance = Provenance::closed_form_stacked;
  ext_I.eval = [surface, w](const Eigen::VectorXd& u, std::size_t) {
    return stacked_core_extremal_length(surface(u, w));
  };
  ExtremalLengthAssignment ext_II;
  ext_II.provenance = Provenance::closed_form_stacked;
  ext_II.eval = [surface, comparison_w](const Eigen::VectorXd& u, std::size_t) {
    return stacked_core_extremal_length(surface(u, comparison_w));
  };
  return HeightField(std::move(dom), AdmissibleCurveSet::with_identity_pairing({"alpha"}), std::move(ext_I),
                     std::move(ext_II));
}

FamilySetup stacked_family(double w, double comparison_w) {
  HeightField f = make_stacked_field(w, comparison_w);
  PushFieldSpec push = coordinate_scaling_push(f);
  Box box{Eigen::Vector4d(0.02, 0.02, 0.0, 0.0), Eigen::Vector4d(0.96, 0.96, 0.99, 0.99)};
  Eigen::VectorXd ref = Eigen::Vector4d(0.3, 0.3, 0.5, 0.5);
  const auto ray = [&ref](std::string name, Eigen::Index i, double base, double slope) {
    Ray r{std::move(name), ref, Eigen::VectorXd::Zero(4), {1, 1, 1, 1}};
    r.base(i) = base;
    r.slope(i) = slope;
    return r;
  };
  // h1 -> 0, h2 -> 0, and h3 -> 0 through h1 -> 1 - h2
  std::vector<Ray> rays = {ray("h1->0", 0, 0.0, 0.3), ray("h2->0", 1, 0.0, 0.3), ray("h3->0", 0, 0.7, -0.4)};
  return FamilySetup{"stacked", std::move(f), std::move(push), std::move(box), std::move(ref), std::move(rays)};
}

}  // namespace reflexive
