#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "reflexive/height_field.hpp"
#include "reflexive/hypothesis_audit.hpp"

namespace reflexive {

/// A height field together with the defaults the audits and solver need.
struct FamilySetup {
  std::string family;
  HeightField field;
  PushFieldSpec push;
  Box box;                    // default sampling and scan box
  Eigen::VectorXd reference;  // interior point rays start from
  std::vector<Ray> rays;      // default degeneration rays
};

/// Slit-torus dumbbell on the slice a = 1, parameters (b, c) with ell < min(b, c).
/// Curves {alpha1, alpha2}; side I is the surface itself, side II the
/// J-marked copy, so Ext_II(alpha_i) = Ext(beta_i).
HeightField make_dumbbell_field(double ell);
FamilySetup dumbbell_family(double ell);

/// Stacked three-cylinder surface on the slice w = 1, h1 + h2 + h3 = 1,
/// parameters (h1, h2, t1, t2). One curve {alpha}. Side I evaluates the core
/// extremal length at circumference `w`, side II at `comparison_w`; both are
/// constant over the slice, so the field has rank 0.
HeightField make_stacked_field(double w = 1.0, double comparison_w = 2.0);
FamilySetup stacked_family(double w = 1.0, double comparison_w = 2.0);

/// Positive root of b (b - ell) = 1.
double dumbbell_reflexive_height(double ell);

}  // namespace reflexive
