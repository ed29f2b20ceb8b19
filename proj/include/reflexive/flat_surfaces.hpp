#pragma once

#include <array>

namespace reflexive {

/// Rectangle of width w and height h with the vertical sides identified.
struct EuclideanCylinder {
  double w;
  double h;
  EuclideanCylinder(double circumference, double height);
};

/// Extremal length of the core curve, w / h.
double cylinder_extremal_length(const EuclideanCylinder& cyl);

/// Two unit-width rectangular tori of heights b and c, slit vertically along a
/// segment of length ell and glued crosswise. Domain: 0 < ell < min(b, c).
struct SlitDumbbellSurface {
  double b;
  double c;
  double ell;
  bool valid() const;
};

/// Extremal lengths of the horizontal (alpha) and vertical (beta) core curves.
struct DumbbellCoreLengths {
  double alpha1;
  double beta1;
  double alpha2;
  double beta2;
};

/// (alpha1, beta1, alpha2, beta2) over any field type, so the same arithmetic
/// can run on exact rationals. No domain checks.
template <class T>
std::array<T, 4> dumbbell_closed_form(const T& b, const T& c, const T& ell) {
  const T one(1);
  return {one / (b - ell), b, one / (c - ell), c};
}

/// alpha_i: maximal horizontal cylinder of height (b - ell) or (c - ell);
/// beta_i: full vertical cylinder. Throws Error("degenerate_slit").
DumbbellCoreLengths dumbbell_core_extremal_lengths(const SlitDumbbellSurface& s);

/// Marking precomposed with J (alpha_i -> beta_i): relabels alpha_i <-> beta_i.
DumbbellCoreLengths relabel_by_J(const DumbbellCoreLengths& l);

/// Three horizontal cylinders of common circumference w stacked with twists.
struct StackedCylinderSurface {
  double w = 1.0;
  double h1 = 1.0 / 3.0;
  double h2 = 1.0 / 3.0;
  double h3 = 1.0 / 3.0;
  double t1 = 0.0;
  double t2 = 0.0;
  bool valid() const;
  /// w = 1 and h1 + h2 + h3 = 1.
  bool sliced(double tol = 1e-12) const;
};

/// w / (h1 + h2 + h3); the twists do not enter. Throws Error("invalid_surface").
double stacked_core_extremal_length(const StackedCylinderSurface& s);

/// Extremal-length estimate from a resistor network on the cylinder: grid
/// periodic around the circumference, top and bottom rows collapsed to two
/// terminals, cell conductances matched to the cell aspect ratio. `n` is the
/// number of cells across the shorter side. Returns the effective
/// conductance between the boundary circles. Throws Error("singular_system").
double discrete_extremal_length_oracle(const EuclideanCylinder& cyl, int n);

}  // namespace reflexive
