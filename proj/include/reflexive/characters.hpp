#pragma once

#include <Eigen/Core>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reflexive/homology_config.hpp"

namespace reflexive {

using Complex = std::complex<double>;

/// A homomorphism Gamma -> C, stored by its values on the fixed basis.
struct Character {
  Eigen::VectorXcd values;

  /// Value on an integer homology class given in basis coordinates.
  Complex operator()(const std::vector<long long>& cls) const;
};

/// p_chi = (chi(iota(e)))_e, linear in chi.
Eigen::VectorXcd period_coordinates(const Character& chi, const ConfigurationDatum& d);

/// Ray tests. R_h = (0, inf), R_v = i(0, inf); the conjugated vertical ray is
/// -i(0, inf). Membership is angular: Re(w) > 1e-12 and |Im(w)| <= 1e-9 |w|
/// after rotating the ray onto the positive reals.
bool on_ray(Complex z, EdgeType type, bool conjugated = false);

struct AdmissiblePair {
  Character chi_I;
  Character chi_II;
  Complex zeta{1.0, 0.0};
  Complex kappa{1.0, 0.0};
  std::shared_ptr<const ConfigurationDatum> datum;
};

struct AdmissibilityViolation {
  std::string condition;  // "C1", "C2", "C3"
  std::string where;      // edge name or relation index
  std::string detail;
};

struct AdmissibilityResult {
  std::optional<Complex> zeta;
  std::optional<Complex> kappa;
  std::vector<AdmissibilityViolation> violations;
  bool admissible() const { return zeta && kappa && violations.empty(); }
};

/// Fixes zeta from the phase of chi_I(iota(e0)) and kappa from
/// chi_II(iota(sigma(e0))) / conj(chi_I(iota(e0))), then checks (C1)-(C3) on
/// every edge and relation. `tol` bounds the (C2)/(C3) residuals relative to
/// the period scale. Throws Error("zero_period_e0").
AdmissibilityResult check_admissible(const Character& chi_I, const Character& chi_II, const ConfigurationDatum& d,
                                     double tol = 1e-9);

/// Builds an AdmissiblePair after a successful check; throws
/// Error("not_admissible") listing the violations otherwise.
AdmissiblePair make_admissible_pair(const Character& chi_I, const Character& chi_II,
                                    std::shared_ptr<const ConfigurationDatum> d, double tol = 1e-9);

/// Rotates to the zeta = kappa = 1 representative. Throws
/// Error("not_in_norm_cone") when the rotated periods leave their rays.
AdmissiblePair normalize_pair(const AdmissiblePair& p);

/// Recovers a character from its edge periods by solving iota^T v = p. Throws
/// Error("inconsistent_periods") if p is not in the image.
Character character_from_periods(const Eigen::VectorXcd& periods, const ConfigurationDatum& d);

/// Normalized pair with chi_I(iota(e)) = z_e(params) and chi_II defined by
/// conjugation through sigma. Throws Error("out_of_domain").
AdmissiblePair pair_from_slice(const SliceChart& chart, const Eigen::VectorXd& params);

}  // namespace reflexive
