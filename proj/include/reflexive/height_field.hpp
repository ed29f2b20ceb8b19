#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "reflexive/homology_config.hpp"

namespace reflexive {

enum class Side { I, II };

enum class Provenance { closed_form_dumbbell, closed_form_stacked, table, external };

std::string to_string(Side s);
std::string to_string(Provenance p);

/// Finite set of curve families with the pairing involution sigma_*.
struct AdmissibleCurveSet {
  std::vector<std::string> curves;
  std::vector<std::size_t> pairing;

  static AdmissibleCurveSet with_identity_pairing(std::vector<std::string> names);
  std::size_t size() const { return curves.size(); }
  std::size_t index(const std::string& name) const;
  /// Throws Error("invalid_pairing") unless pairing is an involution.
  void check() const;
};

/// u -> Ext_side(u; curve) for every curve index of the field's curve set.
/// Evaluators must be pure and reentrant; fields are evaluated concurrently.
struct ExtremalLengthAssignment {
  using Eval = std::function<double(const Eigen::VectorXd&, std::size_t)>;
  Side side = Side::I;
  Eval eval;
  Provenance provenance = Provenance::external;
  /// Per-parameter coordinates where the assignment is only piecewise smooth.
  std::vector<std::vector<double>> breakpoints;
};

/// Piecewise-linear interpolation over a rectilinear grid. `values[c]` holds
/// curve c on the grid, row-major with the last axis fastest.
ExtremalLengthAssignment make_table_assignment(Side side, std::vector<std::vector<double>> axes,
                                               std::vector<std::vector<double>> values);

/// Open parameter box (lower bounds optionally closed) plus an extra predicate.
struct ParamDomain {
  std::vector<std::string> names;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<bool> lower_closed;
  std::function<bool(const Eigen::VectorXd&)> extra;

  static ParamDomain box(std::vector<std::string> names, Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ParamDomain from_chart(const SliceChart& chart);
  std::size_t dim() const { return names.size(); }
  bool contains(const Eigen::VectorXd& u) const;
};

class HeightField {
 public:
  HeightField(ParamDomain domain, AdmissibleCurveSet curves, ExtremalLengthAssignment ext_I,
              ExtremalLengthAssignment ext_II);

  const ParamDomain& domain() const { return domain_; }
  const AdmissibleCurveSet& curves() const { return curves_; }
  const ExtremalLengthAssignment& assignment(Side s) const { return s == Side::I ? ext_I_ : ext_II_; }
  std::size_t dim() const { return domain_.dim(); }
  std::size_t curve_count() const { return curves_.size(); }
  bool in_domain(const Eigen::VectorXd& u) const { return domain_.contains(u); }
  /// True when some coordinate lies within `dist` of a breakpoint of either side.
  bool near_breakpoint(const Eigen::VectorXd& u, double dist) const;

  /// Ext_side(u; curve). Throws out_of_domain / nonpositive_extremal_length.
  double extremal_length(Side side, const Eigen::VectorXd& u, std::size_t curve) const;
  /// log Ext_I(u; g) - log Ext_II(u; g^sigma).
  double mismatch(const Eigen::VectorXd& u, std::size_t curve) const;
  Eigen::VectorXd mismatches(const Eigen::VectorXd& u) const;
  double height(const Eigen::VectorXd& u) const;
  /// (log Ext_side(u; g))_g.
  Eigen::VectorXd log_extremal_lengths(const Eigen::VectorXd& u, Side side) const;

  /// Same field with the two assignments exchanged.
  HeightField swapped_sides() const;

 private:
  ParamDomain domain_;
  AdmissibleCurveSet curves_;
  ExtremalLengthAssignment ext_I_;
  ExtremalLengthAssignment ext_II_;
};

constexpr double kDefaultFdStep = 1e-5;

/// Derivative of a vector-valued map along `direction` at u. Central
/// differences with displacement `h`, or second-order one-sided differences
/// when u +/- 2h*direction leaves the domain. Throws stencil_out_of_domain.
Eigen::VectorXd directional_fd(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
                               const ParamDomain& domain, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& direction, double h);

/// Gradient of H with per-coordinate step `step * max(1, |u_i|)`.
Eigen::VectorXd height_gradient_fd(const HeightField& f, const Eigen::VectorXd& u, double step = kDefaultFdStep);

/// Jacobian (curves x params) of u -> log Ext_side(u; .).
Eigen::MatrixXd log_ext_jacobian(const HeightField& f, const Eigen::VectorXd& u, Side side,
                                 double step = kDefaultFdStep);

/// (dm_delta)_u(v) for every curve delta. The displacement is scaled so that
/// its largest component is step * max(1, |u|_inf).
Eigen::VectorXd mismatch_directional_fd(const HeightField& f, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                        double step = kDefaultFdStep);

double height_directional_fd(const HeightField& f, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                             double step = kDefaultFdStep);

}  // namespace reflexive
