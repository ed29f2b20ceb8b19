#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reflexive/integer_matrix.hpp"

namespace reflexive {

enum class EdgeType { horizontal, vertical };

/// Discrete configuration datum C = (E, iota, R, tau, sigma).
///
/// Homology of the punctured surface is free of rank 2*genus + max(punctures-1, 0);
/// iota[e] gives the image of edge e in that fixed basis. All per-edge vectors
/// are indexed in the order of `edges`.
struct ConfigurationDatum {
  int genus = 0;
  int punctures = 0;
  std::vector<std::string> edges;
  std::vector<std::vector<long long>> iota;       // |E| vectors of length rank
  std::vector<std::vector<long long>> relations;  // generators of ker(iota_*), length |E| each
  std::vector<std::vector<double>> extra_linear_constraints;  // real equations on edge coordinates
  std::vector<EdgeType> tau;
  std::vector<std::size_t> sigma;  // sigma[e] = index of the paired edge
  std::optional<std::size_t> e0;   // distinguished horizontal edge; first horizontal when unset

  std::size_t rank() const;
  std::size_t edge_index(const std::string& name) const;
  /// Columns are iota(e); shape rank x |E|.
  IntMatrix iota_matrix() const;
  /// Rows are the relation generators; shape m x |E|.
  IntMatrix relation_matrix() const;
  /// e0 if set, otherwise the first horizontal edge. Throws e0_not_horizontal.
  std::size_t distinguished_edge() const;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  const ValidationCheck* find(const std::string& name) const;
};

/// Throws Error("malformed") when vector lengths are inconsistent; any other
/// defect is reported as a failed check.
ValidationReport validate_datum(const ConfigurationDatum& d);

/// Replaces the relations with an integer basis of ker(iota_*).
ConfigurationDatum complete_kernel(ConfigurationDatum d);

/// Real linear system on edge coordinates x_e, where z_e = x_e for horizontal
/// edges and z_e = i*x_e for vertical ones.
struct VCSpace {
  ConfigurationDatum datum;
  Eigen::MatrixXd constraints;  // rows: real equations A x = 0
  Eigen::MatrixXd basis;        // |E| x dim, columns span V_C
  std::size_t dim = 0;
};

VCSpace build_vc_space(const ConfigurationDatum& d);

/// Affine chart of the scale-fixed slice: x = offset + directions * p with
/// x_{e0} = 1. The open orthant x_e > 0 for every edge is the domain.
class SliceChart {
 public:
  using Guard = std::function<bool(const Eigen::VectorXd&)>;

  SliceChart(VCSpace space, std::size_t e0, Eigen::VectorXd offset, Eigen::MatrixXd directions,
             std::vector<std::string> params, std::vector<std::size_t> param_edges);

  const VCSpace& space() const { return space_; }
  const ConfigurationDatum& datum() const { return space_.datum; }
  std::size_t e0() const { return e0_; }
  std::size_t dim() const { return params_.size(); }
  const std::vector<std::string>& params() const { return params_; }
  /// Edge whose coordinate each parameter is.
  const std::vector<std::size_t>& param_edges() const { return param_edges_; }

  /// Real edge coordinates x_e of the slice point.
  Eigen::VectorXd embed(const Eigen::VectorXd& p) const;
  /// Complex edge periods z_e (x_e or i*x_e).
  Eigen::VectorXcd periods(const Eigen::VectorXd& p) const;
  /// Strict orthant test plus any extra guard.
  bool in_domain(const Eigen::VectorXd& p) const;
  /// Adds a family constraint (e.g. slit length below both heights).
  SliceChart with_guard(Guard guard) const;
  /// A strictly interior parameter point found by the feasibility solve.
  const Eigen::VectorXd& interior_point() const { return interior_; }

 private:
  friend SliceChart build_slice_chart(const ConfigurationDatum&, std::optional<std::size_t>);
  VCSpace space_;
  std::size_t e0_;
  Eigen::VectorXd offset_;
  Eigen::MatrixXd directions_;
  std::vector<std::string> params_;
  std::vector<std::size_t> param_edges_;
  std::vector<Guard> guards_;
  Eigen::VectorXd interior_;
};

/// Throws invalid_datum, e0_not_horizontal or empty_slice.
SliceChart build_slice_chart(const ConfigurationDatum& d, std::optional<std::size_t> e0 = std::nullopt);

/// Largest t such that offset + directions * p >= t componentwise for some p
/// (capped at 1). Returns t and the maximizing p.
std::pair<double, Eigen::VectorXd> max_min_coordinate(const Eigen::VectorXd& offset,
                                                      const Eigen::MatrixXd& directions);

}  // namespace reflexive
