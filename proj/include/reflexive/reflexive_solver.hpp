#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "reflexive/height_field.hpp"
#include "reflexive/hypothesis_audit.hpp"
#include "reflexive/parallel.hpp"

namespace reflexive {

enum class SolveMode { push_descent, gradient_descent };
enum class SolveStatus { reflexive, max_iters, stalled, left_domain };

std::string to_string(SolveMode m);
std::string to_string(SolveStatus s);

struct SolveOptions {
  double eps_reflexive = 1e-12;
  int max_iters = 10000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  double min_step = 1e-14;
  double fd_step = kDefaultFdStep;
  SolveMode mode = SolveMode::push_descent;

  void check() const;
};

struct TraceEntry {
  Eigen::VectorXd u;
  double height = 0.0;
  std::string curve;  // pushed curve, or "grad" / "" for the start point
  double step = 0.0;
};

struct SolveResult {
  Eigen::VectorXd u_star;
  double h_star = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  SolveStatus status = SolveStatus::stalled;
};

/// Greedy push-field descent: each iteration pushes the curve with the
/// largest |m| (first in curve order on ties) along its effective push field,
/// oriented downhill, with Armijo backtracking kept strictly inside the
/// domain. Accepted steps strictly decrease H. Throws out_of_domain for u0.
SolveResult push_descent(const HeightField& f, const PushFieldSpec& push, const Eigen::VectorXd& u0,
                         const SolveOptions& opts = {});

/// Steepest descent on the finite-difference gradient, same line search.
SolveResult gradient_descent(const HeightField& f, const Eigen::VectorXd& u0, const SolveOptions& opts = {});

/// Dispatches on opts.mode.
SolveResult solve(const HeightField& f, const PushFieldSpec& push, const Eigen::VectorXd& u0,
                  const SolveOptions& opts = {});

/// Full-grid evaluation of m and H. Rows are grid points inside the domain,
/// ordered row-major with the last parameter varying fastest; each row holds
/// the parameters, one mismatch per curve, then H.
struct ScanTable {
  std::vector<std::string> param_names;
  std::vector<std::string> curve_names;
  std::size_t cols = 0;
  std::vector<double> data;
  std::size_t rows() const { return cols ? data.size() / cols : 0; }
  double at(std::size_t row, std::size_t col) const { return data[row * cols + col]; }
  std::size_t argmin_row = 0;
  double h_min = 0.0;
  Eigen::VectorXd argmin() const;
};

/// `resolution[i]` points per axis, equally spaced on [lo_i, hi_i] (a single
/// point sits at lo_i). Out-of-domain points are skipped. Throws
/// empty_grid_after_guard.
ScanTable grid_scan(const HeightField& f, const Box& box, const std::vector<int>& resolution,
                    Exec exec = Exec::parallel);

/// Header `param_1..param_k,m_<curve>...,H`; `%.17g` numbers, `\n` endings.
void write_scan_csv(std::ostream& os, const ScanTable& t);

struct CurveMatch {
  std::string curve;
  std::string partner;
  double ext_I = 0.0;
  double ext_II = 0.0;
  double residual = 0.0;      // |Ext_I(u; g) - Ext_II(u; g^sigma)|
  double abs_mismatch = 0.0;  // |m_g(u)|
};

struct ReflexiveCertificate {
  Eigen::VectorXd u;
  std::vector<CurveMatch> matches;
  double tol = 0.0;
  bool certified = false;
  double max_abs_mismatch() const;
};

/// Certified iff every |m_g(u)| <= tol. Throws out_of_domain.
ReflexiveCertificate certify_reflexive(const HeightField& f, const Eigen::VectorXd& u, double tol);

}  // namespace reflexive
