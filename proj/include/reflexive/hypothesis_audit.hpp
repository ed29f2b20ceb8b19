#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reflexive/height_field.hpp"
#include "reflexive/parallel.hpp"

namespace reflexive {

/// How a base push field V_g is turned into the field actually followed.
/// `mismatch` uses m_g(u) * V_g(u), which points toward m_g = 0 from both
/// sides whenever V_g strictly decreases m_g. `none` uses V_g as given.
enum class PushWeighting { none, mismatch };

struct PushFieldSpec {
  using Field = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  std::vector<Field> fields;                      // base V_g, one per curve
  std::vector<std::vector<std::size_t>> incidence;  // I(g), must contain g
  PushWeighting weighting = PushWeighting::mismatch;
  std::string description;

  /// Throws Error("invalid_push_spec") on size mismatch or g not in I(g).
  void check(const HeightField& f) const;
  Eigen::VectorXd base(const Eigen::VectorXd& u, std::size_t curve) const;
  Eigen::VectorXd effective(const HeightField& f, const Eigen::VectorXd& u, std::size_t curve) const;
};

/// V_g = sign * u_i d/du_i with curve g matched to coordinate i = g.
PushFieldSpec coordinate_scaling_push(const HeightField& f, PushWeighting weighting = PushWeighting::mismatch,
                                      double sign = 1.0);

/// Boundary-approach path u_i(t) = base_i + slope_i * t^power_i, t in (0, 1].
/// power +1 approaches base as t -> 0; power -1 runs off to infinity.
struct Ray {
  std::string name;
  Eigen::VectorXd base;
  Eigen::VectorXd slope;
  std::vector<int> power;
  Eigen::VectorXd at(double t) const;
};

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Default rays for a box-like domain: one per finite lower/upper facet
/// (approached linearly from `reference`) and one per coordinate toward
/// +infinity where the upper bound is infinite.
std::vector<Ray> default_rays(const HeightField& f, const Eigen::VectorXd& reference);

/// Shifted Halton points in `box`, filtered by the domain guard and kept away
/// from assignment breakpoints. Deterministic in `seed`.
std::vector<Eigen::VectorXd> quasi_random_samples(const HeightField& f, const Box& box, std::size_t count,
                                                  std::uint64_t seed);

enum class Hypothesis { H1, H2, H3 };
enum class Verdict { pass, fail, inconclusive };

std::string to_string(Hypothesis h);
std::string to_string(Verdict v);

using Quantities = std::vector<std::pair<std::string, double>>;

struct Evidence {
  Eigen::VectorXd point;
  Quantities quantities;
  std::string note;
  bool witness = false;
};

struct AuditReport {
  Hypothesis hypothesis = Hypothesis::H1;
  Verdict verdict = Verdict::inconclusive;
  Quantities thresholds;
  std::vector<Evidence> evidence;
  std::optional<std::uint64_t> seed;
  std::string message;
  std::vector<std::pair<std::string, std::string>> notes;

  /// First evidence entry flagged as a witness, if any.
  const Evidence* witness() const;
};

struct RegularityOptions {
  double rank_tol = 1e-6;
  double step = kDefaultFdStep;
  double stability_tol = 1e-4;  // relative change allowed when the step is halved
  Exec exec = Exec::parallel;
};

/// (R1)-(R2): both log-extremal-length Jacobians have full column rank at
/// every sample and their finite differences are step-stable.
AuditReport audit_regularity(const HeightField& f, const std::vector<Eigen::VectorXd>& samples,
                             const RegularityOptions& opts = {});

struct DegenerationOptions {
  double blow_threshold = 5.0;
  int steps = 20;
  double depth = 1e-2;  // smallest sampled t
};

/// Sampled escape along each ray: max_g |m_g| must blow past the threshold and
/// be increasing over the second half of the samples.
AuditReport audit_degeneration(const HeightField& f, const std::vector<Ray>& rays,
                               const DegenerationOptions& opts = {});

struct PushabilityOptions {
  double margin = 1e-6;
  double step = kDefaultFdStep;
  Exec exec = Exec::parallel;
};

/// (P1)-(P3) at every sample for every curve with |m_g| > margin.
AuditReport audit_pushability(const HeightField& f, const PushFieldSpec& push,
                              const std::vector<Eigen::VectorXd>& samples, const PushabilityOptions& opts = {});

}  // namespace reflexive
