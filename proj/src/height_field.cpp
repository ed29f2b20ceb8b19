#include "reflexive/height_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "reflexive/error.hpp"

namespace reflexive {

std::string to_string(Side s) { return s == Side::I ? "I" : "II"; }

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form_dumbbell: return "closed_form_dumbbell";
    case Provenance::closed_form_stacked: return "closed_form_stacked";
    case Provenance::table: return "table";
    case Provenance::external: return "external";
  }
  return "external";
}

AdmissibleCurveSet AdmissibleCurveSet::with_identity_pairing(std::vector<std::string> names) {
  AdmissibleCurveSet s;
  s.pairing.resize(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) s.pairing[i] = i;
  s.curves = std::move(names);
  return s;
}

std::size_t AdmissibleCurveSet::index(const std::string& name) const {
  const auto it = std::find(curves.begin(), curves.end(), name);
  if (it == curves.end()) throw Error("unknown_curve", "curve '" + name + "' is not in the admissible set");
  return static_cast<std::size_t>(it - curves.begin());
}

void AdmissibleCurveSet::check() const {
  if (pairing.size() != curves.size()) throw Error("invalid_pairing", "one partner per curve expected");
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    if (pairing[i] >= curves.size() || pairing[pairing[i]] != i)
      throw Error("invalid_pairing", "pairing is not an involution at '" + curves[i] + "'");
  }
}

ExtremalLengthAssignment make_table_assignment(Side side, std::vector<std::vector<double>> axes,
                                               std::vector<std::vector<double>> values) {
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.size() < 2 || !std::is_sorted(a.begin(), a.end()) ||
        std::adjacent_find(a.begin(), a.end()) != a.end())
      throw Error("malformed", "table axes need at least two strictly increasing nodes");
    total *= a.size();
  }
  for (const auto& v : values) {
    if (v.size() != total) throw Error("malformed", "table values do not match the axis grid");
    for (double x : v)
      if (!(x > 0.0 && std::isfinite(x))) throw Error("nonpositive_extremal_length", "table entries must be > 0");
  }
  auto shared_axes = std::make_shared<const std::vector<std::vector<double>>>(axes);
  auto shared_values = std::make_shared<const std::vector<std::vector<double>>>(std::move(values));

  ExtremalLengthAssignment a;
  a.side = side;
  a.provenance = Provenance::table;
  a.breakpoints = axes;
  a.eval = [shared_axes, shared_values](const Eigen::VectorXd& u, std::size_t curve) {
    const auto& ax = *shared_axes;
    const auto& vals = shared_values->at(curve);
    const std::size_t k = ax.size();
    if (static_cast<std::size_t>(u.size()) != k) throw Error("out_of_domain", "table dimension mismatch");
    std::vector<std::size_t> cell(k);
    std::vector<double> frac(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& a_i = ax[i];
      const double x = u(static_cast<Eigen::Index>(i));
      if (!(x >= a_i.front() && x <= a_i.back())) throw Error("out_of_domain", "point outside the table");
      std::size_t j = static_cast<std::size_t>(std::upper_bound(a_i.begin(), a_i.end(), x) - a_i.begin());
      j = std::clamp<std::size_t>(j, 1, a_i.size() - 1) - 1;
      cell[i] = j;
      frac[i] = (x - a_i[j]) / (a_i[j + 1] - a_i[j]);
    }
    double acc = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << k); ++corner) {
      double weight = 1.0;
      std::size_t flat = 0;
      for (std::size_t i = 0; i < k; ++i) {
        const bool up = (corner >> i) & 1U;
        weight *= up ? frac[i] : 1.0 - frac[i];
        flat = flat * ax[i].size() + cell[i] + (up ? 1 : 0);
      }
      if (weight != 0.0) acc += weight * vals[flat];
    }
    return acc;
  };
  return a;
}

ParamDomain ParamDomain::box(std::vector<std::string> names, Eigen::VectorXd lower, Eigen::VectorXd upper) {
  ParamDomain d;
  d.lower_closed.assign(names.size(), false);
  d.names = std::move(names);
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  return d;
}

ParamDomain ParamDomain::from_chart(const SliceChart& chart) {
  const auto k = static_cast<Eigen::Index>(chart.dim());
  ParamDomain d = box(chart.params(), Eigen::VectorXd::Constant(k, -std::numeric_limits<double>::infinity()),
                      Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity()));
  d.extra = [chart](const Eigen::VectorXd& u) { return chart.in_domain(u); };
  return d;
}

bool ParamDomain::contains(const Eigen::VectorXd& u) const {
  if (u.size() != static_cast<Eigen::Index>(dim()) || !u.allFinite()) return false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const bool closed = !lower_closed.empty() && lower_closed[static_cast<std::size_t>(i)];
    if (closed ? !(u(i) >= lower(i)) : !(u(i) > lower(i))) return false;
    if (!(u(i) < upper(i))) return false;
  }
  return !extra || extra(u);
}

HeightField::HeightField(ParamDomain domain, AdmissibleCurveSet curves, ExtremalLengthAssignment ext_I,
                         ExtremalLengthAssignment ext_II)
    : domain_(std::move(domain)), curves_(std::move(curves)), ext_I_(std::move(ext_I)), ext_II_(std::move(ext_II)) {
  curves_.check();
  if (!ext_I_.eval || !ext_II_.eval) throw Error("invalid_argument", "both extremal-length assignments are required");
  if (domain_.lower.size() != static_cast<Eigen::Index>(domain_.dim()) ||
      domain_.upper.size() != static_cast<Eigen::Index>(domain_.dim()))
    throw Error("invalid_argument", "domain bounds must match the parameter count");
  ext_I_.side = Side::I;
  ext_II_.side = Side::II;
}

bool HeightField::near_breakpoint(const Eigen::VectorXd& u, double dist) const {
  for (const auto* a : {&ext_I_, &ext_II_}) {
    for (std::size_t i = 0; i < a->breakpoints.size() && i < static_cast<std::size_t>(u.size()); ++i)
      for (double b : a->breakpoints[i])
        if (std::abs(u(static_cast<Eigen::Index>(i)) - b) < dist) return true;
  }
  return false;
}

double HeightField::extremal_length(Side side, const Eigen::VectorXd& u, std::size_t curve) const {
  if (!in_domain(u)) throw Error("out_of_domain", "parameter point outside the field domain");
  const double v = assignment(side).eval(u, curve);
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error("nonpositive_extremal_length",
                "Ext_" + to_string(side) + "(u; " + curves_.curves.at(curve) + ") = " + std::to_string(v));
  return v;
}

double HeightField::mismatch(const Eigen::VectorXd& u, std::size_t curve) const {
  return std::log(extremal_length(Side::I, u, curve)) -
         std::log(extremal_length(Side::II, u, curves_.pairing.at(curve)));
}

Eigen::VectorXd HeightField::mismatches(const Eigen::VectorXd& u) const {
  Eigen::VectorXd m(static_cast<Eigen::Index>(curve_count()));
  for (std::size_t g = 0; g < curve_count(); ++g) m(static_cast<Eigen::Index>(g)) = mismatch(u, g);
  return m;
}

double HeightField::height(const Eigen::VectorXd& u) const { return mismatches(u).squaredNorm(); }

Eigen::VectorXd HeightField::log_extremal_lengths(const Eigen::VectorXd& u, Side side) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(curve_count()));
  for (std::size_t g = 0; g < curve_count(); ++g)
    out(static_cast<Eigen::Index>(g)) = std::log(extremal_length(side, u, g));
  return out;
}

HeightField HeightField::swapped_sides() const { return HeightField(domain_, curves_, ext_II_, ext_I_); }

Eigen::VectorXd directional_fd(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
                               const ParamDomain& domain, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& direction, double h) {
  if (!(h > 0.0)) throw Error("invalid_argument", "finite-difference step must be positive");
  const Eigen::VectorXd d = direction * h;
  const bool fwd = domain.contains(u + d) && domain.contains(u + 2.0 * d);
  const bool bwd = domain.contains(u - d) && domain.contains(u - 2.0 * d);
  if (fwd && bwd) return (g(u + d) - g(u - d)) / (2.0 * h);
  const Eigen::VectorXd g0 = g(u);
  // differences against g0 first, so a locally constant map gives exact zeros
  if (fwd) return (4.0 * (g(u + d) - g0) - (g(u + 2.0 * d) - g0)) / (2.0 * h);
  if (bwd) return ((g(u - 2.0 * d) - g0) - 4.0 * (g(u - d) - g0)) / (2.0 * h);
  throw Error("stencil_out_of_domain", "no finite-difference stencil fits inside the domain; reduce the step");
}

Eigen::VectorXd height_gradient_fd(const HeightField& f, const Eigen::VectorXd& u, double step) {
  if (!f.in_domain(u)) throw Error("out_of_domain", "gradient requested outside the field domain");
  const auto k = static_cast<Eigen::Index>(f.dim());
  Eigen::VectorXd grad(k);
  const auto h_of = [&f](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, f.height(x)); };
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    e(i) = 1.0;
    grad(i) = directional_fd(h_of, f.domain(), u, e, step * std::max(1.0, std::abs(u(i))))(0);
  }
  return grad;
}

Eigen::MatrixXd log_ext_jacobian(const HeightField& f, const Eigen::VectorXd& u, Side side, double step) {
  if (!f.in_domain(u)) throw Error("out_of_domain", "Jacobian requested outside the field domain");
  const auto k = static_cast<Eigen::Index>(f.dim());
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(f.curve_count()), k);
  const auto g = [&f, side](const Eigen::VectorXd& x) { return f.log_extremal_lengths(x, side); };
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    e(i) = 1.0;
    jac.col(i) = directional_fd(g, f.domain(), u, e, step * std::max(1.0, std::abs(u(i))));
  }
  return jac;
}

namespace {

double displacement_scale(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double step) {
  const double vmax = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  const double umax = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  return step * std::max(1.0, umax) / vmax;
}

}  // namespace

Eigen::VectorXd mismatch_directional_fd(const HeightField& f, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                        double step) {
  if (!f.in_domain(u)) throw Error("out_of_domain", "derivative requested outside the field domain");
  if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0)
    return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.curve_count()));
  const auto g = [&f](const Eigen::VectorXd& x) { return f.mismatches(x); };
  return directional_fd(g, f.domain(), u, v, displacement_scale(u, v, step));
}

double height_directional_fd(const HeightField& f, const Eigen::VectorXd& u, const Eigen::VectorXd& v, double step) {
  if (!f.in_domain(u)) throw Error("out_of_domain", "derivative requested outside the field domain");
  if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const auto g = [&f](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, f.height(x)); };
  return directional_fd(g, f.domain(), u, v, displacement_scale(u, v, step))(0);
}

}  // namespace reflexive
