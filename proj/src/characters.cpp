#include "reflexive/characters.hpp"

#include <Eigen/QR>
#include <cmath>

#include "reflexive/error.hpp"

namespace reflexive {
namespace {

constexpr double kTolPos = 1e-12;
constexpr double kTolRay = 1e-9;
constexpr double kUnitTol = 1e-12;

Eigen::MatrixXd iota_real(const ConfigurationDatum& d) {
  return d.iota_matrix().cast<double>().transpose();  // |E| x rank
}

}  // namespace

Complex Character::operator()(const std::vector<long long>& cls) const {
  if (static_cast<Eigen::Index>(cls.size()) != values.size())
    throw Error("dimension_mismatch", "homology class and character have different rank");
  Complex s = 0.0;
  for (std::size_t k = 0; k < cls.size(); ++k) s += static_cast<double>(cls[k]) * values(static_cast<Eigen::Index>(k));
  return s;
}

Eigen::VectorXcd period_coordinates(const Character& chi, const ConfigurationDatum& d) {
  if (chi.values.size() != static_cast<Eigen::Index>(d.rank()))
    throw Error("dimension_mismatch", "character rank " + std::to_string(chi.values.size()) +
                                          " != rank(Gamma) " + std::to_string(d.rank()));
  Eigen::VectorXcd p(static_cast<Eigen::Index>(d.edges.size()));
  for (std::size_t e = 0; e < d.edges.size(); ++e) p(static_cast<Eigen::Index>(e)) = chi(d.iota[e]);
  return p;
}

bool on_ray(Complex z, EdgeType type, bool conjugated) {
  Complex w = z;
  if (type == EdgeType::vertical) w = conjugated ? z * Complex(0.0, 1.0) : z * Complex(0.0, -1.0);
  return w.real() > kTolPos && std::abs(w.imag()) <= kTolRay * std::abs(w);
}

AdmissibilityResult check_admissible(const Character& chi_I, const Character& chi_II, const ConfigurationDatum& d,
                                     double tol) {
  if (!(tol > 0.0)) throw Error("invalid_argument", "tolerance must be positive");
  const Eigen::VectorXcd pI = period_coordinates(chi_I, d);
  const Eigen::VectorXcd pII = period_coordinates(chi_II, d);
  const std::size_t e0 = d.distinguished_edge();
  const Complex x0 = pI(static_cast<Eigen::Index>(e0));
  if (std::abs(x0) == 0.0) throw Error("zero_period_e0", "chi_I(iota(e0)) = 0, rotation undefined");

  AdmissibilityResult res;
  const double scale = std::max({1.0, pI.cwiseAbs().maxCoeff(), pII.cwiseAbs().maxCoeff()});
  const Complex zeta = x0 / std::abs(x0);
  res.zeta = zeta;
  const Complex y0 = pII(static_cast<Eigen::Index>(d.sigma[e0]));
  if (std::abs(y0) == 0.0) {
    res.violations.push_back({"C3", d.edges[e0], "chi_II(iota(sigma(e0))) = 0, reflection undefined"});
    return res;
  }
  const Complex kappa = (y0 / std::conj(x0)) / std::abs(y0 / std::conj(x0));
  res.kappa = kappa;

  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const auto ei = static_cast<Eigen::Index>(e);
    const auto si = static_cast<Eigen::Index>(d.sigma[e]);
    if (!on_ray(pI(ei) / zeta, d.tau[e]))
      res.violations.push_back({"C1", d.edges[e], "rotated side-I period off its ray"});
    if (!on_ray(zeta / kappa * pII(si), d.tau[e], true))
      res.violations.push_back({"C1", d.edges[e], "rotated side-II period off the conjugate ray"});
    if (std::abs(pII(si) - kappa * std::conj(pI(ei))) > tol * scale)
      res.violations.push_back({"C3", d.edges[e], "side-II period is not kappa * conj(side-I period)"});
  }
  for (std::size_t i = 0; i < d.relations.size(); ++i) {
    Complex sI = 0.0, sII = 0.0;
    for (std::size_t e = 0; e < d.edges.size(); ++e) {
      const double r = static_cast<double>(d.relations[i][e]);
      sI += r * pI(static_cast<Eigen::Index>(e));
      sII += r * pII(static_cast<Eigen::Index>(d.sigma[e]));
    }
    if (std::abs(sI) > tol * scale || std::abs(sII) > tol * scale)
      res.violations.push_back({"C2", "relation " + std::to_string(i), "closure sum does not vanish"});
  }
  return res;
}

AdmissiblePair make_admissible_pair(const Character& chi_I, const Character& chi_II,
                                    std::shared_ptr<const ConfigurationDatum> d, double tol) {
  const AdmissibilityResult r = check_admissible(chi_I, chi_II, *d, tol);
  if (!r.admissible()) {
    std::string msg;
    for (const auto& v : r.violations) msg += (msg.empty() ? "" : "; ") + v.condition + " at " + v.where;
    throw Error("not_admissible", msg);
  }
  return AdmissiblePair{chi_I, chi_II, *r.zeta, *r.kappa, std::move(d)};
}

AdmissiblePair normalize_pair(const AdmissiblePair& p) {
  const ConfigurationDatum& d = *p.datum;
  const Eigen::VectorXcd x = period_coordinates(p.chi_I, d);
  if (std::abs(x(static_cast<Eigen::Index>(d.distinguished_edge()))) == 0.0)
    throw Error("zero_period_e0", "chi_I(iota(e0)) = 0");
  if (std::abs(std::abs(p.zeta) - 1.0) > kUnitTol || std::abs(std::abs(p.kappa) - 1.0) > kUnitTol)
    throw Error("invalid_argument", "zeta and kappa must be unit complex numbers");

  AdmissiblePair out = p;
  out.chi_I.values = p.chi_I.values / p.zeta;
  out.chi_II.values = p.chi_II.values * (p.zeta / p.kappa);
  out.zeta = 1.0;
  out.kappa = 1.0;

  const Eigen::VectorXcd xI = period_coordinates(out.chi_I, d);
  const Eigen::VectorXcd xII = period_coordinates(out.chi_II, d);
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    if (!on_ray(xI(static_cast<Eigen::Index>(e)), d.tau[e]) ||
        !on_ray(xII(static_cast<Eigen::Index>(d.sigma[e])), d.tau[e], true))
      throw Error("not_in_norm_cone", "edge '" + d.edges[e] + "' leaves its ray after normalization");
  }
  return out;
}

Character character_from_periods(const Eigen::VectorXcd& periods, const ConfigurationDatum& d) {
  const Eigen::MatrixXd m = iota_real(d);
  if (periods.size() != m.rows()) throw Error("dimension_mismatch", "one period per edge expected");
  Character chi;
  if (m.cols() == 0) {
    chi.values.resize(0);
    if (periods.size() && periods.cwiseAbs().maxCoeff() > 0.0)
      throw Error("inconsistent_periods", "nonzero periods on trivial homology");
    return chi;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::VectorXd re = qr.solve(Eigen::VectorXd(periods.real()));
  const Eigen::VectorXd im = qr.solve(Eigen::VectorXd(periods.imag()));
  chi.values = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
  const double scale = std::max(1.0, periods.cwiseAbs().maxCoeff());
  const Eigen::VectorXcd back = m.cast<Complex>() * chi.values;
  if ((back - periods).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error("inconsistent_periods", "edge periods violate the closure relations");
  return chi;
}

AdmissiblePair pair_from_slice(const SliceChart& chart, const Eigen::VectorXd& params) {
  if (!chart.in_domain(params)) throw Error("out_of_domain", "slice parameters outside the open orthant/guard");
  const ConfigurationDatum& d = chart.datum();
  const Eigen::VectorXcd z = chart.periods(params);
  Eigen::VectorXcd zII(z.size());
  for (std::size_t e = 0; e < d.edges.size(); ++e)
    zII(static_cast<Eigen::Index>(d.sigma[e])) = std::conj(z(static_cast<Eigen::Index>(e)));
  AdmissiblePair p;
  p.datum = std::make_shared<const ConfigurationDatum>(d);
  p.chi_I = character_from_periods(z, d);
  p.chi_II = character_from_periods(zII, d);
  return p;
}

}  // namespace reflexive
