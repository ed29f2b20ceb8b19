#include "reflexive/hypothesis_audit.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "reflexive/error.hpp"

namespace reflexive {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string fmt_point(const Eigen::VectorXd& u) {
  std::ostringstream os;
  os.precision(10);
  os << '(';
  for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u(i);
  os << ')';
  return os.str();
}

struct RankInfo {
  std::size_t rank = 0;
  double sigma_min = 0.0;
  double norm = 0.0;
};

RankInfo rank_info(const Eigen::MatrixXd& j, double rank_tol) {
  RankInfo r;
  r.norm = j.size() ? j.norm() : 0.0;
  if (j.size() == 0) return r;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  const auto& s = svd.singularValues();
  const double cutoff = rank_tol * std::max(1.0, s(0));
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) >= cutoff) ++r.rank;
  r.sigma_min = s(s.size() - 1);
  return r;
}

double relative_change(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace

void PushFieldSpec::check(const HeightField& f) const {
  if (fields.size() != f.curve_count() || incidence.size() != f.curve_count())
    throw Error("invalid_push_spec", "one push field and one incidence set per curve required");
  for (std::size_t g = 0; g < incidence.size(); ++g) {
    if (std::find(incidence[g].begin(), incidence[g].end(), g) == incidence[g].end())
      throw Error("invalid_push_spec", "incidence set of '" + f.curves().curves[g] + "' must contain the curve");
    for (auto d : incidence[g])
      if (d >= f.curve_count()) throw Error("invalid_push_spec", "incidence set names an unknown curve");
    if (!fields[g]) throw Error("invalid_push_spec", "missing push field");
  }
}

Eigen::VectorXd PushFieldSpec::base(const Eigen::VectorXd& u, std::size_t curve) const { return fields.at(curve)(u); }

Eigen::VectorXd PushFieldSpec::effective(const HeightField& f, const Eigen::VectorXd& u, std::size_t curve) const {
  Eigen::VectorXd v = base(u, curve);
  if (weighting == PushWeighting::mismatch) v *= f.mismatch(u, curve);
  return v;
}

PushFieldSpec coordinate_scaling_push(const HeightField& f, PushWeighting weighting, double sign) {
  if (f.curve_count() > f.dim())
    throw Error("invalid_push_spec", "coordinate scaling needs at least as many parameters as curves");
  PushFieldSpec p;
  p.weighting = weighting;
  p.description = "coordinate_scaling";
  for (std::size_t g = 0; g < f.curve_count(); ++g) {
    const auto i = static_cast<Eigen::Index>(g);
    p.fields.push_back([i, sign](const Eigen::VectorXd& u) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(u.size());
      v(i) = sign * u(i);
      return v;
    });
    p.incidence.push_back({g});
  }
  return p;
}

Eigen::VectorXd Ray::at(double t) const {
  Eigen::VectorXd u = base;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const int pw = power.empty() ? 1 : power[static_cast<std::size_t>(i)];
    u(i) += slope(i) * std::pow(t, pw);
  }
  return u;
}

std::vector<Ray> default_rays(const HeightField& f, const Eigen::VectorXd& reference) {
  const ParamDomain& d = f.domain();
  std::vector<Ray> rays;
  const auto k = static_cast<Eigen::Index>(d.dim());
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& name = d.names[static_cast<std::size_t>(i)];
    const bool closed = !d.lower_closed.empty() && d.lower_closed[static_cast<std::size_t>(i)];
    auto make = [&](std::string label, double base_i, double slope_i, int pw) {
      Ray r{std::move(label), reference, Eigen::VectorXd::Zero(k), std::vector<int>(static_cast<std::size_t>(k), 1)};
      r.base(i) = base_i;
      r.slope(i) = slope_i;
      r.power[static_cast<std::size_t>(i)] = pw;
      rays.push_back(std::move(r));
    };
    if (std::isfinite(d.lower(i)) && !closed)
      make(name + "->lower", d.lower(i), reference(i) - d.lower(i), 1);
    if (std::isfinite(d.upper(i)))
      make(name + "->upper", d.upper(i), reference(i) - d.upper(i), 1);
    else
      make(name + "->inf", 0.0, reference(i), -1);
  }
  return rays;
}

std::vector<Eigen::VectorXd> quasi_random_samples(const HeightField& f, const Box& box, std::size_t count,
                                                  std::uint64_t seed) {
  const auto k = static_cast<Eigen::Index>(f.dim());
  std::vector<Eigen::VectorXd> out;
  if (k == 0) {
    if (f.in_domain(Eigen::VectorXd())) out.emplace_back();
    return out;
  }
  if (k > static_cast<Eigen::Index>(std::size(kPrimes)))
    throw Error("invalid_argument", "quasi-random sampling supports at most 20 parameters");
  if (box.lo.size() != k || box.hi.size() != k) throw Error("invalid_argument", "sampling box dimension mismatch");
  std::mt19937_64 gen(seed);
  Eigen::VectorXd shift(k);
  for (Eigen::Index i = 0; i < k; ++i) shift(i) = unit_from_bits(gen());

  const std::size_t max_tries = std::max<std::size_t>(count * 1000, 1000);
  for (std::uint64_t n = 1; out.size() < count && n <= max_tries; ++n) {
    Eigen::VectorXd u(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      double x = radical_inverse(n, kPrimes[i]) + shift(i);
      x -= std::floor(x);
      u(i) = box.lo(i) + x * (box.hi(i) - box.lo(i));
    }
    const double clearance = 8.0 * kDefaultFdStep * std::max(1.0, u.cwiseAbs().maxCoeff());
    if (f.in_domain(u) && !f.near_breakpoint(u, clearance)) out.push_back(std::move(u));
  }
  return out;
}

std::string to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    case Hypothesis::H3: return "H3";
  }
  return "H1";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const Evidence* AuditReport::witness() const {
  for (const auto& e : evidence)
    if (e.witness) return &e;
  return nullptr;
}

AuditReport audit_regularity(const HeightField& f, const std::vector<Eigen::VectorXd>& samples,
                             const RegularityOptions& opts) {
  if (samples.empty()) throw Error("no_samples", "regularity audit needs at least one sample");
  const std::size_t dim = f.dim();

  struct Outcome {
    RankInfo side[2];
    double stability[2] = {0.0, 0.0};
    Eigen::MatrixXd jac[2];
  };
  std::vector<Outcome> outcomes(samples.size());
  for_each_index(samples.size(), opts.exec, [&](std::size_t s) {
    if (!f.in_domain(samples[s])) throw Error("out_of_domain", "sample " + fmt_point(samples[s]) + " outside domain");
    for (int k = 0; k < 2; ++k) {
      const Side side = k == 0 ? Side::I : Side::II;
      const Eigen::MatrixXd j = log_ext_jacobian(f, samples[s], side, opts.step);
      const Eigen::MatrixXd j_half = log_ext_jacobian(f, samples[s], side, opts.step / 2.0);
      outcomes[s].side[k] = rank_info(j, opts.rank_tol);
      outcomes[s].stability[k] = relative_change(j, j_half);
      outcomes[s].jac[k] = j;
    }
  });

  AuditReport rep;
  rep.hypothesis = Hypothesis::H1;
  rep.thresholds = {{"rank_tol", opts.rank_tol}, {"fd_step", opts.step}, {"stability_tol", opts.stability_tol},
                    {"required_rank", static_cast<double>(dim)}};
  bool failed = false;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Outcome& o = outcomes[s];
    Evidence ev;
    ev.point = samples[s];
    for (int k = 0; k < 2; ++k) {
      const std::string side = k == 0 ? "I" : "II";
      ev.quantities.emplace_back("rank_" + side, static_cast<double>(o.side[k].rank));
      ev.quantities.emplace_back("sigma_min_" + side, o.side[k].sigma_min);
      ev.quantities.emplace_back("jacobian_norm_" + side, o.side[k].norm);
      ev.quantities.emplace_back("stability_" + side, o.stability[k]);
      if (o.jac[k].size() <= 16)
        for (Eigen::Index g = 0; g < o.jac[k].rows(); ++g)
          for (Eigen::Index i = 0; i < o.jac[k].cols(); ++i)
            ev.quantities.emplace_back("J_" + side + "[" + f.curves().curves[static_cast<std::size_t>(g)] + "," +
                                           f.domain().names[static_cast<std::size_t>(i)] + "]",
                                       o.jac[k](g, i));
    }
    std::string why;
    for (int k = 0; k < 2 && why.empty(); ++k) {
      const std::string side = k == 0 ? "I" : "II";
      if (o.side[k].rank < dim)
        why = "side " + side + " log-extremal-length map has rank " + std::to_string(o.side[k].rank) + " < dim " +
              std::to_string(dim);
      else if (o.stability[k] > opts.stability_tol)
        why = "side " + side + " Jacobian unstable under step halving (relative change " +
              fmt_num(o.stability[k]) + ")";
    }
    if (!why.empty()) {
      ev.note = why;
      if (!failed) {
        ev.witness = true;
        rep.message = why + " at " + fmt_point(samples[s]);
      }
      failed = true;
    }
    rep.evidence.push_back(std::move(ev));
  }

  if (failed) {
    rep.verdict = Verdict::fail;
  } else {
    const auto opaque = [](Provenance p) { return p == Provenance::table || p == Provenance::external; };
    if (dim > 0 && (opaque(f.assignment(Side::I).provenance) || opaque(f.assignment(Side::II).provenance))) {
      rep.verdict = Verdict::inconclusive;
      rep.message = "full rank and step-stable at all samples; C1 regularity of table/external assignments "
                    "cannot be certified from difference quotients";
    } else {
      rep.verdict = Verdict::pass;
      rep.message = dim == 0 ? "zero-dimensional slice: immersion condition holds vacuously"
                             : "both log-extremal-length maps have full rank at every sample";
    }
  }
  return rep;
}

AuditReport audit_degeneration(const HeightField& f, const std::vector<Ray>& rays, const DegenerationOptions& opts) {
  if (rays.empty()) throw Error("no_samples", "degeneration audit needs at least one ray");
  if (opts.steps < 2 || !(opts.depth > 0.0 && opts.depth < 1.0))
    throw Error("invalid_argument", "need steps >= 2 and depth in (0, 1)");

  AuditReport rep;
  rep.hypothesis = Hypothesis::H2;
  rep.thresholds = {{"blow_threshold", opts.blow_threshold}, {"depth", opts.depth},
                    {"steps", static_cast<double>(opts.steps)}};
  const auto tail = static_cast<std::size_t>((opts.steps + 1) / 2);
  bool any_fail = false, any_inconclusive = false;

  for (const Ray& ray : rays) {
    std::vector<double> maxabs;
    Eigen::VectorXd last;
    Eigen::VectorXd last_m;
    double last_t = 1.0;
    for (int k = 0; k < opts.steps; ++k) {
      const double t = std::pow(opts.depth, static_cast<double>(k) / (opts.steps - 1));
      const Eigen::VectorXd u = ray.at(t);
      if (!f.in_domain(u))
        throw Error("ray_exits_domain", "ray '" + ray.name + "' leaves the domain at t = " + fmt_num(t));
      last_m = f.mismatches(u);
      maxabs.push_back(last_m.size() ? last_m.cwiseAbs().maxCoeff() : 0.0);
      last = u;
      last_t = t;
    }
    bool increasing = true;
    for (std::size_t k = maxabs.size() - tail + 1; k < maxabs.size(); ++k)
      if (!(maxabs[k] > maxabs[k - 1])) increasing = false;
    const bool blown = maxabs.back() > opts.blow_threshold;

    Evidence ev;
    ev.point = last;
    ev.quantities.emplace_back("t", last_t);
    ev.quantities.emplace_back("max_abs_m", maxabs.back());
    for (std::size_t g = 0; g < f.curve_count(); ++g)
      ev.quantities.emplace_back("m_" + f.curves().curves[g], last_m(static_cast<Eigen::Index>(g)));
    if (blown && increasing) {
      ev.note = "ray '" + ray.name + "': pass";
    } else if (increasing) {
      ev.note = "ray '" + ray.name + "': inconclusive (increasing but below threshold at sampled depth)";
      any_inconclusive = true;
    } else {
      ev.note = "ray '" + ray.name + "': fail (max |m| stays bounded along the ray)";
      if (!any_fail) {
        ev.witness = true;
        rep.message = ev.note + " at " + fmt_point(last);
      }
      any_fail = true;
    }
    rep.evidence.push_back(std::move(ev));
  }
  rep.notes.emplace_back("coverage", "only the listed rays are probed; escaping sequences in general are not");
  if (any_fail) {
    rep.verdict = Verdict::fail;
  } else if (any_inconclusive) {
    rep.verdict = Verdict::inconclusive;
    rep.message = "mismatch grows along every ray but some stay below the blow-up threshold";
  } else {
    rep.verdict = Verdict::pass;
    rep.message = "max |m| blows up along every ray";
  }
  return rep;
}

AuditReport audit_pushability(const HeightField& f, const PushFieldSpec& push,
                              const std::vector<Eigen::VectorXd>& samples, const PushabilityOptions& opts) {
  if (samples.empty()) throw Error("no_samples", "pushability audit needs at least one sample");
  push.check(f);
  const std::size_t nc = f.curve_count();

  struct CurveCheck {
    bool active = false;
    double m = 0.0;
    double base_derivative = 0.0;
    Eigen::VectorXd d;  // dm_delta(W_g) for all delta
    double lhs = 0.0, rhs = 0.0;
    std::string failure;
  };
  std::vector<std::vector<CurveCheck>> outcomes(samples.size(), std::vector<CurveCheck>(nc));

  for_each_index(samples.size(), opts.exec, [&](std::size_t s) {
    const Eigen::VectorXd& u = samples[s];
    const Eigen::VectorXd m = f.mismatches(u);
    for (std::size_t g = 0; g < nc; ++g) {
      CurveCheck& c = outcomes[s][g];
      c.m = m(static_cast<Eigen::Index>(g));
      if (!(std::abs(c.m) > opts.margin)) continue;
      c.active = true;
      c.base_derivative =
          mismatch_directional_fd(f, u, push.base(u, g), opts.step)(static_cast<Eigen::Index>(g));
      c.d = mismatch_directional_fd(f, u, push.effective(f, u, g), opts.step);
      const double dg = c.d(static_cast<Eigen::Index>(g));
      const auto& inc = push.incidence[g];
      c.lhs = std::abs(c.m) * std::abs(dg);
      for (std::size_t delta = 0; delta < nc; ++delta) {
        if (delta == g) continue;
        const double dd = c.d(static_cast<Eigen::Index>(delta));
        if (std::find(inc.begin(), inc.end(), delta) != inc.end())
          c.rhs += std::abs(m(static_cast<Eigen::Index>(delta))) * std::abs(dd);
        else if (!(std::abs(dd) < opts.margin) && c.failure.empty())
          c.failure = "P2: push field of '" + f.curves().curves[g] + "' moves non-incident '" +
                      f.curves().curves[delta] + "'";
      }
      if (!((c.m > 0 ? 1.0 : -1.0) * dg < 0.0))
        c.failure = "P1: sign(m) * dm(V) = " + fmt_num((c.m > 0 ? 1.0 : -1.0) * dg) + " is not negative for '" +
                    f.curves().curves[g] + "'";
      else if (c.failure.empty() && !(c.lhs > c.rhs))
        c.failure = "P3: dominant term does not exceed incident cross terms for '" + f.curves().curves[g] + "'";
    }
  });

  AuditReport rep;
  rep.hypothesis = Hypothesis::H3;
  rep.thresholds = {{"margin", opts.margin}, {"fd_step", opts.step}};
  double max_bound = 0.0;
  bool failed = false;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    Evidence ev;
    ev.point = samples[s];
    std::string why;
    for (std::size_t g = 0; g < nc; ++g) {
      const CurveCheck& c = outcomes[s][g];
      const std::string& name = f.curves().curves[g];
      ev.quantities.emplace_back("m_" + name, c.m);
      if (!c.active) continue;
      ev.quantities.emplace_back("dm_" + name + "(V_" + name + ")", c.base_derivative);
      ev.quantities.emplace_back("dm_" + name + "(W_" + name + ")", c.d(static_cast<Eigen::Index>(g)));
      ev.quantities.emplace_back("p3_lhs_" + name, c.lhs);
      ev.quantities.emplace_back("p3_rhs_" + name, c.rhs);
      for (auto delta : push.incidence[g]) max_bound = std::max(max_bound, std::abs(c.d(static_cast<Eigen::Index>(delta))));
      if (why.empty() && !c.failure.empty()) why = c.failure;
    }
    if (!why.empty()) {
      ev.note = why;
      if (!failed) {
        ev.witness = true;
        rep.message = why + " at " + fmt_point(samples[s]);
      }
      failed = true;
    }
    rep.evidence.push_back(std::move(ev));
  }
  rep.thresholds.emplace_back("p2_max_observed_bound", max_bound);
  rep.notes.emplace_back("p2_uniformity", "inconclusive");
  rep.notes.emplace_back("weighting", push.weighting == PushWeighting::mismatch ? "mismatch" : "none");
  rep.verdict = failed ? Verdict::fail : Verdict::pass;
  if (!failed) rep.message = "(P1)-(P3) hold at every sample with |m| above the margin";
  return rep;
}

}  // namespace reflexive
