#include "reflexive/reflexive_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "reflexive/error.hpp"

namespace reflexive {

std::string to_string(SolveMode m) { return m == SolveMode::push_descent ? "push_descent" : "gradient_descent"; }

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::reflexive: return "reflexive";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::left_domain: return "left_domain";
  }
  return "stalled";
}

void SolveOptions::check() const {
  if (!(eps_reflexive > 0.0 && max_iters > 0 && armijo_c > 0.0 && initial_step > 0.0 && min_step > 0.0 &&
        fd_step > 0.0 && backtrack > 0.0 && backtrack < 1.0))
    throw Error("invalid_argument", "solver options must be positive with backtrack in (0, 1)");
}

namespace {

struct LineSearch {
  bool accepted = false;
  Eigen::VectorXd u;
  double height = 0.0;
  double step = 0.0;
};

// Armijo backtracking along `dir` with slope `slope` = dH(dir) < 0. Trial
// points outside the domain are shrunk like rejected ones.
LineSearch backtrack(const HeightField& f, const Eigen::VectorXd& u, double h, const Eigen::VectorXd& dir,
                     double slope, const SolveOptions& opts) {
  LineSearch ls;
  for (double s = opts.initial_step; s >= opts.min_step; s *= opts.backtrack) {
    const Eigen::VectorXd trial = u + s * dir;
    if (!f.in_domain(trial)) continue;
    const double ht = f.height(trial);
    if (ht < h && ht <= h + opts.armijo_c * s * slope) {
      ls.accepted = true;
      ls.u = trial;
      ls.height = ht;
      ls.step = s;
      return ls;
    }
  }
  return ls;
}

SolveResult run(const HeightField& f, const PushFieldSpec* push, const Eigen::VectorXd& u0,
                const SolveOptions& opts) {
  opts.check();
  if (!f.in_domain(u0)) throw Error("out_of_domain", "start point outside the field domain");
  if (push) push->check(f);

  SolveResult res;
  Eigen::VectorXd u = u0;
  double h = f.height(u);
  res.trace.push_back({u, h, "", 0.0});
  res.status = SolveStatus::max_iters;

  for (int it = 0;; ++it) {
    if (h < opts.eps_reflexive) {
      res.status = SolveStatus::reflexive;
      break;
    }
    if (it >= opts.max_iters) {
      res.status = SolveStatus::max_iters;
      break;
    }
    Eigen::VectorXd dir;
    std::string label;
    double slope = 0.0;
    try {
      if (push) {
        const Eigen::VectorXd m = f.mismatches(u);
        Eigen::Index g = 0;
        m.cwiseAbs().maxCoeff(&g);  // first maximal index
        label = f.curves().curves[static_cast<std::size_t>(g)];
        dir = push->effective(f, u, static_cast<std::size_t>(g));
        slope = height_directional_fd(f, u, dir, opts.fd_step);
        if (slope > 0.0) {
          dir = -dir;
          slope = -slope;
        }
      } else {
        label = "grad";
        dir = -height_gradient_fd(f, u, opts.fd_step);
        slope = -dir.squaredNorm();
      }
    } catch (const Error& e) {
      if (e.code() != "stencil_out_of_domain" && e.code() != "out_of_domain") throw;
      res.status = SolveStatus::left_domain;
      break;
    }
    if (!(slope < 0.0) || !dir.allFinite()) {
      res.status = SolveStatus::stalled;
      break;
    }
    const LineSearch ls = backtrack(f, u, h, dir, slope, opts);
    if (!ls.accepted) {
      res.status = SolveStatus::stalled;
      break;
    }
    u = ls.u;
    h = ls.height;
    res.iterations = it + 1;
    res.trace.push_back({u, h, label, ls.step});
  }
  res.u_star = u;
  res.h_star = h;
  return res;
}

}  // namespace

SolveResult push_descent(const HeightField& f, const PushFieldSpec& push, const Eigen::VectorXd& u0,
                         const SolveOptions& opts) {
  return run(f, &push, u0, opts);
}

SolveResult gradient_descent(const HeightField& f, const Eigen::VectorXd& u0, const SolveOptions& opts) {
  return run(f, nullptr, u0, opts);
}

SolveResult solve(const HeightField& f, const PushFieldSpec& push, const Eigen::VectorXd& u0,
                  const SolveOptions& opts) {
  return opts.mode == SolveMode::push_descent ? push_descent(f, push, u0, opts) : gradient_descent(f, u0, opts);
}

Eigen::VectorXd ScanTable::argmin() const {
  const auto k = static_cast<Eigen::Index>(param_names.size());
  Eigen::VectorXd u(k);
  for (Eigen::Index i = 0; i < k; ++i) u(i) = at(argmin_row, static_cast<std::size_t>(i));
  return u;
}

ScanTable grid_scan(const HeightField& f, const Box& box, const std::vector<int>& resolution, Exec exec) {
  const std::size_t k = f.dim();
  if (resolution.size() != k || static_cast<std::size_t>(box.lo.size()) != k ||
      static_cast<std::size_t>(box.hi.size()) != k)
    throw Error("invalid_argument", "box and resolution must have one entry per parameter");
  std::size_t total = 1;
  for (int r : resolution) {
    if (r < 1) throw Error("invalid_argument", "resolution must be at least 1 per axis");
    total *= static_cast<std::size_t>(r);
  }
  const std::size_t nc = f.curve_count();
  const std::size_t cols = k + nc + 1;

  std::vector<double> dense(total * cols);
  std::vector<char> valid(total, 0);
  for_each_index(total, exec, [&](std::size_t flat) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(k));
    std::size_t rem = flat;
    for (std::size_t ii = k; ii-- > 0;) {
      const auto i = static_cast<Eigen::Index>(ii);
      const auto n = static_cast<std::size_t>(resolution[ii]);
      const std::size_t idx = rem % n;
      rem /= n;
      u(i) = n == 1 ? box.lo(i) : box.lo(i) + (box.hi(i) - box.lo(i)) * static_cast<double>(idx) / static_cast<double>(n - 1);
    }
    if (!f.in_domain(u)) return;
    double* row = dense.data() + flat * cols;
    const Eigen::VectorXd m = f.mismatches(u);
    for (std::size_t i = 0; i < k; ++i) row[i] = u(static_cast<Eigen::Index>(i));
    for (std::size_t g = 0; g < nc; ++g) row[k + g] = m(static_cast<Eigen::Index>(g));
    row[k + nc] = m.squaredNorm();
    valid[flat] = 1;
  });

  ScanTable t;
  t.param_names = f.domain().names;
  t.curve_names = f.curves().curves;
  t.cols = cols;
  bool any = false;
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (!valid[flat]) continue;
    const double* row = dense.data() + flat * cols;
    if (!any || row[cols - 1] < t.h_min) {
      t.h_min = row[cols - 1];
      t.argmin_row = t.rows();
      any = true;
    }
    t.data.insert(t.data.end(), row, row + cols);
  }
  if (!any) throw Error("empty_grid_after_guard", "no grid point lies inside the field domain");
  return t;
}

void write_scan_csv(std::ostream& os, const ScanTable& t) {
  for (std::size_t i = 0; i < t.param_names.size(); ++i) os << (i ? "," : "") << t.param_names[i];
  for (const auto& c : t.curve_names) os << ",m_" << c;
  os << ",H\n";
  char buf[32];
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", t.at(r, c));
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
}

double ReflexiveCertificate::max_abs_mismatch() const {
  double m = 0.0;
  for (const auto& c : matches) m = std::max(m, c.abs_mismatch);
  return m;
}

ReflexiveCertificate certify_reflexive(const HeightField& f, const Eigen::VectorXd& u, double tol) {
  if (!f.in_domain(u)) throw Error("out_of_domain", "certificate requested outside the field domain");
  ReflexiveCertificate c;
  c.u = u;
  c.tol = tol;
  for (std::size_t g = 0; g < f.curve_count(); ++g) {
    const std::size_t partner = f.curves().pairing[g];
    CurveMatch m;
    m.curve = f.curves().curves[g];
    m.partner = f.curves().curves[partner];
    m.ext_I = f.extremal_length(Side::I, u, g);
    m.ext_II = f.extremal_length(Side::II, u, partner);
    m.residual = std::abs(m.ext_I - m.ext_II);
    m.abs_mismatch = std::abs(f.mismatch(u, g));
    c.matches.push_back(std::move(m));
  }
  c.certified = c.max_abs_mismatch() <= tol;
  return c;
}

}  // namespace reflexive
