#include "reflexive/homology_config.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "reflexive/error.hpp"

namespace reflexive {
namespace {

constexpr double kRankTol = 1e-9;
constexpr double kInteriorTol = 1e-9;

std::size_t real_rank(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > kRankTol * s(0)) ++r;
  return r;
}

struct Rref {
  Eigen::MatrixXd r;
  std::vector<Eigen::Index> pivots;  // pivot column of row i
};

// Gauss-Jordan with partial pivoting; the last `rhs_cols` columns are never
// chosen as pivots.
Rref rref(Eigen::MatrixXd m, Eigen::Index rhs_cols = 0) {
  Rref out;
  const double scale = m.size() ? std::max(1.0, m.cwiseAbs().maxCoeff()) : 1.0;
  const double tol = kRankTol * scale;
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < m.cols() - rhs_cols && row < m.rows(); ++c) {
    Eigen::Index best = row;
    for (Eigen::Index r = row + 1; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > std::abs(m(best, c))) best = r;
    if (std::abs(m(best, c)) <= tol) {
      m.col(c).tail(m.rows() - row).setZero();
      continue;
    }
    m.row(row).swap(m.row(best));
    m.row(row) /= m(row, c);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      const double f = m(r, c);
      if (f != 0.0) m.row(r) -= f * m.row(row);
    }
    m(row, c) = 1.0;
    out.pivots.push_back(c);
    ++row;
  }
  out.r = std::move(m);
  return out;
}

Eigen::MatrixXd constraint_matrix(const ConfigurationDatum& d) {
  const auto n = static_cast<Eigen::Index>(d.edges.size());
  std::vector<Eigen::RowVectorXd> rows;
  for (const auto& rel : d.relations) {
    // real part sums horizontal coordinates, imaginary part vertical ones
    Eigen::RowVectorXd re = Eigen::RowVectorXd::Zero(n), im = Eigen::RowVectorXd::Zero(n);
    for (Eigen::Index e = 0; e < n; ++e) {
      const double r = static_cast<double>(rel[static_cast<std::size_t>(e)]);
      if (d.tau[static_cast<std::size_t>(e)] == EdgeType::horizontal)
        re(e) = r;
      else
        im(e) = r;
    }
    if (!re.isZero()) rows.push_back(re);
    if (!im.isZero()) rows.push_back(im);
  }
  for (const auto& c : d.extra_linear_constraints)
    rows.push_back(Eigen::Map<const Eigen::RowVectorXd>(c.data(), n));
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = rows[i];
  return a;
}

void require_structure(const ConfigurationDatum& d) {
  auto fail = [](const std::string& m) { throw Error("malformed", m); };
  if (d.genus < 0 || d.punctures < 0) fail("genus and punctures must be nonnegative");
  const std::size_t n = d.edges.size();
  const std::size_t r = d.rank();
  if (d.iota.size() != n) fail("iota must have one vector per edge");
  for (const auto& v : d.iota)
    if (v.size() != r) fail("iota vectors must have length rank(Gamma) = " + std::to_string(r));
  for (const auto& v : d.relations)
    if (v.size() != n) fail("relation vectors must have length |E|");
  for (const auto& v : d.extra_linear_constraints)
    if (v.size() != n) fail("extra linear constraints must have length |E|");
  if (d.tau.size() != n) fail("tau must have one entry per edge");
  if (d.sigma.size() != n) fail("sigma must have one entry per edge");
  for (auto s : d.sigma)
    if (s >= n) fail("sigma maps to an unknown edge");
  if (d.e0 && *d.e0 >= n) fail("e0 is not an edge");
}

}  // namespace

std::size_t ConfigurationDatum::rank() const {
  return static_cast<std::size_t>(2 * genus + std::max(punctures - 1, 0));
}

std::size_t ConfigurationDatum::edge_index(const std::string& name) const {
  const auto it = std::find(edges.begin(), edges.end(), name);
  if (it == edges.end()) throw Error("malformed", "unknown edge '" + name + "'");
  return static_cast<std::size_t>(it - edges.begin());
}

IntMatrix ConfigurationDatum::iota_matrix() const {
  IntMatrix a(static_cast<Eigen::Index>(rank()), static_cast<Eigen::Index>(edges.size()));
  for (std::size_t e = 0; e < edges.size(); ++e)
    for (std::size_t k = 0; k < rank(); ++k)
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(e)) = iota[e][k];
  return a;
}

IntMatrix ConfigurationDatum::relation_matrix() const {
  IntMatrix r(static_cast<Eigen::Index>(relations.size()), static_cast<Eigen::Index>(edges.size()));
  for (std::size_t i = 0; i < relations.size(); ++i)
    for (std::size_t e = 0; e < edges.size(); ++e)
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e)) = relations[i][e];
  return r;
}

std::size_t ConfigurationDatum::distinguished_edge() const {
  if (e0) {
    if (tau.at(*e0) != EdgeType::horizontal)
      throw Error("e0_not_horizontal", "edge '" + edges.at(*e0) + "' is vertical");
    return *e0;
  }
  for (std::size_t e = 0; e < tau.size(); ++e)
    if (tau[e] == EdgeType::horizontal) return e;
  throw Error("e0_not_horizontal", "datum has no horizontal edge");
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate_datum(const ConfigurationDatum& d) {
  require_structure(d);
  ValidationReport rep;
  const std::size_t n = d.edges.size();
  auto add = [&](std::string name, bool ok, std::string msg) {
    rep.checks.push_back({std::move(name), ok, ok ? std::string("ok") : std::move(msg)});
  };

  {
    std::set<std::string> seen(d.edges.begin(), d.edges.end());
    add("edges_unique", seen.size() == n && n > 0, "edge labels must be unique and nonempty");
  }
  {
    std::vector<bool> hit(n, false);
    bool ok = true;
    for (auto s : d.sigma) {
      if (hit[s]) ok = false;
      hit[s] = true;
    }
    add("sigma_bijection", ok, "sigma is not a permutation of E");
  }
  {
    std::string bad;
    for (std::size_t e = 0; e < n; ++e)
      if (d.tau[d.sigma[e]] != d.tau[e]) {
        bad = d.edges[e];
        break;
      }
    add("tau_sigma_compat", bad.empty(), "tau(sigma(" + bad + ")) != tau(" + bad + ")");
  }
  {
    const SmithForm s = smith_normal_form(d.iota_matrix());
    const bool full = s.rank() == d.rank();
    const bool unit = std::all_of(s.invariant_factors.begin(), s.invariant_factors.end(),
                                  [](long long f) { return f == 1; });
    std::ostringstream msg;
    msg << "iota spans rank " << s.rank() << " of " << d.rank() << " with invariant factors";
    for (auto f : s.invariant_factors) msg << ' ' << f;
    add("iota_generates", full && unit, msg.str());
  }
  {
    const IntMatrix a = d.iota_matrix();
    std::string bad;
    for (std::size_t i = 0; i < d.relations.size() && bad.empty(); ++i) {
      for (Eigen::Index k = 0; k < a.rows(); ++k) {
        long long sum = 0;
        for (std::size_t e = 0; e < n; ++e) sum += d.relations[i][e] * a(k, static_cast<Eigen::Index>(e));
        if (sum != 0) {
          bad = std::to_string(i);
          break;
        }
      }
    }
    add("relations_in_kernel", bad.empty(), "relation " + bad + " is not in ker(iota_*)");
  }
  {
    const std::size_t expected = n - integer_rank(d.iota_matrix());
    const IntMatrix r = d.relation_matrix();
    const SmithForm s = smith_normal_form(r);
    const bool unit = std::all_of(s.invariant_factors.begin(), s.invariant_factors.end(),
                                  [](long long f) { return f == 1; });
    add("relations_span_kernel", s.rank() == expected && unit,
        "relations have rank " + std::to_string(s.rank()) + " (need " + std::to_string(expected) +
            ")" + (unit ? "" : " and span a proper sublattice"));
  }
  if (d.e0) {
    add("e0_horizontal", d.tau[*d.e0] == EdgeType::horizontal, "e0 must be horizontal");
  }
  return rep;
}

ConfigurationDatum complete_kernel(ConfigurationDatum d) {
  require_structure(d);
  const IntMatrix k = integer_kernel_basis(d.iota_matrix());
  d.relations.clear();
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    std::vector<long long> r(static_cast<std::size_t>(k.rows()));
    for (Eigen::Index e = 0; e < k.rows(); ++e) r[static_cast<std::size_t>(e)] = k(e, c);
    d.relations.push_back(std::move(r));
  }
  return d;
}

VCSpace build_vc_space(const ConfigurationDatum& d) {
  const ValidationReport rep = validate_datum(d);
  if (!rep.ok()) {
    std::string names;
    for (const auto& c : rep.checks)
      if (!c.passed) names += (names.empty() ? "" : ", ") + c.name;
    throw Error("invalid_datum", "failed checks: " + names);
  }
  VCSpace v;
  v.datum = d;
  v.constraints = constraint_matrix(d);
  const auto n = static_cast<Eigen::Index>(d.edges.size());
  const std::size_t rank = real_rank(v.constraints);
  v.dim = static_cast<std::size_t>(n) - rank;

  const Rref red = rref(v.constraints);
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (auto c : red.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  if (red.pivots.size() == rank) {
    v.basis.resize(n, static_cast<Eigen::Index>(v.dim));
    Eigen::Index col = 0;
    for (Eigen::Index f = 0; f < n; ++f) {
      if (is_pivot[static_cast<std::size_t>(f)]) continue;
      Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
      b(f) = 1.0;
      for (std::size_t i = 0; i < red.pivots.size(); ++i) b(red.pivots[i]) = -red.r(static_cast<Eigen::Index>(i), f);
      v.basis.col(col++) = b;
    }
  } else {
    // ill-conditioned elimination; fall back to the SVD null space
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v.constraints, Eigen::ComputeFullV);
    v.basis = svd.matrixV().rightCols(static_cast<Eigen::Index>(v.dim));
  }
  return v;
}

SliceChart::SliceChart(VCSpace space, std::size_t e0, Eigen::VectorXd offset, Eigen::MatrixXd directions,
                       std::vector<std::string> params, std::vector<std::size_t> param_edges)
    : space_(std::move(space)),
      e0_(e0),
      offset_(std::move(offset)),
      directions_(std::move(directions)),
      params_(std::move(params)),
      param_edges_(std::move(param_edges)) {}

Eigen::VectorXd SliceChart::embed(const Eigen::VectorXd& p) const {
  if (p.size() != static_cast<Eigen::Index>(dim()))
    throw Error("out_of_domain", "expected " + std::to_string(dim()) + " slice parameters");
  if (dim() == 0) return offset_;
  return offset_ + directions_ * p;
}

Eigen::VectorXcd SliceChart::periods(const Eigen::VectorXd& p) const {
  const Eigen::VectorXd x = embed(p);
  Eigen::VectorXcd z(x.size());
  for (Eigen::Index e = 0; e < x.size(); ++e)
    z(e) = datum().tau[static_cast<std::size_t>(e)] == EdgeType::horizontal ? std::complex<double>(x(e), 0.0)
                                                                              : std::complex<double>(0.0, x(e));
  return z;
}

bool SliceChart::in_domain(const Eigen::VectorXd& p) const {
  if (p.size() != static_cast<Eigen::Index>(dim()) || !p.allFinite()) return false;
  const Eigen::VectorXd x = embed(p);
  for (Eigen::Index e = 0; e < x.size(); ++e)
    if (!(x(e) > 0.0)) return false;
  return std::all_of(guards_.begin(), guards_.end(), [&](const Guard& g) { return g(p); });
}

SliceChart SliceChart::with_guard(Guard guard) const {
  SliceChart c = *this;
  c.guards_.push_back(std::move(guard));
  return c;
}

SliceChart build_slice_chart(const ConfigurationDatum& d, std::optional<std::size_t> e0_override) {
  VCSpace space = build_vc_space(d);
  ConfigurationDatum with_e0 = d;
  if (e0_override) with_e0.e0 = e0_override;
  const std::size_t e0 = with_e0.distinguished_edge();

  const auto n = static_cast<Eigen::Index>(d.edges.size());
  const Eigen::Index m = space.constraints.rows();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(m + 1, n + 1);
  aug.topLeftCorner(m, n) = space.constraints;
  aug(m, static_cast<Eigen::Index>(e0)) = 1.0;
  aug(m, n) = 1.0;
  const Rref red = rref(aug, 1);
  for (Eigen::Index r = static_cast<Eigen::Index>(red.pivots.size()); r < red.r.rows(); ++r)
    if (std::abs(red.r(r, n)) > kRankTol)
      throw Error("empty_slice", "constraints force the e0 coordinate to vanish");

  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (auto c : red.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < red.pivots.size(); ++i) offset(red.pivots[i]) = red.r(static_cast<Eigen::Index>(i), n);

  std::vector<std::string> params;
  std::vector<std::size_t> param_edges;
  std::vector<Eigen::VectorXd> dirs;
  for (Eigen::Index f = 0; f < n; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(f) = 1.0;
    for (std::size_t i = 0; i < red.pivots.size(); ++i) b(red.pivots[i]) = -red.r(static_cast<Eigen::Index>(i), f);
    dirs.push_back(b);
    params.push_back("x_" + d.edges[static_cast<std::size_t>(f)]);
    param_edges.push_back(static_cast<std::size_t>(f));
  }
  Eigen::MatrixXd directions(n, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t j = 0; j < dirs.size(); ++j) directions.col(static_cast<Eigen::Index>(j)) = dirs[j];

  const auto [t, p] = max_min_coordinate(offset, directions);
  if (!(t > kInteriorTol))
    throw Error("empty_slice", "open orthant meets the slice in the empty set (max-min coordinate " +
                                   std::to_string(t) + ")");
  space.datum.e0 = e0;
  SliceChart chart(std::move(space), e0, std::move(offset), std::move(directions), std::move(params),
                   std::move(param_edges));
  chart.interior_ = p;
  return chart;
}

std::pair<double, Eigen::VectorXd> max_min_coordinate(const Eigen::VectorXd& offset,
                                                      const Eigen::MatrixXd& directions) {
  const Eigen::Index n = offset.size();
  const Eigen::Index k = directions.cols();
  if (k == 0) return {n ? offset.minCoeff() : 0.0, Eigen::VectorXd()};

  // maximize s subject to -D p+ + D p- + s <= x0 - tmin, s <= 1 - tmin, all vars >= 0,
  // where t = s + tmin; the origin is feasible because tmin < min(x0).
  const double tmin = std::min(offset.minCoeff(), 1.0) - 1.0;
  const Eigen::Index nvar = 2 * k + 1;
  const Eigen::Index rows = n + 1;
  const Eigen::Index cols = nvar + rows + 1;  // structural, slacks, rhs
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(rows + 1, cols);
  for (Eigen::Index e = 0; e < n; ++e) {
    tab.row(e).segment(0, k) = -directions.row(e);
    tab.row(e).segment(k, k) = directions.row(e);
    tab(e, 2 * k) = 1.0;
    tab(e, nvar + e) = 1.0;
    tab(e, cols - 1) = offset(e) - tmin;
  }
  tab(n, 2 * k) = 1.0;
  tab(n, nvar + n) = 1.0;
  tab(n, cols - 1) = 1.0 - tmin;
  tab(rows, 2 * k) = -1.0;  // objective row: z - s = 0

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) basis[static_cast<std::size_t>(r)] = nvar + r;

  constexpr double eps = 1e-12;
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index c = 0; c < cols - 1; ++c)
      if (tab(rows, c) < -eps) {
        enter = c;  // Bland: lowest index
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (tab(r, enter) <= eps) continue;
      const double ratio = tab(r, cols - 1) / tab(r, enter);
      if (ratio < best - eps ||
          (ratio <= best + eps && leave >= 0 &&
           basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave < 0) break;  // unbounded in p, objective already capped
    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double f = tab(r, enter);
      if (f != 0.0) tab.row(r) -= f * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(nvar);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index b = basis[static_cast<std::size_t>(r)];
    if (b < nvar) y(b) = tab(r, cols - 1);
  }
  Eigen::VectorXd p = y.segment(0, k) - y.segment(k, k);
  const double t = (offset + directions * p).minCoeff();
  return {t, p};
}

}  // namespace reflexive
