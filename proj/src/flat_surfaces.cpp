#include "reflexive/flat_surfaces.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <vector>

#include "reflexive/error.hpp"

namespace reflexive {

EuclideanCylinder::EuclideanCylinder(double circumference, double height) : w(circumference), h(height) {
  if (!(std::isfinite(w) && std::isfinite(h) && w > 0.0 && h > 0.0))
    throw Error("invalid_surface", "cylinder needs finite positive circumference and height");
}

double cylinder_extremal_length(const EuclideanCylinder& cyl) { return cyl.w / cyl.h; }

bool SlitDumbbellSurface::valid() const {
  return std::isfinite(b) && std::isfinite(c) && std::isfinite(ell) && ell > 0.0 && ell < std::min(b, c);
}

DumbbellCoreLengths dumbbell_core_extremal_lengths(const SlitDumbbellSurface& s) {
  const double hb = s.b - s.ell;
  const double hc = s.c - s.ell;
  if (!(hb > 0.0 && hc > 0.0) || !(s.ell >= 0.0))
    throw Error("degenerate_slit", "slit length must be below both torus heights");
  const auto l = dumbbell_closed_form(s.b, s.c, s.ell);
  return {l[0], l[1], l[2], l[3]};
}

DumbbellCoreLengths relabel_by_J(const DumbbellCoreLengths& l) { return {l.beta1, l.alpha1, l.beta2, l.alpha2}; }

bool StackedCylinderSurface::valid() const {
  const bool finite = std::isfinite(w) && std::isfinite(h1) && std::isfinite(h2) && std::isfinite(h3) &&
                      std::isfinite(t1) && std::isfinite(t2);
  return finite && w > 0.0 && h1 > 0.0 && h2 > 0.0 && h3 > 0.0 && t1 >= 0.0 && t1 < w && t2 >= 0.0 && t2 < w;
}

bool StackedCylinderSurface::sliced(double tol) const {
  return std::abs(w - 1.0) <= tol && std::abs(h1 + h2 + h3 - 1.0) <= tol;
}

double stacked_core_extremal_length(const StackedCylinderSurface& s) {
  if (!s.valid()) throw Error("invalid_surface", "stacked cylinders need positive heights and twists in [0, w)");
  // the union of the three cylinders is one flat cylinder of height h1+h2+h3
  return s.w / (s.h1 + s.h2 + s.h3);
}

double discrete_extremal_length_oracle(const EuclideanCylinder& cyl, int n) {
  if (n < 4) throw Error("invalid_argument", "grid density must be at least 4");
  const double shorter = std::min(cyl.w, cyl.h);
  const int cols = std::max(3, static_cast<int>(std::lround(n * cyl.w / shorter)));
  const int rows = std::max(1, static_cast<int>(std::lround(n * cyl.h / shorter)));
  const double dx = cyl.w / cols;
  const double dy = cyl.h / rows;
  const double g_vert = dx / dy;  // conductance of an edge along the height
  const double g_horiz = dy / dx;

  // unknown potentials at node rows 1..rows-1; row 0 held at 0, row `rows` at 1
  const int interior = rows - 1;
  const auto id = [cols](int r, int c) { return (r - 1) * cols + c; };
  const int size = interior * cols;
  if (size == 0) return cols * g_vert;  // single layer of vertical edges

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(size) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  for (int r = 1; r <= interior; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int i = id(r, c);
      double diag = 2.0 * g_horiz + 2.0 * g_vert;
      trip.emplace_back(i, id(r, (c + 1) % cols), -g_horiz);
      trip.emplace_back(i, id(r, (c + cols - 1) % cols), -g_horiz);
      if (r > 1) trip.emplace_back(i, id(r - 1, c), -g_vert);
      if (r < interior) trip.emplace_back(i, id(r + 1, c), -g_vert);
      else rhs(i) += g_vert * 1.0;
      trip.emplace_back(i, i, diag);
    }
  }
  Eigen::SparseMatrix<double> lap(size, size);
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
  if (solver.info() != Eigen::Success) throw Error("singular_system", "network Laplacian factorization failed");
  const Eigen::VectorXd phi = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !phi.allFinite())
    throw Error("singular_system", "network solve failed");

  // current leaving the bottom terminal through the first row of vertical edges
  double current = 0.0;
  for (int c = 0; c < cols; ++c) current += g_vert * phi(id(1, c));
  return current;
}

}  // namespace reflexive
