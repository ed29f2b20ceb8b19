#include "reflexive/integer_matrix.hpp"

#include <cstdlib>
#include <utility>

#include "reflexive/error.hpp"

namespace reflexive {
namespace {

long long checked_mul(long long a, long long b) {
  long long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer_overflow", "product exceeds 64 bits");
  return r;
}

long long checked_sub(long long a, long long b) {
  long long r = 0;
  if (__builtin_sub_overflow(a, b, &r)) throw Error("integer_overflow", "difference exceeds 64 bits");
  return r;
}

// row_i -= q * row_j on every matrix in the pack (rows of d and u)
void row_axpy(IntMatrix& m, Eigen::Index i, Eigen::Index j, long long q) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) m(i, c) = checked_sub(m(i, c), checked_mul(q, m(j, c)));
}

void col_axpy(IntMatrix& m, Eigen::Index i, Eigen::Index j, long long q) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, i) = checked_sub(m(r, i), checked_mul(q, m(r, j)));
}

// Floor-free quotient so that |remainder| < |divisor|.
long long quotient(long long a, long long b) { return a / b; }

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  IntMatrix d = a;
  const Eigen::Index m = d.rows();
  const Eigen::Index n = d.cols();
  IntMatrix u = IntMatrix::Identity(m, m);
  IntMatrix v = IntMatrix::Identity(n, n);

  Eigen::Index t = 0;
  for (; t < std::min(m, n); ++t) {
    for (;;) {
      // smallest nonzero |entry| in the trailing block becomes the pivot
      Eigen::Index pr = -1, pc = -1;
      long long best = 0;
      for (Eigen::Index r = t; r < m; ++r)
        for (Eigen::Index c = t; c < n; ++c)
          if (d(r, c) != 0 && (pr < 0 || std::llabs(d(r, c)) < best)) {
            best = std::llabs(d(r, c));
            pr = r;
            pc = c;
          }
      if (pr < 0) goto done;

      d.row(t).swap(d.row(pr));
      u.row(t).swap(u.row(pr));
      d.col(t).swap(d.col(pc));
      v.col(t).swap(v.col(pc));

      bool clean = true;
      for (Eigen::Index r = t + 1; r < m; ++r) {
        if (d(r, t) == 0) continue;
        const long long q = quotient(d(r, t), d(t, t));
        row_axpy(d, r, t, q);
        row_axpy(u, r, t, q);
        if (d(r, t) != 0) clean = false;
      }
      for (Eigen::Index c = t + 1; c < n; ++c) {
        if (d(t, c) == 0) continue;
        const long long q = quotient(d(t, c), d(t, t));
        col_axpy(d, c, t, q);
        col_axpy(v, c, t, q);
        if (d(t, c) != 0) clean = false;
      }
      if (!clean) continue;

      // enforce divisibility of the remaining block by the pivot
      Eigen::Index bad_row = -1;
      for (Eigen::Index r = t + 1; r < m && bad_row < 0; ++r)
        for (Eigen::Index c = t + 1; c < n; ++c)
          if (d(r, c) % d(t, t) != 0) {
            bad_row = r;
            break;
          }
      if (bad_row < 0) break;
      // row_t += row_bad, then reduce again
      row_axpy(d, t, bad_row, -1);
      row_axpy(u, t, bad_row, -1);
    }
    if (d(t, t) < 0) {
      d.row(t) *= -1;
      u.row(t) *= -1;
    }
  }
done:
  SmithForm out;
  for (Eigen::Index i = 0; i < std::min(m, n); ++i) {
    if (d(i, i) == 0) break;
    out.invariant_factors.push_back(d(i, i));
  }
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

std::size_t integer_rank(const IntMatrix& a) { return smith_normal_form(a).rank(); }

IntMatrix integer_kernel_basis(const IntMatrix& a) {
  const SmithForm s = smith_normal_form(a);
  const auto r = static_cast<Eigen::Index>(s.rank());
  return s.v.rightCols(a.cols() - r);
}

}  // namespace reflexive
