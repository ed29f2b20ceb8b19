#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

namespace reflexive {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Smith normal form U * A * V = D with U, V unimodular and D diagonal with
/// d_1 | d_2 | ... | d_rank (all positive).
struct SmithForm {
  std::vector<long long> invariant_factors;  // nonzero diagonal entries, in order
  IntMatrix u;
  IntMatrix v;
  std::size_t rank() const { return invariant_factors.size(); }
};

/// Exact integer elimination. Throws Error("integer_overflow") if an
/// intermediate entry leaves the 64-bit range.
SmithForm smith_normal_form(const IntMatrix& a);

std::size_t integer_rank(const IntMatrix& a);

/// Basis of the saturated lattice {x in Z^n : A x = 0}, one basis vector per
/// column of the result.
IntMatrix integer_kernel_basis(const IntMatrix& a);

}  // namespace reflexive
