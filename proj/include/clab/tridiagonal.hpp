#pragma once

#include <complex>
#include <span>
#include <vector>

namespace clab {

/// LU factorization with partial pivoting of a complex tridiagonal matrix
/// (second superdiagonal fill-in, as in LAPACK gttrf).
class TridiagonalLU {
 public:
  using cd = std::complex<double>;

  /// sub[i] = A(i+1, i), diag[i] = A(i, i), sup[i] = A(i, i+1).
  TridiagonalLU(std::span<const cd> sub, std::span<const cd> diag, std::span<const cd> sup);

  std::size_t size() const { return d_.size(); }
  /// Solves A x = b in place.
  void solve(std::span<cd> b) const;
  /// Solves A^H x = b in place, valid when A is complex symmetric (A^H = conj(A)).
  void solve_conj_symmetric(std::span<cd> b) const;

 private:
  std::vector<cd> dl_, d_, du_, du2_;
  std::vector<unsigned char> swapped_;
};

}  // namespace clab
