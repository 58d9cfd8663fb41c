#include "clab/tridiagonal.hpp"

#include <cmath>

#include "clab/error.hpp"

namespace clab {

TridiagonalLU::TridiagonalLU(std::span<const cd> sub, std::span<const cd> diag,
                             std::span<const cd> sup)
    : dl_(sub.begin(), sub.end()), d_(diag.begin(), diag.end()), du_(sup.begin(), sup.end()) {
  const std::size_t n = d_.size();
  if (n == 0) throw ArgumentError("tridiagonal: empty matrix");
  if (dl_.size() + 1 != n || du_.size() + 1 != n)
    throw ArgumentError("tridiagonal: off-diagonal length must be n - 1");
  du2_.assign(n > 2 ? n - 2 : 0, cd(0.0));
  swapped_.assign(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      if (d_[i] == cd(0.0)) throw NumericError("tridiagonal: singular matrix", static_cast<double>(i));
      const cd f = dl_[i] / d_[i];
      dl_[i] = f;
      d_[i + 1] -= f * du_[i];
    } else {
      // Swap rows i and i+1.
      const cd f = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = f;
      const cd t = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = t - f * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -f * du_[i + 1];
      }
      swapped_[i] = 1;
    }
  }
  if (d_[n - 1] == cd(0.0)) throw NumericError("tridiagonal: singular matrix", static_cast<double>(n - 1));
}

void TridiagonalLU::solve(std::span<cd> b) const {
  const std::size_t n = d_.size();
  if (b.size() != n) throw ArgumentError("tridiagonal: right-hand side size mismatch");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped_[i]) {
      const cd t = b[i];
      b[i] = b[i + 1];
      b[i + 1] = t - dl_[i] * b[i];
    } else {
      b[i + 1] -= dl_[i] * b[i];
    }
  }
  b[n - 1] /= d_[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
  for (std::size_t k = n > 2 ? n - 2 : 0; k-- > 0;)
    b[k] = (b[k] - du_[k] * b[k + 1] - du2_[k] * b[k + 2]) / d_[k];
}

void TridiagonalLU::solve_conj_symmetric(std::span<cd> b) const {
  for (auto& v : b) v = std::conj(v);
  solve(b);
  for (auto& v : b) v = std::conj(v);
}

}  // namespace clab
