#pragma once

#include <span>
#include <vector>

#include "ariis/sparse.hpp"

namespace ariis {

struct KrylovOptions {
  double rtol = 1e-8;
  int max_iterations = 2000;
  int restart = 150;
};

struct KrylovResult {
  int iterations = 0;
  double residual = 0.0;  ///< final ||b - A x|| / ||b||
};

/// Incomplete LU factorisation with the sparsity of A (no fill-in).
class Ilu0 {
 public:
  explicit Ilu0(const CsrMatrix& A);
  /// out = (LU)^{-1} in
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  CsrMatrix lu_;
  std::vector<int> diag_;
};

/// Right-preconditioned restarted GMRES (modified Gram-Schmidt, Givens
/// rotations). `x` holds the initial guess on entry. Throws
/// ConvergenceError if the relative residual does not reach `rtol`.
KrylovResult gmres(const CsrMatrix& A, std::span<const double> b, std::span<double> x, const Ilu0& M,
                   const KrylovOptions& options);

/// Row-equilibrates a copy of the system, builds ILU(0) and runs GMRES.
/// `x0` is an optional initial guess. A zero right-hand side with a zero
/// initial guess returns the zero vector without iterating.
std::vector<double> solve_linear(const CsrMatrix& A, std::span<const double> b, const KrylovOptions& options,
                                 std::span<const double> x0 = {}, KrylovResult* info = nullptr);

}  // namespace ariis
