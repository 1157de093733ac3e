#include "ariis/krylov.hpp"

#include <cmath>
#include <sstream>

#include "ariis/error.hpp"

namespace ariis {

Ilu0::Ilu0(const CsrMatrix& A) : lu_(A), diag_(A.rows, -1) {
  const int n = A.rows;
  for (int i = 0; i < n; ++i) {
    diag_[i] = lu_.find(i, i);
    if (diag_[i] < 0) throw SolverError("ILU(0): missing diagonal entry in row " + std::to_string(i));
  }
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int k = lu_.row_ptr[i]; k < lu_.row_ptr[i + 1]; ++k) pos[lu_.cols[k]] = k;
    for (int k = lu_.row_ptr[i]; k < diag_[i]; ++k) {
      const int j = lu_.cols[k];
      const double piv = lu_.values[diag_[j]];
      const double l = lu_.values[k] / piv;
      lu_.values[k] = l;
      for (int m = diag_[j] + 1; m < lu_.row_ptr[j + 1]; ++m) {
        const int p = pos[lu_.cols[m]];
        if (p >= 0) lu_.values[p] -= l * lu_.values[m];
      }
    }
    for (int k = lu_.row_ptr[i]; k < lu_.row_ptr[i + 1]; ++k) pos[lu_.cols[k]] = -1;
    if (lu_.values[diag_[i]] == 0.0) throw SolverError("ILU(0): zero pivot in row " + std::to_string(i));
  }
}

void Ilu0::apply(std::span<const double> in, std::span<double> out) const {
  const int n = lu_.rows;
  for (int i = 0; i < n; ++i) {
    double s = in[i];
    for (int k = lu_.row_ptr[i]; k < diag_[i]; ++k) s -= lu_.values[k] * out[lu_.cols[k]];
    out[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = out[i];
    for (int k = diag_[i] + 1; k < lu_.row_ptr[i + 1]; ++k) s -= lu_.values[k] * out[lu_.cols[k]];
    out[i] = s / lu_.values[diag_[i]];
  }
}

KrylovResult gmres(const CsrMatrix& A, std::span<const double> b, std::span<double> x, const Ilu0& M,
                   const KrylovOptions& options) {
  using namespace kernels;
  const std::size_t n = b.size();
  const int m = std::max(1, options.restart);
  const double bnorm = std::sqrt(dot_parallel(b, b));
  KrylovResult result;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return result;
  }

  std::vector<std::vector<double>> V(m + 1, std::vector<double>(n));
  std::vector<double> H(static_cast<std::size_t>(m + 1) * m, 0.0);
  std::vector<double> cs(m), sn(m), g(m + 1);
  std::vector<double> r(n), z(n), w(n);
  auto h = [&](int i, int j) -> double& { return H[static_cast<std::size_t>(j) * (m + 1) + i]; };

  int total = 0;
  double rel = 0.0;
  while (true) {
    spmv_parallel(A, x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = std::sqrt(dot_parallel(r, r));
    rel = beta / bnorm;
    if (rel <= options.rtol || total >= options.max_iterations) break;

    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < m && total < options.max_iterations; ++k, ++total) {
      M.apply(V[k], z);
      spmv_parallel(A, z, w);
      for (int i = 0; i <= k; ++i) {
        h(i, k) = dot_parallel(w, V[i]);
        axpy_parallel(-h(i, k), V[i], w);
      }
      h(k + 1, k) = std::sqrt(dot_parallel(w, w));
      if (h(k + 1, k) != 0.0) {
        for (std::size_t i = 0; i < n; ++i) V[k + 1][i] = w[i] / h(k + 1, k);
      }
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      const double d = std::hypot(h(k, k), h(k + 1, k));
      cs[k] = d == 0.0 ? 1.0 : h(k, k) / d;
      sn[k] = d == 0.0 ? 0.0 : h(k + 1, k) / d;
      h(k, k) = d;
      h(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) / bnorm <= options.rtol) {
        ++k;
        ++total;
        break;
      }
    }
    // y = H^{-1} g, x += M^{-1} V y
    std::vector<double> y(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= h(i, j) * y[j];
      y[i] = h(i, i) == 0.0 ? 0.0 : s / h(i, i);
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int j = 0; j < k; ++j) axpy_parallel(y[j], V[j], w);
    M.apply(w, z);
    axpy_parallel(1.0, z, x);
  }
  result.iterations = total;
  result.residual = rel;
  if (!(rel <= options.rtol)) {
    std::ostringstream msg;
    msg << "GMRES did not converge: relative residual " << rel << " after " << total << " iterations";
    throw ConvergenceError(msg.str(), total, rel);
  }
  return result;
}

std::vector<double> solve_linear(const CsrMatrix& A, std::span<const double> b, const KrylovOptions& options,
                                 std::span<const double> x0, KrylovResult* info) {
  const int n = A.rows;
  if (static_cast<int>(b.size()) != n) throw SolverError("right-hand side size does not match the operator");
  std::vector<double> x(n, 0.0);
  if (!x0.empty()) {
    if (static_cast<int>(x0.size()) != n) throw SolverError("initial guess size does not match the operator");
    x.assign(x0.begin(), x0.end());
  }
  CsrMatrix S = A;
  std::vector<double> rhs(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    double amax = 0.0;
    for (int k = S.row_ptr[i]; k < S.row_ptr[i + 1]; ++k) amax = std::max(amax, std::abs(S.values[k]));
    if (amax == 0.0) throw SolverError("singular operator: zero row " + std::to_string(i));
    const double s = 1.0 / amax;
    for (int k = S.row_ptr[i]; k < S.row_ptr[i + 1]; ++k) S.values[k] *= s;
    rhs[i] *= s;
  }
  const Ilu0 M(S);
  const KrylovResult r = gmres(S, rhs, x, M, options);
  if (info) *info = r;
  return x;
}

}  // namespace ariis
