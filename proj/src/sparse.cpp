#include "ariis/sparse.hpp"

#include <algorithm>
#include <omp.h>

#include "ariis/error.hpp"

namespace ariis {

int CsrMatrix::find(int i, int j) const {
  const auto begin = cols.begin() + row_ptr[i];
  const auto end = cols.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return static_cast<int>(it - cols.begin());
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> diag) {
  CsrMatrix A;
  A.rows = static_cast<int>(diag.size());
  A.row_ptr.resize(diag.size() + 1);
  for (int i = 0; i <= A.rows; ++i) A.row_ptr[i] = i;
  A.cols.resize(diag.size());
  for (int i = 0; i < A.rows; ++i) A.cols[i] = i;
  A.values.assign(diag.begin(), diag.end());
  return A;
}

BlockPattern::BlockPattern(const TetMesh& mesh, int block) : block_(block) {
  if (block < 1) throw SolverError("block size must be positive");
  const int nv = static_cast<int>(mesh.num_vertices());
  std::vector<std::vector<int>> nbr(nv);
  for (const auto& c : mesh.cells()) {
    for (int a : c) {
      for (int b : c) nbr[a].push_back(b);
    }
  }
  for (auto& n : nbr) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  row_ptr_.assign(static_cast<std::size_t>(nv) * block + 1, 0);
  for (int v = 0; v < nv; ++v) {
    for (int i = 0; i < block; ++i) {
      const int row = v * block + i;
      row_ptr_[row + 1] = row_ptr_[row] + static_cast<int>(nbr[v].size()) * block;
    }
  }
  cols_.resize(row_ptr_.back());
  for (int v = 0; v < nv; ++v) {
    for (int i = 0; i < block; ++i) {
      int k = row_ptr_[v * block + i];
      for (int u : nbr[v]) {
        for (int j = 0; j < block; ++j) cols_[k++] = u * block + j;
      }
    }
  }
  cells_.assign(mesh.cells().begin(), mesh.cells().end());
  offsets_.resize(cells_.size() * 16);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int a = 0; a < 4; ++a) {
      const auto& n = nbr[cells_[c][a]];
      for (int b = 0; b < 4; ++b) {
        offsets_[16 * c + 4 * a + b] =
            static_cast<int>(std::lower_bound(n.begin(), n.end(), cells_[c][b]) - n.begin());
      }
    }
  }
}

CsrMatrix BlockPattern::make_matrix() const {
  CsrMatrix A;
  A.rows = rows();
  A.row_ptr = row_ptr_;
  A.cols = cols_;
  A.values.assign(cols_.size(), 0.0);
  return A;
}

namespace kernels {

namespace {
constexpr std::ptrdiff_t kChunk = 2048;
}

void spmv_serial(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) s += A.values[k] * x[A.cols[k]];
    y[i] = s;
  }
}

void spmv_parallel(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
  const int* rp = A.row_ptr.data();
  const int* ci = A.cols.data();
  const double* va = A.values.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int k = rp[i]; k < rp[i + 1]; ++k) s += va[k] * x[ci[k]];
    y[i] = s;
  }
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot_parallel(std::span<const double> a, std::span<const double> b) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  const std::ptrdiff_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
    const std::ptrdiff_t end = std::min(n, (c + 1) * kChunk);
    double s = 0.0;
    for (std::ptrdiff_t i = c * kChunk; i < end; ++i) s += a[i] * b[i];
    partial[c] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

void axpy_parallel(double alpha, std::span<const double> x, std::span<double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace kernels

}  // namespace ariis
