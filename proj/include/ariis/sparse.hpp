#pragma once

#include <array>
#include <span>
#include <vector>

#include "ariis/mesh.hpp"

namespace ariis {

/// Compressed sparse row matrix with sorted column indices per row.
struct CsrMatrix {
  int rows = 0;
  std::vector<int> row_ptr;
  std::vector<int> cols;
  std::vector<double> values;

  std::size_t nnz() const { return cols.size(); }
  /// Index of entry (i, j) in `values`, or -1.
  int find(int i, int j) const;
  /// Dense identity (for tests) and diagonal builders.
  static CsrMatrix diagonal(std::span<const double> diag);
};

/// Sparsity of a vertex-based P1 system with `block` unknowns per vertex,
/// interleaved (vertex-major). Every vertex couples to itself and to its
/// edge neighbours with a dense block.
class BlockPattern {
 public:
  BlockPattern() = default;
  BlockPattern(const TetMesh& mesh, int block);

  int block() const { return block_; }
  int rows() const { return static_cast<int>(row_ptr_.size()) - 1; }

  /// Fresh zero matrix with this pattern.
  CsrMatrix make_matrix() const;

  /// Index into CsrMatrix::values of entry (block*va + i, block*vb + j),
  /// where va, vb are the local vertices a, b of `cell`.
  int entry(int cell, int a, int b, int i, int j) const {
    const int row = block_ * cells_[cell][a] + i;
    return row_ptr_[row] + block_ * offsets_[16 * cell + 4 * a + b] + j;
  }

 private:
  int block_ = 1;
  std::vector<int> row_ptr_;
  std::vector<int> cols_;
  std::vector<Cell> cells_;
  std::vector<int> offsets_;  // per cell, 4x4 neighbour positions
};

/// Vector kernels. The *_serial versions are straightforward reference loops;
/// the parallel versions use OpenMP and are deterministic for any thread
/// count (row-wise products, fixed-size chunked reductions).
namespace kernels {

void spmv_serial(const CsrMatrix& A, std::span<const double> x, std::span<double> y);
void spmv_parallel(const CsrMatrix& A, std::span<const double> x, std::span<double> y);

double dot_serial(std::span<const double> a, std::span<const double> b);
double dot_parallel(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy_parallel(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace kernels

}  // namespace ariis
