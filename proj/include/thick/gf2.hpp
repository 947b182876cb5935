#pragma once

#include <cstddef>
#include <vector>

namespace thick {

// A mod-2 chain or cochain: the sorted support of one dimension's faces.
struct Gf2Chain {
  int dim = 0;
  std::vector<int> support;

  std::size_t norm() const { return support.size(); }
  bool empty() const { return support.empty(); }
  bool operator==(const Gf2Chain&) const = default;
};

// Symmetric difference of two sorted supports.
std::vector<int> gf2_add(const std::vector<int>& a, const std::vector<int>& b);

// Sparse matrix over GF(2), stored column by column as sorted row lists.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(int rows, int cols) : rows_(rows), cols_(cols), columns_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<int>& column(int c) const { return columns_[c]; }
  // Replaces column c; entries are reduced mod 2 and sorted.
  void set_column(int c, std::vector<int> rows);

  // Product with the indicator vector of `support` (column ids).
  std::vector<int> apply(const std::vector<int>& support) const;
  Gf2Matrix transpose() const;
  std::size_t nonzeros() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::vector<int>> columns_;
};

int gf2_rank(const Gf2Matrix& m);
int gf2_rank_dense(const Gf2Matrix& m);
int gf2_rank_sparse(const Gf2Matrix& m);

// Basis of the kernel {x : m x = 0}, each vector given as a sorted support.
std::vector<std::vector<int>> gf2_kernel_basis(const Gf2Matrix& m);

}  // namespace thick
