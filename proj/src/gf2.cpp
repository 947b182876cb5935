#include "thick/gf2.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace thick {

std::vector<int> gf2_add(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else if (b[j] < a[i]) {
      out.push_back(b[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + i, a.end());
  out.insert(out.end(), b.begin() + j, b.end());
  return out;
}

void Gf2Matrix::set_column(int c, std::vector<int> rows) {
  std::sort(rows.begin(), rows.end());
  std::vector<int> reduced;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    while (j < rows.size() && rows[j] == rows[i]) ++j;
    if ((j - i) % 2) reduced.push_back(rows[i]);
    i = j;
  }
  columns_[c] = std::move(reduced);
}

std::vector<int> Gf2Matrix::apply(const std::vector<int>& support) const {
  std::vector<int> hits;
  for (int c : support)
    hits.insert(hits.end(), columns_[c].begin(), columns_[c].end());
  std::sort(hits.begin(), hits.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    if ((j - i) % 2) out.push_back(hits[i]);
    i = j;
  }
  return out;
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t(cols_, rows_);
  for (int c = 0; c < cols_; ++c)
    for (int r : columns_[c]) t.columns_[r].push_back(c);
  return t;
}

std::size_t Gf2Matrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

int gf2_rank(const Gf2Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (static_cast<std::size_t>(m.rows()) + m.cols() <= 5000) return gf2_rank_dense(m);
  return gf2_rank_sparse(m);
}

int gf2_rank_dense(const Gf2Matrix& m) {
  const int words = (m.rows() + 63) / 64;
  // pivot row -> reduced column whose highest set bit is that row
  std::vector<std::vector<std::uint64_t>> basis(m.rows());
  int rank = 0;
  std::vector<std::uint64_t> v(words);
  for (int c = 0; c < m.cols(); ++c) {
    std::fill(v.begin(), v.end(), 0);
    for (int r : m.column(c)) v[r >> 6] |= std::uint64_t{1} << (r & 63);
    for (int w = words - 1; w >= 0;) {
      if (!v[w]) {
        --w;
        continue;
      }
      const int r = w * 64 + 63 - __builtin_clzll(v[w]);
      if (basis[r].empty()) {
        basis[r] = v;
        ++rank;
        break;
      }
      for (int i = 0; i <= w; ++i) v[i] ^= basis[r][i];
    }
  }
  return rank;
}

int gf2_rank_sparse(const Gf2Matrix& m) {
  // Column reduction keyed on the largest row index (the "low" entry).
  std::unordered_map<int, std::vector<int>> by_low;
  by_low.reserve(m.cols());
  int rank = 0;
  for (int c = 0; c < m.cols(); ++c) {
    std::vector<int> col = m.column(c);
    while (!col.empty()) {
      auto it = by_low.find(col.back());
      if (it == by_low.end()) break;
      col = gf2_add(col, it->second);
    }
    if (!col.empty()) {
      const int low = col.back();
      by_low.emplace(low, std::move(col));
      ++rank;
    }
  }
  return rank;
}

std::vector<std::vector<int>> gf2_kernel_basis(const Gf2Matrix& m) {
  const int R = m.rows(), C = m.cols();
  std::vector<std::vector<std::uint8_t>> a(R, std::vector<std::uint8_t>(C, 0));
  for (int c = 0; c < C; ++c)
    for (int r : m.column(c)) a[r][c] = 1;
  std::vector<int> pivot_col;
  int row = 0;
  for (int c = 0; c < C && row < R; ++c) {
    int p = -1;
    for (int r = row; r < R; ++r)
      if (a[r][c]) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[row]);
    for (int r = 0; r < R; ++r)
      if (r != row && a[r][c])
        for (int k = c; k < C; ++k) a[r][k] ^= a[row][k];
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<char> is_pivot(C, 0);
  for (int c : pivot_col) is_pivot[c] = 1;
  std::vector<std::vector<int>> basis;
  for (int f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    std::vector<int> v{f};
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      if (a[i][f]) v.push_back(pivot_col[i]);
    std::sort(v.begin(), v.end());
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace thick
