#pragma once

// Coordinates on the exterior powers of R^d.
//
// The basis of the k-th exterior power is {e_I} over k-subsets I of {1..d},
// ordered lexicographically. Every sign convention below follows from that
// order: the coordinate of a wedge u_1 ^ ... ^ u_k at e_I is the k x k minor
// on rows I of the matrix [u_1 | ... | u_k].

#include <Eigen/Dense>
#include <Eigen/LU>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "conelab/errors.hpp"
#include "conelab/linalg.hpp"

namespace conelab {

/// Strictly increasing list of 1-based indices.
class MultiIndex {
 public:
  MultiIndex() = default;
  /// Throws ArgumentError unless `entries` is strictly increasing in 1..d.
  MultiIndex(std::vector<int> entries, int d);

  const std::vector<int>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  int operator[](int i) const { return entries_[i]; }
  bool contains(int i) const;
  std::string to_string() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> entries_;
};

/// The ordered set of k-subsets of {1..d} with its inverse position map.
class MultiIndexTable {
 public:
  MultiIndexTable(int d, int k);

  int d() const { return d_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(list_.size()); }
  const std::vector<MultiIndex>& list() const { return list_; }
  const MultiIndex& operator[](int pos) const { return list_[pos]; }

  /// 0-based position of `index`; throws ArgumentError if absent.
  int position(const MultiIndex& index) const;

 private:
  int d_;
  int k_;
  std::vector<MultiIndex> list_;
  std::map<MultiIndex, int> positions_;
};

using TablePtr = std::shared_ptr<const MultiIndexTable>;

/// Shared, immutable table for (d, k). Throws ArgumentError unless d >= 2
/// and 1 <= k <= d.
TablePtr multi_index_table(int d, int k);

long long binomial(int n, int k);

template <typename Scalar = double>
struct ExteriorVector {
  TablePtr table;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coords;

  int degree() const { return table->k(); }
};

enum class CompoundKind { kMultiplicative, kAdditive };

template <typename Scalar = double>
struct CompoundMatrix {
  TablePtr table;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> entries;
  CompoundKind kind = CompoundKind::kMultiplicative;
};

namespace internal {

template <typename Derived>
typename Derived::Scalar minor_det(const Eigen::MatrixBase<Derived>& m,
                                   const MultiIndex& rows,
                                   const MultiIndex& cols) {
  using Scalar = typename Derived::Scalar;
  const int k = rows.size();
  if (k == 1) return m(rows[0] - 1, cols[0] - 1);
  if (k == 2) {
    return m(rows[0] - 1, cols[0] - 1) * m(rows[1] - 1, cols[1] - 1) -
           m(rows[0] - 1, cols[1] - 1) * m(rows[1] - 1, cols[0] - 1);
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) sub(r, c) = m(rows[r] - 1, cols[c] - 1);
  return sub.partialPivLu().determinant();
}

void check_degree(int d, int k);

}  // namespace internal

/// Plücker coordinates of the column span of P (d x k, full column rank).
/// Throws DegenerateInputError when P is rank-deficient at tolerance
/// 1e-9 * max(1, |P|).
template <typename Derived>
ExteriorVector<typename Derived::Scalar> plucker(
    const Eigen::MatrixBase<Derived>& P) {
  using Scalar = typename Derived::Scalar;
  const int d = static_cast<int>(P.rows());
  const int k = static_cast<int>(P.cols());
  internal::check_degree(d, k);
  if (rank_tol(P, 1e-9) < k) {
    throw DegenerateInputError("plucker: columns are linearly dependent");
  }
  auto table = multi_index_table(d, k);
  ExteriorVector<Scalar> out{table, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(
                                        table->size())};
  std::vector<int> all_cols(k);
  for (int i = 0; i < k; ++i) all_cols[i] = i + 1;
  const MultiIndex cols(std::move(all_cols), k);
  for (int pos = 0; pos < table->size(); ++pos) {
    out.coords(pos) = internal::minor_det(P, (*table)[pos], cols);
  }
  return out;
}

/// Induced linear map of g on the k-th exterior power: entry (I, J) is the
/// minor of g on rows I and columns J.
template <typename Derived>
CompoundMatrix<typename Derived::Scalar> compound_matrix(
    const Eigen::MatrixBase<Derived>& g, int k) {
  using Scalar = typename Derived::Scalar;
  if (g.rows() != g.cols()) {
    throw ArgumentError("compound_matrix: matrix must be square");
  }
  const int d = static_cast<int>(g.rows());
  internal::check_degree(d, k);
  auto table = multi_index_table(d, k);
  const int n = table->size();
  CompoundMatrix<Scalar> out{table, {}, CompoundKind::kMultiplicative};
  out.entries.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.entries(i, j) = internal::minor_det(g, (*table)[i], (*table)[j]);
  return out;
}

/// Infinitesimal generator of the compound representation:
/// compound_matrix(exp(tX), k) == exp(t * additive_compound(X, k)).
template <typename Derived>
CompoundMatrix<typename Derived::Scalar> additive_compound(
    const Eigen::MatrixBase<Derived>& X, int k) {
  using Scalar = typename Derived::Scalar;
  if (X.rows() != X.cols()) {
    throw ArgumentError("additive_compound: matrix must be square");
  }
  const int d = static_cast<int>(X.rows());
  internal::check_degree(d, k);
  auto table = multi_index_table(d, k);
  const int n = table->size();
  CompoundMatrix<Scalar> out{table, {}, CompoundKind::kAdditive};
  out.entries.setZero(n, n);
  for (int a = 0; a < n; ++a) {
    const MultiIndex& I = (*table)[a];
    for (int b = 0; b < n; ++b) {
      const MultiIndex& J = (*table)[b];
      if (a == b) {
        Scalar s(0);
        for (int i : I.entries()) s += X(i - 1, i - 1);
        out.entries(a, b) = s;
        continue;
      }
      // Exactly one row of I and one column of J are unmatched; the
      // remaining square block of the identity contributes +1 and the sign
      // comes from the positions of the unmatched pair.
      int row_pos = -1, col_pos = -1, unmatched = 0;
      for (int p = 0; p < k; ++p) {
        if (!J.contains(I[p])) {
          row_pos = p;
          ++unmatched;
        }
        if (!I.contains(J[p])) col_pos = p;
      }
      if (unmatched != 1) continue;
      const Scalar sign = ((row_pos + col_pos) % 2 == 0) ? Scalar(1) : Scalar(-1);
      out.entries(a, b) = sign * X(I[row_pos] - 1, J[col_pos] - 1);
    }
  }
  return out;
}

}  // namespace conelab
