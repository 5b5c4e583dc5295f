#pragma once

// Dense real linear algebra and the support-selection operators used by the
// pursuit algorithms. Matrices are Eigen column-major doubles.

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dcsp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted set of distinct 1-based indices. Sorting on construction makes set
/// equality plain sequence equality.
class IndexSet {
 public:
  IndexSet() = default;
  /// Sorts the input. Throws std::invalid_argument on duplicates or zero.
  explicit IndexSet(std::vector<std::size_t> indices);
  IndexSet(std::initializer_list<std::size_t> indices)
      : IndexSet(std::vector<std::size_t>(indices)) {}

  /// {first, first+1, ..., last}
  static IndexSet range(std::size_t first, std::size_t last);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  std::size_t front() const { return indices_.front(); }
  std::size_t back() const { return indices_.back(); }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  bool contains(std::size_t index) const;
  bool includes(const IndexSet& other) const;
  IndexSet unite(const IndexSet& other) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// Index list with repeats allowed (the pooled local support estimates).
using IndexMultiset = std::vector<std::size_t>;

/// Relative threshold on the QR diagonal below which a system is rejected.
inline constexpr double kRankTolerance = 1e-10;

/// Coefficients c minimizing ||y - A c||_2. Throws RankDeficient when A has
/// more columns than rows or its smallest R diagonal is below
/// kRankTolerance times its largest.
Vector lstsq(const Matrix& a, const Vector& y);

/// y - A lstsq(A, y).
Vector resid(const Vector& y, const Matrix& a);

/// The K indices of the largest |v(i)|, smaller index first on ties.
IndexSet max_ind(const Vector& v, std::size_t k);

/// The K most frequent values in m, smaller value first on ties.
IndexSet max_occ(std::span<const std::size_t> m, std::size_t k);

Matrix column_submatrix(const Matrix& a, const IndexSet& s);

/// |A^T r| entrywise.
Vector correlate(const Matrix& a, const Vector& r);

/// acc(s_i) += |values_i| for each position of s (1-based into acc).
void scatter_abs_add(Vector& acc, const IndexSet& s, const Vector& values);

}  // namespace dcsp
