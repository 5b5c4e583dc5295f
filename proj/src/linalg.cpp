#include "dcsp/linalg.hpp"

#include "dcsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dcsp {

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (!indices_.empty() && indices_.front() == 0) {
    throw std::invalid_argument("IndexSet: indices are 1-based");
  }
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw std::invalid_argument("IndexSet: duplicate index");
  }
}

IndexSet IndexSet::range(std::size_t first, std::size_t last) {
  std::vector<std::size_t> v;
  if (last >= first) {
    v.resize(last - first + 1);
    std::iota(v.begin(), v.end(), first);
  }
  return IndexSet(std::move(v));
}

bool IndexSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool IndexSet::includes(const IndexSet& other) const {
  return std::includes(indices_.begin(), indices_.end(), other.indices_.begin(),
                       other.indices_.end());
}

IndexSet IndexSet::unite(const IndexSet& other) const {
  std::vector<std::size_t> out;
  out.reserve(size() + other.size());
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  IndexSet result;
  result.indices_ = std::move(out);
  return result;
}

Vector lstsq(const Matrix& a, const Vector& y) {
  if (a.rows() != y.size()) {
    throw std::invalid_argument("lstsq: row count does not match y");
  }
  const auto k = a.cols();
  if (k == 0) {
    return Vector(0);
  }
  if (k > a.rows()) {
    throw RankDeficient("lstsq: " + std::to_string(k) + " columns exceed " +
                        std::to_string(a.rows()) + " rows");
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  const Vector diag = qr.matrixR().diagonal().head(k).cwiseAbs();
  const double largest = diag.maxCoeff();
  const double smallest = diag.minCoeff();
  if (!(largest > 0.0) || smallest < kRankTolerance * largest) {
    throw RankDeficient("lstsq: effective rank below column count");
  }
  return qr.solve(y);
}

Vector resid(const Vector& y, const Matrix& a) {
  return y - a * lstsq(a, y);
}

IndexSet max_ind(const Vector& v, std::size_t k) {
  const auto n = static_cast<std::size_t>(v.size());
  if (k > n) {
    throw std::invalid_argument("max_ind: K exceeds vector length");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Strict total order: magnitude descending, then position ascending.
  auto before = [&v](std::size_t a, std::size_t b) {
    const double ma = std::abs(v[static_cast<Eigen::Index>(a)]);
    const double mb = std::abs(v[static_cast<Eigen::Index>(b)]);
    return ma > mb || (ma == mb && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    before);
  std::vector<std::size_t> picked(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  for (auto& i : picked) ++i;
  return IndexSet(std::move(picked));
}

IndexSet max_occ(std::span<const std::size_t> m, std::size_t k) {
  std::map<std::size_t, std::size_t> counts;
  for (auto i : m) ++counts[i];
  if (counts.size() < k) {
    throw InsufficientDistinct("max_occ: " + std::to_string(counts.size()) +
                               " distinct values, need " + std::to_string(k));
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranked(counts.begin(), counts.end());
  // map iteration is ascending by value, so a stable sort on count keeps the
  // smaller value first among equal counts.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t i = 0; i < k; ++i) picked.push_back(ranked[i].first);
  return IndexSet(std::move(picked));
}

Matrix column_submatrix(const Matrix& a, const IndexSet& s) {
  if (!s.empty() && s.back() > static_cast<std::size_t>(a.cols())) {
    throw IndexOutOfRange("column_submatrix: index " + std::to_string(s.back()) +
                          " beyond " + std::to_string(a.cols()) + " columns");
  }
  Matrix out(a.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(s[j] - 1));
  }
  return out;
}

Vector correlate(const Matrix& a, const Vector& r) {
  if (a.rows() != r.size()) {
    throw std::invalid_argument("correlate: dimension mismatch");
  }
  return (a.transpose() * r).cwiseAbs();
}

void scatter_abs_add(Vector& acc, const IndexSet& s, const Vector& values) {
  if (static_cast<std::size_t>(values.size()) != s.size()) {
    throw std::invalid_argument("scatter_abs_add: support and value lengths differ");
  }
  if (!s.empty() && s.back() > static_cast<std::size_t>(acc.size())) {
    throw IndexOutOfRange("scatter_abs_add: index beyond accumulator");
  }
  for (std::size_t j = 0; j < s.size(); ++j) {
    acc[static_cast<Eigen::Index>(s[j] - 1)] += std::abs(values[static_cast<Eigen::Index>(j)]);
  }
}

}  // namespace dcsp
