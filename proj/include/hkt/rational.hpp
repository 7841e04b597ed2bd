#pragma once

// Exact rational vectors and matrices on top of GMP.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hkt {

using Integer = mpz_class;
using Rational = mpq_class;
using QVector = std::vector<Rational>;

// Parses "p/q", "p" or a decimal integer; the result is canonicalized.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);
  static QMatrix from_rows(const std::vector<QVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QVector row(std::size_t i) const;
  QVector col(std::size_t j) const;

  QMatrix transpose() const;
  bool is_symmetric() const;
  bool is_integral() const;
  bool is_zero() const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QVector operator*(const QMatrix& a, const QVector& v);
  friend bool operator==(const QMatrix& a, const QMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Rational dot(const QVector& a, const QVector& b);
QVector scaled(const QVector& v, const Rational& s);
QVector add(const QVector& a, const QVector& b);
QVector sub(const QVector& a, const QVector& b);
bool is_zero(const QVector& v);

// Gaussian elimination over Q.
std::size_t rank(const QMatrix& m);
// Row-vector basis of {x : m x = 0}.
std::vector<QVector> kernel_basis(const QMatrix& m);
// Solves m x = rhs for square nonsingular m; throws DomainError otherwise.
QVector solve(const QMatrix& m, const QVector& rhs);
/// Any solution of a possibly rectangular system; nullopt when inconsistent.
std::optional<QVector> solve_any(const QMatrix& m, const QVector& rhs);
QMatrix inverse(const QMatrix& m);
Rational determinant(const QMatrix& m);

// Exact inertia (positive, negative, zero) of a symmetric rational matrix via
// symmetric congruence elimination.
struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  bool operator==(const Inertia&) const = default;
};
Inertia inertia(const QMatrix& symmetric);

// Multiplies by the lcm of denominators and divides by the gcd of numerators.
std::vector<Integer> primitive_integer_vector(const QVector& v);

}  // namespace hkt
