#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace mgp {

using BigInt = mpz_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched ranks, units or otherwise incompatible operands.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Arguments outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Enumeration or oracle sweeps that did not settle within their ceilings.
class UnstableError : public Error {
 public:
  using Error::Error;
};

class ColourMonomial {
 public:
  ColourMonomial() = default;
  explicit ColourMonomial(std::size_t rank) : exps_(rank, 0) {}
  explicit ColourMonomial(std::vector<int> exps) : exps_(std::move(exps)) {}

  static ColourMonomial variable(std::size_t rank, std::size_t slot, int power = 1);

  std::size_t rank() const { return exps_.size(); }
  int operator[](std::size_t slot) const { return exps_[slot]; }
  int& operator[](std::size_t slot) { return exps_[slot]; }
  const std::vector<int>& exponents() const { return exps_; }

  bool is_unit() const;
  ColourMonomial inverse() const;
  int degree_over(const std::set<std::size_t>& slots) const;

  ColourMonomial& operator*=(const ColourMonomial& o);
  ColourMonomial& operator/=(const ColourMonomial& o);
  friend ColourMonomial operator*(ColourMonomial a, const ColourMonomial& b) { return a *= b; }

  auto operator<=>(const ColourMonomial&) const = default;
  bool operator==(const ColourMonomial&) const = default;

  // c1^2*c3^-1 style; "1" for the unit.
  std::string to_string() const;

 private:
  std::vector<int> exps_;
};

class ColourPolynomial {
 public:
  using TermMap = std::map<ColourMonomial, BigInt>;

  ColourPolynomial() = default;

  void add_term(const ColourMonomial& m, const BigInt& c);
  BigInt coefficient(const ColourMonomial& m) const;

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  ColourPolynomial& operator+=(const ColourPolynomial& o);
  ColourPolynomial& operator-=(const ColourPolynomial& o);
  friend ColourPolynomial operator+(ColourPolynomial a, const ColourPolynomial& b) { return a += b; }
  friend ColourPolynomial operator-(ColourPolynomial a, const ColourPolynomial& b) { return a -= b; }
  friend ColourPolynomial operator*(const ColourPolynomial& a, const ColourPolynomial& b);

  // Multiply every monomial by m and every coefficient by c.
  ColourPolynomial scaled(const ColourMonomial& m, const BigInt& c) const;

  bool operator==(const ColourPolynomial&) const = default;

  std::string to_string() const;

 private:
  TermMap terms_;
};

// Size of one internal q-step as a fraction of delta.
struct QUnit {
  std::int64_t num = 1;
  std::int64_t den = 1;

  static QUnit make(std::int64_t num, std::int64_t den);
  bool operator==(const QUnit&) const = default;
  std::string to_string() const;
};

class TruncatedSeries {
 public:
  using TermMap = std::map<int, ColourPolynomial>;

  TruncatedSeries() = default;
  TruncatedSeries(std::size_t rank, QUnit unit, int cap);

  static TruncatedSeries one(std::size_t rank, QUnit unit, int cap);
  static TruncatedSeries monomial(std::size_t rank, QUnit unit, int cap, int q, const ColourMonomial& m,
                                  const BigInt& c = 1);

  std::size_t rank() const { return rank_; }
  QUnit unit() const { return unit_; }
  int cap() const { return cap_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<int> min_exponent() const;

  // Terms above the cap are dropped silently.
  void add_term(int q, const ColourMonomial& m, const BigInt& c);
  // this += c * m * q^shift * other, keeping exponents <= cap.
  void add_shifted(const TruncatedSeries& other, int shift, const ColourMonomial& m, const BigInt& c = 1);

  ColourPolynomial coefficient(int q) const;

  // In-place this *= (1 - sign*m*q^e) and this /= (1 - sign*m*q^e). The division is the
  // truncated geometric series, valid when e > 0.
  void mul_binomial(int sign, const ColourMonomial& m, int e);
  void div_binomial(int sign, const ColourMonomial& m, int e);

  TruncatedSeries truncated(int new_cap) const;

  bool operator==(const TruncatedSeries&) const = default;

 private:
  std::size_t rank_ = 0;
  QUnit unit_;
  int cap_ = 0;
  TermMap terms_;
};

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
inline TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return series_add(a, b); }
inline TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return series_sub(a, b); }
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return series_mul(a, b); }

// prod_{k>=0} (1 - sign*m*q^(j+k*step)), exact through q^cap.
TruncatedSeries poch_expand(int sign, const ColourMonomial& m, int j, int step, int cap, QUnit unit = {});
// 1 / prod_{k>=0} (1 - sign*m*q^(j+k*step)); needs j >= 1.
TruncatedSeries inverse_poch_expand(int sign, const ColourMonomial& m, int j, int step, int cap, QUnit unit = {});

TruncatedSeries even_extract(const TruncatedSeries& s, const std::set<std::size_t>& slots);
TruncatedSeries sign_flip(const TruncatedSeries& s, const std::set<std::size_t>& slots);
TruncatedSeries specialize(const TruncatedSeries& s, const std::map<std::size_t, int>& assignment);
// Exact division of every coefficient by k; throws if some coefficient is not divisible.
TruncatedSeries divide_exact(const TruncatedSeries& s, long k);

// Relabel exponents into another q-unit. Refining multiplies exponents; coarsening needs
// every exponent to be divisible.
TruncatedSeries rescale_unit(const TruncatedSeries& s, QUnit target);

nlohmann::json to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const nlohmann::json& j);
nlohmann::json coefficient_to_json(const BigInt& c);
BigInt coefficient_from_json(const nlohmann::json& j);

std::string to_string(const TruncatedSeries& s);

}  // namespace mgp
