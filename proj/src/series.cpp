#include "mgp/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace mgp {

ColourMonomial ColourMonomial::variable(std::size_t rank, std::size_t slot, int power) {
  if (slot >= rank) throw DomainError("colour slot " + std::to_string(slot) + " out of range");
  ColourMonomial m(rank);
  m.exps_[slot] = power;
  return m;
}

bool ColourMonomial::is_unit() const {
  return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e == 0; });
}

ColourMonomial ColourMonomial::inverse() const {
  ColourMonomial r(*this);
  for (int& e : r.exps_) e = -e;
  return r;
}

int ColourMonomial::degree_over(const std::set<std::size_t>& slots) const {
  int deg = 0;
  for (std::size_t s : slots) {
    if (s < exps_.size()) deg += exps_[s];
  }
  return deg;
}

ColourMonomial& ColourMonomial::operator*=(const ColourMonomial& o) {
  if (o.rank() != rank()) throw StructuralError("colour monomial rank mismatch");
  for (std::size_t i = 0; i < exps_.size(); ++i) exps_[i] += o.exps_[i];
  return *this;
}

ColourMonomial& ColourMonomial::operator/=(const ColourMonomial& o) {
  if (o.rank() != rank()) throw StructuralError("colour monomial rank mismatch");
  for (std::size_t i = 0; i < exps_.size(); ++i) exps_[i] -= o.exps_[i];
  return *this;
}

std::string ColourMonomial::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += "c" + std::to_string(i);
    if (exps_[i] != 1) out += "^" + std::to_string(exps_[i]);
  }
  return out.empty() ? "1" : out;
}

void ColourPolynomial::add_term(const ColourMonomial& m, const BigInt& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

BigInt ColourPolynomial::coefficient(const ColourMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? BigInt(0) : it->second;
}

ColourPolynomial& ColourPolynomial::operator+=(const ColourPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ColourPolynomial& ColourPolynomial::operator-=(const ColourPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

ColourPolynomial operator*(const ColourPolynomial& a, const ColourPolynomial& b) {
  ColourPolynomial r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  }
  return r;
}

ColourPolynomial ColourPolynomial::scaled(const ColourMonomial& m, const BigInt& c) const {
  ColourPolynomial r;
  if (c == 0) return r;
  for (const auto& [mon, coeff] : terms_) r.terms_.emplace(mon * m, coeff * c);
  return r;
}

std::string ColourPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (m.is_unit()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << "*";
      os << m.to_string();
    }
  }
  return os.str();
}

QUnit QUnit::make(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0) throw DomainError("q unit must be a positive fraction");
  std::int64_t g = std::gcd(num, den);
  return QUnit{num / g, den / g};
}

std::string QUnit::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

TruncatedSeries::TruncatedSeries(std::size_t rank, QUnit unit, int cap) : rank_(rank), unit_(unit), cap_(cap) {}

TruncatedSeries TruncatedSeries::one(std::size_t rank, QUnit unit, int cap) {
  return monomial(rank, unit, cap, 0, ColourMonomial(rank));
}

TruncatedSeries TruncatedSeries::monomial(std::size_t rank, QUnit unit, int cap, int q, const ColourMonomial& m,
                                          const BigInt& c) {
  TruncatedSeries s(rank, unit, cap);
  s.add_term(q, m, c);
  return s;
}

std::optional<int> TruncatedSeries::min_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

void TruncatedSeries::add_term(int q, const ColourMonomial& m, const BigInt& c) {
  if (q > cap_ || c == 0) return;
  if (m.rank() != rank_) throw StructuralError("monomial rank does not match series rank");
  auto& poly = terms_[q];
  poly.add_term(m, c);
  if (poly.is_zero()) terms_.erase(q);
}

void TruncatedSeries::add_shifted(const TruncatedSeries& other, int shift, const ColourMonomial& m, const BigInt& c) {
  if (other.rank_ != rank_) throw StructuralError("series rank mismatch");
  if (c == 0) return;
  for (const auto& [q, poly] : other.terms_) {
    if (q + shift > cap_) break;
    auto& dst = terms_[q + shift];
    for (const auto& [mon, coeff] : poly.terms()) dst.add_term(mon * m, coeff * c);
    if (dst.is_zero()) terms_.erase(q + shift);
  }
}

ColourPolynomial TruncatedSeries::coefficient(int q) const {
  auto it = terms_.find(q);
  return it == terms_.end() ? ColourPolynomial() : it->second;
}

void TruncatedSeries::mul_binomial(int sign, const ColourMonomial& m, int e) {
  if (sign != 1 && sign != -1) throw DomainError("binomial sign must be +1 or -1");
  TruncatedSeries shifted(rank_, unit_, cap_);
  shifted.add_shifted(*this, e, m, -sign);
  for (auto& [q, poly] : shifted.terms_) {
    auto& dst = terms_[q];
    dst += poly;
    if (dst.is_zero()) terms_.erase(q);
  }
}

void TruncatedSeries::div_binomial(int sign, const ColourMonomial& m, int e) {
  if (sign != 1 && sign != -1) throw DomainError("binomial sign must be +1 or -1");
  if (e <= 0) throw DomainError("division by a binomial needs a positive q-exponent");
  if (terms_.empty()) return;
  // Y_q = X_q + sign*m*Y_{q-e}, ascending in q.
  int lo = terms_.begin()->first;
  for (int q = lo + e; q <= cap_; ++q) {
    auto src = terms_.find(q - e);
    if (src == terms_.end()) continue;
    ColourPolynomial add = src->second.scaled(m, sign);
    auto& dst = terms_[q];
    dst += add;
    if (dst.is_zero()) terms_.erase(q);
  }
}

TruncatedSeries TruncatedSeries::truncated(int new_cap) const {
  if (new_cap > cap_) throw DomainError("cannot raise the cap of a truncated series");
  TruncatedSeries r(rank_, unit_, new_cap);
  for (const auto& [q, poly] : terms_) {
    if (q > new_cap) break;
    r.terms_.emplace(q, poly);
  }
  return r;
}

namespace {

void check_compatible(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.rank() != b.rank()) throw StructuralError("series rank mismatch");
  if (!(a.unit() == b.unit())) throw StructuralError("series q-unit mismatch");
}

// Lowest exponent that may be nonzero; for a zero series the first unknown exponent.
int effective_min(const TruncatedSeries& s) { return s.min_exponent().value_or(s.cap() + 1); }

}  // namespace

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  check_compatible(a, b);
  TruncatedSeries r = a.truncated(std::min(a.cap(), b.cap()));
  r.add_shifted(b, 0, ColourMonomial(a.rank()));
  return r;
}

TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
  check_compatible(a, b);
  TruncatedSeries r = a.truncated(std::min(a.cap(), b.cap()));
  r.add_shifted(b, 0, ColourMonomial(a.rank()), -1);
  return r;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  check_compatible(a, b);
  int cap = std::min(a.cap() + std::min(0, effective_min(b)), b.cap() + std::min(0, effective_min(a)));
  TruncatedSeries r(a.rank(), a.unit(), cap);
  for (const auto& [qa, pa] : a.terms()) {
    for (const auto& [qb, pb] : b.terms()) {
      if (qa + qb > cap) break;
      for (const auto& [ma, ca] : pa.terms()) {
        for (const auto& [mb, cb] : pb.terms()) r.add_term(qa + qb, ma * mb, ca * cb);
      }
    }
  }
  return r;
}

TruncatedSeries poch_expand(int sign, const ColourMonomial& m, int j, int step, int cap, QUnit unit) {
  if (step <= 0) throw DomainError("Pochhammer step must be positive");
  if (sign != 1 && sign != -1) throw DomainError("Pochhammer sign must be +1 or -1");
  // Factors with negative exponent lower what later factors can reach, so widen the
  // working cap by their total before truncating back.
  int negative = 0;
  for (int e = j; e < 0; e += step) negative += e;
  int work = cap - negative;
  TruncatedSeries s = TruncatedSeries::one(m.rank(), unit, work);
  for (int e = j; e <= work; e += step) s.mul_binomial(sign, m, e);
  return s.truncated(cap);
}

TruncatedSeries inverse_poch_expand(int sign, const ColourMonomial& m, int j, int step, int cap, QUnit unit) {
  if (step <= 0) throw DomainError("Pochhammer step must be positive");
  if (j <= 0) throw DomainError("inverse Pochhammer needs a positive starting exponent");
  TruncatedSeries s = TruncatedSeries::one(m.rank(), unit, cap);
  for (int e = j; e <= cap; e += step) s.div_binomial(sign, m, e);
  return s;
}

TruncatedSeries even_extract(const TruncatedSeries& s, const std::set<std::size_t>& slots) {
  TruncatedSeries r(s.rank(), s.unit(), s.cap());
  for (const auto& [q, poly] : s.terms()) {
    for (const auto& [m, c] : poly.terms()) {
      if (m.degree_over(slots) % 2 == 0) r.add_term(q, m, c);
    }
  }
  return r;
}

TruncatedSeries sign_flip(const TruncatedSeries& s, const std::set<std::size_t>& slots) {
  TruncatedSeries r(s.rank(), s.unit(), s.cap());
  for (const auto& [q, poly] : s.terms()) {
    for (const auto& [m, c] : poly.terms()) r.add_term(q, m, m.degree_over(slots) % 2 == 0 ? c : BigInt(-c));
  }
  return r;
}

TruncatedSeries specialize(const TruncatedSeries& s, const std::map<std::size_t, int>& assignment) {
  for (const auto& [slot, value] : assignment) {
    if (slot >= s.rank()) throw DomainError("specialisation slot out of range");
    if (value != 1 && value != -1) throw DomainError("specialisation values must be +1 or -1");
  }
  TruncatedSeries r(s.rank(), s.unit(), s.cap());
  for (const auto& [q, poly] : s.terms()) {
    for (const auto& [m, c] : poly.terms()) {
      ColourMonomial mm = m;
      BigInt cc = c;
      for (const auto& [slot, value] : assignment) {
        if (value == -1 && mm[slot] % 2 != 0) cc = -cc;
        mm[slot] = 0;
      }
      r.add_term(q, mm, cc);
    }
  }
  return r;
}

TruncatedSeries divide_exact(const TruncatedSeries& s, long k) {
  if (k == 0) throw DomainError("division by zero");
  TruncatedSeries r(s.rank(), s.unit(), s.cap());
  BigInt bk(k);
  for (const auto& [q, poly] : s.terms()) {
    for (const auto& [m, c] : poly.terms()) {
      if (!mpz_divisible_p(c.get_mpz_t(), bk.get_mpz_t())) {
        throw DomainError("coefficient " + c.get_str() + " not divisible by " + std::to_string(k));
      }
      r.add_term(q, m, c / bk);
    }
  }
  return r;
}

TruncatedSeries rescale_unit(const TruncatedSeries& s, QUnit target) {
  // One old step equals ratio new steps.
  std::int64_t rn = s.unit().num * target.den;
  std::int64_t rd = s.unit().den * target.num;
  std::int64_t g = std::gcd(rn, rd);
  rn /= g;
  rd /= g;
  if (rd == 1) {
    TruncatedSeries r(s.rank(), target, static_cast<int>(s.cap() * rn));
    for (const auto& [q, poly] : s.terms()) {
      for (const auto& [m, c] : poly.terms()) r.add_term(static_cast<int>(q * rn), m, c);
    }
    return r;
  }
  if (rn != 1) throw DomainError("q units " + s.unit().to_string() + " and " + target.to_string() + " are incommensurable");
  // Coarsening: floor(cap / rd), rounding toward minus infinity.
  int cap = s.cap() >= 0 ? static_cast<int>(s.cap() / rd) : -static_cast<int>((-s.cap() + rd - 1) / rd);
  TruncatedSeries r(s.rank(), target, cap);
  for (const auto& [q, poly] : s.terms()) {
    if (q % rd != 0) throw DomainError("exponent " + std::to_string(q) + " not representable in the coarser unit");
    for (const auto& [m, c] : poly.terms()) r.add_term(static_cast<int>(q / rd), m, c);
  }
  return r;
}

nlohmann::json coefficient_to_json(const BigInt& c) {
  if (c.fits_slong_p()) return static_cast<std::int64_t>(c.get_si());
  return c.get_str();
}

BigInt coefficient_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw StructuralError("coefficient must be an integer or a decimal string");
}

nlohmann::json to_json(const TruncatedSeries& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [q, poly] : s.terms()) {
    nlohmann::json mons = nlohmann::json::array();
    for (const auto& [m, c] : poly.terms()) {
      mons.push_back({{"coeff", coefficient_to_json(c)}, {"exps", m.exponents()}});
    }
    terms.push_back({{"q", q}, {"monomials", mons}});
  }
  return {{"unit_num", s.unit().num}, {"unit_den", s.unit().den}, {"cap", s.cap()}, {"rank", s.rank()},
          {"terms", terms}};
}

TruncatedSeries series_from_json(const nlohmann::json& j) {
  QUnit unit = QUnit::make(j.at("unit_num").get<std::int64_t>(), j.at("unit_den").get<std::int64_t>());
  int cap = j.at("cap").get<int>();
  std::size_t rank = 0;
  if (j.contains("rank")) {
    rank = j.at("rank").get<std::size_t>();
  } else {
    for (const auto& t : j.at("terms")) {
      for (const auto& mj : t.at("monomials")) rank = mj.at("exps").size();
    }
  }
  TruncatedSeries s(rank, unit, cap);
  for (const auto& t : j.at("terms")) {
    int q = t.at("q").get<int>();
    if (q > cap) throw StructuralError("series term above its cap");
    for (const auto& mj : t.at("monomials")) {
      auto exps = mj.at("exps").get<std::vector<int>>();
      if (exps.size() != rank) throw StructuralError("monomial length does not match series rank");
      s.add_term(q, ColourMonomial(std::move(exps)), coefficient_from_json(mj.at("coeff")));
    }
  }
  return s;
}

std::string to_string(const TruncatedSeries& s) {
  if (s.is_zero()) return "0 + O(q^" + std::to_string(s.cap() + 1) + ")";
  std::ostringstream os;
  bool first = true;
  for (const auto& [q, poly] : s.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << poly.to_string() << ")";
    if (q != 0) os << "*q^" << q;
  }
  os << " + O(q^" << s.cap() + 1 << ")";
  return os.str();
}

}  // namespace mgp
