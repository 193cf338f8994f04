#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "mgp/crystal.hpp"

namespace mgp {

class InconsistentEnergy : public Error {
 public:
  using Error::Error;
};

class NotPerfect : public Error {
 public:
  using Error::Error;
};

// H on B(x)B. entry(b, b') follows the displayed-matrix orientation: row b, column b'
// holds H(b' (x) b).
class EnergyFunction {
 public:
  EnergyFunction(int size, std::vector<int> values, TensorPair seed, int seed_value)
      : size_(size), values_(std::move(values)), seed_(seed), seed_value_(seed_value) {}

  int size() const { return size_; }
  int operator()(ElementId left, ElementId right) const { return values_[left * size_ + right]; }
  int entry(ElementId row, ElementId col) const { return (*this)(col, row); }
  TensorPair seed() const { return seed_; }
  int seed_value() const { return seed_value_; }

 private:
  int size_;
  std::vector<int> values_;
  TensorPair seed_;
  int seed_value_;
};

EnergyFunction solve_energy(const PerfectCrystal& c, TensorPair seed, int seed_value,
                            TensorConvention conv = TensorConvention::Kashiwara);

// The seed each family is normalised with.
std::pair<TensorPair, int> family_seed(const PerfectCrystal& c);
EnergyFunction solve_family_energy(const PerfectCrystal& c, TensorConvention conv = TensorConvention::Kashiwara);

// Every tensor arrow satisfies the propagation law.
bool energy_consistent(const PerfectCrystal& c, const EnergyFunction& h,
                       TensorConvention conv = TensorConvention::Kashiwara);

nlohmann::json energy_to_json(const PerfectCrystal& c, const EnergyFunction& h);
std::string energy_table(const PerfectCrystal& c, const EnergyFunction& h);

struct GroundStatePath {
  int t = 0;
  std::vector<ElementId> g;  // g[0] is the rightmost factor
  std::vector<ClassicalWeight> lambdas;

  ElementId at(long k) const { return g[static_cast<std::size_t>(k % t)]; }
};

class WeightNotRealizable : public Error {
 public:
  using Error::Error;
};

GroundStatePath ground_state_path(const PerfectCrystal& c, const ClassicalWeight& lambda);

class NormalizedEnergy {
 public:
  NormalizedEnergy(int size, std::vector<mpq_class> h_lambda, int D, mpq_class shift);

  int size() const { return size_; }
  int D() const { return D_; }
  const mpq_class& shift() const { return shift_; }
  const mpq_class& h_lambda(ElementId left, ElementId right) const { return h_lambda_[left * size_ + right]; }
  // D * H_lambda(left (x) right)
  long dh(ElementId left, ElementId right) const { return dh_[left * size_ + right]; }
  const std::vector<long>& dh_values() const { return dh_; }

 private:
  int size_;
  std::vector<mpq_class> h_lambda_;
  int D_;
  mpq_class shift_;
  std::vector<long> dh_;
};

// Valid divisors of 2t for this energy and ground state path, ascending.
std::vector<int> valid_divisors(const EnergyFunction& h, const GroundStatePath& gsp);
NormalizedEnergy normalize(const EnergyFunction& h, const GroundStatePath& gsp, std::optional<int> D = std::nullopt);

// u^(0..t-1)
std::vector<long> ground_integers(const NormalizedEnergy& ne, const GroundStatePath& gsp);

}  // namespace mgp
