#pragma once

#include <optional>
#include <set>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgp/partitions.hpp"

namespace mgp {

enum class WeightTag { L0, L1, Lnm1, Ln };

std::string weight_token(WeightTag w);
WeightTag parse_weight(std::string_view token);
ClassicalWeight weight_vector(WeightTag w, int n);

struct ModuleDescriptor {
  ModuleDescriptor(PerfectCrystal crystal, ClassicalWeight lambda, TensorPair seed, int seed_value,
                   std::optional<int> D, std::optional<int> d, std::optional<WeightTag> tag = std::nullopt);

  PerfectCrystal crystal;
  std::optional<WeightTag> tag;
  ClassicalWeight lambda;
  EnergyFunction energy;
  GroundStatePath gsp;
  NormalizedEnergy ne;
  std::vector<long> u;
  int d;
  PartitionSystem sys;

  std::string describe() const;
};

ModuleDescriptor make_module(Family family, int n, WeightTag w, std::optional<int> D = std::nullopt,
                             std::optional<int> d = std::nullopt);
int default_d(Family family, WeightTag w);

struct CharacterResult {
  TruncatedSeries series;
  StabilityTelemetry telemetry;
};

// Sum of C(pi) q^|pi| over the minimal (resp. flexible) partitions, exact through cap
// in internal units. Sweeps the part-count cap until two sweeps agree.
CharacterResult character_enumerative(const ModuleDescriptor& md, int cap, const StabilityPolicy& policy = {});
CharacterResult character_flexible(const ModuleDescriptor& md, int cap, const StabilityPolicy& policy = {});
CharacterResult partition_series(const PartitionSystem& sys, RelationMode mode, int d, int cap,
                                 const StabilityPolicy& policy = {});

// Sum over lambda-paths via the energy of the paths themselves, doubling the defect
// bound from L0 until two sweeps agree.
CharacterResult path_character_oracle(const ModuleDescriptor& md, int cap, int L0 = 4, int ceiling = 512);

// One factor (-/+ m q^j; q^step)_inf or its inverse, m = c_slot^power (slot < 0: m = 1).
struct PochFactor {
  int sign;  // +1: (m q^j; q^step), -1: (-m q^j; q^step)
  int slot;
  int power;
  int j;
  int step;
  bool inverse = false;
};

struct TheoremSpec {
  std::string id;
  Family family;
  WeightTag weight;
  int n;
  QUnit unit;  // the theorem's q as a fraction of delta
  std::vector<PochFactor> factors;
  std::set<std::size_t> even_slots;  // empty: no even-part extraction
  std::map<std::size_t, int> specialise;
};

const std::vector<std::string>& theorem_ids();
TheoremSpec theorem_spec(std::string_view id, int n);

enum class ProductForm { EvenExtract, HalfSum };

struct ProductOptions {
  ProductForm form = ProductForm::EvenExtract;
  // Negative control: doubles the starting exponent of this factor.
  std::optional<std::size_t> perturb_factor;
};

// Right-hand side expanded through cap, in the theorem's own q-unit.
TruncatedSeries character_product(const TheoremSpec& spec, int cap, const ProductOptions& opts = {});
TruncatedSeries character_product(std::string_view id, int n, int cap, const ProductOptions& opts = {});

struct CoefficientDiff {
  int q = 0;
  std::vector<std::pair<ColourMonomial, BigInt>> missing;  // product exceeds enumeration
  std::vector<std::pair<ColourMonomial, BigInt>> extra;    // enumeration exceeds product
};

// First exponent where two series differ, if any.
std::optional<CoefficientDiff> first_difference(const TruncatedSeries& expected, const TruncatedSeries& actual);

struct VerificationReport {
  std::string theorem;
  int n = 0;
  int cap = 0;        // internal units
  int theorem_cap = 0;  // in the theorem's unit
  bool equal = false;
  std::optional<CoefficientDiff> first_diff;
  StabilityTelemetry telemetry;
  double seconds_enumeration = 0;
  double seconds_product = 0;
};

VerificationReport verify_theorem(std::string_view id, int n, int cap, const ProductOptions& opts = {});

nlohmann::json report_to_json(const VerificationReport& r, bool with_timings = false);

// Round trips of phi over all paths of at most L defect blocks, phi^-1 then phi over the
// minimal partitions of weight <= max_weight, and Phi_d over the flexible ones.
struct BijectionReport {
  int L = 0;
  long max_weight = 0;
  int d = 1;
  std::uint64_t paths = 0, phi_round_trips = 0, transports = 0;
  std::uint64_t minimal = 0, phi_inverse_round_trips = 0;
  std::uint64_t flexible = 0, phi_d_round_trips = 0, weight_splits = 0;
  bool injective = true;
  StabilityTelemetry minimal_telemetry, flexible_telemetry;

  bool passed() const;
};

BijectionReport bijection_check(const ModuleDescriptor& md, int L, long max_weight);
nlohmann::json bijection_to_json(const BijectionReport& r);

// Every coefficient is a colour polynomial with non-negative coefficients and the q^0 term
// has constant coefficient 1.
bool positive_with_unit_constant(const TruncatedSeries& s);

}  // namespace mgp
