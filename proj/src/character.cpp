#include "mgp/character.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

namespace mgp {

std::string weight_token(WeightTag w) {
  switch (w) {
    case WeightTag::L0:
      return "L0";
    case WeightTag::L1:
      return "L1";
    case WeightTag::Lnm1:
      return "Ln-1";
    case WeightTag::Ln:
      return "Ln";
  }
  return "?";
}

WeightTag parse_weight(std::string_view token) {
  if (token == "L0") return WeightTag::L0;
  if (token == "L1") return WeightTag::L1;
  if (token == "Ln-1") return WeightTag::Lnm1;
  if (token == "Ln") return WeightTag::Ln;
  throw DomainError("unknown weight '" + std::string(token) + "' (valid: L0, L1, Ln-1, Ln)");
}

ClassicalWeight weight_vector(WeightTag w, int n) {
  switch (w) {
    case WeightTag::L0:
      return ClassicalWeight::fundamental(n, 0);
    case WeightTag::L1:
      return ClassicalWeight::fundamental(n, 1);
    case WeightTag::Lnm1:
      return ClassicalWeight::fundamental(n, n - 1);
    case WeightTag::Ln:
      return ClassicalWeight::fundamental(n, n);
  }
  throw DomainError("unknown weight");
}

namespace {

GroundStatePath gsp_or_throw(const PerfectCrystal& c, const ClassicalWeight& lambda) {
  return ground_state_path(c, lambda);
}

}  // namespace

ModuleDescriptor::ModuleDescriptor(PerfectCrystal crystal_, ClassicalWeight lambda_, TensorPair seed, int seed_value,
                                   std::optional<int> D, std::optional<int> d_, std::optional<WeightTag> tag_)
    : crystal(std::move(crystal_)),
      tag(tag_),
      lambda(std::move(lambda_)),
      energy(solve_energy(crystal, seed, seed_value)),
      gsp(gsp_or_throw(crystal, lambda)),
      ne(normalize(energy, gsp, D)),
      u(ground_integers(ne, gsp)),
      d(d_.value_or(1)),
      sys(partition_system(crystal, gsp, ne)) {
  if (d < 1) throw DomainError("d must be a positive integer");
}

std::string ModuleDescriptor::describe() const {
  std::string w = tag ? weight_token(*tag) : lambda.to_string();
  return crystal.name() + " " + w;
}

int default_d(Family family, WeightTag w) {
  if (family == Family::Dn_1 && (w == WeightTag::Lnm1 || w == WeightTag::Ln)) return 1;
  return 2;
}

ModuleDescriptor make_module(Family family, int n, WeightTag w, std::optional<int> D, std::optional<int> d) {
  PerfectCrystal c = build_family(family, n);
  auto [seed, value] = family_seed(c);
  ClassicalWeight lambda = weight_vector(w, n);
  return ModuleDescriptor(std::move(c), std::move(lambda), seed, value, D, d.value_or(default_d(family, w)), w);
}

namespace {

struct MonomialHash {
  std::size_t operator()(const ColourMonomial& m) const {
    std::size_t h = 1469598103934665603ULL;
    for (int e : m.exponents()) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(e));
      h *= 1099511628211ULL;
    }
    return h;
  }
};

// Counts per (colour, weight) during one sweep; weights are offset by the least reachable one.
class SeriesCounter {
 public:
  SeriesCounter(long wmin, long wmax) : wmin_(wmin), width_(static_cast<std::size_t>(wmax - wmin + 1)) {}

  void add(const ColourMonomial& m, long w) {
    auto it = counts_.find(m);
    if (it == counts_.end()) it = counts_.emplace(m, std::vector<std::int64_t>(width_, 0)).first;
    auto& slot = it->second[static_cast<std::size_t>(w - wmin_)];
    if (__builtin_add_overflow(slot, 1, &slot)) throw Error("partition count overflow");
  }

  TruncatedSeries series(std::size_t rank, QUnit unit, int cap) const {
    TruncatedSeries s(rank, unit, cap);
    for (const auto& [m, row] : counts_) {
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] != 0) s.add_term(static_cast<int>(wmin_ + static_cast<long>(k)), m, BigInt(std::to_string(row[k])));
      }
    }
    return s;
  }

 private:
  long wmin_;
  std::size_t width_;
  std::unordered_map<ColourMonomial, std::vector<std::int64_t>, MonomialHash> counts_;
};

}  // namespace

CharacterResult partition_series(const PartitionSystem& sys, RelationMode mode, int d, int cap,
                                 const StabilityPolicy& policy) {
  LowerBound bound(sys, mode, d);
  long w0 = 0;
  for (long v : sys.u) w0 += v;
  const long wmin = std::min(w0, w0 + bound(sys.ground.front(), sys.u.front()));
  const std::size_t rank = sys.colours.front().rank();
  CharacterResult out;
  out.telemetry.kind = "part-cap";
  std::optional<TruncatedSeries> previous;
  for (int pc = policy.initial_cap; pc <= policy.ceiling; pc *= 2) {
    TruncatedSeries s(rank, sys.unit, cap);
    std::uint64_t emitted = 0;
    if (wmin <= cap) {
      const unsigned threads = worker_threads();
      std::vector<SeriesCounter> counters(threads, SeriesCounter(wmin, cap));
      EnumerationQuery q{mode, d, cap, true, pc};
      SweepStats st = for_each_mgp_parallel(sys, bound, q, threads, [&](unsigned i) -> PartitionVisitor {
        return [&counter = counters[i]](const std::vector<ColouredInteger>&, long w, const ColourMonomial& m) {
          counter.add(m, w);
        };
      });
      emitted = st.emitted;
      for (const auto& c : counters) s = series_add(s, c.series(rank, sys.unit, cap));
    }
    out.telemetry.caps.push_back(pc);
    out.telemetry.sizes.push_back(emitted);
    if (previous && *previous == s) {
      out.telemetry.converged = true;
      out.series = std::move(s);
      return out;
    }
    previous = std::move(s);
  }
  throw UnstableError("enumeration unstable: part-count sweeps still changing at cap " +
                      std::to_string(policy.ceiling));
}

CharacterResult character_enumerative(const ModuleDescriptor& md, int cap, const StabilityPolicy& policy) {
  return partition_series(md.sys, RelationMode::Minimal, 1, cap, policy);
}

CharacterResult character_flexible(const ModuleDescriptor& md, int cap, const StabilityPolicy& policy) {
  return partition_series(md.sys, RelationMode::Flexible, md.d, cap, policy);
}

CharacterResult path_character_oracle(const ModuleDescriptor& md, int cap, int L0, int ceiling) {
  if (L0 < 1) throw DomainError("initial defect bound must be positive");
  CharacterResult out;
  out.telemetry.kind = "defect-bound";
  std::optional<TruncatedSeries> previous;
  for (int L = L0; L <= ceiling; L *= 2) {
    TruncatedSeries s = path_sum(md.crystal, md.energy, md.gsp, md.ne.D(), L, cap);
    out.telemetry.caps.push_back(L);
    std::uint64_t terms = 0;
    for (const auto& [q, p] : s.terms()) terms += p.size();
    out.telemetry.sizes.push_back(terms);
    if (previous && *previous == s) {
      out.telemetry.converged = true;
      out.series = std::move(s);
      return out;
    }
    previous = std::move(s);
  }
  throw UnstableError("oracle unstable: path sums still changing at defect bound " + std::to_string(ceiling));
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"1.2",  "1.3a", "1.3b", "1.4a", "1.4b", "1.5a",
                                               "1.5b", "1.6a", "1.6b", "1.6c", "1.6d"};
  return ids;
}

TheoremSpec theorem_spec(std::string_view id, int n) {
  auto pos = std::find(theorem_ids().begin(), theorem_ids().end(), id);
  if (pos == theorem_ids().end()) {
    std::string list;
    for (const auto& s : theorem_ids()) list += (list.empty() ? "" : ", ") + s;
    throw DomainError("unknown theorem '" + std::string(id) + "' (valid: " + list + ")");
  }
  TheoremSpec spec;
  spec.id = std::string(id);
  spec.n = n;
  auto& f = spec.factors;
  // (-c_k^{+-1} q^j; q^2)
  auto col = [&](int k, int power, int j) { f.push_back({-1, k, power, j, 2}); };
  auto pairs_from = [&](int first, int j_plus, int j_minus) {
    for (int k = first; k <= n; ++k) {
      col(k, 1, j_plus);
      col(k, -1, j_minus);
    }
  };
  std::set<std::size_t> all;
  for (int k = 1; k <= n; ++k) all.insert(k);

  const char c = id[2];
  const char v = id.size() > 3 ? id[3] : ' ';
  switch (c) {
    case '2':
      spec.family = Family::A2n_2;
      spec.weight = WeightTag::L0;
      spec.unit = QUnit::make(1, 2);
      pairs_from(1, 1, 1);
      break;
    case '3':
      spec.family = Family::Dnp1_2;
      spec.unit = QUnit::make(1, 1);
      f.push_back({1, -1, 0, 1, 2, true});
      if (v == 'a') {
        spec.weight = WeightTag::L0;
        pairs_from(1, 1, 1);
      } else {
        spec.weight = WeightTag::Ln;
        pairs_from(1, 2, 0);
      }
      break;
    case '4':
    case '5':
      spec.family = c == '4' ? Family::A2nm1_2 : Family::Bn_1;
      spec.unit = QUnit::make(1, 2);
      if (c == '4') {
        f.push_back({1, -1, 0, 2, 4});
        spec.even_slots = all;
      } else {
        col(0, 1, 1);
        spec.even_slots = all;
        spec.even_slots.insert(0);
        spec.specialise = {{0, 1}};
      }
      if (v == 'a') {
        spec.weight = WeightTag::L0;
        pairs_from(1, 1, 1);
      } else {
        spec.weight = WeightTag::L1;
        col(1, 1, 3);
        col(1, -1, -1);
        pairs_from(2, 1, 1);
      }
      break;
    case '6':
      spec.family = Family::Dn_1;
      spec.unit = QUnit::make(1, 2);
      spec.even_slots = all;
      if (v == 'a') {
        spec.weight = WeightTag::L0;
        pairs_from(1, 1, 1);
      } else if (v == 'b') {
        spec.weight = WeightTag::L1;
        col(1, 1, 3);
        col(1, -1, -1);
        pairs_from(2, 1, 1);
      } else {
        spec.weight = v == 'c' ? WeightTag::Lnm1 : WeightTag::Ln;
        for (int k = 1; k < n; ++k) {
          col(k, 1, 2);
          col(k, -1, 0);
        }
        if (v == 'c') {
          col(n, 1, 0);
          col(n, -1, 2);
        } else {
          col(n, 1, 2);
          col(n, -1, 0);
        }
      }
      break;
  }
  if (n < family_min_rank(spec.family)) {
    throw DomainError("theorem " + spec.id + " needs n >= " + std::to_string(family_min_rank(spec.family)));
  }
  return spec;
}

namespace {

TruncatedSeries expand_factors(const TheoremSpec& spec, int cap, const ProductOptions& opts, bool flip) {
  const std::size_t rank = static_cast<std::size_t>(spec.n) + 1;
  int slack = 0;
  for (const auto& f : spec.factors) {
    if (f.inverse) continue;
    for (int e = f.j; e < 0; e += f.step) slack -= e;
  }
  const int work = cap + slack;
  TruncatedSeries s = TruncatedSeries::one(rank, spec.unit, work);
  for (std::size_t i = 0; i < spec.factors.size(); ++i) {
    const PochFactor& f = spec.factors[i];
    ColourMonomial m = f.slot < 0 ? ColourMonomial(rank) : ColourMonomial::variable(rank, f.slot, f.power);
    int sign = f.sign;
    if (flip && m.degree_over(spec.even_slots) % 2 != 0) sign = -sign;
    int j = f.j;
    if (opts.perturb_factor && *opts.perturb_factor == i) j = j == 0 ? 1 : 2 * j;
    for (int e = j; e <= work; e += f.step) {
      if (f.inverse) {
        s.div_binomial(sign, m, e);
      } else {
        s.mul_binomial(sign, m, e);
      }
    }
  }
  return s;
}

}  // namespace

TruncatedSeries character_product(const TheoremSpec& spec, int cap, const ProductOptions& opts) {
  TruncatedSeries s;
  if (spec.even_slots.empty()) {
    s = expand_factors(spec, cap, opts, false);
  } else if (opts.form == ProductForm::EvenExtract) {
    s = even_extract(expand_factors(spec, cap, opts, false), spec.even_slots);
  } else {
    s = divide_exact(series_add(expand_factors(spec, cap, opts, false), expand_factors(spec, cap, opts, true)), 2);
  }
  if (!spec.specialise.empty()) s = specialize(s, spec.specialise);
  return s.truncated(cap);
}

TruncatedSeries character_product(std::string_view id, int n, int cap, const ProductOptions& opts) {
  return character_product(theorem_spec(id, n), cap, opts);
}

std::optional<CoefficientDiff> first_difference(const TruncatedSeries& expected, const TruncatedSeries& actual) {
  std::set<int> qs;
  for (const auto& [q, p] : expected.terms()) qs.insert(q);
  for (const auto& [q, p] : actual.terms()) qs.insert(q);
  for (int q : qs) {
    ColourPolynomial a = expected.coefficient(q), b = actual.coefficient(q);
    if (a == b) continue;
    CoefficientDiff diff;
    diff.q = q;
    const ColourPolynomial delta = a - b;
    for (const auto& [m, c] : delta.terms()) {
      if (c > 0) {
        diff.missing.push_back({m, c});
      } else {
        diff.extra.push_back({m, -c});
      }
    }
    return diff;
  }
  return std::nullopt;
}

VerificationReport verify_theorem(std::string_view id, int n, int cap, const ProductOptions& opts) {
  using clock = std::chrono::steady_clock;
  TheoremSpec spec = theorem_spec(id, n);
  ModuleDescriptor md = make_module(spec.family, n, spec.weight);
  VerificationReport r;
  r.theorem = spec.id;
  r.n = n;
  r.cap = cap;

  auto t0 = clock::now();
  CharacterResult enumerated = character_enumerative(md, cap);
  auto t1 = clock::now();
  TruncatedSeries lhs = rescale_unit(enumerated.series, spec.unit);
  r.theorem_cap = lhs.cap();
  TruncatedSeries rhs = character_product(spec, r.theorem_cap, opts);
  auto t2 = clock::now();

  r.telemetry = enumerated.telemetry;
  r.first_diff = first_difference(rhs, lhs);
  r.equal = !r.first_diff && rhs.cap() == lhs.cap();
  r.seconds_enumeration = std::chrono::duration<double>(t1 - t0).count();
  r.seconds_product = std::chrono::duration<double>(t2 - t1).count();
  return r;
}

nlohmann::json report_to_json(const VerificationReport& r, bool with_timings) {
  nlohmann::json j{{"theorem", r.theorem}, {"n", r.n},         {"cap", r.cap},
                   {"theorem_cap", r.theorem_cap}, {"equal", r.equal}, {"telemetry", telemetry_to_json(r.telemetry)}};
  if (r.first_diff) {
    auto terms = [](const std::vector<std::pair<ColourMonomial, BigInt>>& v) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& [m, c] : v) a.push_back({{"coeff", coefficient_to_json(c)}, {"exps", m.exponents()}});
      return a;
    };
    j["first_diff"] = {{"q", r.first_diff->q}, {"missing", terms(r.first_diff->missing)},
                       {"extra", terms(r.first_diff->extra)}};
  } else {
    j["first_diff"] = nullptr;
  }
  if (with_timings) {
    j["timings"] = {{"enumeration_s", r.seconds_enumeration}, {"product_s", r.seconds_product}};
  }
  return j;
}

bool BijectionReport::passed() const {
  return injective && paths > 0 && phi_round_trips == paths && transports == paths &&
         phi_inverse_round_trips == minimal && flexible > 0 && phi_d_round_trips == flexible &&
         weight_splits == flexible && minimal_telemetry.converged && flexible_telemetry.converged;
}

BijectionReport bijection_check(const ModuleDescriptor& md, int L, long max_weight) {
  const PartitionSystem& sys = md.sys;
  BijectionReport r;
  r.L = L;
  r.max_weight = max_weight;
  r.d = md.d;

  for (const LambdaPath& p : enumerate_paths(md.crystal, md.gsp, L)) {
    ++r.paths;
    MultiGroundedPartition pi = phi_forward(p, sys);
    try {
      if (phi_inverse(pi, sys) == p) ++r.phi_round_trips;
    } catch (const DomainError&) {
    }
    PathWeight w = path_weight(p, md.crystal, md.gsp, md.ne);
    if (w.q == partition_weight(pi, sys) && w.colour == partition_colour(pi, sys)) ++r.transports;
  }

  EnumerationResult minimal = enumerate_mgp(sys, RelationMode::Minimal, 1, max_weight);
  r.minimal_telemetry = minimal.telemetry;
  for (const auto& pi : minimal.partitions) {
    ++r.minimal;
    if (phi_forward(phi_inverse(pi, sys), sys) == pi) ++r.phi_inverse_round_trips;
  }

  EnumerationResult flexible = enumerate_mgp(sys, RelationMode::Flexible, md.d, max_weight);
  r.flexible_telemetry = flexible.telemetry;
  std::set<std::pair<MultiGroundedPartition, std::vector<long>>> images;
  for (const auto& pi : flexible.partitions) {
    ++r.flexible;
    DecompositionPair pair = phi_d_forward(pi, sys, md.d);
    if (!images.insert({pair.minimal, pair.free}).second) r.injective = false;
    if (phi_d_inverse(pair, sys, md.d) == pi) ++r.phi_d_round_trips;
    long nu = 0;
    for (long v : pair.free) nu += v;
    if (partition_weight(pi, sys) == partition_weight(pair.minimal, sys) + nu) ++r.weight_splits;
  }
  return r;
}

nlohmann::json bijection_to_json(const BijectionReport& r) {
  return {{"L", r.L},
          {"max_weight", r.max_weight},
          {"d", r.d},
          {"paths", r.paths},
          {"phi_round_trips", r.phi_round_trips},
          {"transports", r.transports},
          {"minimal", r.minimal},
          {"phi_inverse_round_trips", r.phi_inverse_round_trips},
          {"flexible", r.flexible},
          {"phi_d_round_trips", r.phi_d_round_trips},
          {"weight_splits", r.weight_splits},
          {"injective", r.injective},
          {"minimal_telemetry", telemetry_to_json(r.minimal_telemetry)},
          {"flexible_telemetry", telemetry_to_json(r.flexible_telemetry)},
          {"passed", r.passed()}};
}

bool positive_with_unit_constant(const TruncatedSeries& s) {
  for (const auto& [q, p] : s.terms()) {
    for (const auto& [m, c] : p.terms()) {
      if (c < 0) return false;
    }
  }
  return s.coefficient(0).coefficient(ColourMonomial(s.rank())) == 1;
}

}  // namespace mgp
