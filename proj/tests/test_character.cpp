#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace mgp;

namespace {

ColourMonomial c(std::size_t rank, std::size_t slot, int power = 1) { return ColourMonomial::variable(rank, slot, power); }

// (q^d;q^d)^-1 in the series' own unit and colour rank.
TruncatedSeries free_parts(const TruncatedSeries& like, int d) {
  return inverse_poch_expand(1, ColourMonomial(like.rank()), d, d, like.cap(), like.unit());
}

}  // namespace

TEST_CASE("constant term is one") {
  for (const auto& id : theorem_ids()) {
    const TheoremSpec spec = theorem_spec(id, 4);
    ModuleDescriptor md = make_module(spec.family, 4, spec.weight);
    CAPTURE(id);
    TruncatedSeries s = character_enumerative(md, 2).series;
    CHECK(s.coefficient(0).coefficient(ColourMonomial(s.rank())) == 1);
    CHECK(positive_with_unit_constant(s));
  }
}

TEST_CASE("first coefficient for A2n_2") {
  ModuleDescriptor md = make_module(Family::A2n_2, 2, WeightTag::L0);
  const TheoremSpec spec = theorem_spec("1.2", 2);
  TruncatedSeries s = rescale_unit(character_enumerative(md, 4).series, spec.unit);
  ColourPolynomial expect;
  for (std::size_t k : {1, 2}) {
    expect.add_term(c(3, k), 1);
    expect.add_term(c(3, k, -1), 1);
  }
  CHECK(s.coefficient(1) == expect);
}

TEST_CASE("first coefficient vanishes for A2nm1_2 at level zero") {
  ModuleDescriptor md = make_module(Family::A2nm1_2, 3, WeightTag::L0);
  TruncatedSeries s = rescale_unit(character_enumerative(md, 4).series, theorem_spec("1.4a", 3).unit);
  CHECK(s.coefficient(1).is_zero());
  CHECK_FALSE(s.coefficient(2).is_zero());
}

TEST_CASE("product expansions at small caps") {
  TruncatedSeries zero = character_product("1.2", 2, 0);
  CHECK(zero == TruncatedSeries::one(3, theorem_spec("1.2", 2).unit, 0));

  TruncatedSeries one = character_product("1.2", 2, 1);
  TruncatedSeries expect = TruncatedSeries::one(3, theorem_spec("1.2", 2).unit, 1);
  for (std::size_t k : {1, 2}) {
    expect.add_term(1, c(3, k), 1);
    expect.add_term(1, c(3, k, -1), 1);
  }
  CHECK(one == expect);

  // Before extraction the shifted factor reaches q^-1 with the lone monomial c1^-1, which has odd
  // degree, so the extracted series starts at q^0 with c1^-1 paired against one more colour.
  TheoremSpec raw = theorem_spec("1.4b", 3);
  raw.even_slots.clear();
  TruncatedSeries unextracted = character_product(raw, 4);
  CHECK(unextracted.min_exponent() == std::optional<int>(-1));
  ColourPolynomial lone;
  lone.add_term(c(4, 1, -1), 1);
  CHECK(unextracted.coefficient(-1) == lone);
  TruncatedSeries b = character_product("1.4b", 3, 4);
  CHECK(b.min_exponent() == std::optional<int>(0));
  CHECK(b.coefficient(0).coefficient(c(4, 1, -1) * c(4, 2)) == 1);

  CHECK_THROWS_AS(character_product("1.9", 3, 4), DomainError);
  CHECK_THROWS_AS(theorem_spec("1.6a", 2), DomainError);
}

TEST_CASE("flexible series is minimal times free parts") {
  for (auto [f, n, w] : {std::tuple{Family::A2n_2, 2, WeightTag::L0}, std::tuple{Family::A2nm1_2, 3, WeightTag::L1},
                         std::tuple{Family::Bn_1, 3, WeightTag::Ln}, std::tuple{Family::Dn_1, 4, WeightTag::Lnm1}}) {
    ModuleDescriptor md = make_module(f, n, w);
    CAPTURE(md.describe());
    TruncatedSeries minimal = character_enumerative(md, 8).series;
    CharacterResult flexible = character_flexible(md, 8);
    CHECK(flexible.telemetry.converged);
    CHECK(flexible.series == (minimal * free_parts(minimal, md.d)).truncated(flexible.series.cap()));
    CHECK(flexible.series.coefficient(0).coefficient(ColourMonomial(minimal.rank())) == 1);
  }
}

TEST_CASE("flexible A2n_2 series against the product over even free parts") {
  ModuleDescriptor md = make_module(Family::A2n_2, 2, WeightTag::L0, std::nullopt, 2);
  const TheoremSpec spec = theorem_spec("1.2", 2);
  TruncatedSeries flex = rescale_unit(character_flexible(md, 16).series, spec.unit);
  REQUIRE(flex.cap() >= 8);
  TruncatedSeries rhs = character_product(spec, 8);
  TruncatedSeries expect = rhs * inverse_poch_expand(1, ColourMonomial(3), 2, 2, 8, spec.unit);
  CHECK(flex.truncated(8) == expect.truncated(8));
}

TEST_CASE("path sum agrees with partition enumeration") {
  ModuleDescriptor a = make_module(Family::A2n_2, 2, WeightTag::L0);
  CharacterResult paths = path_character_oracle(a, 4);
  CHECK(paths.telemetry.converged);
  CHECK(paths.series == character_enumerative(a, 4).series);
  CHECK(path_character_oracle(a, 0).series == TruncatedSeries::one(3, a.sys.unit, 0));

  ModuleDescriptor b = make_module(Family::A2nm1_2, 3, WeightTag::L1);
  TruncatedSeries pb = path_character_oracle(b, 2).series;
  CHECK(pb == character_enumerative(b, 2).series);
  TruncatedSeries aligned = rescale_unit(pb, theorem_spec("1.4b", 3).unit);
  TruncatedSeries rhs = character_product("1.4b", 3, aligned.cap());
  CHECK(aligned.min_exponent() == rhs.min_exponent());
  CHECK(aligned.coefficient(0) == rhs.coefficient(0));
  CHECK(aligned.coefficient(0).coefficient(c(4, 1, -1) * c(4, 3)) == 1);
}

TEST_CASE("even extraction and half sum agree") {
  for (const char* id : {"1.4a", "1.4b", "1.6a", "1.6c"}) {
    CAPTURE(id);
    const int n = theorem_spec(id, 4).family == Family::Dn_1 ? 4 : 3;
    ProductOptions half;
    half.form = ProductForm::HalfSum;
    CHECK(character_product(id, n, 10) == character_product(id, n, 10, half));
  }
}

TEST_CASE("small-cap verification of every theorem") {
  for (const auto& id : theorem_ids()) {
    const int n = theorem_spec(id, 4).family == Family::Dn_1 ? 4 : 3;
    VerificationReport r = verify_theorem(id, n, 6);
    CAPTURE(id);
    CHECK(r.equal);
    CHECK_FALSE(r.first_diff.has_value());
    CHECK(r.telemetry.converged);
    nlohmann::json j = report_to_json(r);
    CHECK(j["equal"] == true);
    CHECK(j["first_diff"].is_null());
  }
}

TEST_CASE("perturbed product is caught") {
  ProductOptions bad;
  bad.perturb_factor = 0;
  VerificationReport r = verify_theorem("1.2", 2, 10, bad);
  CHECK_FALSE(r.equal);
  REQUIRE(r.first_diff.has_value());
  CHECK(r.first_diff->q >= 1);
  CHECK(report_to_json(r)["first_diff"]["q"] == r.first_diff->q);
}

TEST_CASE("first difference lists both sides") {
  TruncatedSeries a = TruncatedSeries::one(2, {}, 4), b = a;
  a.add_term(2, c(2, 1), 3);
  b.add_term(2, c(2, 1, -1), 1);
  auto diff = first_difference(a, b);
  REQUIRE(diff.has_value());
  CHECK(diff->q == 2);
  REQUIRE(diff->missing.size() == 1);
  CHECK(diff->missing[0].second == 3);
  REQUIRE(diff->extra.size() == 1);
  CHECK(diff->extra[0].first == c(2, 1, -1));
  CHECK_FALSE(first_difference(a, a).has_value());
}

TEST_CASE("positivity check") {
  TruncatedSeries s = TruncatedSeries::one(2, {}, 3);
  CHECK(positive_with_unit_constant(s));
  s.add_term(1, c(2, 1), -1);
  CHECK_FALSE(positive_with_unit_constant(s));
  CHECK_FALSE(positive_with_unit_constant(TruncatedSeries(2, {}, 3)));
}

TEST_CASE("bijection check on a small window") {
  for (auto [f, n, w] : {std::tuple{Family::A2n_2, 2, WeightTag::L0}, std::tuple{Family::A2nm1_2, 3, WeightTag::L1}}) {
    BijectionReport r = bijection_check(make_module(f, n, w), 2, 6);
    CHECK(r.passed());
    CHECK(r.phi_round_trips == r.paths);
    CHECK(r.phi_d_round_trips == r.flexible);
    CHECK(bijection_to_json(r)["passed"] == true);
  }
}

TEST_CASE("character is independent of the worker count") {
  ModuleDescriptor md = make_module(Family::Bn_1, 3, WeightTag::L1);
  set_worker_threads(1);
  TruncatedSeries one = character_enumerative(md, 8).series;
  set_worker_threads(3);
  TruncatedSeries three = character_enumerative(md, 8).series;
  set_worker_threads(0);
  CHECK(one == three);
}
