#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace mgp;

namespace {

ElementId id(const PerfectCrystal& c, const std::string& l) { return c.find(l); }

// Level-one fundamental weights of each family.
std::vector<int> level_one(Family f, int n) {
  switch (f) {
    case Family::A2n_2:
      return {0};
    case Family::Dnp1_2:
      return {0, n};
    case Family::A2nm1_2:
      return {0, 1};
    case Family::Bn_1:
      return {0, 1, n};
    case Family::Dn_1:
      return {0, 1, n - 1, n};
  }
  return {};
}

}  // namespace

TEST_CASE("family tokens") {
  for (Family f : all_families()) CHECK(parse_family(family_token(f)) == f);
  try {
    parse_family("E8");
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("A2nm1_2") != std::string::npos);
  }
  CHECK_THROWS_AS(build_family(Family::Dn_1, 3), DomainError);
}

TEST_CASE("element order") {
  for (Family f : all_families()) {
    for (int n = family_min_rank(f); n <= family_min_rank(f) + 2; ++n) {
      CAPTURE(family_token(f));
      CAPTURE(n);
      CHECK(build_family(f, n).labels() == oracle::labels(f, n));
    }
  }
}

TEST_CASE("known arrows") {
  PerfectCrystal a = build_family(Family::A2nm1_2, 3);
  CHECK(a.f(id(a, "1"), 1) == id(a, "2"));
  CHECK(a.f(id(a, "3"), 3) == id(a, "3bar"));
  CHECK(a.f(id(a, "1bar"), 0) == id(a, "2"));
  CHECK(a.e(id(a, "1"), 0) == id(a, "2bar"));
  CHECK_FALSE(a.f(id(a, "1"), 2).has_value());

  PerfectCrystal d = build_family(Family::Dn_1, 4);
  CHECK(d.f(id(d, "3"), 4) == id(d, "4bar"));
  CHECK(d.f(id(d, "4"), 4) == id(d, "3bar"));
  CHECK(d.f(id(d, "3"), 3) == id(d, "4"));

  PerfectCrystal t = build_family(Family::A2n_2, 2);
  CHECK(t.d0() == 2);
  CHECK(t.f(id(t, "1bar"), 0) == id(t, "0"));
  CHECK(t.f(id(t, "0"), 0) == id(t, "1"));
  CHECK(t.phi(id(t, "1bar"), 0) == 2);
  CHECK(t.epsilon(id(t, "1"), 0) == 2);
}

TEST_CASE("perfectness at level one") {
  for (Family f : all_families()) {
    const int n = family_min_rank(f);
    PerfectCrystal c = build_family(f, n);
    CAPTURE(family_token(f));
    for (int i : level_one(f, n)) {
      CAPTURE(i);
      CHECK(c.with_phi(ClassicalWeight::fundamental(n, i)).size() == 1);
      CHECK(c.with_epsilon(ClassicalWeight::fundamental(n, i)).size() == 1);
    }
    CHECK(tensor_square_connected(c));
  }
}

TEST_CASE("colours") {
  PerfectCrystal c = build_family(Family::Bn_1, 3);
  CHECK(c.colour_rank() == 4);
  CHECK(c.colour(id(c, "2")) == ColourMonomial::variable(4, 2));
  CHECK(c.colour(id(c, "2bar")) == ColourMonomial::variable(4, 2, -1));
  CHECK(c.colour(id(c, "0")).is_unit());
  auto [w, m] = classical_weight(c, id(c, "1"));
  CHECK(m == ColourMonomial::variable(4, 1));
  CHECK(w == c.weight(id(c, "1")));
}

TEST_CASE("epsilon and phi count chain steps") {
  PerfectCrystal c = build_family(Family::Dnp1_2, 2);
  // 2 -> 0bar -> 2bar under f_2
  CHECK(eps_phi(c, id(c, "2"), 2) == std::pair{0, 2});
  CHECK(eps_phi(c, id(c, "0bar"), 2) == std::pair{1, 1});
  CHECK(eps_phi(c, id(c, "2bar"), 2) == std::pair{2, 0});
}

TEST_CASE("tensor rule") {
  PerfectCrystal c = build_family(Family::A2nm1_2, 3);
  const ElementId one = id(c, "1"), two = id(c, "2");
  CHECK(tensor_f(c, {one, one}, 1) == TensorPair{two, one});
  CHECK_FALSE(tensor_f(c, {one, two}, 1).has_value());
  CHECK(tensor_e(c, {two, one}, 1) == TensorPair{one, one});
  CHECK(tensor_f(c, {one, one}, 1, TensorConvention::Anti) == TensorPair{one, two});
  CHECK(parse_convention("anti") == TensorConvention::Anti);
}

TEST_CASE("crystal json round trip") {
  PerfectCrystal c = build_family(Family::Dn_1, 4);
  nlohmann::json j = crystal_to_json(c);
  PerfectCrystal back = load_crystal_json(j);
  CHECK(back.labels() == c.labels());
  CHECK(back.arrows().size() == c.arrows().size());
  for (ElementId b = 0; b < c.size(); ++b) {
    CHECK(back.colour(b) == c.colour(b));
    CHECK(back.phi(b) == c.phi(b));
  }
}

TEST_CASE("crystal json validation") {
  nlohmann::json good = {{"name", "toy"},
                         {"n", 1},
                         {"elements", {"a", "b"}},
                         {"arrows", {{{"from", "a"}, {"label", 1}, {"to", "b"}}, {{"from", "b"}, {"label", 0}, {"to", "a"}}}},
                         {"colour_monomials", {{"a", {0, 1}}, {"b", {0, -1}}}}};
  CHECK(load_crystal_json(good).d0() == 1);

  auto bad = good;
  bad["arrows"].push_back({{"from", "a"}, {"label", 1}, {"to", "a"}});
  CHECK_THROWS_AS(load_crystal_json(bad), DomainError);

  bad = good;
  bad["arrows"] = {{{"from", "a"}, {"label", 1}, {"to", "b"}}, {{"from", "b"}, {"label", 1}, {"to", "a"}}};
  CHECK_THROWS_AS(load_crystal_json(bad), DomainError);

  bad = good;
  bad["arrows"][0]["to"] = "zzz";
  CHECK_THROWS_AS(load_crystal_json(bad), DomainError);

  bad = good;
  bad["colour_monomials"].erase("b");
  CHECK_THROWS_AS(load_crystal_json(bad), DomainError);

  bad = good;
  bad.erase("elements");
  CHECK_THROWS_AS(load_crystal_json(bad), DomainError);
}
