#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"

using namespace mgp;

namespace {

PartitionSystem example_system(std::vector<ElementId> ground = {0, 2}) {
  return partition_system_from_matrix({"c1", "c2", "c3"}, oracle::example_matrix(), std::move(ground));
}

std::vector<ColouredInteger> seq_of(const std::vector<std::pair<long, int>>& v) {
  std::vector<ColouredInteger> out;
  for (auto [k, c] : v) out.push_back({k, c});
  return out;
}

// Every sequence with at most max_parts parts of sizes in [lo, hi], checked against the
// definition one pair at a time.
std::set<MultiGroundedPartition> brute_force(const PartitionSystem& sys, RelationMode mode, int d, int max_parts,
                                             long lo, long hi, long max_weight) {
  const int t = sys.t();
  std::vector<ColouredInteger> tail;
  for (int k = 0; k < t; ++k) tail.push_back({sys.u[k], sys.ground[k]});
  auto related = [&](const ColouredInteger& left, const ColouredInteger& right) {
    long diff = left.size - right.size;
    long need = sys.dh_of(right.colour, left.colour);
    if (mode == RelationMode::Minimal) return diff == need;
    return diff >= need && (diff - need) % d == 0;
  };
  std::set<MultiGroundedPartition> out;
  std::vector<ColouredInteger> parts;  // leftmost last
  std::function<void()> grow = [&]() {
    const int s = static_cast<int>(parts.size());
    if (s % t == 0) {
      std::vector<ColouredInteger> display(parts.rbegin(), parts.rend());
      bool ground_repeat = s >= t && std::equal(display.end() - t, display.end(), tail.begin());
      long w = 0;
      for (const auto& x : display) w += x.size;
      if (!ground_repeat && w <= max_weight) out.insert(MultiGroundedPartition{display});
    }
    if (s == max_parts) return;
    const ColouredInteger right = parts.empty() ? tail.front() : parts.back();
    for (ElementId x = 0; x < sys.size; ++x) {
      for (long k = lo; k <= hi; ++k) {
        ColouredInteger left{k, x};
        if (!related(left, right)) continue;
        parts.push_back(left);
        grow();
        parts.pop_back();
      }
    }
  };
  grow();
  return out;
}

bool within(const MultiGroundedPartition& p, int max_parts, long lo, long hi) {
  if (static_cast<int>(p.parts.size()) > max_parts) return false;
  return std::all_of(p.parts.begin(), p.parts.end(), [&](const auto& x) { return x.size >= lo && x.size <= hi; });
}

void compare_with_brute_force(const PartitionSystem& sys, RelationMode mode, int d, long max_weight, int max_parts) {
  const long lo = -4, hi = 10;
  auto expect = brute_force(sys, mode, d, max_parts, lo, hi, max_weight);
  auto got = enumerate_mgp(sys, mode, d, max_weight);
  CHECK(got.telemetry.converged);
  std::set<MultiGroundedPartition> got_set(got.partitions.begin(), got.partitions.end());
  CHECK(got_set.size() == got.partitions.size());
  for (const auto& p : expect) CHECK(got_set.count(p) == 1);
  for (const auto& p : got.partitions) {
    if (within(p, max_parts, lo, hi)) CHECK(expect.count(p) == 1);
  }
}

}  // namespace

TEST_CASE("worked example: ground integers") {
  PartitionSystem sys = example_system();
  CHECK(sys.u == std::vector<long>{1, -1});
  CHECK(solve_ground_chain(sys) == std::vector<long>{1, -1});
  CHECK(example_system({2, 0}).u == std::vector<long>{-1, 1});
}

TEST_CASE("worked example: labelled sequences") {
  PartitionSystem sys = example_system();
  for (const auto& ex : oracle::example_sequences()) CHECK(validate(seq_of(ex.parts), sys, RelationMode::Flexible, 1) == ex.valid);
  CHECK(validate(seq_of({{1, 0}, {-1, 2}}), sys, RelationMode::Flexible, 1));
  CHECK_FALSE(validate(seq_of({{1, 0}}), sys, RelationMode::Flexible, 1));
  CHECK_FALSE(validate(seq_of({{3, 2}, {1, 0}, {-1, 2}}), sys, RelationMode::Flexible, 1, true));
}

TEST_CASE("relation check") {
  PartitionSystem sys = example_system();
  CHECK(relation_check({-1, 2}, {1, 0}, RelationMode::Flexible, 1, sys));
  CHECK(relation_check({-1, 2}, {1, 0}, RelationMode::Minimal, 1, sys));
  CHECK_FALSE(relation_check({2, 0}, {1, 0}, RelationMode::Flexible, 1, sys));
  CHECK(relation_check({3, 1}, {3, 0}, RelationMode::Flexible, 1, sys));  // M(c1 (x) c2) = 0
  CHECK(relation_check({5, 0}, {1, 0}, RelationMode::Flexible, 2, sys));
  CHECK_FALSE(relation_check({5, 0}, {2, 0}, RelationMode::Flexible, 2, sys));
  CHECK_FALSE(relation_check({5, 0}, {1, 0}, RelationMode::Minimal, 1, sys));
}

TEST_CASE("ground chain rejects cycles that do not close") {
  PartitionSystem sys = partition_system_from_matrix({"a", "b"}, {{0, 2}, {-2, 0}}, {0, 1});
  CHECK(sys.u == std::vector<long>{1, -1});
  CHECK_THROWS_AS(partition_system_from_matrix({"a", "b"}, {{0, 2}, {1, 0}}, {0, 1}), DomainError);
}

TEST_CASE("rotated grounds give rotated ground integers") {
  for (auto [f, n, w] : {std::tuple{Family::A2nm1_2, 3, WeightTag::L0}, std::tuple{Family::A2nm1_2, 3, WeightTag::L1},
                         std::tuple{Family::Bn_1, 3, WeightTag::L0}, std::tuple{Family::Dn_1, 4, WeightTag::Lnm1},
                         std::tuple{Family::Dn_1, 4, WeightTag::L1}}) {
    PartitionSystem sys = make_module(f, n, w).sys;
    PartitionSystem rotated = sys;
    std::rotate(rotated.ground.begin(), rotated.ground.begin() + 1, rotated.ground.end());
    std::vector<long> expect = sys.u;
    std::rotate(expect.begin(), expect.begin() + 1, expect.end());
    CHECK(solve_ground_chain(rotated) == expect);
  }
}

TEST_CASE("enumeration agrees with brute force") {
  compare_with_brute_force(example_system(), RelationMode::Minimal, 1, 6, 6);
  compare_with_brute_force(example_system(), RelationMode::Flexible, 1, 5, 4);
  compare_with_brute_force(make_module(Family::A2nm1_2, 3, WeightTag::L1).sys, RelationMode::Minimal, 1, 6, 6);
  compare_with_brute_force(make_module(Family::A2n_2, 2, WeightTag::L0).sys, RelationMode::Flexible, 2, 5, 4);
  compare_with_brute_force(make_module(Family::Dn_1, 4, WeightTag::Lnm1).sys, RelationMode::Minimal, 1, 3, 4);
}

TEST_CASE("small flexible enumeration") {
  PartitionSystem sys = make_module(Family::A2n_2, 2, WeightTag::L0).sys;
  auto r = enumerate_mgp(sys, RelationMode::Flexible, 2, 1);
  REQUIRE(r.partitions.size() == 5);
  CHECK(r.partitions[0].parts.empty());
  std::set<std::string> colours;
  for (std::size_t k = 1; k < 5; ++k) {
    REQUIRE(r.partitions[k].parts.size() == 1);
    CHECK(r.partitions[k].parts[0].size == 1);
    colours.insert(sys.labels[r.partitions[k].parts[0].colour]);
  }
  CHECK(colours == std::set<std::string>{"1", "2", "2bar", "1bar"});
  CHECK(enumerate_mgp(sys, RelationMode::Minimal, 1, 0).partitions.size() == 1);
}

TEST_CASE("minimal counts match the specialised product") {
  PartitionSystem sys = make_module(Family::A2nm1_2, 3, WeightTag::L0).sys;
  auto r = enumerate_mgp(sys, RelationMode::Minimal, 1, 6);
  const TheoremSpec spec = theorem_spec("1.4a", 3);
  TruncatedSeries counts(1, sys.unit, 6);
  for (const auto& p : r.partitions) counts.add_term(partition_weight(p, sys), ColourMonomial(1), 1);
  counts = rescale_unit(counts, spec.unit);
  TruncatedSeries rhs = character_product(spec, counts.cap());
  for (int q = rhs.min_exponent().value_or(0); q <= counts.cap(); ++q) {
    BigInt total = 0;
    const ColourPolynomial row = rhs.coefficient(q);
    for (const auto& [m, c] : row.terms()) total += c;
    CHECK(total == counts.coefficient(q).coefficient(ColourMonomial(1)));
  }
}

TEST_CASE("path bijection") {
  ModuleDescriptor md = make_module(Family::A2nm1_2, 3, WeightTag::L0);
  const auto& sys = md.sys;
  MultiGroundedPartition ground = phi_forward(LambdaPath{}, sys);
  CHECK(ground.parts.empty());

  // prefix (2bar, 1): DH(1 (x) 2bar) = 2*H(1 (x) 2bar) = 0 and DH(g_2 (x) 1) = DH(1bar (x) 1) = 2
  LambdaPath p{{sys.find("2bar"), sys.find("1")}};
  MultiGroundedPartition pi = phi_forward(p, sys);
  REQUIRE(pi.parts.size() == 2);
  CHECK(pi.parts[1] == ColouredInteger{1, sys.find("1")});
  CHECK(pi.parts[0] == ColouredInteger{1, sys.find("2bar")});
  CHECK(phi_inverse(pi, sys) == canonical_path(p.prefix, md.gsp));
  CHECK(phi_forward(canonical_path(p.prefix, md.gsp), sys) == pi);
  CHECK_THROWS_AS(phi_inverse(MultiGroundedPartition{{{5, 0}}}, sys), DomainError);
}

TEST_CASE("flexible decomposition") {
  PartitionSystem sys = make_module(Family::A2n_2, 2, WeightTag::L0).sys;
  const ElementId c1 = sys.find("1");
  MultiGroundedPartition pi{{{3, c1}}};
  DecompositionPair pair = phi_d_forward(pi, sys, 2);
  CHECK(pair.minimal == MultiGroundedPartition{{{1, c1}}});
  CHECK(pair.free == std::vector<long>{2});
  CHECK(phi_d_inverse(pair, sys, 2) == pi);

  DecompositionPair bare = phi_d_forward(MultiGroundedPartition{}, sys, 2);
  CHECK(bare.minimal.parts.empty());
  CHECK(bare.free.empty());

  ModuleDescriptor md = make_module(Family::A2nm1_2, 3, WeightTag::L1);
  for (const auto& m : enumerate_mgp(md.sys, RelationMode::Minimal, 1, 4).partitions) {
    DecompositionPair p = phi_d_forward(m, md.sys, 2);
    CHECK(p.minimal == m);
    CHECK(std::all_of(p.free.begin(), p.free.end(), [](long v) { return v == 0; }));
  }
  CHECK_THROWS_AS(phi_d_forward(MultiGroundedPartition{{{2, c1}}}, sys, 2), DomainError);
}

TEST_CASE("partition json round trip") {
  ModuleDescriptor md = make_module(Family::A2nm1_2, 3, WeightTag::L0);
  for (const auto& p : enumerate_mgp(md.sys, RelationMode::Minimal, 1, 3).partitions) {
    nlohmann::json j = partition_to_json(p, md.sys);
    CHECK(j["tail"].size() == 2);
    CHECK(j["weight"] == partition_weight(p, md.sys));
    CHECK(partition_from_json(j, md.sys) == p);
  }
}

TEST_CASE("lower bound is a true bound") {
  ModuleDescriptor md = make_module(Family::A2nm1_2, 3, WeightTag::L1);
  LowerBound bound(md.sys, RelationMode::Minimal, 1);
  const long floor = bound(md.sys.ground.front(), md.sys.u.front());
  for (const auto& p : enumerate_mgp(md.sys, RelationMode::Minimal, 1, 6, false).partitions) {
    CHECK(partition_weight(p, md.sys) >= floor);
  }
}

TEST_CASE("thread count does not change the sweep") {
  ModuleDescriptor md = make_module(Family::Dn_1, 4, WeightTag::Lnm1);
  set_worker_threads(1);
  TruncatedSeries one = character_enumerative(md, 6).series;
  set_worker_threads(4);
  TruncatedSeries four = character_enumerative(md, 6).series;
  set_worker_threads(0);
  CHECK(one == four);
}
