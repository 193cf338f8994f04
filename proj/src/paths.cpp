#include "mgp/paths.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace mgp {

GroundStatePath ground_state_path(const PerfectCrystal& c, const ClassicalWeight& lambda) {
  if (static_cast<int>(lambda.coeffs.size()) != c.index_count()) {
    throw DomainError("weight has " + std::to_string(lambda.coeffs.size()) + " coefficients, expected " +
                      std::to_string(c.index_count()));
  }
  auto unique_phi = [&](const ClassicalWeight& w) {
    auto bs = c.with_phi(w);
    if (bs.empty()) throw WeightNotRealizable("weight " + w.to_string() + " not realizable in this crystal");
    if (bs.size() > 1) throw NotPerfect("several elements have phi = " + w.to_string());
    return bs.front();
  };
  GroundStatePath gsp;
  ClassicalWeight w = lambda;
  for (int step = 0; step <= c.size(); ++step) {
    ElementId b = unique_phi(w);
    gsp.g.push_back(b);
    gsp.lambdas.push_back(w);
    w = c.epsilon(b);
    if (w == lambda) {
      gsp.t = static_cast<int>(gsp.g.size());
      return gsp;
    }
  }
  throw NotPerfect("ground state path for " + lambda.to_string() + " does not close up");
}

LambdaPath canonical_path(std::vector<ElementId> prefix, const GroundStatePath& gsp) {
  while (!prefix.empty() && prefix.back() == gsp.at(static_cast<long>(prefix.size()) - 1)) prefix.pop_back();
  return LambdaPath{std::move(prefix)};
}

int defect_blocks(const LambdaPath& p, const GroundStatePath& gsp) {
  int len = static_cast<int>(p.prefix.size());
  return (len + gsp.t - 1) / gsp.t;
}

std::vector<LambdaPath> enumerate_paths(const PerfectCrystal& c, const GroundStatePath& gsp, int L) {
  if (L < 0) throw DomainError("defect bound must be non-negative");
  std::set<LambdaPath> out;
  std::vector<ElementId> cur(static_cast<std::size_t>(L), 0);
  while (true) {
    out.insert(canonical_path(cur, gsp));
    int k = 0;
    while (k < L && ++cur[k] == c.size()) cur[k++] = 0;
    if (k == L) break;
  }
  return {out.begin(), out.end()};
}

PathWeight path_weight(const LambdaPath& p, const PerfectCrystal& c, const GroundStatePath& gsp,
                       const NormalizedEnergy& ne) {
  const int M = defect_blocks(p, gsp) * gsp.t;
  auto at = [&](int k) { return k < static_cast<int>(p.prefix.size()) ? p.prefix[k] : gsp.at(k); };
  long weighted = 0;
  for (int l = 0; l < gsp.t; ++l) weighted += (l + 1) * ne.dh(gsp.at(l + 1), gsp.at(l));
  const long u0 = -weighted / gsp.t;

  PathWeight w{0, ColourMonomial(c.colour_rank())};
  long tail = 0;  // sum_{l=k}^{M-1} DH(p_{l+1} (x) p_l)
  for (int k = M - 1; k >= 0; --k) {
    tail += ne.dh(at(k + 1), at(k));
    w.q += u0 + tail;
    w.colour *= c.colour(at(k));
  }
  return w;
}

TruncatedSeries path_sum(const PerfectCrystal& c, const EnergyFunction& h, const GroundStatePath& gsp, int D, int L,
                         int cap) {
  const int sz = c.size();
  const std::size_t rank = c.colour_rank();
  const QUnit unit = QUnit::make(1, static_cast<std::int64_t>(c.d0()) * D);
  if (L <= 0) return TruncatedSeries::one(rank, unit, cap);

  auto hg = [&](int k) { return h(gsp.at(k + 1), gsp.at(k)); };
  // lb[k][x]: least q-exponent the positions below k can add when p_k = x.
  std::vector<std::vector<long>> lb(static_cast<std::size_t>(L) + 1, std::vector<long>(sz, 0));
  for (int k = 1; k <= L; ++k) {
    for (ElementId x = 0; x < sz; ++x) {
      long best = std::numeric_limits<long>::max();
      for (ElementId y = 0; y < sz; ++y) {
        best = std::min(best, static_cast<long>(D) * k * (h(x, y) - hg(k - 1)) + lb[k - 1][y]);
      }
      lb[k][x] = best;
    }
  }
  auto state_cap = [&](int k, ElementId x) { return static_cast<int>(cap - lb[k][x]); };

  std::vector<std::optional<TruncatedSeries>> cur(sz);
  ElementId start = gsp.at(L);
  cur[start] = TruncatedSeries::one(rank, unit, state_cap(L, start));
  for (int k = L - 1; k >= 0; --k) {
    std::vector<std::optional<TruncatedSeries>> next(sz);
    const ColourMonomial ginv = c.colour(gsp.at(k)).inverse();
    for (ElementId x = 0; x < sz; ++x) {
      TruncatedSeries s(rank, unit, state_cap(k, x));
      ColourMonomial m = c.colour(x) * ginv;
      for (ElementId y = 0; y < sz; ++y) {
        if (!cur[y]) continue;
        int shift = D * (k + 1) * (h(y, x) - hg(k));
        s.add_shifted(*cur[y], shift, m);
      }
      if (!s.is_zero()) next[x] = std::move(s);
    }
    cur = std::move(next);
  }
  TruncatedSeries out(rank, unit, cap);
  for (ElementId x = 0; x < sz; ++x) {
    if (cur[x]) out.add_shifted(*cur[x], 0, ColourMonomial(rank));
  }
  return out;
}

TruncatedSeries path_sum_bruteforce(const PerfectCrystal& c, const GroundStatePath& gsp, const NormalizedEnergy& ne,
                                    int L, int cap) {
  TruncatedSeries out(c.colour_rank(), QUnit::make(1, static_cast<std::int64_t>(c.d0()) * ne.D()), cap);
  for (const auto& p : enumerate_paths(c, gsp, L)) {
    PathWeight w = path_weight(p, c, gsp, ne);
    if (w.q <= cap) out.add_term(static_cast<int>(w.q), w.colour, 1);
  }
  return out;
}

nlohmann::json path_to_json(const LambdaPath& p, const PerfectCrystal& c, const PathWeight& w) {
  std::vector<std::string> labels;
  for (ElementId b : p.prefix) labels.push_back(c.label(b));
  return {{"prefix", labels}, {"weight", {{"q", w.q}, {"colour", w.colour.exponents()}}}};
}

nlohmann::json gsp_to_json(const PerfectCrystal& c, const GroundStatePath& gsp) {
  std::vector<std::string> g;
  nlohmann::json lambdas = nlohmann::json::array();
  for (int k = 0; k < gsp.t; ++k) {
    g.push_back(c.label(gsp.g[k]));
    lambdas.push_back(gsp.lambdas[k].coeffs);
  }
  return {{"t", gsp.t}, {"g", g}, {"lambdas", lambdas}};
}

}  // namespace mgp
