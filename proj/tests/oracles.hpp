#pragma once

// Reference data built without the library's algorithms.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mgp/character.hpp"

namespace oracle {

using mgp::Family;

inline std::string bar(int k) { return std::to_string(k) + "bar"; }

// Element labels in the order used for matrix rows and columns.
inline std::vector<std::string> labels(Family f, int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back(std::to_string(k));
  if (f == Family::Dnp1_2) out.push_back("0bar");
  if (f == Family::Bn_1) out.push_back("0");
  for (int k = n; k >= 1; --k) out.push_back(bar(k));
  if (f == Family::A2n_2 || f == Family::Dnp1_2) out.push_back("0");
  return out;
}

// Printed energy matrices: rows[r][c] = H(col (x) row).
inline std::vector<std::vector<int>> energy_matrix(Family f, int n) {
  auto lab = labels(f, n);
  const int N = static_cast<int>(lab.size());
  std::vector<std::vector<int>> m(N, std::vector<int>(N, 0));
  auto idx = [&](const std::string& l) {
    for (int i = 0; i < N; ++i) {
      if (lab[i] == l) return i;
    }
    return -1;
  };
  const bool twisted_even = f == Family::A2n_2 || f == Family::Dnp1_2;
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) m[r][c] = c >= r ? (twisted_even ? 2 : 1) : 0;
  }
  if (twisted_even) {
    int z = idx("0");
    for (int k = 0; k < N; ++k) m[z][k] = m[k][z] = 1;
    m[z][z] = 0;
    if (f == Family::Dnp1_2) m[idx("0bar")][idx("0bar")] = 0;
  } else {
    m[idx(bar(1))][idx("1")] = -1;
    if (f == Family::Bn_1) m[idx("0")][idx("0")] = 0;
    if (f == Family::Dn_1) m[idx(std::to_string(n))][idx(bar(n))] = 0;
  }
  return m;
}

struct Constants {
  Family family;
  int n;
  mgp::WeightTag weight;
  int t, D;
  std::vector<long> u;
};

inline std::vector<Constants> printed_constants() {
  using W = mgp::WeightTag;
  return {{Family::A2n_2, 2, W::L0, 1, 1, {0}},        {Family::A2n_2, 3, W::L0, 1, 1, {0}},
          {Family::Dnp1_2, 2, W::L0, 1, 1, {0}},       {Family::Dnp1_2, 3, W::L0, 1, 1, {0}},
          {Family::Dnp1_2, 2, W::Ln, 1, 1, {0}},       {Family::Dnp1_2, 3, W::Ln, 1, 1, {0}},
          {Family::A2nm1_2, 3, W::L0, 2, 2, {-1, 1}},  {Family::A2nm1_2, 4, W::L0, 2, 2, {-1, 1}},
          {Family::A2nm1_2, 3, W::L1, 2, 2, {1, -1}},  {Family::A2nm1_2, 4, W::L1, 2, 2, {1, -1}},
          {Family::Dn_1, 4, W::Lnm1, 2, 1, {0, 0}},    {Family::Dn_1, 5, W::Lnm1, 2, 1, {0, 0}}};
}

// The three-colour relation matrix of the worked example; rows[b][b'] = M(b' (x) b).
inline std::vector<std::vector<long>> example_matrix() { return {{2, 2, 2}, {0, 0, 2}, {-2, 0, 2}}; }

struct LabelledSequence {
  std::vector<std::pair<long, int>> parts;  // (size, colour index), tail included
  bool valid;
};

inline std::vector<LabelledSequence> example_sequences() {
  return {{{{3, 2}, {3, 1}, {3, 0}, {-1, 2}, {1, 0}, {-1, 2}}, true},
          {{{1, 2}, {3, 0}, {1, 2}, {3, 0}, {-1, 2}, {1, 0}, {-1, 2}}, true},
          {{{1, 0}, {-1, 2}, {1, 0}, {-1, 2}}, false},
          {{{2, 0}, {1, 0}, {-1, 2}}, false}};
}

// p(k) for k <= cap by the textbook coin DP.
inline std::vector<long> partition_numbers(int cap) {
  std::vector<long> p(cap + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= cap; ++part) {
    for (int k = part; k <= cap; ++k) p[k] += p[k - part];
  }
  return p;
}

// Number of partitions of k into distinct parts drawn from `allowed`.
inline std::vector<long> distinct_parts_count(int cap, const std::function<bool(int)>& allowed) {
  std::vector<long> c(cap + 1, 0);
  c[0] = 1;
  for (int part = 1; part <= cap; ++part) {
    if (!allowed(part)) continue;
    for (int k = cap; k >= part; --k) c[k] += c[k - part];
  }
  return c;
}

inline mgp::TruncatedSeries random_series(std::mt19937& rng, std::size_t rank, int cap, int lo = -2) {
  std::uniform_int_distribution<int> q(lo, cap), e(-2, 2), c(-5, 5), count(0, 6);
  mgp::TruncatedSeries s(rank, {}, cap);
  for (int k = count(rng); k > 0; --k) {
    std::vector<int> exps(rank);
    for (auto& x : exps) x = e(rng);
    s.add_term(q(rng), mgp::ColourMonomial(exps), c(rng));
  }
  return s;
}

}  // namespace oracle
