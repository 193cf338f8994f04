#pragma once

#include <vector>

#include <json.hpp>

#include "mgp/energy.hpp"
#include "mgp/series.hpp"

namespace mgp {

// Rightmost-first: prefix[0] is p_0. Positions past the prefix follow the ground state path.
struct LambdaPath {
  std::vector<ElementId> prefix;

  bool operator==(const LambdaPath&) const = default;
  auto operator<=>(const LambdaPath&) const = default;
};

// Drops the trailing positions that already agree with the ground state path.
LambdaPath canonical_path(std::vector<ElementId> prefix, const GroundStatePath& gsp);

// Number of blocks of length t up to and including the last one differing from the ground.
int defect_blocks(const LambdaPath& p, const GroundStatePath& gsp);

std::vector<LambdaPath> enumerate_paths(const PerfectCrystal& c, const GroundStatePath& gsp, int L);

struct PathWeight {
  long q = 0;  // in units delta/(d0*D)
  ColourMonomial colour;
  bool operator==(const PathWeight&) const = default;
};

PathWeight path_weight(const LambdaPath& p, const PerfectCrystal& c, const GroundStatePath& gsp,
                       const NormalizedEnergy& ne);

// Sum of colour * q^weight over all paths agreeing with the ground beyond position L.
// Uses the raw energy H and the affine weight formula directly; exact through cap.
TruncatedSeries path_sum(const PerfectCrystal& c, const EnergyFunction& h, const GroundStatePath& gsp, int D,
                         int L, int cap);

// Same sum by listing every path with enumerate_paths; only for small L.
TruncatedSeries path_sum_bruteforce(const PerfectCrystal& c, const GroundStatePath& gsp, const NormalizedEnergy& ne,
                                    int L, int cap);

nlohmann::json path_to_json(const LambdaPath& p, const PerfectCrystal& c, const PathWeight& w);
nlohmann::json gsp_to_json(const PerfectCrystal& c, const GroundStatePath& gsp);

}  // namespace mgp
