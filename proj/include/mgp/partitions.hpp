#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgp/paths.hpp"

namespace mgp {

// Difference data, ground and colours shared by every partition of one module.
struct PartitionSystem {
  int size = 0;
  std::vector<long> dh;  // dh[a*size+b] = DH(a (x) b)
  std::vector<ElementId> ground;
  std::vector<long> u;
  std::vector<std::string> labels;
  std::vector<ColourMonomial> colours;
  QUnit unit;

  int t() const { return static_cast<int>(ground.size()); }
  long dh_of(ElementId a, ElementId b) const { return dh[static_cast<std::size_t>(a) * size + b]; }
  // Minimal gap between a part coloured `left` and the part coloured `right` just after it.
  long gap(ElementId left, ElementId right) const { return dh_of(right, left); }
  ElementId find(std::string_view label) const;
};

PartitionSystem partition_system(const PerfectCrystal& c, const GroundStatePath& gsp, const NormalizedEnergy& ne);

// rows[b][b'] holds M(b' (x) b), as in the displayed matrices.
PartitionSystem partition_system_from_matrix(std::vector<std::string> labels, const std::vector<std::vector<long>>& rows,
                                             std::vector<ElementId> ground);

// The unique u with sum zero whose cyclic ground chain holds under the >> relation.
// Throws when it is not unique or does not exist.
std::vector<long> solve_ground_chain(const PartitionSystem& sys);

struct ColouredInteger {
  long size = 0;
  ElementId colour = 0;
  bool operator==(const ColouredInteger&) const = default;
  auto operator<=>(const ColouredInteger&) const = default;
};

enum class RelationMode { Minimal, Flexible };

std::string mode_token(RelationMode m);
RelationMode parse_mode(std::string_view token);

bool relation_check(const ColouredInteger& a, const ColouredInteger& b, RelationMode mode, int d,
                    const PartitionSystem& sys);

// seq includes the tail. require_t_divisible selects the sets whose total part count is a multiple of t.
bool validate(const std::vector<ColouredInteger>& seq, const PartitionSystem& sys, RelationMode mode, int d,
              bool require_t_divisible = false);

// Parts pi_0..pi_{s-1}, largest first; the ground tail is implicit.
struct MultiGroundedPartition {
  std::vector<ColouredInteger> parts;

  bool operator==(const MultiGroundedPartition&) const = default;
  auto operator<=>(const MultiGroundedPartition&) const = default;
};

std::vector<ColouredInteger> full_sequence(const MultiGroundedPartition& p, const PartitionSystem& sys);
MultiGroundedPartition strip_tail(const std::vector<ColouredInteger>& seq, const PartitionSystem& sys);
long partition_weight(const MultiGroundedPartition& p, const PartitionSystem& sys);
ColourMonomial partition_colour(const MultiGroundedPartition& p, const PartitionSystem& sys);

nlohmann::json partition_to_json(const MultiGroundedPartition& p, const PartitionSystem& sys);
MultiGroundedPartition partition_from_json(const nlohmann::json& j, const PartitionSystem& sys);

// Least total size that can still be added to the left of a part (colour b, size s).
class LowerBound {
 public:
  LowerBound(const PartitionSystem& sys, RelationMode mode, int d);
  long operator()(ElementId b, long s) const {
    if (s >= hi_) return 0;
    if (s < lo_) return below_;
    return table_[static_cast<std::size_t>(b) * static_cast<std::size_t>(hi_ - lo_) + static_cast<std::size_t>(s - lo_)];
  }

 private:
  long lo_ = 0, hi_ = 0;
  long below_ = 0;
  std::vector<long> table_;
};

struct EnumerationQuery {
  RelationMode mode = RelationMode::Minimal;
  int d = 1;
  long max_weight = 0;
  bool t_divisible = true;
  int part_cap = 32;
};

struct SweepStats {
  bool hit_part_cap = false;
  std::uint64_t nodes = 0;
  std::uint64_t emitted = 0;
  int deepest = 0;
};

// Called once per partition with the parts rightmost-first (stack[0] sits next to the tail).
using PartitionVisitor =
    std::function<void(const std::vector<ColouredInteger>& stack, long weight, const ColourMonomial& colour)>;

SweepStats for_each_mgp(const PartitionSystem& sys, const LowerBound& bound, const EnumerationQuery& q,
                        const PartitionVisitor& visit);

// Same search split into subtrees over `threads` workers. visitor_for(i) must give worker i
// a visitor it owns; visits within one worker are sequential.
SweepStats for_each_mgp_parallel(const PartitionSystem& sys, const LowerBound& bound, const EnumerationQuery& q,
                                 unsigned threads, const std::function<PartitionVisitor(unsigned)>& visitor_for);

// Worker count hint: set_worker_threads, else MGPCHAR_THREADS, else the hardware count.
unsigned worker_threads();
void set_worker_threads(unsigned n);

struct StabilityPolicy {
  int initial_cap = 16;
  int ceiling = 1024;
};

struct StabilityTelemetry {
  std::string kind;  // "part-cap" or "defect-bound"
  std::vector<int> caps;
  std::vector<std::uint64_t> sizes;  // partitions or paths visited per sweep
  bool converged = false;
  int final_cap() const { return caps.empty() ? 0 : caps.back(); }
};

nlohmann::json telemetry_to_json(const StabilityTelemetry& t);

struct EnumerationResult {
  std::vector<MultiGroundedPartition> partitions;
  StabilityTelemetry telemetry;
};

// All partitions of weight <= max_weight, sorted by (weight, parts).
EnumerationResult enumerate_mgp(const PartitionSystem& sys, RelationMode mode, int d, long max_weight,
                                bool t_divisible = true, const StabilityPolicy& policy = {});

MultiGroundedPartition phi_forward(const LambdaPath& path, const PartitionSystem& sys);
LambdaPath phi_inverse(const MultiGroundedPartition& p, const PartitionSystem& sys);

struct DecompositionPair {
  MultiGroundedPartition minimal;
  std::vector<long> free;  // non-increasing multiples of d, length a multiple of t

  bool operator==(const DecompositionPair&) const = default;
};

DecompositionPair phi_d_forward(const MultiGroundedPartition& p, const PartitionSystem& sys, int d);
MultiGroundedPartition phi_d_inverse(const DecompositionPair& pair, const PartitionSystem& sys, int d);

}  // namespace mgp
