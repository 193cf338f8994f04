#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mgp/series.hpp"

namespace mgp {

enum class Family { A2n_2, Dnp1_2, A2nm1_2, Bn_1, Dn_1 };

std::string family_token(Family f);
Family parse_family(std::string_view token);
int family_min_rank(Family f);
const std::vector<Family>& all_families();

using ElementId = int;

// Coefficients over Lambda_0..Lambda_n.
struct ClassicalWeight {
  std::vector<int> coeffs;

  static ClassicalWeight fundamental(int n, int i);
  bool operator==(const ClassicalWeight&) const = default;
  auto operator<=>(const ClassicalWeight&) const = default;
  std::string to_string() const;
};

struct Arrow {
  ElementId from;
  int index;
  ElementId to;
};

class PerfectCrystal {
 public:
  // Validates arrow data and derives epsilon/phi from the chains.
  PerfectCrystal(std::string name, int n, int d0, std::vector<std::string> labels, std::vector<Arrow> arrows,
                 std::vector<ColourMonomial> colours, std::optional<Family> family = std::nullopt);

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int index_count() const { return n_ + 1; }
  int d0() const { return d0_; }
  std::optional<Family> family() const { return family_; }
  int size() const { return static_cast<int>(labels_.size()); }
  std::size_t colour_rank() const { return colours_.empty() ? 0 : colours_.front().rank(); }

  const std::string& label(ElementId b) const { return labels_.at(b); }
  const std::vector<std::string>& labels() const { return labels_; }
  ElementId find(std::string_view label) const;
  const std::vector<Arrow>& arrows() const { return arrows_; }

  std::optional<ElementId> f(ElementId b, int i) const { return f_[slot(b, i)]; }
  std::optional<ElementId> e(ElementId b, int i) const { return e_[slot(b, i)]; }
  int epsilon(ElementId b, int i) const { return eps_[slot(b, i)]; }
  int phi(ElementId b, int i) const { return phi_[slot(b, i)]; }
  ClassicalWeight epsilon(ElementId b) const;
  ClassicalWeight phi(ElementId b) const;
  ClassicalWeight weight(ElementId b) const;
  const ColourMonomial& colour(ElementId b) const { return colours_.at(b); }

  // Elements with phi(b) == lambda (resp. epsilon(b) == lambda).
  std::vector<ElementId> with_phi(const ClassicalWeight& lambda) const;
  std::vector<ElementId> with_epsilon(const ClassicalWeight& lambda) const;

 private:
  std::size_t slot(ElementId b, int i) const;

  std::string name_;
  int n_;
  int d0_;
  std::optional<Family> family_;
  std::vector<std::string> labels_;
  std::vector<Arrow> arrows_;
  std::vector<ColourMonomial> colours_;
  std::vector<std::optional<ElementId>> f_, e_;
  std::vector<int> eps_, phi_;
};

PerfectCrystal build_family(Family family, int n);

PerfectCrystal load_crystal_json(const nlohmann::json& j);
nlohmann::json crystal_to_json(const PerfectCrystal& c);

// (epsilon_i, phi_i) of b.
std::pair<int, int> eps_phi(const PerfectCrystal& c, ElementId b, int i);
std::pair<ClassicalWeight, ColourMonomial> classical_weight(const PerfectCrystal& c, ElementId b);

// left (x) right
struct TensorPair {
  ElementId left;
  ElementId right;
  bool operator==(const TensorPair&) const = default;
  auto operator<=>(const TensorPair&) const = default;
};

// Kashiwara: the left factor moves when phi_i(left) exceeds eps_i(right) (f) or
// reaches it (e). Anti is the mirror image with the roles of the factors swapped.
enum class TensorConvention { Kashiwara, Anti };

std::string convention_token(TensorConvention c);
TensorConvention parse_convention(std::string_view token);

std::optional<TensorPair> tensor_f(const PerfectCrystal& c, TensorPair p, int i,
                                   TensorConvention conv = TensorConvention::Kashiwara);
std::optional<TensorPair> tensor_e(const PerfectCrystal& c, TensorPair p, int i,
                                   TensorConvention conv = TensorConvention::Kashiwara);

// True when every pair of B(x)B is reachable from every other through tensor arrows.
bool tensor_square_connected(const PerfectCrystal& c, TensorConvention conv = TensorConvention::Kashiwara);

}  // namespace mgp
