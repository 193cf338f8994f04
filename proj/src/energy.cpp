#include "mgp/energy.hpp"

#include <algorithm>
#include <iomanip>
#include <queue>
#include <sstream>

namespace mgp {

namespace {

// Change of H along the tensor arrow p -> e_i(p).
int energy_step(const PerfectCrystal& c, TensorPair p, int i) {
  if (i != 0) return 0;
  return c.phi(p.left, 0) >= c.epsilon(p.right, 0) ? 1 : -1;
}

}  // namespace

EnergyFunction solve_energy(const PerfectCrystal& c, TensorPair seed, int seed_value, TensorConvention conv) {
  const int sz = c.size();
  auto idx = [sz](TensorPair p) { return static_cast<std::size_t>(p.left) * sz + p.right; };
  std::vector<std::optional<int>> val(static_cast<std::size_t>(sz) * sz);
  val[idx(seed)] = seed_value;
  std::queue<TensorPair> todo;
  todo.push(seed);

  auto assign = [&](TensorPair q, int v) {
    auto& slot = val[idx(q)];
    if (!slot) {
      slot = v;
      todo.push(q);
    } else if (*slot != v) {
      throw InconsistentEnergy("inconsistent energy at " + c.label(q.left) + " (x) " + c.label(q.right) + ": " +
                               std::to_string(*slot) + " vs " + std::to_string(v));
    }
  };

  while (!todo.empty()) {
    TensorPair p = todo.front();
    todo.pop();
    int h = *val[idx(p)];
    for (int i = 0; i <= c.n(); ++i) {
      if (auto q = tensor_e(c, p, i, conv)) assign(*q, h + energy_step(c, p, i));
      if (auto q = tensor_f(c, p, i, conv)) {
        // p = e_i(q), so H(p) = H(q) + step(q).
        assign(*q, h - energy_step(c, *q, i));
      }
    }
  }

  std::vector<int> values;
  values.reserve(val.size());
  for (std::size_t k = 0; k < val.size(); ++k) {
    if (!val[k]) {
      throw NotPerfect("not a perfect crystal: " + c.label(static_cast<int>(k / sz)) + " (x) " +
                       c.label(static_cast<int>(k % sz)) + " unreachable from the seed");
    }
    values.push_back(*val[k]);
  }
  return EnergyFunction(sz, std::move(values), seed, seed_value);
}

std::pair<TensorPair, int> family_seed(const PerfectCrystal& c) {
  if (!c.family()) throw DomainError("custom crystals need an explicit energy seed");
  switch (*c.family()) {
    case Family::A2n_2:
    case Family::Dnp1_2:
    case Family::Bn_1:
      return {{c.find("0"), c.find("0")}, 0};
    case Family::A2nm1_2:
      return {{c.find("1"), c.find("1bar")}, -1};
    case Family::Dn_1: {
      std::string sn = std::to_string(c.n());
      return {{c.find(sn + "bar"), c.find(sn)}, 0};
    }
  }
  throw DomainError("unknown family");
}

EnergyFunction solve_family_energy(const PerfectCrystal& c, TensorConvention conv) {
  auto [seed, value] = family_seed(c);
  return solve_energy(c, seed, value, conv);
}

bool energy_consistent(const PerfectCrystal& c, const EnergyFunction& h, TensorConvention conv) {
  for (ElementId a = 0; a < c.size(); ++a) {
    for (ElementId b = 0; b < c.size(); ++b) {
      TensorPair p{a, b};
      for (int i = 0; i <= c.n(); ++i) {
        auto q = tensor_e(c, p, i, conv);
        if (q && h(q->left, q->right) != h(a, b) + energy_step(c, p, i)) return false;
      }
    }
  }
  return true;
}

nlohmann::json energy_to_json(const PerfectCrystal& c, const EnergyFunction& h) {
  nlohmann::json values = nlohmann::json::array();
  for (ElementId r = 0; r < c.size(); ++r) {
    std::vector<int> row;
    for (ElementId col = 0; col < c.size(); ++col) row.push_back(h.entry(r, col));
    values.push_back(row);
  }
  return {{"crystal", c.name()}, {"rows", c.labels()}, {"cols", c.labels()}, {"values", values}};
}

std::string energy_table(const PerfectCrystal& c, const EnergyFunction& h) {
  std::size_t w = 2;
  for (const auto& l : c.labels()) w = std::max(w, l.size());
  for (ElementId r = 0; r < c.size(); ++r) {
    for (ElementId col = 0; col < c.size(); ++col) w = std::max(w, std::to_string(h.entry(r, col)).size());
  }
  std::ostringstream os;
  os << std::setw(static_cast<int>(w)) << "" << " |";
  for (const auto& l : c.labels()) os << " " << std::setw(static_cast<int>(w)) << l;
  os << "\n" << std::string(w + 2 + (w + 1) * c.labels().size(), '-') << "\n";
  for (ElementId r = 0; r < c.size(); ++r) {
    os << std::setw(static_cast<int>(w)) << c.label(r) << " |";
    for (ElementId col = 0; col < c.size(); ++col) os << " " << std::setw(static_cast<int>(w)) << h.entry(r, col);
    os << "\n";
  }
  return os.str();
}

NormalizedEnergy::NormalizedEnergy(int size, std::vector<mpq_class> h_lambda, int D, mpq_class shift)
    : size_(size), h_lambda_(std::move(h_lambda)), D_(D), shift_(std::move(shift)) {
  dh_.reserve(h_lambda_.size());
  for (const auto& v : h_lambda_) {
    mpq_class x = v * D_;
    x.canonicalize();
    if (x.get_den() != 1) throw DomainError("D*H_lambda is not integral for D=" + std::to_string(D_));
    dh_.push_back(x.get_num().get_si());
  }
}

namespace {

mpq_class ground_shift(const EnergyFunction& h, const GroundStatePath& gsp) {
  mpq_class s = 0;
  for (int k = 0; k < gsp.t; ++k) s += h(gsp.at(k + 1), gsp.at(k));
  s /= gsp.t;
  s.canonicalize();
  return s;
}

bool divisor_valid(const EnergyFunction& h, const GroundStatePath& gsp, const mpq_class& shift, int D) {
  for (ElementId a = 0; a < h.size(); ++a) {
    for (ElementId b = 0; b < h.size(); ++b) {
      mpq_class x = (h(a, b) - shift) * D;
      x.canonicalize();
      if (x.get_den() != 1) return false;
    }
  }
  mpq_class s = 0;
  for (int k = 0; k < gsp.t; ++k) s += (k + 1) * (h(gsp.at(k + 1), gsp.at(k)) - shift) * D;
  s /= gsp.t;
  s.canonicalize();
  return s.get_den() == 1;
}

}  // namespace

std::vector<int> valid_divisors(const EnergyFunction& h, const GroundStatePath& gsp) {
  mpq_class shift = ground_shift(h, gsp);
  std::vector<int> out;
  for (int D = 1; D <= 2 * gsp.t; ++D) {
    if ((2 * gsp.t) % D == 0 && divisor_valid(h, gsp, shift, D)) out.push_back(D);
  }
  return out;
}

NormalizedEnergy normalize(const EnergyFunction& h, const GroundStatePath& gsp, std::optional<int> D) {
  mpq_class shift = ground_shift(h, gsp);
  auto divisors = valid_divisors(h, gsp);
  if (divisors.empty()) throw DomainError("no divisor of 2t normalises this energy");
  int chosen = divisors.front();
  if (D) {
    if (std::find(divisors.begin(), divisors.end(), *D) == divisors.end()) {
      std::string list;
      for (int x : divisors) list += (list.empty() ? "" : ", ") + std::to_string(x);
      throw DomainError("D=" + std::to_string(*D) + " is not a valid divisor here (valid: " + list + ")");
    }
    chosen = *D;
  }
  std::vector<mpq_class> hl;
  hl.reserve(static_cast<std::size_t>(h.size()) * h.size());
  for (ElementId a = 0; a < h.size(); ++a) {
    for (ElementId b = 0; b < h.size(); ++b) {
      mpq_class x = h(a, b) - shift;
      x.canonicalize();
      hl.push_back(x);
    }
  }
  return NormalizedEnergy(h.size(), std::move(hl), chosen, shift);
}

std::vector<long> ground_integers(const NormalizedEnergy& ne, const GroundStatePath& gsp) {
  const int t = gsp.t;
  long weighted = 0;
  for (int l = 0; l < t; ++l) weighted += (l + 1) * ne.dh(gsp.at(l + 1), gsp.at(l));
  if (weighted % t != 0) throw DomainError("ground integers are not integral for this D");
  std::vector<long> u(t);
  for (int k = 0; k < t; ++k) {
    long tail = 0;
    for (int l = k; l < t; ++l) tail += ne.dh(gsp.at(l + 1), gsp.at(l));
    u[k] = -weighted / t + tail;
  }
  return u;
}

}  // namespace mgp
