#include "mgp/crystal.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace mgp {

namespace {

struct FamilyInfo {
  Family family;
  const char* token;
  int min_rank;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::A2n_2, "A2n_2", 2},  {Family::Dnp1_2, "Dnp1_2", 2}, {Family::A2nm1_2, "A2nm1_2", 3},
    {Family::Bn_1, "Bn_1", 3},    {Family::Dn_1, "Dn_1", 4},
};

const FamilyInfo& info(Family f) {
  for (const auto& fi : kFamilies) {
    if (fi.family == f) return fi;
  }
  throw DomainError("unknown family");
}

std::string bar(int u) { return std::to_string(u) + "bar"; }

}  // namespace

std::string family_token(Family f) { return info(f).token; }

Family parse_family(std::string_view token) {
  for (const auto& fi : kFamilies) {
    if (token == fi.token) return fi.family;
  }
  throw DomainError("unknown family '" + std::string(token) + "' (valid: A2n_2, Dnp1_2, A2nm1_2, Bn_1, Dn_1)");
}

int family_min_rank(Family f) { return info(f).min_rank; }

const std::vector<Family>& all_families() {
  static const std::vector<Family> fams = {Family::A2n_2, Family::Dnp1_2, Family::A2nm1_2, Family::Bn_1,
                                           Family::Dn_1};
  return fams;
}

ClassicalWeight ClassicalWeight::fundamental(int n, int i) {
  if (i < 0 || i > n) throw DomainError("fundamental weight index out of range");
  ClassicalWeight w{std::vector<int>(n + 1, 0)};
  w.coeffs[i] = 1;
  return w;
}

std::string ClassicalWeight::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    if (!out.empty()) out += coeffs[i] > 0 ? " + " : " - ";
    else if (coeffs[i] < 0) out += "-";
    int mag = std::abs(coeffs[i]);
    if (mag != 1) out += std::to_string(mag);
    out += "L" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

PerfectCrystal::PerfectCrystal(std::string name, int n, int d0, std::vector<std::string> labels,
                               std::vector<Arrow> arrows, std::vector<ColourMonomial> colours,
                               std::optional<Family> family)
    : name_(std::move(name)),
      n_(n),
      d0_(d0),
      family_(family),
      labels_(std::move(labels)),
      arrows_(std::move(arrows)),
      colours_(std::move(colours)) {
  if (n_ < 1) throw DomainError("crystal rank must be at least 1");
  if (d0_ < 1) throw DomainError("d0 must be positive");
  if (labels_.empty()) throw DomainError("crystal has no elements");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw DomainError("duplicate element labels");
  if (colours_.size() != labels_.size()) throw DomainError("every element needs a colour monomial");
  for (const auto& m : colours_) {
    if (m.rank() != colours_.front().rank()) throw DomainError("colour monomials have different lengths");
  }

  const std::size_t cells = labels_.size() * static_cast<std::size_t>(index_count());
  f_.assign(cells, std::nullopt);
  e_.assign(cells, std::nullopt);
  for (const Arrow& a : arrows_) {
    if (a.from < 0 || a.from >= size() || a.to < 0 || a.to >= size()) throw DomainError("arrow endpoint out of range");
    if (a.index < 0 || a.index > n_) throw DomainError("arrow index out of range");
    if (a.from == a.to) throw DomainError("arrow loops at " + labels_[a.from]);
    auto& fs = f_[slot(a.from, a.index)];
    auto& es = e_[slot(a.to, a.index)];
    if (fs || es) {
      throw DomainError("arrow maps for index " + std::to_string(a.index) + " are not injective at " +
                        labels_[a.from] + " -> " + labels_[a.to]);
    }
    fs = a.to;
    es = a.from;
  }

  eps_.assign(cells, 0);
  phi_.assign(cells, 0);
  for (ElementId b = 0; b < size(); ++b) {
    for (int i = 0; i <= n_; ++i) {
      int k = 0;
      for (auto x = e(b, i); x; x = e(*x, i)) {
        if (++k > size()) throw DomainError("cyclic " + std::to_string(i) + "-chain through " + labels_[b]);
      }
      eps_[slot(b, i)] = k;
      k = 0;
      for (auto x = f(b, i); x; x = f(*x, i)) {
        if (++k > size()) throw DomainError("cyclic " + std::to_string(i) + "-chain through " + labels_[b]);
      }
      phi_[slot(b, i)] = k;
    }
  }
}

std::size_t PerfectCrystal::slot(ElementId b, int i) const {
  if (b < 0 || b >= size()) throw DomainError("element id out of range");
  if (i < 0 || i > n_) throw DomainError("Kashiwara index out of range");
  return static_cast<std::size_t>(b) * static_cast<std::size_t>(index_count()) + static_cast<std::size_t>(i);
}

ElementId PerfectCrystal::find(std::string_view label) const {
  for (ElementId b = 0; b < size(); ++b) {
    if (labels_[b] == label) return b;
  }
  throw DomainError("no element labelled '" + std::string(label) + "' in " + name_);
}

ClassicalWeight PerfectCrystal::epsilon(ElementId b) const {
  ClassicalWeight w{std::vector<int>(index_count())};
  for (int i = 0; i <= n_; ++i) w.coeffs[i] = epsilon(b, i);
  return w;
}

ClassicalWeight PerfectCrystal::phi(ElementId b) const {
  ClassicalWeight w{std::vector<int>(index_count())};
  for (int i = 0; i <= n_; ++i) w.coeffs[i] = phi(b, i);
  return w;
}

ClassicalWeight PerfectCrystal::weight(ElementId b) const {
  ClassicalWeight w{std::vector<int>(index_count())};
  for (int i = 0; i <= n_; ++i) w.coeffs[i] = phi(b, i) - epsilon(b, i);
  return w;
}

std::vector<ElementId> PerfectCrystal::with_phi(const ClassicalWeight& lambda) const {
  std::vector<ElementId> out;
  for (ElementId b = 0; b < size(); ++b) {
    if (phi(b) == lambda) out.push_back(b);
  }
  return out;
}

std::vector<ElementId> PerfectCrystal::with_epsilon(const ClassicalWeight& lambda) const {
  std::vector<ElementId> out;
  for (ElementId b = 0; b < size(); ++b) {
    if (epsilon(b) == lambda) out.push_back(b);
  }
  return out;
}

PerfectCrystal build_family(Family family, int n) {
  if (n < family_min_rank(family)) {
    throw DomainError(family_token(family) + " needs n >= " + std::to_string(family_min_rank(family)));
  }
  std::vector<std::string> labels;
  for (int u = 1; u <= n; ++u) labels.push_back(std::to_string(u));
  switch (family) {
    case Family::A2n_2:
      for (int u = n; u >= 1; --u) labels.push_back(bar(u));
      labels.push_back("0");
      break;
    case Family::Dnp1_2:
      labels.push_back("0bar");
      for (int u = n; u >= 1; --u) labels.push_back(bar(u));
      labels.push_back("0");
      break;
    case Family::A2nm1_2:
    case Family::Dn_1:
      for (int u = n; u >= 1; --u) labels.push_back(bar(u));
      break;
    case Family::Bn_1:
      labels.push_back("0");
      for (int u = n; u >= 1; --u) labels.push_back(bar(u));
      break;
  }
  auto id = [&](const std::string& l) {
    return static_cast<ElementId>(std::find(labels.begin(), labels.end(), l) - labels.begin());
  };
  std::vector<Arrow> arrows;
  auto add = [&](const std::string& from, int i, const std::string& to) { arrows.push_back({id(from), i, id(to)}); };

  for (int i = 1; i < n; ++i) {
    add(std::to_string(i), i, std::to_string(i + 1));
    add(bar(i + 1), i, bar(i));
  }
  const std::string sn = std::to_string(n);
  switch (family) {
    case Family::A2n_2:
      add(sn, n, bar(n));
      add("0", 0, "1");
      add(bar(1), 0, "0");
      break;
    case Family::Dnp1_2:
      add(sn, n, "0bar");
      add("0bar", n, bar(n));
      add("0", 0, "1");
      add(bar(1), 0, "0");
      break;
    case Family::A2nm1_2:
      add(sn, n, bar(n));
      add(bar(2), 0, "1");
      add(bar(1), 0, "2");
      break;
    case Family::Bn_1:
      add(sn, n, "0");
      add("0", n, bar(n));
      add(bar(2), 0, "1");
      add(bar(1), 0, "2");
      break;
    case Family::Dn_1:
      add(std::to_string(n - 1), n, bar(n));
      add(sn, n, bar(n - 1));
      add(bar(2), 0, "1");
      add(bar(1), 0, "2");
      break;
  }

  const std::size_t rank = static_cast<std::size_t>(n) + 1;
  std::vector<ColourMonomial> colours;
  for (const auto& l : labels) {
    if (l == "0" || l == "0bar") {
      colours.emplace_back(rank);
    } else if (l.ends_with("bar")) {
      colours.push_back(ColourMonomial::variable(rank, std::stoul(l), -1));
    } else {
      colours.push_back(ColourMonomial::variable(rank, std::stoul(l), 1));
    }
  }
  int d0 = family == Family::A2n_2 ? 2 : 1;
  return PerfectCrystal(family_token(family) + " n=" + std::to_string(n), n, d0, std::move(labels),
                        std::move(arrows), std::move(colours), family);
}

PerfectCrystal load_crystal_json(const nlohmann::json& j) {
  try {
    std::string name = j.value("name", std::string("custom"));
    int n = j.at("n").get<int>();
    int d0 = j.value("d0", 1);
    auto labels = j.at("elements").get<std::vector<std::string>>();
    auto index_of = [&](const std::string& l) {
      auto it = std::find(labels.begin(), labels.end(), l);
      if (it == labels.end()) throw DomainError("arrow refers to unknown element '" + l + "'");
      return static_cast<ElementId>(it - labels.begin());
    };
    std::vector<Arrow> arrows;
    for (const auto& a : j.at("arrows")) {
      arrows.push_back({index_of(a.at("from").get<std::string>()), a.at("label").get<int>(),
                        index_of(a.at("to").get<std::string>())});
    }
    const auto& cm = j.at("colour_monomials");
    std::vector<ColourMonomial> colours;
    for (const auto& l : labels) {
      if (!cm.contains(l)) throw DomainError("missing colour monomial for element '" + l + "'");
      colours.emplace_back(cm.at(l).get<std::vector<int>>());
    }
    return PerfectCrystal(name, n, d0, std::move(labels), std::move(arrows), std::move(colours));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed crystal JSON: ") + e.what());
  }
}

nlohmann::json crystal_to_json(const PerfectCrystal& c) {
  nlohmann::json arrows = nlohmann::json::array();
  for (const auto& a : c.arrows()) {
    arrows.push_back({{"from", c.label(a.from)}, {"label", a.index}, {"to", c.label(a.to)}});
  }
  nlohmann::json colours = nlohmann::json::object();
  for (ElementId b = 0; b < c.size(); ++b) colours[c.label(b)] = c.colour(b).exponents();
  return {{"name", c.name()}, {"n", c.n()},           {"d0", c.d0()},
          {"elements", c.labels()}, {"arrows", arrows}, {"colour_monomials", colours}};
}

std::pair<int, int> eps_phi(const PerfectCrystal& c, ElementId b, int i) { return {c.epsilon(b, i), c.phi(b, i)}; }

std::pair<ClassicalWeight, ColourMonomial> classical_weight(const PerfectCrystal& c, ElementId b) {
  return {c.weight(b), c.colour(b)};
}

std::string convention_token(TensorConvention c) { return c == TensorConvention::Kashiwara ? "kashiwara" : "anti"; }

TensorConvention parse_convention(std::string_view token) {
  if (token == "kashiwara") return TensorConvention::Kashiwara;
  if (token == "anti") return TensorConvention::Anti;
  throw DomainError("unknown tensor convention '" + std::string(token) + "' (valid: kashiwara, anti)");
}

std::optional<TensorPair> tensor_f(const PerfectCrystal& c, TensorPair p, int i, TensorConvention conv) {
  bool move_left = conv == TensorConvention::Kashiwara ? c.phi(p.left, i) > c.epsilon(p.right, i)
                                                       : !(c.phi(p.right, i) > c.epsilon(p.left, i));
  if (move_left) {
    auto x = c.f(p.left, i);
    if (!x) return std::nullopt;
    return TensorPair{*x, p.right};
  }
  auto x = c.f(p.right, i);
  if (!x) return std::nullopt;
  return TensorPair{p.left, *x};
}

std::optional<TensorPair> tensor_e(const PerfectCrystal& c, TensorPair p, int i, TensorConvention conv) {
  bool move_left = conv == TensorConvention::Kashiwara ? c.phi(p.left, i) >= c.epsilon(p.right, i)
                                                       : !(c.phi(p.right, i) >= c.epsilon(p.left, i));
  if (move_left) {
    auto x = c.e(p.left, i);
    if (!x) return std::nullopt;
    return TensorPair{*x, p.right};
  }
  auto x = c.e(p.right, i);
  if (!x) return std::nullopt;
  return TensorPair{p.left, *x};
}

bool tensor_square_connected(const PerfectCrystal& c, TensorConvention conv) {
  const int sz = c.size();
  std::vector<char> seen(static_cast<std::size_t>(sz) * sz, 0);
  std::queue<TensorPair> todo;
  todo.push({0, 0});
  seen[0] = 1;
  int count = 1;
  while (!todo.empty()) {
    TensorPair p = todo.front();
    todo.pop();
    for (int i = 0; i <= c.n(); ++i) {
      for (auto q : {tensor_e(c, p, i, conv), tensor_f(c, p, i, conv)}) {
        if (!q) continue;
        auto& s = seen[static_cast<std::size_t>(q->left) * sz + q->right];
        if (!s) {
          s = 1;
          ++count;
          todo.push(*q);
        }
      }
    }
  }
  return count == sz * sz;
}

}  // namespace mgp
