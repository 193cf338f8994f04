#include "mgp/cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "mgp/character.hpp"

namespace mgp {

namespace {

struct RunConfig {
  std::string family;
  int n = 0;
  std::string weight = "L0";
  std::string theorem;
  int cap = 10;
  std::optional<int> D, d;
  int defect_floor = 4;
  std::string format = "table";
  std::string output;
  unsigned threads = 0;

  std::string crystal_file;
  std::string lambda;  // comma separated, custom crystals only
  std::string seed;    // "left,right" labels, custom crystals only
  int seed_value = 0;

  std::string method = "enumerative";
  std::string mode = "minimal";
  std::string form = "even";
  std::optional<std::size_t> perturb;
  long max_weight = 6;
  int L = 4;
  bool any_length = false;
  bool timings = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

bool custom(const RunConfig& cfg) { return !cfg.crystal_file.empty(); }

PerfectCrystal crystal_from(const RunConfig& cfg) {
  if (custom(cfg)) {
    std::ifstream in(cfg.crystal_file);
    if (!in) throw UsageError("cannot read crystal file '" + cfg.crystal_file + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("crystal file is not valid JSON: " + std::string(e.what()));
    }
    return load_crystal_json(j);
  }
  if (cfg.family.empty()) throw UsageError("--family or --crystal-file is required");
  if (cfg.n < 1) throw UsageError("--n is required");
  Family f = parse_family(cfg.family);
  if (cfg.n < family_min_rank(f)) {
    throw UsageError(cfg.family + " needs n >= " + std::to_string(family_min_rank(f)));
  }
  return build_family(f, cfg.n);
}

std::pair<TensorPair, int> seed_from(const RunConfig& cfg, const PerfectCrystal& c) {
  if (!custom(cfg)) return family_seed(c);
  auto parts = split_csv(cfg.seed);
  if (parts.size() != 2) throw UsageError("--seed left,right is required with --crystal-file");
  return {{c.find(parts[0]), c.find(parts[1])}, cfg.seed_value};
}

ClassicalWeight lambda_from(const RunConfig& cfg, const PerfectCrystal& c) {
  if (!custom(cfg)) return weight_vector(parse_weight(cfg.weight), c.n());
  ClassicalWeight w;
  for (const auto& v : split_csv(cfg.lambda)) {
    try {
      w.coeffs.push_back(std::stoi(v));
    } catch (const std::exception&) {
      throw UsageError("--lambda expects comma separated integers");
    }
  }
  if (static_cast<int>(w.coeffs.size()) != c.index_count()) {
    throw UsageError("--lambda needs " + std::to_string(c.index_count()) + " entries with --crystal-file");
  }
  return w;
}

ModuleDescriptor module_from(const RunConfig& cfg) {
  PerfectCrystal c = crystal_from(cfg);
  auto [seed, value] = seed_from(cfg, c);
  ClassicalWeight lambda = lambda_from(cfg, c);
  if (!custom(cfg)) {
    WeightTag tag = parse_weight(cfg.weight);
    return make_module(*c.family(), c.n(), tag, cfg.D, cfg.d);
  }
  return ModuleDescriptor(std::move(c), std::move(lambda), seed, value, cfg.D, cfg.d.value_or(1));
}

std::string module_name(const ModuleDescriptor& md) {
  return md.crystal.name() + " " + (md.tag ? weight_token(*md.tag) : md.lambda.to_string());
}

std::string series_table(const TruncatedSeries& s) {
  std::ostringstream os;
  os << "unit " << s.unit().to_string() << ", exact through q^" << s.cap() << "\n";
  for (const auto& [q, p] : s.terms()) os << std::left << std::setw(6) << ("q^" + std::to_string(q)) << p.to_string() << "\n";
  return os.str();
}

std::string labels_of(const std::vector<ElementId>& v, const PerfectCrystal& c) {
  std::string out;
  for (ElementId b : v) out += (out.empty() ? "" : " ") + c.label(b);
  return out;
}

std::string join(const std::vector<long>& v) {
  std::string out;
  for (long x : v) out += (out.empty() ? "" : " ") + std::to_string(x);
  return out;
}

std::string part_string(const ColouredInteger& x, const PartitionSystem& sys) {
  return std::to_string(x.size) + "_" + sys.labels[x.colour];
}

int cmd_energy(const RunConfig& cfg, std::ostream& out) {
  PerfectCrystal c = crystal_from(cfg);
  auto [seed, value] = seed_from(cfg, c);
  EnergyFunction h = solve_energy(c, seed, value);
  if (cfg.format == "json") {
    out << energy_to_json(c, h).dump(2) << "\n";
  } else {
    out << energy_table(c, h);
  }
  return kOk;
}

int cmd_gsp(const RunConfig& cfg, std::ostream& out) {
  ModuleDescriptor md = module_from(cfg);
  if (cfg.format == "json") {
    nlohmann::json j = gsp_to_json(md.crystal, md.gsp);
    j["D"] = md.ne.D();
    j["u"] = md.u;
    j["shift"] = md.ne.shift().get_str();
    out << j.dump(2) << "\n";
  } else {
    out << "module  " << module_name(md) << "\n";
    out << "period  " << md.gsp.t << "\n";
    out << "ground  " << labels_of(md.gsp.g, md.crystal) << "\n";
    out << "u       " << join(md.u) << "\n";
    out << "D       " << md.ne.D() << "\n";
    out << "shift   " << md.ne.shift().get_str() << "\n";
  }
  return kOk;
}

int cmd_character(const RunConfig& cfg, std::ostream& out) {
  TruncatedSeries s;
  std::optional<StabilityTelemetry> tel;
  std::string name;
  if (cfg.method == "product") {
    if (cfg.theorem.empty() || cfg.n < 1) throw UsageError("--method product needs --theorem and --n");
    s = character_product(cfg.theorem, cfg.n, cfg.cap);
    name = "theorem " + cfg.theorem + " n=" + std::to_string(cfg.n);
  } else {
    ModuleDescriptor md = module_from(cfg);
    name = module_name(md);
    CharacterResult r;
    if (cfg.method == "enumerative") {
      r = character_enumerative(md, cfg.cap);
    } else if (cfg.method == "flexible") {
      r = character_flexible(md, cfg.cap);
    } else if (cfg.method == "paths") {
      r = path_character_oracle(md, cfg.cap, cfg.defect_floor);
    } else {
      throw UsageError("unknown method '" + cfg.method + "' (valid: enumerative, flexible, product, paths)");
    }
    s = std::move(r.series);
    tel = r.telemetry;
  }
  if (cfg.format == "json") {
    nlohmann::json j{{"module", name}, {"method", cfg.method}, {"series", to_json(s)}};
    if (tel) j["telemetry"] = telemetry_to_json(*tel);
    out << j.dump(2) << "\n";
  } else {
    out << name << " (" << cfg.method << ")\n" << series_table(s);
  }
  return kOk;
}

std::string diff_terms(const std::vector<std::pair<ColourMonomial, BigInt>>& v) {
  std::string out;
  for (const auto& [m, c] : v) out += (out.empty() ? "" : " + ") + c.get_str() + "*" + m.to_string();
  return out.empty() ? "0" : out;
}

void report_row(std::ostream& out, const VerificationReport& r, bool timings) {
  out << std::left << std::setw(6) << r.theorem << " n=" << r.n << "  cap " << std::setw(4) << r.cap << " "
      << (r.equal ? "equal" : "UNEQUAL") << "  part-cap " << r.telemetry.final_cap()
      << (r.telemetry.converged ? " (converged)" : " (not converged)");
  if (timings) out << "  " << std::fixed << std::setprecision(2) << r.seconds_enumeration + r.seconds_product << "s";
  out << "\n";
  if (r.first_diff) {
    out << "  first difference at q^" << r.first_diff->q << ": missing " << diff_terms(r.first_diff->missing)
        << ", extra " << diff_terms(r.first_diff->extra) << "\n";
  }
}

ProductOptions product_options(const RunConfig& cfg) {
  ProductOptions o;
  if (cfg.form == "halfsum") {
    o.form = ProductForm::HalfSum;
  } else if (cfg.form != "even") {
    throw UsageError("unknown product form '" + cfg.form + "' (valid: even, halfsum)");
  }
  o.perturb_factor = cfg.perturb;
  return o;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.theorem.empty() || cfg.n < 1) throw UsageError("verify needs --theorem and --n");
  VerificationReport r = verify_theorem(cfg.theorem, cfg.n, cfg.cap, product_options(cfg));
  if (cfg.format == "json") {
    out << report_to_json(r, cfg.timings).dump(2) << "\n";
  } else {
    report_row(out, r, cfg.timings);
  }
  return r.equal ? kOk : kUnequal;
}

int cmd_verify_all(const RunConfig& cfg, std::ostream& out) {
  struct Row {
    const char* id;
    int n, cap;
  };
  const std::vector<Row> matrix = {
      {"1.2", 2, 20},  {"1.2", 3, 20},  {"1.3a", 2, 20}, {"1.3a", 3, 20}, {"1.3b", 2, 20}, {"1.3b", 3, 20},
      {"1.4a", 3, 16}, {"1.4b", 3, 16}, {"1.5a", 3, 16}, {"1.5b", 3, 16}, {"1.6a", 4, 16}, {"1.6b", 4, 16},
      {"1.6c", 4, 16}, {"1.6d", 4, 16}};
  bool all = true;
  nlohmann::json reports = nlohmann::json::array();
  std::ostringstream table;
  for (const auto& row : matrix) {
    VerificationReport r = verify_theorem(row.id, row.n, row.cap, product_options(cfg));
    all = all && r.equal && r.telemetry.converged;
    reports.push_back(report_to_json(r, cfg.timings));
    report_row(table, r, cfg.timings);
  }
  if (cfg.format == "json") {
    out << nlohmann::json{{"reports", reports}, {"all_equal", all}}.dump(2) << "\n";
  } else {
    out << table.str() << (all ? "all identities hold" : "some identities FAILED") << "\n";
  }
  return all ? kOk : kUnequal;
}

int cmd_enumerate(const RunConfig& cfg, std::ostream& out) {
  ModuleDescriptor md = module_from(cfg);
  RelationMode mode = parse_mode(cfg.mode);
  const int d = mode == RelationMode::Minimal ? 1 : md.d;
  EnumerationResult r = enumerate_mgp(md.sys, mode, d, cfg.max_weight, !cfg.any_length);
  if (cfg.format == "json") {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : r.partitions) parts.push_back(partition_to_json(p, md.sys));
    out << nlohmann::json{{"module", module_name(md)},
                          {"mode", mode_token(mode)},
                          {"d", d},
                          {"partitions", parts},
                          {"telemetry", telemetry_to_json(r.telemetry)}}
                  .dump(2)
           << "\n";
    return kOk;
  }
  out << module_name(md) << ", " << mode_token(mode) << ", d=" << d << ", weight <= " << cfg.max_weight << "\n";
  for (const auto& p : r.partitions) {
    out << std::right << std::setw(4) << partition_weight(p, md.sys) << "  (";
    std::string body;
    for (const auto& x : full_sequence(p, md.sys)) body += (body.empty() ? "" : ", ") + part_string(x, md.sys);
    out << body << ")\n";
  }
  out << r.partitions.size() << " partitions\n";
  return kOk;
}

int cmd_paths(const RunConfig& cfg, std::ostream& out) {
  ModuleDescriptor md = module_from(cfg);
  auto paths = enumerate_paths(md.crystal, md.gsp, cfg.L);
  std::vector<std::pair<PathWeight, const LambdaPath*>> rows;
  for (const auto& p : paths) rows.push_back({path_weight(p, md.crystal, md.gsp, md.ne), &p});
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first.q < b.first.q; });
  if (cfg.format == "json") {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [w, p] : rows) list.push_back(path_to_json(*p, md.crystal, w));
    out << nlohmann::json{{"module", module_name(md)}, {"gsp", gsp_to_json(md.crystal, md.gsp)}, {"L", cfg.L},
                          {"paths", list}}
                  .dump(2)
           << "\n";
    return kOk;
  }
  out << module_name(md) << ", free positions " << cfg.L << "\n";
  for (const auto& [w, p] : rows) {
    out << std::right << std::setw(4) << w.q << "  " << std::left << std::setw(16) << w.colour.to_string() << " "
        << (p->prefix.empty() ? "(ground)" : labels_of(p->prefix, md.crystal)) << "\n";
  }
  out << rows.size() << " paths\n";
  return kOk;
}

int cmd_bijection(const RunConfig& cfg, std::ostream& out) {
  ModuleDescriptor md = module_from(cfg);
  BijectionReport r = bijection_check(md, cfg.L, cfg.max_weight);
  if (cfg.format == "json") {
    nlohmann::json j = bijection_to_json(r);
    j["module"] = module_name(md);
    out << j.dump(2) << "\n";
  } else {
    out << module_name(md) << "\n";
    out << "paths (L=" << r.L << ")          " << r.paths << "\n";
    out << "phi round trips         " << r.phi_round_trips << "\n";
    out << "weight/colour transport " << r.transports << "\n";
    out << "minimal (w<=" << r.max_weight << ")         " << r.minimal << "\n";
    out << "phi^-1 round trips      " << r.phi_inverse_round_trips << "\n";
    out << "flexible (d=" << r.d << ")          " << r.flexible << "\n";
    out << "Phi_d round trips       " << r.phi_d_round_trips << "\n";
    out << "|pi| = |mu| + |nu|      " << r.weight_splits << "\n";
    out << (r.passed() ? "PASS" : "FAIL") << "\n";
  }
  return r.passed() ? kOk : kUnequal;
}

void add_module_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--family", cfg.family, "A2n_2, Dnp1_2, A2nm1_2, Bn_1 or Dn_1");
  sub->add_option("--n", cfg.n, "rank");
  sub->add_option("--weight", cfg.weight, "L0, L1, Ln-1 or Ln")->capture_default_str();
  sub->add_option("--crystal-file", cfg.crystal_file, "custom crystal JSON");
  sub->add_option("--lambda", cfg.lambda, "highest weight coefficients for a custom crystal, e.g. 1,0,0");
  sub->add_option("--seed", cfg.seed, "energy seed pair left,right for a custom crystal");
  sub->add_option("--seed-value", cfg.seed_value, "energy seed value for a custom crystal");
  sub->add_option("--D", cfg.D, "override the energy divisor D");
  sub->add_option("--d", cfg.d, "override the flexible step d");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Characters of affine modules via multi-grounded partitions", "mgpchar"};
  app.require_subcommand(1);
  app.add_option("--format", cfg.format, "table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  app.add_option("--output", cfg.output, "write output to this file");
  app.add_option("--threads", cfg.threads, "worker thread hint (env MGPCHAR_THREADS)");
  app.fallthrough();

  auto* energy = app.add_subcommand("energy", "energy matrix H, row b and column b' holding H(b' (x) b)");
  energy->add_option("--family", cfg.family);
  energy->add_option("--n", cfg.n);
  energy->add_option("--crystal-file", cfg.crystal_file);
  energy->add_option("--seed", cfg.seed);
  energy->add_option("--seed-value", cfg.seed_value);

  auto* gsp = app.add_subcommand("gsp", "ground state path, ground integers and D");
  add_module_options(gsp, cfg);

  auto* character = app.add_subcommand("character", "character series exact through --cap");
  add_module_options(character, cfg);
  character->add_option("--cap", cfg.cap)->capture_default_str();
  character->add_option("--method", cfg.method, "enumerative, flexible, product or paths")->capture_default_str();
  character->add_option("--theorem", cfg.theorem, "identity id for --method product");
  character->add_option("--defect-floor", cfg.defect_floor, "initial defect bound for --method paths")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "compare partitions against a product identity");
  verify->add_option("--theorem", cfg.theorem)->required();
  verify->add_option("--n", cfg.n)->required();
  verify->add_option("--cap", cfg.cap)->capture_default_str();
  verify->add_option("--form", cfg.form, "even or halfsum")->capture_default_str();
  verify->add_option("--perturb", cfg.perturb, "negative control: perturb this factor of the product");
  verify->add_flag("--timings", cfg.timings);

  auto* verify_all = app.add_subcommand("verify-all", "every identity at its reference cap");
  verify_all->add_option("--form", cfg.form, "even or halfsum")->capture_default_str();
  verify_all->add_flag("--timings", cfg.timings);

  auto* enumerate = app.add_subcommand("enumerate", "list multi-grounded partitions");
  add_module_options(enumerate, cfg);
  enumerate->add_option("--mode", cfg.mode, "minimal or flexible")->capture_default_str();
  enumerate->add_option("--max-weight", cfg.max_weight)->capture_default_str();
  enumerate->add_flag("--any-length", cfg.any_length, "do not require the part count to be a multiple of t");

  auto* paths = app.add_subcommand("paths", "list lambda-paths differing from the ground only in the first --L positions");
  add_module_options(paths, cfg);
  paths->add_option("--L", cfg.L)->capture_default_str();

  auto* bijection = app.add_subcommand("bijection-check", "round trips of the path and flexible bijections");
  add_module_options(bijection, cfg);
  bijection->add_option("--L", cfg.L)->capture_default_str();
  bijection->add_option("--max-weight", cfg.max_weight)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kOk : kUsage;
  }

  if (cfg.threads > 0) set_worker_threads(cfg.threads);
  std::ostringstream buffer;
  int code = kOk;
  try {
    if (*energy) {
      code = cmd_energy(cfg, buffer);
    } else if (*gsp) {
      code = cmd_gsp(cfg, buffer);
    } else if (*character) {
      code = cmd_character(cfg, buffer);
    } else if (*verify) {
      code = cmd_verify(cfg, buffer);
    } else if (*verify_all) {
      code = cmd_verify_all(cfg, buffer);
    } else if (*enumerate) {
      code = cmd_enumerate(cfg, buffer);
    } else if (*paths) {
      code = cmd_paths(cfg, buffer);
    } else if (*bijection) {
      code = cmd_bijection(cfg, buffer);
    }
  } catch (const UnstableError& e) {
    err << "error: " << e.what() << "\n";
    return kUnstable;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  if (cfg.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << cfg.output << "'\n";
      return kUsage;
    }
    f << buffer.str();
  }
  return code;
}

}  // namespace mgp
