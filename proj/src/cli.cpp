#include "opball/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <vector>

#include <CLI11.hpp>

#include "opball/checks.hpp"
#include "opball/groups.hpp"
#include "opball/hyperbolic.hpp"
#include "opball/matrix_io.hpp"
#include "opball/pontryagin.hpp"

namespace opball {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<Index, Index> parse_sig(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used_p = 0;
    std::size_t used_q = 0;
    const std::string p_text = text.substr(0, comma);
    const std::string q_text = text.substr(comma + 1);
    const long p = std::stol(p_text, &used_p);
    const long q = std::stol(q_text, &used_q);
    if (used_p != p_text.size() || used_q != q_text.size() || p < 1 || q < 1) {
      throw std::invalid_argument("bad counts");
    }
    return {static_cast<Index>(p), static_cast<Index>(q)};
  } catch (const std::exception&) {
    throw UsageError("--sig expects P,Q with positive integers, got '" + text + "'");
  }
}

PontryaginSignature signature_from(const std::string& flag, const GroupFiles& files, const char* what) {
  std::optional<std::pair<Index, Index>> sig = files.sig;
  if (!flag.empty()) sig = parse_sig(flag);
  if (!sig) throw UsageError(std::string(what) + ": no signature (pass --sig P,Q or add \"sig\" to table.json)");
  return PontryaginSignature(sig->first, sig->second);
}

Representation representation_from(const GroupFiles& files, const PontryaginSignature& sig, const Tolerances& tol) {
  if (!files.table) {
    throw Error(ErrorKind::InvalidRepresentation, "representation directory has no multiplication table");
  }
  return Representation::create(sig, *files.table, files.elements, true, tol);
}

Json fixed_point_summary(const FixedPointResult& r) {
  Json out;
  out["converged"] = r.converged;
  out["iterations"] = r.iterations;
  out["displacement"] = r.displacement;
  out["fixed_point"] = matrix_to_json(r.point.matrix());
  return out;
}

// ---- subcommands ------------------------------------------------------------

Json cmd_distance(const std::string& a_path, const std::string& b_path, const RunConfig& cfg) {
  const BallPoint a(load_matrix(a_path), cfg.tol.boundary_tol);
  const BallPoint b(load_matrix(b_path), cfg.tol.boundary_tol);
  Json out;
  out["rho"] = distance(a, b, cfg.tol);
  return out;
}

Json cmd_mobius(const std::string& a_path, const std::string& x_path, const RunConfig& cfg) {
  const BallPoint a(load_matrix(a_path), cfg.tol.boundary_tol);
  const BallPoint x(load_matrix(x_path), cfg.tol.boundary_tol);
  return matrix_to_json(mobius_apply(a, x, cfg.tol).matrix());
}

Json cmd_geodesic(const std::string& a_path, const std::string& d_path, const std::vector<double>& ts,
                  const RunConfig& cfg) {
  const GeodesicLine line(BallPoint(load_matrix(a_path), cfg.tol.boundary_tol), load_matrix(d_path), cfg.tol);
  if (ts.size() == 1) return matrix_to_json(geodesic_point(line, ts.front(), cfg.tol).matrix());
  Json points = Json::array();
  for (double t : ts) {
    Json entry;
    entry["t"] = t;
    entry["point"] = matrix_to_json(geodesic_point(line, t, cfg.tol).matrix());
    points.push_back(std::move(entry));
  }
  Json out;
  out["points"] = std::move(points);
  return out;
}

Json cmd_fixpoint(const std::string& dir, const std::string& sig_flag, const std::string& start_path,
                  RunConfig cfg) {
  const GroupFiles files = load_group_dir(dir);
  const PontryaginSignature sig = signature_from(sig_flag, files, "fixpoint");
  std::vector<BallAutomorphism> elements;
  for (const auto& m : files.elements) {
    elements.push_back(BallAutomorphism::from_block(m, sig.n_plus(), sig.n_minus(), cfg.tol));
  }
  const bool closed = files.table.has_value();
  const AutomorphismGroup group = closed ? AutomorphismGroup(std::move(elements), files.table)
                                         : group_closure(elements, cfg.max_elements, cfg.tol);
  if (closed) {
    const double defect = group.closure_defect(cfg.tol);
    if (!(defect < cfg.tol.group_tol)) {
      throw Error(ErrorKind::InvalidRepresentation,
                  "elements do not follow table.json (probe defect " + std::to_string(defect) + ")");
    }
  }
  const BallPoint start = start_path.empty() ? BallPoint::zero(sig.n_plus(), sig.n_minus())
                                             : BallPoint(load_matrix(start_path), cfg.tol.boundary_tol);
  const FixedPointResult r = find_fixed_point(group, start, cfg.solver, cfg.tol);
  if (!r.converged) {
    throw Error(ErrorKind::FixedPointFailed, "displacement " + std::to_string(r.displacement) + " after " +
                                                 std::to_string(r.iterations) + " iterations");
  }
  Json out;
  out["group_order"] = group.size();
  out["closure_computed"] = !closed;
  const Json summary = fixed_point_summary(r);
  for (const auto& [key, value] : summary.items()) out[key] = value;
  return out;
}

Json cmd_unitarize(const std::string& dir, const std::string& sig_flag, const std::string& out_dir,
                   const RunConfig& cfg) {
  const GroupFiles files = load_group_dir(dir);
  const PontryaginSignature sig = signature_from(sig_flag, files, "unitarize");
  const Representation rep = representation_from(files, sig, cfg.tol);
  const UnitarizeResult res = unitarize(rep, cfg.solver, cfg.tol);

  const Matrix id = Matrix::Identity(sig.dim(), sig.dim());
  double unit_defect = 0.0;
  Json images = Json::array();
  for (const auto& tau : res.unitary_rep.images()) {
    unit_defect = std::max(unit_defect, spectral_norm(tau.adjoint() * tau - id));
    images.push_back(matrix_to_json(tau));
  }
  if (!out_dir.empty()) {
    save_group_dir(out_dir, rep.table(), res.unitary_rep.images(), {sig.n_plus(), sig.n_minus()});
  }
  Json out;
  out["group_order"] = rep.group_order();
  out["sig"] = Json::array({sig.n_plus(), sig.n_minus()});
  out["iterations"] = res.solver.iterations;
  out["displacement"] = res.solver.displacement;
  out["fixed_point"] = matrix_to_json(res.fixed_point.matrix());
  out["similarity"] = matrix_to_json(res.similarity);
  out["max_unitarity_defect"] = unit_defect;
  out["homomorphism_defect"] = res.unitary_rep.homomorphism_defect();
  out["images"] = std::move(images);
  return out;
}

Json cmd_dualpair(const std::string& dir, const std::string& sig_flag, const RunConfig& cfg) {
  const GroupFiles files = load_group_dir(dir);
  const PontryaginSignature sig = signature_from(sig_flag, files, "dualpair");
  const Representation rep = representation_from(files, sig, cfg.tol);
  const DualPair pair = dual_pair(rep, cfg.solver, cfg.tol);
  const Matrix g = dual_pair_scalar_product(sig, pair);

  double angle = 0.0;
  double form_defect = 0.0;
  for (const auto& pi : rep.images()) {
    angle = std::max(angle, max_principal_angle(pi * pair.positive_basis, pair.positive_basis));
    angle = std::max(angle, max_principal_angle(pi * pair.negative_basis, pair.negative_basis));
    form_defect = std::max(form_defect, spectral_norm(pi.adjoint() * g * pi - g) / spectral_norm(g));
  }
  Json out;
  out["sig"] = Json::array({sig.n_plus(), sig.n_minus()});
  out["positive_basis"] = matrix_to_json(pair.positive_basis);
  out["negative_basis"] = matrix_to_json(pair.negative_basis);
  out["max_invariance_angle"] = angle;
  out["scalar_product_invariance_defect"] = form_defect;
  return out;
}

Json cmd_check(const std::string& suite, int trials, std::uint64_t seed, const RunConfig& cfg) {
  const CheckReport report = run_checks(suite, trials, seed, cfg.tol);
  Json failures = Json::array();
  Json suites = Json::object();
  for (const auto& s : report.suites) {
    for (const auto& m : s.messages) failures.push_back(s.name + ": " + m);
    Json entry;
    entry["passed"] = s.passed();
    entry["trials"] = s.trials;
    entry["failures"] = s.failures;
    entry["worst_excess"] = s.worst_excess;
    suites[s.name] = std::move(entry);
  }
  Json out;
  out["passed"] = report.passed;
  out["failures"] = std::move(failures);
  out["seed"] = seed;
  out["suites"] = std::move(suites);
  return out;
}

Json cmd_gen(const std::string& group, const std::string& sig_flag, double cond, std::uint64_t seed,
             const std::string& out_dir, const RunConfig& cfg) {
  const auto [p, q] = parse_sig(sig_flag);
  const PontryaginSignature sig(p, q);
  const TestRepresentation tr = make_test_representation(group, sig, cond, seed, cfg.tol);
  save_group_dir(out_dir, tr.rep.table(), tr.rep.images(), {p, q});
  Json out;
  out["group"] = group;
  out["order"] = tr.rep.group_order();
  out["sig"] = Json::array({p, q});
  out["conditioning"] = cond;
  out["seed"] = seed;
  out["bound"] = tr.rep.bound();
  out["out"] = out_dir;
  out["expected_fixed_point"] = matrix_to_json(tr.expected_fixed_point.matrix());
  return out;
}

// ---- configuration -------------------------------------------------------------

double positive(const Json& v, const std::string& key) {
  if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>())) {
    throw Error(ErrorKind::InvalidArgument, "config '" + key + "' must be a positive number");
  }
  return v.get<double>();
}

long long positive_count(const Json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw Error(ErrorKind::InvalidArgument, "config '" + key + "' must be a positive integer");
  }
  return v.get<long long>();
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, path.string() + ": expected a JSON object");

  RunConfig cfg;
  Tolerances& t = cfg.tol;
  const std::map<std::string, double*> reals{
      {"herm_tol", &t.herm_tol},       {"psd_tol", &t.psd_tol},
      {"rank_tol", &t.rank_tol},       {"eig_tol", &t.eig_tol},
      {"boundary_tol", &t.boundary_tol}, {"aut_tol", &t.aut_tol},
      {"cond_tol", &t.cond_tol},       {"dir_tol", &t.dir_tol},
      {"line_tol", &t.line_tol},       {"group_tol", &t.group_tol},
      {"rep_tol", &t.rep_tol},         {"unit_tol", &t.unit_tol},
      {"split_tol", &t.split_tol},     {"pair_tol", &t.pair_tol},
      {"diam_tol", &t.diam_tol},       {"fp_tol", &cfg.solver.fp_tol},
      {"cheb_tol", &cfg.solver.chebyshev.cheb_tol},
      {"elliptic_margin", &cfg.solver.elliptic_margin},
  };
  for (const auto& [key, value] : j.items()) {
    if (const auto it = reals.find(key); it != reals.end()) {
      *it->second = positive(value, key);
    } else if (key == "max_iter") {
      cfg.solver.max_iter = static_cast<int>(std::min<long long>(positive_count(value, key), 100000000));
    } else if (key == "max_elements") {
      cfg.max_elements = static_cast<std::size_t>(positive_count(value, key));
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw Error(ErrorKind::InvalidArgument, "config 'seed' must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "solver_mode") {
      const std::string mode = value.is_string() ? value.get<std::string>() : "";
      if (mode == "midpoint-descent") {
        cfg.solver.mode = SolverMode::MidpointDescent;
      } else if (mode == "chebyshev-iterate") {
        cfg.solver.mode = SolverMode::ChebyshevIterate;
      } else {
        throw Error(ErrorKind::InvalidArgument, "config 'solver_mode' must be midpoint-descent or chebyshev-iterate");
      }
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
    }
  }
  return cfg;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value,
                           std::optional<std::uint64_t> config_seed) {
  if (flag) return *flag;
  if (env_value != nullptr && *env_value != '\0') {
    const std::string text(env_value);
    std::size_t used = 0;
    try {
      if (text.front() == '-') throw std::invalid_argument("negative");
      const unsigned long long v = std::stoull(text, &used, 10);
      if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidArgument, "OPBALL_SEED must be a non-negative integer, got '" + text + "'");
  }
  return config_seed.value_or(kDefaultSeed);
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator-ball geometry, fixed points and unitarization", "opball"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);

  std::string a_path, b_path, x_path, d_path, group_dir, rep_dir, sig_flag, start_path, out_dir, mode;
  std::vector<double> ts;
  std::string suite = "appendix";
  int trials = 200;
  std::optional<std::uint64_t> seed_flag;
  std::string gen_group;
  double cond = 1.0;

  auto* distance_cmd = app.add_subcommand("distance", "rho(A, B) for two matrix files");
  distance_cmd->add_option("A", a_path)->required();
  distance_cmd->add_option("B", b_path)->required();

  auto* mobius_cmd = app.add_subcommand("mobius", "M_A(X)");
  mobius_cmd->add_option("A", a_path)->required();
  mobius_cmd->add_option("X", x_path)->required();

  auto* geodesic_cmd = app.add_subcommand("geodesic", "points M_A(Th(tD)) of a line");
  geodesic_cmd->add_option("A", a_path)->required();
  geodesic_cmd->add_option("D", d_path)->required();
  geodesic_cmd->add_option("--t", ts, "line parameter(s)")->required()->expected(1, 1000);

  auto* fixpoint_cmd = app.add_subcommand("fixpoint", "common fixed point of a finite automorphism group");
  fixpoint_cmd->add_option("--group", group_dir, "group directory")->required();
  fixpoint_cmd->add_option("--mode", mode)->check(CLI::IsMember({"midpoint-descent", "chebyshev-iterate"}));
  fixpoint_cmd->add_option("--sig", sig_flag, "P,Q (overrides table.json)");
  fixpoint_cmd->add_option("--start", start_path, "start point matrix file (default 0)");

  auto* unitarize_cmd = app.add_subcommand("unitarize", "similarity onto a unitary representation");
  unitarize_cmd->add_option("--rep", rep_dir, "representation directory")->required();
  unitarize_cmd->add_option("--sig", sig_flag, "P,Q (overrides table.json)");
  unitarize_cmd->add_option("--out", out_dir, "write the unitary representation here");
  unitarize_cmd->add_option("--mode", mode)->check(CLI::IsMember({"midpoint-descent", "chebyshev-iterate"}));

  auto* dualpair_cmd = app.add_subcommand("dualpair", "invariant positive/negative decomposition");
  dualpair_cmd->add_option("--rep", rep_dir, "representation directory")->required();
  dualpair_cmd->add_option("--sig", sig_flag, "P,Q (overrides table.json)");

  auto* check_cmd = app.add_subcommand("check", "randomized property suites");
  check_cmd->add_option("--suite", suite)->check(CLI::IsMember({"appendix", "all"}));
  check_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", seed_flag);

  auto* gen_cmd = app.add_subcommand("gen", "write a seeded test representation");
  gen_cmd->add_option("--group", gen_group, "C<n>, S3 or Q8")->required();
  gen_cmd->add_option("--sig", sig_flag, "P,Q")->required();
  gen_cmd->add_option("--cond", cond, "conditioning >= 1")->required();
  gen_cmd->add_option("--seed", seed_flag);
  gen_cmd->add_option("--out", out_dir, "output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "opball: " << e.what() << "\n" << "Run with --help for usage.\n";
    return 2;
  }

  RunConfig cfg;
  std::uint64_t seed = kDefaultSeed;
  try {
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (mode == "chebyshev-iterate") cfg.solver.mode = SolverMode::ChebyshevIterate;
    if (mode == "midpoint-descent") cfg.solver.mode = SolverMode::MidpointDescent;
    seed = resolve_seed(seed_flag, std::getenv("OPBALL_SEED"), cfg.seed);
  } catch (const Error& e) {
    err << "opball: " << e.what() << "\n";
    return 2;
  }

  try {
    Json result;
    if (*distance_cmd) {
      result = cmd_distance(a_path, b_path, cfg);
    } else if (*mobius_cmd) {
      result = cmd_mobius(a_path, x_path, cfg);
    } else if (*geodesic_cmd) {
      result = cmd_geodesic(a_path, d_path, ts, cfg);
    } else if (*fixpoint_cmd) {
      result = cmd_fixpoint(group_dir, sig_flag, start_path, cfg);
    } else if (*unitarize_cmd) {
      result = cmd_unitarize(rep_dir, sig_flag, out_dir, cfg);
    } else if (*dualpair_cmd) {
      result = cmd_dualpair(rep_dir, sig_flag, cfg);
    } else if (*check_cmd) {
      result = cmd_check(suite, trials, seed, cfg);
    } else if (*gen_cmd) {
      result = cmd_gen(gen_group, sig_flag, cond, seed, out_dir, cfg);
    }
    out << result.dump(2) << "\n";
    return 0;
  } catch (const UsageError& e) {
    err << "opball: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    Json failure;
    failure["error"] = std::string(e.name());
    failure["message"] = e.detail();
    out << failure.dump(2) << "\n";
    return 1;
  }
}

}  // namespace opball
