#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include "strukt/backward.hpp"
#include "strukt/io.hpp"
#include "strukt/spectra.hpp"

using namespace strukt;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2 };

struct Globals {
  std::uint64_t seed = 1;
  double tol = 1e-12;
  std::string mode = "certified";
  std::string output;
  std::string format;
};

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STRUKT_NUM_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      throw InvalidArgument("STRUKT_NUM_THREADS must be a positive integer");
    }
  }
  return hw;
}

fs::path sidecar_for(const fs::path& pencil) { return fs::path(pencil.string() + ".partition.json"); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

std::optional<StructureKind> detect_kind(const PolyR& p, double tol) {
  for (StructureKind kind : kAllKinds)
    if (is_structured(p, kind, tol)) return kind;
  return std::nullopt;
}

struct Partition {
  int k = 0;
  Index n = 0;
  StructureKind kind = StructureKind::symmetric;
  int sign = 1;
};

Json partition_to_json(const Partition& p) {
  return Json{{"k", p.k}, {"n", p.n}, {"kind", std::string(kind_name(p.kind))}, {"sign", p.sign}};
}

Partition partition_from_json(const Json& j) {
  try {
    Partition p;
    p.k = j.at("k").get<int>();
    p.n = j.at("n").get<Index>();
    p.kind = parse_kind(j.at("kind").get<std::string>());
    p.sign = j.at("sign").get<int>();
    if (p.k < 0 || p.n < 1 || (p.sign != 1 && p.sign != -1)) throw InvalidArgument("partition values out of range");
    return p;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed partition sidecar: ") + e.what());
  }
}

int cmd_linearize(const Globals& g, const std::string& input, const std::string& kind_arg,
                  const std::string& placement_arg, int sigma) {
  const PolyR P = real_polynomial_from_json(read_json(input));
  StructureKind kind;
  if (kind_arg.empty()) {
    auto k = detect_kind(P, g.tol);
    if (!k) throw InvalidArgument("input matches none of the supported structures");
    kind = *k;
  } else {
    kind = parse_kind(kind_arg);
  }
  const auto L = linearize(P, kind, parse_placement(placement_arg), sigma, g.tol);
  std::cout << "kind " << kind_name(kind) << "\n"
            << "k " << L.k << "\n"
            << std::setprecision(17) << "norm_P " << frob_norm(P) << "\n"
            << "norm_M " << frob_norm(L.M()) << "\n"
            << "structure_residual_P " << structure_residual(P, kind) << "\n"
            << "structure_residual_L " << structure_residual(L.pencil(), kind) << "\n"
            << "sign " << L.sign << "\n";
  if (!g.output.empty()) {
    write_polynomial(g.output, L.pencil());
    write_json(sidecar_for(g.output), partition_to_json({L.k, L.n, kind, L.sign}));
  }
  return kOk;
}

BlockKroneckerPencil<double> load_pencil(const std::string& path, const std::string& sidecar, double tol) {
  const PolyR pen = real_polynomial_from_json(read_json(path));
  const Partition part = partition_from_json(read_json(sidecar.empty() ? sidecar_for(path) : fs::path(sidecar)));
  return pencil_from_partition(pen, part.k, part.n, part.kind, part.sign, tol);
}

int cmd_recover(const Globals& g, const std::string& input, const std::string& sidecar) {
  const auto L = load_pencil(input, sidecar, g.tol);
  const PolyR P = recover(L);
  std::cout << "kind " << kind_name(L.kind) << "\n"
            << "sign " << L.sign << "\n"
            << std::setprecision(17) << "norm_P " << frob_norm(P) << "\n";
  if (!g.output.empty()) write_polynomial(g.output, P);
  return kOk;
}

int cmd_perturb(const Globals& g, const std::string& input, const std::string& sidecar, double norm) {
  const auto L = load_pencil(input, sidecar, g.tol);
  const auto pert = random_structured_perturbation<double>(L.k, L.n, L.kind, norm, g.seed);
  const PolyR Lp = L.pencil() + pert.pencil();
  std::cout << std::setprecision(17) << "norm_dL " << pert.norm() << "\n"
            << "threshold " << main_threshold(L.k, frob_norm(L.M())) << "\n"
            << "structure_residual " << structure_residual(Lp, L.kind) << "\n";
  if (!g.output.empty()) {
    write_polynomial(g.output, Lp);
    write_json(sidecar_for(g.output), partition_to_json({L.k, L.n, L.kind, L.sign}));
  }
  return kOk;
}

int cmd_sigma_min(int kmax, const std::vector<std::string>& kinds_arg, Index n) {
  if (kmax < 1) throw InvalidArgument("kmax must be at least 1");
  std::vector<StructureKind> kinds;
  for (const auto& s : kinds_arg) kinds.push_back(parse_kind(s));
  if (kinds.empty()) kinds.assign(kAllKinds.begin(), kAllKinds.end());
  bool ok = true;
  std::cout << "kind,k,n,formula,svd,rel_err,reduced_gap\n" << std::setprecision(12);
  for (StructureKind kind : kinds)
    for (int k = 1; k <= kmax; ++k) {
      const double f = sigma_min_formula(k);
      const double s = sigma_min<double>(build_TA(k, n, kind));
      const double sr = sigma_min<double>(build_TA_reduced(k, kind));
      const double rel = std::abs(s - f) / f;
      ok = ok && rel <= 1e-10;
      std::cout << kind_name(kind) << "," << k << "," << n << "," << f << "," << s << "," << rel << ","
                << std::abs(s - sr) << "\n";
    }
  return ok ? kOk : kFailure;
}

int cmd_eigs(const Globals& g, const std::string& input, const std::string& kind_arg) {
  const PolyR P = real_polynomial_from_json(read_json(input));
  const auto ref = reference_polyeigs(P);
  std::ostringstream out;
  out << std::setprecision(17);
  if (g.format == "json") {
    Json arr = Json::array();
    for (const auto& e : ref.eigs)
      arr.push_back(Json{{"alpha", {e.alpha.real(), e.alpha.imag()}}, {"beta", {e.beta.real(), e.beta.imag()}}});
    out << arr.dump(1) << "\n";
  } else {
    out << "re,im,infinite\n";
    for (const auto& e : ref.eigs) {
      if (e.infinite())
        out << "inf,0,true\n";
      else
        out << e.value().real() << "," << e.value().imag() << ",false\n";
    }
  }
  std::optional<StructureKind> kind;
  if (!kind_arg.empty()) kind = parse_kind(kind_arg);
  else if (P.rows() == P.cols() && P.grade() % 2 == 1) kind = detect_kind(P, g.tol);
  if (kind && P.grade() % 2 == 1) {
    const auto L = linearize(P, *kind, Placement::tridiagonal, 1, g.tol);
    const auto pen = pencil_eigs(L.L0, L.L1);
    std::cerr << std::setprecision(6) << "kind " << kind_name(*kind) << " linearization_chordal_max "
              << compare_spectra(pen, ref).max_distance << " symmetry " << symmetry_check(pen, *kind) << "\n";
  }
  if (g.output.empty())
    std::cout << out.str();
  else
    write_text(g.output, out.str());
  return kOk;
}

struct CertifyConfig {
  std::vector<StructureKind> kinds;
  int g = 5;
  Index n = 2;
  Placement placement = Placement::tridiagonal;
  int sigma = 1;
  std::vector<double> norms;
  int trials = 1;
  std::uint64_t seed = 1;
  ThresholdMode mode = ThresholdMode::certified;
  double norm_P = 1.0;
  std::string output;
};

CertifyConfig parse_config(const Json& j) {
  CertifyConfig c;
  try {
    const Json& kinds = j.at("kind");
    if (kinds.is_array())
      for (const auto& s : kinds) c.kinds.push_back(parse_kind(s.get<std::string>()));
    else
      c.kinds.push_back(parse_kind(kinds.get<std::string>()));
    c.g = j.at("g").get<int>();
    c.n = j.at("n").get<Index>();
    c.placement = parse_placement(j.value("placement", std::string("tridiagonal")));
    c.sigma = j.value("sigma", 1);
    c.norms = j.at("norms").get<std::vector<double>>();
    c.trials = j.at("trials").get<int>();
    c.seed = j.value("seed", std::uint64_t{1});
    c.mode = parse_mode(j.value("mode", std::string("certified")));
    c.norm_P = j.value("norm_P", 1.0);
    c.output = j.value("output", std::string());
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed certify config: ") + e.what());
  }
  if (c.kinds.empty()) throw InvalidArgument("config lists no kinds");
  half_grade(c.g);
  if (c.n < 1) throw InvalidArgument("n must be at least 1");
  if (c.sigma != 1 && c.sigma != -1) throw InvalidArgument("sigma must be +1 or -1");
  if (c.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (c.norms.empty()) throw InvalidArgument("config lists no perturbation norms");
  for (double x : c.norms)
    if (!(x >= 0) || !std::isfinite(x)) throw InvalidArgument("perturbation norms must be finite and >= 0");
  if (!(c.norm_P > 0)) throw InvalidArgument("norm_P must be positive");
  return c;
}

int cmd_certify(const Globals& g, const std::string& config_path, bool seed_set, bool mode_set, bool timings) {
  CertifyConfig c = parse_config(read_json(config_path));
  if (seed_set) c.seed = g.seed;
  if (mode_set) c.mode = parse_mode(g.mode);

  CertificationOptions opt;
  opt.mode = c.mode;
  opt.sigma = c.sigma;
  opt.timings = timings;
  opt.threads = worker_count();

  std::vector<BackwardErrorReport> all;
  for (std::size_t i = 0; i < c.kinds.size(); ++i) {
    const StructureKind kind = c.kinds[i];
    const PolyR P = random_structured<double>(c.n, c.g, kind, c.norm_P, derive_seed(c.seed, 1000 + i));
    auto reps = run_certification(P, kind, c.placement, c.norms, c.trials, derive_seed(c.seed, i), opt);
    std::size_t pass = 0;
    for (const auto& r : reps) pass += trial_passes(r);
    std::cout << "kind " << kind_name(kind) << ": " << pass << "/" << reps.size() << " trials pass\n";
    all.insert(all.end(), reps.begin(), reps.end());
  }

  std::size_t pass = 0, bound = 0, structure = 0;
  for (const auto& r : all) {
    pass += trial_passes(r);
    bound += r.ratio_le_bound;
    structure += r.structure_ok;
  }
  const double total = static_cast<double>(all.size());
  std::cout << std::setprecision(4) << "summary: pass " << pass / total << " ratio_le_bound " << bound / total
            << " structure_ok " << structure / total << " (" << all.size() << " trials, mode "
            << mode_name(c.mode) << ")\n";

  std::string base = g.output.empty() ? c.output : g.output;
  if (!base.empty()) {
    fs::path p(base);
    if (p.extension() == ".csv" || p.extension() == ".json") p.replace_extension();
    const bool csv = g.format.empty() || g.format == "csv";
    const bool json = g.format.empty() || g.format == "json";
    if (csv) write_text(fs::path(p.string() + ".csv"), reports_to_csv(all));
    if (json) write_json(fs::path(p.string() + ".json"), reports_to_json(all));
  }
  const bool failed = c.mode == ThresholdMode::certified && pass != all.size();
  return failed ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured block Kronecker linearizations and backward error certification"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--tol", g.tol, "Structure tolerance");
  auto* mode_opt =
      app.add_option("--mode", g.mode, "Threshold mode")->check(CLI::IsMember({"certified", "empirical"}));
  app.add_option("--output", g.output, "Output path");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  std::string input, kind, placement = "tridiagonal", sidecar, config = STRUKT_DEFAULT_CONFIG;
  int sigma = 1, kmax = 6;
  long n = 1;
  double norm = 0;
  bool timings = false;
  std::vector<std::string> kinds;

  auto* lin = app.add_subcommand("linearize", "Build a structured block Kronecker pencil");
  lin->add_option("input", input, "Polynomial JSON")->required();
  lin->add_option("--kind", kind, "Structure (detected when omitted)");
  lin->add_option("--placement", placement, "tridiagonal or stacked");
  lin->add_option("--sigma", sigma, "Sign of the (1,1) block")->check(CLI::IsMember({-1, 1}));

  auto* rec = app.add_subcommand("recover", "Recover the polynomial from a pencil and its partition sidecar");
  rec->add_option("input", input, "Pencil JSON")->required();
  rec->add_option("--partition", sidecar, "Partition sidecar (default <input>.partition.json)");

  auto* per = app.add_subcommand("perturb", "Apply a random structured perturbation to a pencil");
  per->add_option("input", input, "Pencil JSON")->required();
  per->add_option("--partition", sidecar, "Partition sidecar (default <input>.partition.json)");
  per->add_option("--norm", norm, "Frobenius norm of the perturbation")->required();

  auto* cert = app.add_subcommand("certify", "Run a backward error certification campaign");
  cert->add_option("config", config, "Campaign config JSON (bundled default when omitted)");
  cert->add_flag("--timings", timings, "Record wall_ms per trial");

  auto* sig = app.add_subcommand("sigma-min", "Compare sigma_min(T_A) with 2 sin(pi/4k)");
  sig->add_option("--kmax", kmax, "Largest k");
  sig->add_option("--kinds", kinds, "Structures (all when omitted)");
  sig->add_option("--n", n, "Block size");

  auto* eig = app.add_subcommand("eigs", "Eigenvalues of a polynomial via a companion pencil");
  eig->add_option("input", input, "Polynomial JSON")->required();
  eig->add_option("--kind", kind, "Also check the structured linearization for this structure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*lin) return cmd_linearize(g, input, kind, placement, sigma);
    if (*rec) return cmd_recover(g, input, sidecar);
    if (*per) return cmd_perturb(g, input, sidecar, norm);
    if (*cert) return cmd_certify(g, config, seed_opt->count() > 0, mode_opt->count() > 0, timings);
    if (*sig) return cmd_sigma_min(kmax, kinds, n);
    if (*eig) return cmd_eigs(g, input, kind);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
