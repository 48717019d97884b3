#include "strukt/backward.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "strukt/spectra.hpp"

namespace strukt {

std::string_view mode_name(ThresholdMode m) {
  return m == ThresholdMode::certified ? "certified" : "empirical";
}

ThresholdMode parse_mode(std::string_view name) {
  if (name == "certified") return ThresholdMode::certified;
  if (name == "empirical") return ThresholdMode::empirical;
  throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

TheoremBound theorem_bound(double normP, double normL, double normM, int k, Index n) {
  if (!(normP > 0)) throw InvalidArgument("theorem bound needs a nonzero polynomial");
  TheoremBound b;
  b.threshold = main_threshold(k, normM);
  b.c_pl = 68.0 * std::pow(k + 1.0, 2.5) * (normL / normP) * (1.0 + normM + normM * normM);
  b.coarse_factor = std::pow(k + 1.0, 3.0) * std::sqrt(double(n));
  return b;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

BackwardErrorReport run_trial(const PolyR& P, const BlockKroneckerPencil<double>& L, double target,
                              std::uint64_t trial_seed, const CertificationOptions& opt,
                              const BackwardErrorReport& base) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  BackwardErrorReport r = base;
  r.seed = trial_seed;
  const int k = L.k;
  const Index n = L.n;
  const TheoremBound tb = theorem_bound(r.norm_P, r.norm_L, r.norm_M, k, n);
  try {
    const auto pert = target == 0 ? StructuredPerturbation<double>::zero(k, n, L.kind)
                                  : random_structured_perturbation<double>(k, n, L.kind, target, trial_seed);
    r.norm_dL = pert.norm();
    r.threshold_ok = r.norm_dL < tb.threshold;
    r.bound = tb.c_pl * r.norm_dL / r.norm_L;
    r.diag.coarse_bound = tb.coarse_factor * r.norm_dL / r.norm_L;
    if (opt.mode == ThresholdMode::certified && !r.threshold_ok)
      throw PreconditionError("perturbation above the certified threshold", r.norm_dL, tb.threshold);

    const auto cg = congruence_zero_block(L, pert, opt.mode);
    const auto& fp = cg.fixed_point;
    r.norm_X = cg.X.norm();
    r.iters = fp.iterations;
    r.diag.theta = fp.theta;
    r.diag.delta = fp.delta;
    r.diag.kappa1 = fp.kappa1;
    r.diag.fixed_point_residual = fp.residual;
    r.diag.block22_residual = cg.block22_residual;
    r.diag.x_bound = k == 0 ? 0.0 : x_bound(k, r.norm_dL);
    r.diag.norm_dL21_tilde = cg.norm_dL21_tilde;
    r.diag.dL21_tilde_bound = dL21_tilde_bound(k, r.norm_dL, r.norm_M);
    r.diag.iterate_bound = fp.iterate_bound();
    for (double x : fp.x_norms) r.diag.iterate_max = std::max(r.diag.iterate_max, x);

    const auto rec = reconstruct_perturbed_polynomial(cg.Ltilde, k, n, L.kind, L.sign, opt.mode);
    r.norm_dR = rec.norm_dR;
    r.diag.dR_bound = dR_bound(k, cg.norm_dL21_tilde);
    r.diag.dual_residual = rec.dual.residual;
    const Index m = L.m_size();
    const double normDL11 = frob_norm(cg.Ltilde.block(0, 0, m, m) - L.M());
    r.diag.dP_product_bound = dP_product_bound(k, normDL11, r.norm_M, r.norm_dR);

    const PolyR dP = rec.P.with_grade(P.grade()) - P;
    r.norm_dP = frob_norm(dP);
    r.ratio = r.norm_dP / r.norm_P;
    r.ratio_le_bound = r.ratio <= r.bound;
    r.diag.dP_structure_residual = structure_residual(dP, L.kind);
    r.structure_ok = r.diag.dP_structure_residual <= 1e-11 * std::max(1.0, r.norm_P);

    if (opt.eigen_check) {
      try {
        const PolyR Lp = L.pencil() + pert.pencil();
        r.eig_chordal_max =
            compare_spectra(pencil_eigs(Lp.coeff(0), Lp.coeff(1)), reference_polyeigs(rec.P)).max_distance;
      } catch (const Error&) {
        r.eig_chordal_max = kNaN;
      }
    } else {
      r.eig_chordal_max = kNaN;
    }
  } catch (const std::exception& e) {
    r.diag.error = e.what();
    r.ratio_le_bound = false;
    r.structure_ok = false;
    r.eig_chordal_max = kNaN;
  }
  if (opt.timings) r.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<BackwardErrorReport> run_certification(const PolyR& P, StructureKind kind, Placement placement,
                                                   const std::vector<double>& pert_norms, int trials,
                                                   std::uint64_t seed, const CertificationOptions& opt) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  for (double t : pert_norms)
    if (!(t >= 0) || !std::isfinite(t)) throw InvalidArgument("perturbation norms must be finite and >= 0");
  const auto L = linearize(P, kind, placement, opt.sigma);

  BackwardErrorReport base;
  base.kind = std::string(kind_name(kind));
  base.g = P.grade();
  base.n = static_cast<long>(P.rows());
  base.k = L.k;
  base.placement = std::string(placement_name(placement));
  base.norm_P = frob_norm(P);
  base.norm_L = frob_norm(L.pencil());
  base.norm_M = frob_norm(L.M());
  base.C_PL = theorem_bound(base.norm_P, base.norm_L, base.norm_M, L.k, L.n).c_pl;

  const std::size_t total = pert_norms.size() * static_cast<std::size_t>(trials);
  std::vector<BackwardErrorReport> out(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const double target = pert_norms[i / static_cast<std::size_t>(trials)];
      out[i] = run_trial(P, L, target, derive_seed(seed, i), opt, base);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

bool trial_passes(const BackwardErrorReport& r) {
  if (!r.ok() || !r.threshold_ok || !r.ratio_le_bound || !r.structure_ok) return false;
  if (r.k == 0) return true;
  const auto& d = r.diag;
  const bool fixed_point = d.fixed_point_residual <= 1e-12 * d.theta;
  const bool x_ok = r.norm_X <= d.x_bound;
  const bool dr_ok = r.norm_dR <= d.dR_bound && r.norm_dR < 1.0 / std::numbers::sqrt2;
  return fixed_point && x_ok && dr_ok;
}

namespace {

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("bad number '" + s + "' in report");
  return x;
}

template <class T>
T parse_int(const std::string& s) {
  T x{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("bad integer '" + s + "' in report");
  return x;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw InvalidArgument("bad flag '" + s + "' in report");
}

struct ReportField {
  std::string name;
  std::function<std::string(const BackwardErrorReport&)> get;
  std::function<void(BackwardErrorReport&, const std::string&)> set;
};

#define STRUKT_DOUBLE(f) \
  ReportField { #f, [](const BackwardErrorReport& r) { return fmt_double(r.f); }, [](BackwardErrorReport& r, const std::string& s) { r.f = parse_double(s); } }
#define STRUKT_BOOL(f) \
  ReportField { #f, [](const BackwardErrorReport& r) { return std::string(r.f ? "true" : "false"); }, [](BackwardErrorReport& r, const std::string& s) { r.f = parse_bool(s); } }
#define STRUKT_INT(f, T) \
  ReportField { #f, [](const BackwardErrorReport& r) { return std::to_string(r.f); }, [](BackwardErrorReport& r, const std::string& s) { r.f = parse_int<T>(s); } }
#define STRUKT_STRING(f) \
  ReportField { #f, [](const BackwardErrorReport& r) { return r.f; }, [](BackwardErrorReport& r, const std::string& s) { r.f = s; } }

const std::vector<ReportField>& fields() {
  static const std::vector<ReportField> f = {
      STRUKT_INT(seed, std::uint64_t), STRUKT_STRING(kind),     STRUKT_INT(g, int),
      STRUKT_INT(n, long),             STRUKT_INT(k, int),      STRUKT_STRING(placement),
      STRUKT_DOUBLE(norm_P),           STRUKT_DOUBLE(norm_L),   STRUKT_DOUBLE(norm_M),
      STRUKT_DOUBLE(norm_dL),          STRUKT_BOOL(threshold_ok), STRUKT_DOUBLE(norm_X),
      STRUKT_DOUBLE(norm_dR),          STRUKT_DOUBLE(norm_dP),  STRUKT_DOUBLE(ratio),
      STRUKT_DOUBLE(C_PL),             STRUKT_DOUBLE(bound),    STRUKT_BOOL(ratio_le_bound),
      STRUKT_BOOL(structure_ok),       STRUKT_DOUBLE(eig_chordal_max), STRUKT_INT(iters, int),
      STRUKT_DOUBLE(wall_ms),
  };
  return f;
}

#undef STRUKT_DOUBLE
#undef STRUKT_BOOL
#undef STRUKT_INT
#undef STRUKT_STRING

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c;
    for (const ReportField& f : fields()) c.push_back(f.name);
    return c;
  }();
  return cols;
}

std::string reports_to_csv(const std::vector<BackwardErrorReport>& reports) {
  std::string out;
  const auto& fs = fields();
  for (std::size_t i = 0; i < fs.size(); ++i) out += (i ? "," : "") + fs[i].name;
  out += '\n';
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < fs.size(); ++i) out += (i ? "," : "") + fs[i].get(r);
    out += '\n';
  }
  return out;
}

std::vector<BackwardErrorReport> reports_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty report");
  if (split(line) != report_columns()) throw InvalidArgument("report header does not match the schema");
  const auto& fs = fields();
  std::vector<BackwardErrorReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != fs.size()) throw InvalidArgument("report row has " + std::to_string(cells.size()) + " cells");
    BackwardErrorReport r;
    for (std::size_t i = 0; i < fs.size(); ++i) fs[i].set(r, cells[i]);
    out.push_back(std::move(r));
  }
  return out;
}

Json reports_to_json(const std::vector<BackwardErrorReport>& reports) {
  Json arr = Json::array();
  for (const auto& r : reports) {
    Json row = Json::object();
    row["seed"] = r.seed;
    row["kind"] = r.kind;
    row["g"] = r.g;
    row["n"] = r.n;
    row["k"] = r.k;
    row["placement"] = r.placement;
    auto num = [&](const char* key, double x) { row[key] = std::isnan(x) ? Json(nullptr) : Json(x); };
    num("norm_P", r.norm_P);
    num("norm_L", r.norm_L);
    num("norm_M", r.norm_M);
    num("norm_dL", r.norm_dL);
    row["threshold_ok"] = r.threshold_ok;
    num("norm_X", r.norm_X);
    num("norm_dR", r.norm_dR);
    num("norm_dP", r.norm_dP);
    num("ratio", r.ratio);
    num("C_PL", r.C_PL);
    num("bound", r.bound);
    row["ratio_le_bound"] = r.ratio_le_bound;
    row["structure_ok"] = r.structure_ok;
    num("eig_chordal_max", r.eig_chordal_max);
    row["iters"] = r.iters;
    num("wall_ms", r.wall_ms);
    if (!r.ok()) row["error"] = r.diag.error;
    arr.push_back(std::move(row));
  }
  return arr;
}

std::vector<BackwardErrorReport> reports_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidArgument("report JSON must be an array");
  std::vector<BackwardErrorReport> out;
  try {
    for (const Json& row : j) {
      BackwardErrorReport r;
      auto num = [&](const char* key) {
        const Json& v = row.at(key);
        return v.is_null() ? kNaN : v.get<double>();
      };
      r.seed = row.at("seed").get<std::uint64_t>();
      r.kind = row.at("kind").get<std::string>();
      r.g = row.at("g").get<int>();
      r.n = row.at("n").get<long>();
      r.k = row.at("k").get<int>();
      r.placement = row.at("placement").get<std::string>();
      r.norm_P = num("norm_P");
      r.norm_L = num("norm_L");
      r.norm_M = num("norm_M");
      r.norm_dL = num("norm_dL");
      r.threshold_ok = row.at("threshold_ok").get<bool>();
      r.norm_X = num("norm_X");
      r.norm_dR = num("norm_dR");
      r.norm_dP = num("norm_dP");
      r.ratio = num("ratio");
      r.C_PL = num("C_PL");
      r.bound = num("bound");
      r.ratio_le_bound = row.at("ratio_le_bound").get<bool>();
      r.structure_ok = row.at("structure_ok").get<bool>();
      r.eig_chordal_max = num("eig_chordal_max");
      r.iters = row.at("iters").get<int>();
      r.wall_ms = num("wall_ms");
      if (row.contains("error")) r.diag.error = row.at("error").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed report JSON: ") + e.what());
  }
  return out;
}

}  // namespace strukt
