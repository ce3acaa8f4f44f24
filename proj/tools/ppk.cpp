// ppk: GMRES-polynomial preconditioning toolkit CLI.
//
// Subcommands: solve, eig, poly, estimate, gen.  Every run writes a
// machine-readable JSON report (also on failure paths) and prints a one-line
// summary; exit 1 = solver did not converge, exit 2 = configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ppk/analysis.hpp"
#include "ppk/drivers.hpp"
#include "ppk/kernels.hpp"
#include "ppk/matrix_market.hpp"
#include "ppk/report.hpp"

namespace {

using nlohmann::json;

std::string g_outdir;

std::filesystem::path out_path(const std::string& name) {
  std::filesystem::path dir = g_outdir;
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  f << body;
  if (!f) throw std::runtime_error("cannot write " + p.string());
}

ppk::OperatorPtr load_matrix(const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("mm:", 0) == 0)
    return ppk::sparse_operator(ppk::read_matrix_market(spec.substr(3)));
  return ppk::make_preset(spec, seed);
}

// column-probing sparse extraction; presets are banded so this stays small
ppk::SparseMatrix probe_sparse(const ppk::LinearOperator& op) {
  const int n = op.n();
  ppk::SparseMatrix m;
  m.n = n;
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(n));
  std::vector<double> e(static_cast<std::size_t>(n), 0.0), col(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    op.apply(e.data(), col.data());
    e[static_cast<std::size_t>(j)] = 0.0;
    for (int i = 0; i < n; ++i)
      if (col[static_cast<std::size_t>(i)] != 0.0)
        rows[static_cast<std::size_t>(i)].push_back({j, col[static_cast<std::size_t>(i)]});
  }
  m.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    m.row_offsets[static_cast<std::size_t>(i) + 1] =
        m.row_offsets[static_cast<std::size_t>(i)] +
        static_cast<std::int64_t>(rows[static_cast<std::size_t>(i)].size());
  for (int i = 0; i < n; ++i)
    for (auto& [j, v] : rows[static_cast<std::size_t>(i)]) {
      m.col_indices.push_back(j);
      m.values.push_back(v);
    }
  return m;
}

struct ParsedRange {
  double lo = 0, hi = 0, step = 1;
};

ParsedRange parse_range(const std::string& s) {
  ParsedRange r;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &r.lo, &r.hi, &r.step) != 3 || r.step <= 0)
    throw CLI::ValidationError("range must be lo:hi:step with step > 0");
  return r;
}

int run_solve(const std::string& matrix, ppk::PPGmresConfig cfg, const std::string& prefix) {
  auto op = load_matrix(matrix, cfg.seed);
  ppk::Rng rng(cfg.seed, 1);  // right-hand side stream
  auto b = rng.unit_vector(static_cast<std::size_t>(op->n()));

  json j;
  int code = 0;
  try {
    ppk::PPGmresResult res = ppk::pp_gmres(op, b, cfg);
    j = ppk::to_json(res);
    std::ostringstream csv;
    ppk::write_history_csv(csv, res.report);
    write_text(out_path(prefix + "_history.csv"), csv.str());
    std::printf("degree=%d added_copies=%d matvecs=%lld converged=%s true_resnorm=%.3e\n",
                res.report.degree, res.report.added_copies,
                static_cast<long long>(res.report.matvecs),
                res.report.converged ? "yes" : "no", res.report.final_true_resnorm);
    code = res.report.converged ? 0 : 1;
  } catch (const ppk::NumericalError& e) {
    j = json{{"schema", 1}, {"seed", cfg.seed}, {"converged", false}, {"error", e.what()}};
    std::fprintf(stderr, "solve failed: %s\n", e.what());
    code = 1;
  }
  write_text(out_path(prefix + ".json"), ppk::render_json(j));
  return code;
}

int run_eig(const std::string& matrix, ppk::EigenConfig cfg, const std::string& prefix) {
  auto op = load_matrix(matrix, cfg.seed);
  json j;
  int code = 0;
  try {
    ppk::EigenResult res = ppk::pp_arnoldi_interior(op, cfg);
    j = ppk::to_json(res);
    double lo = 0, hi = 0;
    if (!res.values.empty()) {
      lo = res.values.front().real();
      hi = res.values.front().real();
      for (auto z : res.values) {
        lo = std::min(lo, z.real());
        hi = std::max(hi, z.real());
      }
    }
    std::printf("degree=%d cycles=%d matvecs=%lld converged=%s range=[%.6g, %.6g]%s%s\n",
                res.degree, res.cycles, static_cast<long long>(res.matvecs),
                res.converged ? "yes" : "no", lo, hi, res.warning.empty() ? "" : " warning: ",
                res.warning.c_str());
    code = res.converged ? 0 : 1;
  } catch (const ppk::NumericalError& e) {
    j = json{{"schema", 1}, {"seed", cfg.seed}, {"converged", false}, {"error", e.what()}};
    std::fprintf(stderr, "eig failed: %s\n", e.what());
    code = 1;
  }
  write_text(out_path(prefix + ".json"), ppk::render_json(j));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GMRES-polynomial preconditioning toolkit"};
  app.require_subcommand(1);
  app.set_config("--config");

  if (const char* env = std::getenv("PPK_OUT")) g_outdir = env;
  if (g_outdir.empty()) g_outdir = ".";
  app.add_option("--out-dir", g_outdir, "output directory (env PPK_OUT)");
  bool no_simd = false;
  app.add_flag("--no-simd", no_simd, "force scalar kernels");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "polynomial-preconditioned linear solve");
  std::string matrix, prefix = "solve";
  ppk::PPGmresConfig scfg;
  bool no_stability = false, no_verify = false;
  solve->add_option("--matrix", matrix, "preset name or mm:<path>")->required();
  solve->add_option("--d", scfg.d, "polynomial degree (GMRES cycle length)");
  solve->add_option("--m", scfg.m, "restart length");
  solve->add_option("--tol", scfg.tol, "relative residual target");
  solve->add_option("--balance", scfg.balance, "none|b1|b2|b3|b4|b5");
  solve->add_option("--seed", scfg.seed, "RNG seed (printed in outputs)");
  solve->add_option("--max-mvp", scfg.max_mvp, "matvec budget");
  solve->add_option("--cycles", scfg.max_cycles, "restart cycle cap");
  solve->add_option("--pofcutoff", scfg.stability.pofcutoff_log10, "log10 pof cutoff");
  solve->add_flag("--no-stability", no_stability, "disable stability control");
  bool no_augment = false, no_step1 = false;
  solve->add_flag("--no-augment", no_augment,
                  "classify roots but add no copies (rely on correction)");
  solve->add_flag("--no-step1", no_step1, "skip the small-side extra-copy step");
  solve->add_option("--correction-iters", scfg.stability.gmres_correction_iters,
                    "iterations for the GMRES correction");
  solve->add_flag("--no-verify", no_verify, "skip true-residual verification");
  solve->add_flag("--reorth", scfg.reorthogonalize_cycles, "reorthogonalize solve cycles");
  solve->add_option("--prefix", prefix, "output file prefix");

  // ---- eig ----
  auto* eig = app.add_subcommand("eig", "interior eigenvalues near sigma");
  std::string ematrix, eprefix = "eig", arnoldi = "80,40";
  ppk::EigenConfig ecfg;
  eig->add_option("--matrix", ematrix, "preset name or mm:<path>")->required();
  eig->add_option("--sigma", ecfg.sigma, "target shift")->required();
  eig->add_option("--nev", ecfg.nev, "eigenvalues wanted");
  eig->add_option("--d", ecfg.d, "polynomial degree");
  eig->add_option("--balance", ecfg.balance, "none|b1|b5");
  eig->add_option("--arnoldi", arnoldi, "m,k (subspace size, retained)");
  eig->add_option("--tol", ecfg.tol, "eigen-residual tolerance");
  eig->add_option("--cycles", ecfg.max_cycles, "restart cap");
  eig->add_option("--seed", ecfg.seed, "RNG seed");
  eig->add_flag("--harmonic", ecfg.harmonic_ritz, "harmonic projected extraction");
  eig->add_option("--prefix", eprefix, "output file prefix");

  // ---- poly ----
  auto* poly = app.add_subcommand("poly", "build and inspect a preconditioner polynomial");
  std::string pmatrix, pprefix = "poly", sample, grid;
  ppk::PPGmresConfig pcfg;
  poly->add_option("--matrix", pmatrix, "preset name or mm:<path>")->required();
  poly->add_option("--d", pcfg.d, "polynomial degree");
  poly->add_option("--balance", pcfg.balance, "none|b1|b2|b3|b4|b5");
  poly->add_option("--seed", pcfg.seed, "RNG seed");
  poly->add_flag("--no-stability", no_stability, "disable stability control");
  poly->add_option("--sample", sample, "real-axis sampling lo:hi:step -> CSV");
  poly->add_option("--grid", grid, "2-D grid relo:rehi:n,imlo:imhi:n -> CSV");
  poly->add_option("--prefix", pprefix, "output file prefix");

  // ---- estimate ----
  auto* est = app.add_subcommand("estimate", "convergence-improvement estimate");
  ppk::IntervalSpectrum ispec;
  int est_d = 51, est_m = 50;
  est->add_option("--u", ispec.u)->required();
  est->add_option("--v", ispec.v)->required();
  est->add_option("--a", ispec.a)->required();
  est->add_option("--b", ispec.b)->required();
  est->add_option("--d", est_d, "polynomial degree");
  est->add_option("--m", est_m, "restart length");

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "write a preset matrix in Matrix Market form");
  std::string gmatrix, gout = "matrix.mtx";
  std::uint64_t gseed = 12345;
  gen->add_option("--matrix", gmatrix, "preset name")->required();
  gen->add_option("--out", gout, "output .mtx path");
  gen->add_option("--seed", gseed, "RNG seed for random presets");

  CLI11_PARSE(app, argc, argv);
  if (no_simd) ppk::kernels::force_backend(ppk::kernels::Backend::Scalar);

  try {
    if (*solve) {
      scfg.stability_enabled = !no_stability;
      scfg.stability.augment_enabled = !no_augment;
      scfg.stability.optional_step1_enabled = !no_step1;
      scfg.verify_true_residual = !no_verify;
      return run_solve(matrix, scfg, prefix);
    }
    if (*eig) {
      if (std::sscanf(arnoldi.c_str(), "%d,%d", &ecfg.m, &ecfg.k) != 2) {
        std::fprintf(stderr, "--arnoldi expects m,k\n");
        return 2;
      }
      return run_eig(ematrix, ecfg, eprefix);
    }
    if (*poly) {
      auto op = load_matrix(pmatrix, pcfg.seed);
      pcfg.stability_enabled = !no_stability;
      ppk::Rng rng(pcfg.seed, 0);
      auto v0 = rng.unit_vector(static_cast<std::size_t>(op->n()));
      ppk::Counters cnt;
      ppk::RootPoly base = ppk::gmres_polynomial(*op, v0, pcfg.d, &cnt);
      ppk::BalanceOutcome bal = ppk::apply_balance(pcfg.balance, base, *op, v0, &cnt);
      ppk::PolyPtr p = bal.poly;

      json j{{"schema", 1}, {"seed", pcfg.seed}, {"degree", p->degree()},
             {"balance", pcfg.balance}, {"note", bal.note}};
      if (auto* rp = dynamic_cast<const ppk::RootPoly*>(p.get())) {
        json roots = json::array();
        int leja_index = 0;
        for (const auto& u : rp->roots()) {
          roots.push_back(json{{"re", u.value.real()},
                               {"im", u.value.imag()},
                               {"multiplicity", u.multiplicity},
                               {"is_pair", u.is_pair},
                               {"tag", u.tag == ppk::RootTag::Gmres
                                           ? "gmres"
                                           : (u.tag == ppk::RootTag::Balance ? "balance"
                                                                             : "stability")},
                               {"leja_index", leja_index++}});
        }
        j["roots"] = std::move(roots);
        j["pof"] = ppk::to_json(ppk::pof(*rp));
        j["spline"] = ppk::to_json(ppk::spline_definiteness_test(*rp, {}));
      }
      write_text(out_path(pprefix + ".json"), ppk::render_json(j));

      if (!sample.empty()) {
        ParsedRange r = parse_range(sample);
        ppk::GridSpec gs;
        gs.re_lo = r.lo;
        gs.re_hi = r.hi;
        gs.re_n = static_cast<int>((r.hi - r.lo) / r.step) + 1;
        std::ostringstream csv;
        ppk::write_field_csv(csv, ppk::sample_polynomial(*p, gs));
        write_text(out_path(pprefix + "_sample.csv"), csv.str());
      }
      if (!grid.empty()) {
        auto comma = grid.find(',');
        if (comma == std::string::npos) throw CLI::ValidationError("--grid expects re,im specs");
        ParsedRange rr = parse_range(grid.substr(0, comma));
        ParsedRange ri = parse_range(grid.substr(comma + 1));
        ppk::GridSpec gs{rr.lo, rr.hi, static_cast<int>(rr.step), ri.lo, ri.hi,
                         static_cast<int>(ri.step)};
        std::ostringstream csv;
        ppk::write_field_csv(csv, ppk::sample_polynomial(*p, gs));
        write_text(out_path(pprefix + "_grid.csv"), csv.str());
      }
      std::printf("degree=%d roots_written=%s\n", p->degree(),
                  dynamic_cast<const ppk::RootPoly*>(p.get()) ? "yes" : "no");
      return 0;
    }
    if (*est) {
      ppk::ImprovementEstimate e = ppk::estimate_improvement(ispec, est_d, est_m);
      json j{{"schema", 1},
             {"u", ispec.u}, {"v", ispec.v}, {"a", ispec.a}, {"b", ispec.b},
             {"d", est_d}, {"m", est_m},
             {"delta", e.delta},
             {"branch_u", e.branch_u},
             {"marginal", e.marginal},
             {"per_cycle_gmres", e.per_cycle_gmres},
             {"per_cycle_ppgmres", e.per_cycle_ppgmres},
             {"log10_reduction_gmres", e.log10_gmres},
             {"log10_reduction_ppgmres", e.log10_ppgmres},
             {"speedup_matvecs", e.speedup_matvecs}};
      std::string body = ppk::render_json(j);
      write_text(out_path("estimate.json"), body);
      std::fputs(body.c_str(), stdout);
      return 0;
    }
    if (*gen) {
      auto op = ppk::make_preset(gmatrix, gseed);
      ppk::write_matrix_market(probe_sparse(*op), gout);
      std::printf("wrote %s (n=%d)\n", gout.c_str(), op->n());
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
