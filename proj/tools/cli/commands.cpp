// Copyright 2026 The qlinsolve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qlinsolve/calibration.hpp"
#include "qlinsolve/embed.hpp"
#include "qlinsolve/errors.hpp"
#include "qlinsolve/qsim.hpp"
#include "qlinsolve/rng.hpp"
#include "qlinsolve/spinchain.hpp"
#include "qlinsolve/synth.hpp"

namespace qlinsolve::cli {

namespace {

// Sub-seed streams of the root seed.
constexpr std::uint64_t kSolverStream = 1;
constexpr std::uint64_t kChainStream = 3;
constexpr std::uint64_t kShotStream = 10;

// Parameters supplied by hand are usually rounded to five decimals; the
// cross-check then cannot be tighter than the rounding allows.
constexpr double kSuppliedChainTolerance = 1e-3;

double spectral_norm_of_inverse(const linsys::Matrix& a) {
  Eigen::JacobiSVD<linsys::Matrix> svd(linsys::inverse(a));
  return svd.singularValues()(0);
}

std::vector<int> targets(const ProblemFile& p) {
  std::vector<int> ks;
  if (p.target_k) {
    ks.push_back(*p.target_k);
  } else {
    for (int k = 1; k <= p.a.rows(); ++k) ks.push_back(k);
  }
  return ks;
}

// Amplitude of variable k after the selected protocol, exact (no sampling).
struct Amplitude {
  qsim::Complex value;
  double residual = 0.0;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
}

std::string chain_diagnostic(const chain::ChainSpec& spec) {
  std::ostringstream s;
  s << std::setprecision(6) << "t=" << spec.time << " d=(";
  for (std::size_t i = 0; i < spec.couplings.size(); ++i) s << (i ? "," : "") << spec.couplings[i];
  s << ") w=(";
  for (std::size_t i = 0; i < spec.larmor.size(); ++i) s << (i ? "," : "") << spec.larmor[i];
  s << ")";
  return s.str();
}

}  // namespace

void apply_overrides(ProblemFile& p, const Overrides& o) {
  if (o.protocol) p.protocol = *o.protocol;
  if (o.target_k) {
    if (*o.target_k < 1 || *o.target_k > p.a.rows()) {
      throw std::invalid_argument("--target-k out of range 1.." + std::to_string(p.a.rows()));
    }
    p.target_k = *o.target_k;
  }
  if (o.shots || o.series) {
    hw::ShotPlan plan = p.shots.value_or(hw::ShotPlan{});
    if (o.shots) plan.shots = *o.shots;
    if (o.series) plan.series = *o.series;
    if (plan.shots < 1 || plan.series < 1) throw std::invalid_argument("--shots and --series must be >= 1");
    p.shots = plan;
  }
  if (o.seed) p.seed = *o.seed;
  if (o.noise) p.noise = *o.noise;
  if (o.correction) p.correction = *o.correction;
  if (o.site) p.site = *o.site;
}

bool RunReport::all_match() const {
  for (const auto& r : rows) {
    if (!r.match) return false;
  }
  return true;
}

RunReport cmd_solve(const ProblemFile& problem, bool rescale, hw::CorrectionMode mode) {
  const auto start = std::chrono::steady_clock::now();
  if (!problem.b) throw std::invalid_argument("solve needs a right-hand side 'b'");
  const linsys::LinearSystem sys(problem.a, *problem.b);
  const linsys::Vector x = linsys::classical_solve(sys);
  const auto m = static_cast<int>(sys.dim());

  RunReport report;
  report.protocol = problem.protocol;
  report.feasibility = linsys::feasibility(sys);

  // Scaling A by c divides A^-1 (and x) by c; scaling b by s divides x by s.
  double c = 1.0;
  double s = 1.0;
  if (rescale) {
    const double bound = problem.protocol == Protocol::kEmbedFull ? spectral_norm_of_inverse(sys.a())
                                                                  : report.feasibility.row_norms.maxCoeff();
    c = std::max(1.0, bound);
    s = std::max(1.0, report.feasibility.b_norm);
  }
  report.scale = c * s;
  const linsys::Matrix a = sys.a() * c;
  const linsys::Vector b = sys.b() / s;
  if (b.norm() > 1.0 + linsys::kFeasibilityTol) {
    throw NormTooLarge("||b|| = " + fmt(b.norm()) + " > 1; rerun with --rescale");
  }
  const double b0 = std::sqrt(std::max(0.0, 1.0 - b.squaredNorm()));

  synth::SolverOptions solver;
  solver.seed = derive_seed(problem.seed, kSolverStream);
  std::optional<synth::EncodingSolution> encoding;
  std::optional<embed::FullEmbedding> full;

  auto amplitude = [&](int k) -> Amplitude {
    switch (problem.protocol) {
      case Protocol::kEmbedFull: {
        if (!full) full = embed::embed_full(a);
        const linsys::Vector out = embed::apply_embedding(*full, b);
        return {out(k - 1), embed::orthogonality_residual(full->u)};
      }
      case Protocol::kEmbedReduced: {
        const auto e = embed::embed_reduced(a, k);
        const linsys::Vector out = embed::apply_embedding(e, b);
        return {out(0), embed::orthogonality_residual(e.u)};
      }
      case Protocol::kCircuit: {
        if (!encoding) {
          encoding = synth::solve_encoding(b, solver);
          report.diagnostics.push_back("encoding: " + std::to_string(encoding->branches.size()) +
                                       " branches, residual " + fmt(encoding->residual));
        }
        const auto ext = synth::solve_extraction(a, k, solver);
        report.diagnostics.push_back("extraction k=" + std::to_string(k) + ": " +
                                     std::to_string(ext.branches.size()) + " branches, residual " +
                                     fmt(ext.residual));
        const auto protocol = synth::assemble_protocol(*encoding, ext, m);
        const auto state = synth::simulate(protocol);
        return {qsim::projection(state, m), std::max(encoding->residual, ext.residual)};
      }
      case Protocol::kChain: {
        const int site = problem.site.value_or(m);
        chain::ChainSpec spec;
        if (problem.chain) {
          spec = *problem.chain;
          report.match_tolerance = kSuppliedChainTolerance;
        } else {
          chain::ChainFitOptions opts;
          opts.seed = derive_seed(problem.seed, kChainStream);
          spec = chain::fit_chain(a, k, site, opts).spec;
        }
        if (spec.n_sites() < m || site < 1 || site > spec.n_sites()) {
          throw std::invalid_argument("chain needs at least M sites and a readout site inside it");
        }
        report.diagnostics.push_back("chain k=" + std::to_string(k) + ": " + chain_diagnostic(spec));
        Eigen::VectorXcd init = Eigen::VectorXcd::Zero(spec.n_sites() + 1);
        init(0) = b0;
        for (int j = 0; j < m; ++j) init(j + 1) = b(j);
        const auto psi = chain::evolve(spec, init);
        const auto p = chain::projection_coefficients(spec, a, site);
        return {psi(site), chain::projection_residual(p, k)};
      }
    }
    throw std::logic_error("unhandled protocol");
  };

  if (problem.protocol == Protocol::kChain && problem.chain && !problem.target_k && m > 1) {
    throw std::invalid_argument("supplied chain parameters need target_k (one chain per variable)");
  }

  const bool sampling = problem.shots.has_value() || problem.noise.has_value();
  for (int k : targets(problem)) {
    VariableReport row;
    row.k = k;
    row.x_classical = x(k - 1);
    const Amplitude amp = amplitude(k);
    row.x_quantum = report.scale * amp.value.real();
    row.x_quantum_imag = report.scale * amp.value.imag();
    row.solver_residual = amp.residual;
    row.match = std::abs(*row.x_quantum - row.x_classical) <= report.match_tolerance &&
                std::abs(row.x_quantum_imag) <= report.match_tolerance;
    if (sampling) {
      hw::NoiseModel noise = problem.noise.value_or(hw::NoiseModel{});
      const hw::ShotPlan plan = problem.shots.value_or(hw::ShotPlan{});
      Rng rng = make_rng(problem.seed, kShotStream + static_cast<std::uint64_t>(k));
      const double p = std::norm(amp.value);
      row.x_sq_sampled = hw::measure_with_noise(p, noise, plan, rng).p_hat();
      if (problem.correction) row.corrected = hw::apply_correction(*row.x_sq_sampled, *problem.correction, mode);
    }
    report.rows.push_back(row);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_csv(const RunReport& report) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "k,x_classical,x_quantum,x_quantum_imag,x_sq_sampled,corrected,negative,match\n";
  for (const auto& r : report.rows) {
    out << r.k << ',' << r.x_classical << ',';
    if (r.x_quantum) out << *r.x_quantum;
    out << ',' << r.x_quantum_imag << ',';
    if (r.x_sq_sampled) out << *r.x_sq_sampled;
    out << ',';
    if (r.corrected) out << r.corrected->value;
    out << ',' << (r.corrected && r.corrected->negative ? 1 : 0) << ',' << (r.match ? 1 : 0) << '\n';
  }
  return out.str();
}

void print_report(std::ostream& out, const RunReport& report) {
  out << "protocol: " << to_string(report.protocol) << "\n";
  if (report.scale != 1.0) {
    out << "*** RESCALED: x = " << std::setprecision(12) << report.scale
        << " * (amplitude of the rescaled problem) ***\n";
  }
  out << std::fixed << std::setprecision(8);
  for (const auto& r : report.rows) {
    out << "x_" << r.k << ": classical " << std::setw(12) << r.x_classical;
    if (r.x_quantum) out << "  quantum " << std::setw(12) << *r.x_quantum;
    if (std::abs(r.x_quantum_imag) > 1e-12) out << " (imag " << r.x_quantum_imag << ")";
    if (r.x_sq_sampled) out << "  x~^2 " << *r.x_sq_sampled;
    if (r.corrected) {
      out << "  X " << r.corrected->value;
      if (r.corrected->negative) out << " (negative)";
    }
    out << "  " << (r.match ? "match" : "MISMATCH") << "\n";
  }
  out << std::defaultfloat << std::setprecision(6);
  out << "match tolerance: " << report.match_tolerance << "\n";
  for (const auto& d : report.diagnostics) out << "  " << d << "\n";
  out << "time: " << report.seconds << " s\n";
}

namespace {

void print_feasibility(std::ostream& out, const linsys::LinearSystem& sys) {
  const auto f = linsys::feasibility(sys);
  out << std::setprecision(8);
  out << "det(A) = " << linsys::determinant(sys.a()) << "\n";
  out << "||b|| = " << f.b_norm << (f.b_encodable ? "  (encodable)" : "  (NOT encodable)") << "\n";
  for (Eigen::Index k = 0; k < sys.dim(); ++k) {
    out << "r_" << k + 1 << "0 = " << f.row_norms(k) << (f.feasible_rows[k] ? "  ok" : "  INFEASIBLE") << "\n";
  }
  for (Eigen::Index j = 0; j < sys.dim(); ++j) {
    out << "r_0" << j + 1 << " = " << f.col_norms(j) << (f.feasible_cols[j] ? "  ok" : "  INFEASIBLE") << "\n";
  }
  const double sigma = spectral_norm_of_inverse(sys.a());
  out << "||A^-1||_2 = " << sigma << (sigma <= 1.0 + linsys::kFeasibilityTol ? "  ok" : "  INFEASIBLE")
      << "\n";
  out << "reduced embedding: " << (f.all_rows_feasible() ? "every variable" : "not every variable") << "\n";
  out << "full embedding: "
      << (f.all_rows_feasible() && f.all_cols_feasible() && sigma <= 1.0 + linsys::kFeasibilityTol
              ? "feasible"
              : "infeasible")
      << "\n";
}

std::string matrix_csv(const linsys::Matrix& u) {
  std::ostringstream s;
  s << std::setprecision(15);
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) s << (j ? "," : "") << u(i, j);
    s << "\n";
  }
  return s.str();
}

linsys::LinearSystem system_of(const ProblemFile& p) {
  return {p.a, p.b.value_or(linsys::Vector::Zero(p.a.rows()))};
}

struct Context {
  std::string problem_path;
  std::string out_dir;
  std::string protocol;
  std::string noise;
  std::string correction_path;
  std::string mode = "exact-inverse";
  int target_k = 0;
  std::int64_t shots = 0;
  int series = 0;
  std::uint64_t seed = 0;
  int site = 0;
  bool rescale = false;
};

hw::NoiseModel parse_noise(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("--noise expects a,b,sd; got '" + text + "'");
    v.push_back(d);
  }
  if (v.size() != 3 || v[2] < 0.0) throw std::invalid_argument("--noise expects a,b,sd with sd >= 0");
  return {v[0], v[1], v[2], 0};
}

hw::CorrectionMode parse_mode(const std::string& name) {
  if (name == "exact-inverse") return hw::CorrectionMode::kExactInverse;
  if (name == "naive-proxy") return hw::CorrectionMode::kNaiveProxy;
  if (name == "known-truth") return hw::CorrectionMode::kKnownTruth;
  throw std::invalid_argument("unknown correction mode '" + name + "'");
}

Overrides overrides_of(const Context& ctx, CLI::App& sub) {
  Overrides o;
  if (sub.count("--protocol")) o.protocol = parse_protocol(ctx.protocol);
  if (sub.count("--target-k")) o.target_k = ctx.target_k;
  if (sub.count("--shots")) o.shots = ctx.shots;
  if (sub.count("--series")) o.series = ctx.series;
  if (sub.count("--seed")) o.seed = ctx.seed;
  if (sub.count("--noise")) o.noise = parse_noise(ctx.noise);
  if (sub.count("--correction")) o.correction = load_correction(ctx.correction_path);
  if (sub.count("--site")) o.site = ctx.site;
  o.mode = parse_mode(ctx.mode);
  o.rescale = ctx.rescale;
  return o;
}

std::filesystem::path out_dir(const Context& ctx) {
  std::filesystem::path dir(ctx.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int do_solve(const ProblemFile& p, const Overrides& o, const Context& ctx, std::ostream& out) {
  if (o.mode == hw::CorrectionMode::kKnownTruth) {
    throw std::invalid_argument("known-truth correction needs the true x^2; use it with calibrate");
  }
  const RunReport report = cmd_solve(p, o.rescale, o.mode);
  print_report(out, report);
  if (!ctx.out_dir.empty()) write_file(out_dir(ctx) / "solve.csv", report_csv(report));
  return 0;
}

int do_calibrate(const ProblemFile& p, const Overrides& o, const Context& ctx, std::ostream& out) {
  linsys::validate_matrix(p.a);
  hw::CalibrationOptions opts;
  if (p.grid_max) {
    opts.grid.max_n = *p.grid_max;
    opts.grid.step = p.grid_step;
  } else {
    opts.grid = hw::default_grid(p.a, p.grid_step);
  }
  opts.noise = p.noise.value_or(hw::NoiseModel{});
  opts.plan = p.shots.value_or(hw::ShotPlan{});
  opts.seed = p.seed;
  opts.mode = o.mode;
  opts.solver.seed = derive_seed(p.seed, kSolverStream);

  const auto run = hw::run_calibration(p.a, opts);
  out << std::setprecision(8);
  out << "grid:";
  for (int n : opts.grid.max_n) out << " " << n;
  out << " (step " << opts.grid.step << ", " << opts.grid.size() << " points)\n";
  out << "fitted eps(x^2) = " << run.model.intercept << " + " << run.model.slope << " * x^2"
      << "  (rms " << run.model.fit_residual_rms << ")\n";
  out << "correction mode: " << hw::to_string(o.mode) << "\n";
  out << "max |eps| = " << run.report.max_abs_eps() << ", max |eps_corr| = " << run.report.max_abs_eps_corr()
      << ", max |eps_rel| = " << run.report.max_abs_eps_rel() << "\n";

  std::optional<hw::CalibrationRun> transfer;
  if (p.transfer_matrix) {
    hw::CalibrationOptions topts = opts;
    topts.grid = hw::default_grid(*p.transfer_matrix, p.grid_step);
    transfer = hw::run_transfer(*p.transfer_matrix, topts, run.model);
    out << "transfer: max |eps| = " << transfer->report.max_abs_eps()
        << ", max |eps_corr| = " << transfer->report.max_abs_eps_corr() << "\n";
  }

  if (!ctx.out_dir.empty()) {
    const auto dir = out_dir(ctx);
    write_file(dir / "correction.json", correction_json(run.model, o.mode));
    write_file(dir / "errors.csv", hw::error_csv(run.report));
    write_file(dir / "raw_errors.dat", hw::plot_raw_errors(run));
    write_file(dir / "corrected_errors.dat", hw::plot_corrected_errors(run));
    write_file(dir / "relative_errors.dat", hw::plot_relative_errors(run));
    if (transfer) {
      write_file(dir / "transfer_errors.csv", hw::error_csv(transfer->report));
      write_file(dir / "transfer_raw_errors.dat", hw::plot_raw_errors(*transfer));
      write_file(dir / "transfer_corrected_errors.dat", hw::plot_corrected_errors(*transfer));
    }
    out << "wrote " << dir.string() << "\n";
  }
  return 0;
}

int do_feasibility(const ProblemFile& p, std::ostream& out) {
  print_feasibility(out, system_of(p));
  return 0;
}

int do_embed(const ProblemFile& p, const Context& ctx, std::ostream& out) {
  const auto sys = system_of(p);
  linsys::Matrix u;
  if (p.protocol == Protocol::kEmbedFull) {
    u = embed::embed_full(sys.a()).u;
  } else if (p.protocol == Protocol::kEmbedReduced) {
    u = embed::embed_reduced(sys.a(), p.target_k.value_or(1)).u;
  } else {
    throw std::invalid_argument("embed needs --protocol embed-full or embed-reduced");
  }
  out << to_string(p.protocol) << " (" << u.rows() << "x" << u.cols() << ")\n";
  out << std::fixed << std::setprecision(6) << u << "\n" << std::defaultfloat;
  out << "orthogonality residual: " << std::setprecision(3) << embed::orthogonality_residual(u) << "\n";
  if (!ctx.out_dir.empty()) write_file(out_dir(ctx) / "embedding.csv", matrix_csv(u));
  return 0;
}

int do_chain_fit(const ProblemFile& p, const Context& ctx, std::ostream& out) {
  linsys::validate_matrix(p.a);
  const int site = p.site.value_or(static_cast<int>(p.a.rows()));
  chain::ChainFitOptions opts;
  opts.seed = derive_seed(p.seed, kChainStream);
  const auto start = std::chrono::steady_clock::now();
  chain::ChainSchedule schedule;
  if (p.target_k) {
    schedule.fits.push_back(chain::fit_chain(p.a, *p.target_k, site, opts));
    schedule.total_time = schedule.fits.back().spec.time;
  } else {
    schedule = chain::fit_all(p.a, site, opts);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string csv = chain::parameter_table_csv(schedule);
  out << csv;
  out << "total evolution time: " << std::setprecision(8) << schedule.total_time << "\n";
  out << "wall time: " << std::setprecision(4) << seconds << " s\n";
  if (!ctx.out_dir.empty()) write_file(out_dir(ctx) / "chain_parameters.csv", csv);
  return 0;
}

int exit_code_of(const std::exception_ptr& e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const ParseError& x) {
    err << "parse error: " << x.what() << "\n";
    return 1;
  } catch (const SingularMatrix& x) {
    err << "SingularMatrix: " << x.what() << "\n";
    return 2;
  } catch (const InfeasibleEmbedding& x) {
    err << "InfeasibleEmbedding: " << x.what() << "\n";
    return 2;
  } catch (const NormTooLarge& x) {
    err << "NormTooLarge: " << x.what() << "\n";
    return 2;
  } catch (const NoConvergence& x) {
    err << "NoConvergence: " << x.what() << "\n";
    return 3;
  } catch (const GramSchmidtDegenerate& x) {
    err << "GramSchmidtDegenerate: " << x.what() << "\n";
    return 3;
  } catch (const DegenerateFit& x) {
    err << "DegenerateFit: " << x.what() << "\n";
    return 1;
  } catch (const std::exception& x) {
    err << "error: " << x.what() << "\n";
    return 1;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qlinsolve: linear systems through unitary embeddings, gate circuits and spin chains"};
  app.require_subcommand(1);
  Context ctx;

  auto add_common = [&ctx](CLI::App* sub) {
    sub->add_option("problem", ctx.problem_path, "problem file (JSON)")->required();
    sub->add_option("--protocol", ctx.protocol, "embed-full | embed-reduced | circuit | chain");
    sub->add_option("--target-k", ctx.target_k, "1-based variable index (default: all)");
    sub->add_option("--shots", ctx.shots, "shots per series");
    sub->add_option("--series", ctx.series, "number of shot series");
    sub->add_option("--seed", ctx.seed, "root seed");
    sub->add_option("--noise", ctx.noise, "affine bias and jitter: intercept,slope,sd");
    sub->add_option("--correction", ctx.correction_path, "correction.json written by calibrate");
    sub->add_option("--mode", ctx.mode, "correction mode: exact-inverse | naive-proxy | known-truth");
    sub->add_option("--site", ctx.site, "chain readout site (default M)");
    sub->add_flag("--rescale", ctx.rescale, "scale A and b into the feasible region");
    sub->add_option("--out-dir", ctx.out_dir, "directory for CSV and plot data");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve A x = b with the selected protocol");
  CLI::App* calibrate = app.add_subcommand("calibrate", "fit the readout correction on a calibration grid");
  CLI::App* feas = app.add_subcommand("feasibility", "print the embedding feasibility report");
  CLI::App* emb = app.add_subcommand("embed", "print the orthogonal embedding of A^-1");
  CLI::App* chain_fit = app.add_subcommand("chain-fit", "fit XX-chain parameters per variable");
  for (CLI::App* sub : {solve, calibrate, feas, emb, chain_fit}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    ProblemFile problem = load_problem(ctx.problem_path);
    const Overrides o = overrides_of(ctx, *sub);
    apply_overrides(problem, o);
    if (sub == solve) return do_solve(problem, o, ctx, out);
    if (sub == calibrate) return do_calibrate(problem, o, ctx, out);
    if (sub == feas) return do_feasibility(problem, out);
    if (sub == emb) return do_embed(problem, ctx, out);
    return do_chain_fit(problem, ctx, out);
  } catch (...) {
    return exit_code_of(std::current_exception(), err);
  }
}

}  // namespace qlinsolve::cli
