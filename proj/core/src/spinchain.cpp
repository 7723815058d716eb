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

#include "qlinsolve/spinchain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qlinsolve/errors.hpp"
#include "qlinsolve/nlsolve.hpp"
#include "qlinsolve/rng.hpp"

namespace qlinsolve::chain {

namespace {

using Complex = std::complex<double>;

// Smooth bijection R -> (lo, hi) keeping fitted parameters strictly inside the box.
double to_box(double z, double lo, double hi) { return lo + (hi - lo) * 0.5 * (1.0 + std::tanh(z)); }

double from_box(double v, double lo, double hi) {
  const double u = std::clamp(2.0 * (v - lo) / (hi - lo) - 1.0, -1.0 + 1e-12, 1.0 - 1e-12);
  return std::atanh(u);
}

// Free parameters: d_2..d_{N-1}, then w_1..w_N.
struct Layout {
  int n_sites;
  int n_couplings() const { return n_sites - 2; }
  int size() const { return n_couplings() + n_sites; }
};

ChainSpec decode(const Eigen::VectorXd& z, const Layout& lay, double time, const ParameterBox& box) {
  ChainSpec s;
  s.couplings.push_back(1.0);
  for (int i = 0; i < lay.n_couplings(); ++i) {
    s.couplings.push_back(to_box(z(i), box.coupling_min, box.coupling_max));
  }
  for (int i = 0; i < lay.n_sites; ++i) {
    s.larmor.push_back(to_box(z(lay.n_couplings() + i), box.larmor_min, box.larmor_max));
  }
  s.time = time;
  return s;
}

Eigen::VectorXd encode(const ChainSpec& s, const Layout& lay, const ParameterBox& box) {
  Eigen::VectorXd z(lay.size());
  for (int i = 0; i < lay.n_couplings(); ++i) {
    z(i) = from_box(s.couplings[static_cast<std::size_t>(i + 1)], box.coupling_min, box.coupling_max);
  }
  for (int i = 0; i < lay.n_sites; ++i) {
    z(lay.n_couplings() + i) = from_box(s.larmor[static_cast<std::size_t>(i)], box.larmor_min, box.larmor_max);
  }
  return z;
}

Eigen::VectorXd split_residual(const VectorXcd& p, int k) {
  const Eigen::Index m = p.size();
  Eigen::VectorXd r(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Complex d = p(i) - (i == k - 1 ? 1.0 : 0.0);
    r(i) = d.real();
    r(m + i) = d.imag();
  }
  return r;
}

struct FixedTimeSolve {
  bool converged = false;
  Eigen::VectorXd z;
  double residual = 0.0;
};

}  // namespace

double ChainSpec::mean_field() const {
  double sum = 0.0;
  for (double w : larmor) sum += w;
  return 0.5 * sum;
}

void ChainSpec::validate() const {
  if (larmor.size() < 2) throw std::invalid_argument("chain needs at least two sites");
  if (couplings.size() + 1 != larmor.size()) {
    throw std::invalid_argument("chain of N sites needs N - 1 couplings");
  }
  for (double v : couplings) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite coupling");
  }
  for (double v : larmor) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite Larmor frequency");
  }
  if (!std::isfinite(time) || time < 0.0) throw std::invalid_argument("time must be finite and >= 0");
}

bool within_box(const ChainSpec& spec, const ParameterBox& box) {
  for (std::size_t i = 1; i < spec.couplings.size(); ++i) {
    if (!(spec.couplings[i] > box.coupling_min && spec.couplings[i] < box.coupling_max)) return false;
  }
  for (double w : spec.larmor) {
    if (!(w > box.larmor_min && w < box.larmor_max)) return false;
  }
  return spec.time > 0.0 && spec.time <= box.time_max;
}

Matrix one_excitation_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites();
  const double w = spec.mean_field();
  const double e0 = ground_energy(spec);
  Matrix h = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) h(i, i) = e0 - (w - spec.larmor[static_cast<std::size_t>(i)]);
  for (int i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = h(i + 1, i) = 0.5 * spec.couplings[static_cast<std::size_t>(i)];
  }
  return h;
}

double ground_energy(const ChainSpec& spec) {
  const double w = spec.mean_field();
  double e = 0.0;
  for (double wi : spec.larmor) e += 0.5 * (w - wi);
  return e;
}

MatrixXcd evolution_block(const ChainSpec& spec) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(one_excitation_hamiltonian(spec));
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  VectorXcd phase(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) phase(i) = std::polar(1.0, -lambda(i) * spec.time);
  const MatrixXcd q = eig.eigenvectors().cast<Complex>();
  return q * phase.asDiagonal() * q.transpose();
}

VectorXcd evolve(const ChainSpec& spec, const VectorXcd& initial) {
  spec.validate();
  const int n = spec.n_sites();
  if (initial.size() != n + 1) throw DimensionMismatch("initial state needs N + 1 amplitudes");
  if (std::abs(initial.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state is not normalized");
  VectorXcd out(n + 1);
  out(0) = std::polar(1.0, -ground_energy(spec) * spec.time) * initial(0);
  out.tail(n) = evolution_block(spec) * initial.tail(n);
  return out;
}

VectorXcd projection_coefficients(const ChainSpec& spec, const Matrix& a, int site) {
  spec.validate();
  const int n = spec.n_sites();
  const Eigen::Index m = a.rows();
  if (a.cols() != m || m > n) throw DimensionMismatch("A must be square with dim <= N");
  if (site < 1 || site > n) throw std::out_of_range("site out of range");
  const MatrixXcd v = evolution_block(spec);
  return (v.row(site - 1).head(m) * a.cast<Complex>()).transpose();
}

double projection_residual(const VectorXcd& p, int k) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(p(i) - (i == k - 1 ? 1.0 : 0.0)));
  }
  return worst;
}

ChainFit fit_chain(const Matrix& a, int k, int site, const ChainFitOptions& opts) {
  linsys::validate_matrix(a);
  const int m = static_cast<int>(a.rows());
  if (k < 1 || k > m) throw std::out_of_range("target variable index out of range");
  const int n = opts.n_sites == 0 ? m + 1 : opts.n_sites;
  if (n < m || n < 2) throw std::invalid_argument("chain must have at least M sites");
  if (site < 1 || site > n) throw std::out_of_range("site out of range");
  const double r = linsys::inverse(a).row(k - 1).norm();
  if (r > 1.0 + linsys::kFeasibilityTol) {
    std::ostringstream msg;
    msg << "row " << k << " of A^-1 has norm " << r << " > 1; a unitary evolution cannot reach P = e_k";
    throw InfeasibleEmbedding(msg.str());
  }

  const Layout lay{n};
  const ParameterBox& box = opts.box;
  const auto residual_at = [&](const Eigen::VectorXd& z, double t) {
    return split_residual(projection_coefficients(decode(z, lay, t, box), a, site), k);
  };

  nlsolve::DampedNewtonOptions nopts;
  nopts.max_iterations = opts.max_iterations;
  nopts.tolerance = opts.polish_tolerance;

  const auto solve_fixed = [&](const Eigen::VectorXd& z0, double t) {
    const nlsolve::Residual f = [&](const Eigen::VectorXd& z) { return residual_at(z, t); };
    const auto res = nlsolve::damped_newton(f, z0, nopts);
    return FixedTimeSolve{res.max_residual <= opts.descent_tolerance, res.x, res.max_residual};
  };

  // Stage 1: free-time restarts. Time is the last coordinate, mapped into (0, t_max).
  Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(k) * 7919 + static_cast<std::uint64_t>(site));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const nlsolve::Residual free_f = [&](const Eigen::VectorXd& z) {
    return residual_at(z.head(lay.size()), to_box(z(lay.size()), 0.0, box.time_max));
  };

  ChainFit fit;
  fit.k = k;
  fit.site = site;
  std::vector<std::pair<Eigen::VectorXd, double>> seeds;
  for (int restart = 0; restart < opts.restarts; ++restart) {
    ChainSpec init;
    init.couplings.push_back(1.0);
    for (int i = 0; i < lay.n_couplings(); ++i) {
      init.couplings.push_back(box.coupling_min + (box.coupling_max - box.coupling_min) * unit(rng));
    }
    for (int i = 0; i < n; ++i) {
      init.larmor.push_back(box.larmor_min + (box.larmor_max - box.larmor_min) * unit(rng));
    }
    const double t0 = box.time_max * unit(rng);
    Eigen::VectorXd z0(lay.size() + 1);
    z0.head(lay.size()) = encode(init, lay, box);
    z0(lay.size()) = from_box(t0, 0.0, box.time_max);
    const auto res = nlsolve::damped_newton(free_f, z0, nopts);
    if (res.max_residual > opts.tolerance) continue;
    const double t = to_box(res.x(lay.size()), 0.0, box.time_max);
    const Eigen::VectorXd z = res.x.head(lay.size());
    const ChainSpec spec = decode(z, lay, t, box);
    if (!within_box(spec, box)) continue;
    fit.converged.push_back({spec, res.max_residual});
    seeds.emplace_back(z, t);
  }
  if (seeds.empty()) {
    throw NoConvergence("no chain parameters reached P = e_" + std::to_string(k) + " after " +
                        std::to_string(opts.restarts) + " restarts (inconclusive)");
  }

  // Stage 2: continue the earliest candidates towards smaller t on a grid of
  // time_step, then bisect the last bracket.
  std::vector<std::size_t> order(seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return seeds[x].second < seeds[y].second; });
  if (order.size() > static_cast<std::size_t>(opts.descents)) order.resize(static_cast<std::size_t>(opts.descents));

  double best_t = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_z;
  for (std::size_t idx : order) {
    auto [z, t] = seeds[idx];
    double fail_t = 0.0;
    double next = (std::ceil(t / opts.time_step) - 1.0) * opts.time_step;
    if (next >= t) next -= opts.time_step;
    while (next > 0.0) {
      const auto s = solve_fixed(z, next);
      if (!s.converged || !within_box(decode(s.z, lay, next, box), box)) {
        fail_t = next;
        break;
      }
      z = s.z;
      t = next;
      next = t - opts.time_step;
    }
    double lo = fail_t;
    while (t - lo > opts.time_resolution) {
      const double mid = 0.5 * (lo + t);
      const auto s = solve_fixed(z, mid);
      if (s.converged && within_box(decode(s.z, lay, mid, box), box)) {
        z = s.z;
        t = mid;
        } else {
        lo = mid;
      }
    }
    if (t < best_t) {
      best_t = t;
      best_z = z;
    }
  }

  fit.spec = decode(best_z, lay, best_t, box);
  fit.residual = projection_residual(projection_coefficients(fit.spec, a, site), k);
  return fit;
}

ChainSchedule fit_all(const Matrix& a, int site, const ChainFitOptions& opts) {
  ChainSchedule sched;
  for (int k = 1; k <= static_cast<int>(a.rows()); ++k) {
    sched.fits.push_back(fit_chain(a, k, site, opts));
    sched.total_time += sched.fits.back().spec.time;
  }
  return sched;
}

std::string parameter_table_csv(const ChainSchedule& schedule) {
  std::ostringstream out;
  out << std::setprecision(10);
  if (schedule.fits.empty()) return "";
  const int n = schedule.fits.front().spec.n_sites();
  out << "x_i";
  for (int i = 2; i <= n - 1; ++i) out << ",d_" << i;
  for (int i = 1; i <= n; ++i) out << ",omega_" << i;
  out << ",t_min,residual\n";
  for (const auto& f : schedule.fits) {
    out << "x_" << f.k;
    for (std::size_t i = 1; i < f.spec.couplings.size(); ++i) out << ',' << f.spec.couplings[i];
    for (double w : f.spec.larmor) out << ',' << w;
    out << ',' << f.spec.time << ',' << f.residual << '\n';
  }
  return out.str();
}

}  // namespace qlinsolve::chain
