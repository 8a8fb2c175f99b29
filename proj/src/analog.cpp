// SPDX-License-Identifier: Apache-2.0
//
// iosim: joint digital/analog beamforming for dual-polarized omni-surfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "iosim/analog.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace iosim {

AnalogQuadratic build_analog_quadratic(const ChannelSet& channels, const CMat& w, const AuxWeights& aux) {
  const Eigen::Index ports = channels.h_bi.rows();
  AnalogQuadratic quad;
  quad.b = CMat::Zero(ports, ports);
  quad.v = CMat::Zero(ports, ports);
  const CMat hw = channels.h_bi * w;  // H_BI W
  quad.c = hw * hw.adjoint();
  const CMat hwwh = hw * w.adjoint();  // H_BI W W^H
  for (int k = 0; k < channels.users(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const CRow& h_iu = channels.h_iu[ku];
    const cd u = aux.u(k);
    const double f = aux.f(k);
    quad.b += f * std::norm(u) * (h_iu.adjoint() * h_iu);
    const CVec lhs = u * (hwwh * channels.h_bu[ku].adjoint()) - hw.col(k);
    quad.v += f * std::conj(u) * (lhs * h_iu);
  }
  return quad;
}

double analog_objective(const AnalogQuadratic& quad, const CVec& g) {
  const auto gm = g.asDiagonal();
  const CMat bgc = quad.b * gm * quad.c;
  const cd quadratic = (g.conjugate().asDiagonal() * bgc).trace();
  const cd linear = (gm * quad.v).trace();
  return std::real(quadratic) + 2.0 * std::real(linear);
}

double PhaseQuadratic::objective(const RVec& phases) const {
  if (phases.size() != c.size()) throw std::invalid_argument("phase quadratic: phase vector length");
  CVec x(phases.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) x(i) = std::polar(1.0, phases(i));
  const cd quadratic = x.dot(a * x);  // x^H A x
  const cd linear = c.transpose() * x;
  return std::real(quadratic) + 2.0 * std::real(linear) + constant;
}

PhaseQuadratic to_phase_quadratic(const AnalogQuadratic& quad, const RVec& amplitudes) {
  if (amplitudes.size() != quad.b.rows()) throw std::invalid_argument("phase quadratic: amplitude count");
  const CVec amp = amplitudes.cast<cd>();
  PhaseQuadratic out;
  out.a = amp.asDiagonal() * quad.b.cwiseProduct(quad.c.transpose()) * amp.asDiagonal();
  out.c = amp.cwiseProduct(quad.v.diagonal());
  return out;
}

PhaseQuadratic build_phase_quadratic(const ChannelSet& channels, const SurfaceMap& map, const CMat& w,
                                     const AuxWeights& aux, double sigma2) {
  const int vars = map.num_vars();
  PhaseQuadratic out;
  out.a = CMat::Zero(vars, vars);
  out.c = CVec::Zero(vars);
  const CMat wwh = w * w.adjoint();
  for (int k = 0; k < channels.users(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const cd u = aux.u(k);
    const double f = aux.f(k);
    const CRow& h_bu = channels.h_bu[ku];
    const CRow bw = h_bu * w;
    out.constant += f * (std::norm(u) * bw.squaredNorm() - 2.0 * std::real(std::conj(u) * bw(k)) +
                         std::norm(u) * sigma2 + 1.0);
    if (vars == 0) continue;

    CMat r = CMat::Zero(vars, channels.h_bi.cols());
    const auto& taps = map.taps(k);
    for (std::size_t p = 0; p < taps.size(); ++p)
      if (taps[p].var >= 0)
        r.row(taps[p].var) += taps[p].weight * channels.h_iu[ku](static_cast<Eigen::Index>(p)) *
                              channels.h_bi.row(static_cast<Eigen::Index>(p));
    const CMat y = r * w;
    out.a += (f * std::norm(u)) * (y * y.adjoint()).conjugate();
    out.c += (f * std::norm(u)) * (r * (wwh * h_bu.adjoint())) - (f * std::conj(u)) * y.col(k);
  }
  out.a = 0.5 * (out.a + out.a.adjoint()).eval();
  return out;
}

namespace {

double wrap_phase(double psi) {
  double p = std::fmod(psi, kTwoPi);
  return p < 0.0 ? p + kTwoPi : p;
}

std::vector<cd> phasors(const PhaseCodebook& book) {
  std::vector<cd> out;
  for (int l = 0; l < book.size(); ++l) out.push_back(std::polar(1.0, book.value(l)));
  return out;
}

// J restricted to the first d+1 coordinates grows by this amount when x_d is
// fixed; `acc` holds sum_{n<d} A_dn x_n.
inline double step_gain(const PhaseQuadratic& q, int d, cd x, cd acc) {
  return std::real(q.a(d, d)) + 2.0 * std::real(std::conj(x) * acc) + 2.0 * std::real(q.c(d) * x);
}

// Evaluates J along the same incremental path the enumerators use, so equal
// assignments give bit-identical values.
double sequential_value(const PhaseQuadratic& q, const std::vector<cd>& alphabet, const std::vector<int>& idx) {
  const int n = q.size();
  std::vector<cd> acc(static_cast<std::size_t>(n), cd{});
  double partial = 0.0;
  for (int d = 0; d < n; ++d) {
    const cd x = alphabet[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
    partial += step_gain(q, d, x, acc[static_cast<std::size_t>(d)]);
    for (int m = d + 1; m < n; ++m) acc[static_cast<std::size_t>(m)] += q.a(m, d) * x;
  }
  return partial + q.constant;
}

std::vector<int> quantize_all(const RVec& phases, const PhaseCodebook& book) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < phases.size(); ++i) idx.push_back(book.nearest_index(phases(i)));
  return idx;
}

RVec to_phases(const std::vector<int>& idx, const PhaseCodebook& book) {
  RVec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = book.value(idx[i]);
  return out;
}

struct Incumbent {
  double value = std::numeric_limits<double>::infinity();
  std::vector<int> idx;
  std::uint64_t leaves = 0;
};

class SubtreeEnumerator {
 public:
  SubtreeEnumerator(const PhaseQuadratic& q, const std::vector<cd>& alphabet)
      : q_(q), alphabet_(alphabet), n_(q.size()),
        acc_(static_cast<std::size_t>(n_ + 1), std::vector<cd>(static_cast<std::size_t>(n_), cd{})),
        idx_(static_cast<std::size_t>(n_), 0) {}

  // Enumerates every completion of `prefix`.
  Incumbent run(const std::vector<int>& prefix) {
    Incumbent best;
    double partial = 0.0;
    for (std::size_t d = 0; d < prefix.size(); ++d) {
      partial = descend(static_cast<int>(d), prefix[d], partial);
    }
    recurse(static_cast<int>(prefix.size()), partial, best);
    return best;
  }

 private:
  double descend(int d, int l, double partial) {
    const auto du = static_cast<std::size_t>(d);
    const cd x = alphabet_[static_cast<std::size_t>(l)];
    idx_[du] = l;
    const double next = partial + step_gain(q_, d, x, acc_[du][du]);
    auto& out = acc_[du + 1];
    const auto& in = acc_[du];
    for (int m = d + 1; m < n_; ++m) out[static_cast<std::size_t>(m)] = in[static_cast<std::size_t>(m)] + q_.a(m, d) * x;
    return next;
  }

  void recurse(int d, double partial, Incumbent& best) {
    if (d == n_) {
      ++best.leaves;
      const double value = partial + q_.constant;
      if (value < best.value) {
        best.value = value;
        best.idx = idx_;
      }
      return;
    }
    for (int l = 0; l < static_cast<int>(alphabet_.size()); ++l) recurse(d + 1, descend(d, l, partial), best);
  }

  const PhaseQuadratic& q_;
  const std::vector<cd>& alphabet_;
  int n_;
  std::vector<std::vector<cd>> acc_;
  std::vector<int> idx_;
};

// Repeated exact per-coordinate minimization over the alphabet.
std::vector<int> discrete_coordinate_descent(const PhaseQuadratic& q, const std::vector<cd>& alphabet,
                                             std::vector<int> idx) {
  const int n = q.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool changed = false;
    for (int l = 0; l < n; ++l) {
      cd coeff = q.c(l);
      for (int m = 0; m < n; ++m)
        if (m != l) coeff += std::conj(q.a(l, m) * alphabet[static_cast<std::size_t>(idx[static_cast<std::size_t>(m)])]);
      int best = idx[static_cast<std::size_t>(l)];
      double best_val = std::real(coeff * alphabet[static_cast<std::size_t>(best)]);
      for (int k = 0; k < static_cast<int>(alphabet.size()); ++k) {
        const double v = std::real(coeff * alphabet[static_cast<std::size_t>(k)]);
        if (v < best_val - 1e-15 * (1.0 + std::abs(best_val))) {
          best_val = v;
          best = k;
        }
      }
      if (best != idx[static_cast<std::size_t>(l)]) {
        idx[static_cast<std::size_t>(l)] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return idx;
}

DiscreteResult finish(const PhaseQuadratic& q, const PhaseCodebook& book, const std::vector<cd>& alphabet,
                      std::vector<int> idx, std::uint64_t nodes, DiscreteMethod method) {
  DiscreteResult out;
  out.objective = sequential_value(q, alphabet, idx);
  out.phases = to_phases(idx, book);
  out.indices = std::move(idx);
  out.nodes = nodes;
  out.method_used = method;
  return out;
}

double min_eigenvalue(const CMat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace

ContinuousResult solve_analog_continuous(const PhaseQuadratic& quad, const RVec& init_phases,
                                         const ContinuousOptions& options) {
  const int n = quad.size();
  if (init_phases.size() != n) throw std::invalid_argument("continuous analog: init phase length");
  ContinuousResult out;
  out.phases = init_phases;
  CVec x(n);
  for (int i = 0; i < n; ++i) x(i) = std::polar(1.0, init_phases(i));
  double current = quad.objective(out.phases);
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    ++out.sweeps;
    for (int l = 0; l < n; ++l) {
      // J = const + 2 Re{ x_l * coeff } with the other coordinates fixed.
      const cd row = (quad.a.row(l) * x).value() - quad.a(l, l) * x(l);
      const cd coeff = quad.c(l) + std::conj(row);
      if (std::abs(coeff) == 0.0) continue;
      const double psi = wrap_phase(kPi - std::arg(coeff));
      x(l) = std::polar(1.0, psi);
      out.phases(l) = psi;
    }
    const double next = quad.objective(out.phases);
    const double decrease = current - next;
    current = std::min(current, next);
    if (decrease < options.tolerance * std::max(1.0, std::abs(next))) break;
  }
  out.objective = quad.objective(out.phases);
  return out;
}

ContinuousResult solve_analog_continuous(const AnalogQuadratic& quad, const RVec& amplitudes,
                                         const RVec& init_phases, const ContinuousOptions& options) {
  return solve_analog_continuous(to_phase_quadratic(quad, amplitudes), init_phases, options);
}

DiscreteResult exhaustive_minimum(const PhaseQuadratic& quad, const PhaseCodebook& book, const RVec& warm_start,
                                  Execution exec) {
  const int n = quad.size();
  const auto alphabet = phasors(book);
  const int q = book.size();
  std::vector<int> warm = quantize_all(warm_start, book);
  if (static_cast<int>(warm.size()) != n) throw std::invalid_argument("discrete analog: warm start length");
  if (n == 0) return finish(quad, book, alphabet, warm, 0, DiscreteMethod::exhaustive);

  // Split on the first two coordinates so the parallel path has q^2 tasks.
  const int split = std::min(n, 2);
  const int tasks = split == 1 ? q : q * q;
  std::vector<Incumbent> results(static_cast<std::size_t>(tasks));
  auto run_task = [&](int t) {
    SubtreeEnumerator e(quad, alphabet);
    std::vector<int> prefix = split == 1 ? std::vector<int>{t} : std::vector<int>{t / q, t % q};
    results[static_cast<std::size_t>(t)] = e.run(prefix);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < tasks; ++t) run_task(t);
  } else {
    for (int t = 0; t < tasks; ++t) run_task(t);
  }

  Incumbent best{sequential_value(quad, alphabet, warm), warm, 0};
  std::uint64_t leaves = 0;
  for (const auto& r : results) {
    leaves += r.leaves;
    if (r.value < best.value) best = r;
  }
  return finish(quad, book, alphabet, best.idx, leaves, DiscreteMethod::exhaustive);
}

DiscreteResult branch_and_bound_minimum(const PhaseQuadratic& quad, const PhaseCodebook& book,
                                        const RVec& warm_start) {
  const int n = quad.size();
  const auto alphabet = phasors(book);
  const int q = book.size();
  std::vector<int> warm = quantize_all(warm_start, book);
  if (static_cast<int>(warm.size()) != n) throw std::invalid_argument("discrete analog: warm start length");
  if (n == 0) return finish(quad, book, alphabet, warm, 0, DiscreteMethod::branch_and_bound);

  // Incumbent: the warm start, or the polished rounding of the continuous
  // optimum if that is strictly better.
  std::vector<int> best_idx = warm;
  double best = sequential_value(quad, alphabet, warm);
  {
    const auto cont = solve_analog_continuous(quad, to_phases(warm, book));
    const auto polished = discrete_coordinate_descent(quad, alphabet, quantize_all(cont.phases, book));
    const double v = sequential_value(quad, alphabet, polished);
    if (v < best) {
      best = v;
      best_idx = polished;
    }
  }

  // Lower bound on the undecided suffix U = {d..n-1}:
  //   x_U^H A_UU x_U >= |U| * max(lambda_min(A_UU), mean(diag) + lambda_min(A_UU - diag))
  // plus the per-coordinate discrete minimum of the linear terms.
  std::vector<double> quad_floor(static_cast<std::size_t>(n + 1), 0.0);
  for (int d = 0; d < n; ++d) {
    const int len = n - d;
    const CMat sub = quad.a.bottomRightCorner(len, len);
    CMat off = sub;
    off.diagonal().setZero();
    const double diag_sum = sub.diagonal().real().sum();
    quad_floor[static_cast<std::size_t>(d)] =
        std::max(len * min_eigenvalue(sub), diag_sum + len * min_eigenvalue(off));
  }
  const double scale = quad.a.cwiseAbs().sum() + 2.0 * quad.c.cwiseAbs().sum() + std::abs(quad.constant);

  struct Node {
    double bound;
    double partial;
    int depth;
    std::uint64_t order;
    std::vector<int> idx;
    std::vector<cd> acc;  // sum over fixed n of A_mn x_n, for every m
  };
  struct Worse {
    bool operator()(const Node& lhs, const Node& rhs) const {
      if (lhs.bound != rhs.bound) return lhs.bound > rhs.bound;
      return lhs.order > rhs.order;
    }
  };

  auto bound_of = [&](double partial, int depth, const std::vector<cd>& acc) {
    double lb = partial + quad_floor[static_cast<std::size_t>(depth)] + quad.constant;
    for (int m = depth; m < n; ++m) {
      const cd coeff = quad.c(m) + std::conj(acc[static_cast<std::size_t>(m)]);
      double lin = std::numeric_limits<double>::infinity();
      for (const cd& x : alphabet) lin = std::min(lin, 2.0 * std::real(coeff * x));
      lb += lin;
    }
    return lb - 1e-9 * (std::abs(lb) + scale);
  };

  std::priority_queue<Node, std::vector<Node>, Worse> open;
  std::uint64_t order = 0, nodes = 0;
  {
    std::vector<cd> acc(static_cast<std::size_t>(n), cd{});
    open.push(Node{bound_of(0.0, 0, acc), 0.0, 0, order++, {}, std::move(acc)});
  }
  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound >= best) break;  // best-first: every remaining bound is at least this
    ++nodes;
    const int d = node.depth;
    for (int l = 0; l < q; ++l) {
      const cd x = alphabet[static_cast<std::size_t>(l)];
      const double partial = node.partial + step_gain(quad, d, x, node.acc[static_cast<std::size_t>(d)]);
      std::vector<int> idx = node.idx;
      idx.push_back(l);
      if (d + 1 == n) {
        const double value = partial + quad.constant;
        if (value < best) {
          best = value;
          best_idx = std::move(idx);
        }
        continue;
      }
      std::vector<cd> acc = node.acc;
      for (int m = d + 1; m < n; ++m) acc[static_cast<std::size_t>(m)] += quad.a(m, d) * x;
      const double lb = bound_of(partial, d + 1, acc);
      if (lb < best) open.push(Node{lb, partial, d + 1, order++, std::move(idx), std::move(acc)});
    }
  }
  return finish(quad, book, alphabet, best_idx, nodes, DiscreteMethod::branch_and_bound);
}

DiscreteResult solve_analog_discrete(const PhaseQuadratic& quad, const PhaseCodebook& book, const RVec& warm_start,
                                     DiscreteMethod method, Execution exec) {
  if (method == DiscreteMethod::automatic)
    method = quad.size() * book.bits() <= 16 ? DiscreteMethod::exhaustive : DiscreteMethod::branch_and_bound;
  switch (method) {
    case DiscreteMethod::exhaustive:
      return exhaustive_minimum(quad, book, warm_start, exec);
    case DiscreteMethod::branch_and_bound:
      return branch_and_bound_minimum(quad, book, warm_start);
    case DiscreteMethod::naive_rounding: {
      const auto cont = solve_analog_continuous(quad, warm_start);
      return finish(quad, book, phasors(book), quantize_all(cont.phases, book), 0, DiscreteMethod::naive_rounding);
    }
    case DiscreteMethod::automatic:
      break;
  }
  throw std::logic_error("unreachable discrete method");
}

DualPolIosState solve_analog_discrete(const AnalogQuadratic& quad, const RVec& amplitudes,
                                      const PhaseCodebook& book, const RVec& warm_start, DiscreteMethod method) {
  const auto res = solve_analog_discrete(to_phase_quadratic(quad, amplitudes), book, warm_start, method);
  const Eigen::Index m = amplitudes.size() / 2;
  DualPolIosState state;
  state.n_bits = book.bits();
  for (Eigen::Index i = 0; i < m; ++i) {
    state.psi_vv.push_back(res.phases(i));
    state.psi_hh.push_back(res.phases(m + i));
    state.amp_vv.push_back(amplitudes(i));
    state.amp_hh.push_back(amplitudes(m + i));
  }
  return state;
}

}  // namespace iosim
