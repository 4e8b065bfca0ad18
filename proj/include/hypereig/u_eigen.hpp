#pragma once

#include <future>
#include <map>
#include <set>

#include "pencil.hpp"
#include "type_map.hpp"

namespace hypereig {

enum class Mode { D, U };

inline const char* to_string(Mode m) { return m == Mode::D ? "D" : "U"; }

struct UEigenProblem {
  Matrix a;
  TypeMap type;
  Mode mode = Mode::U;

  Index n() const { return type.n; }
  Index r() const { return type.r; }
  Index s() const { return type.s(); }

  void validate() const {
    if (type.factors.empty()) throw dimension_error("problem has no type map");
    if (a.rows() != checked_pow(n(), s()) || a.cols() != checked_pow(n(), r()))
      throw dimension_error("A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", type needs " +
                            std::to_string(checked_pow(n(), s())) + "x" + std::to_string(checked_pow(n(), r())));
  }
};

// e indexes x^s over s blocks of length n^r
inline Matrix raise_power(const Matrix& a, Index e, Index n, Index r, Index s) {
  if (s == 1) return a;
  const Index block = checked_pow(n, r);
  if (a.cols() != block) throw dimension_error("raise_power: A must have n^r columns");
  return a * xi_matrix(e, 1, std::vector<Index>(static_cast<std::size_t>(s), block));
}

inline Matrix raise_power_from_mu(const Matrix& a, Index mu_x, Index n, Index r, Index s) {
  const Index block = checked_pow(n, r);
  const Index e = index_join(std::vector<Index>(static_cast<std::size_t>(s), mu_x), block, s);
  return raise_power(a, e, n, r, s);
}

inline Matrix lower_power_E(Index n, Index r, Index s, Index mu_index) {
  if (mu_index < 1 || mu_index > n) throw dimension_error("lower_power_E: mu out of range");
  if (r == s) return identity(checked_pow(n, r));
  const Index lo = std::min(r, s), gap = std::max(r, s) - std::min(r, s);
  const Matrix row = delta(n, mu_index).transpose();
  return kron(identity(checked_pow(n, lo)), kron_all(std::span<const Matrix>(std::vector<Matrix>(gap, row))));
}

// A is m x n^p (left side degree p), B is m x n^q
inline Pencil build_d_pencil(const Matrix& a, const Matrix& b, Index n, Index p, Index q, Index mu_index) {
  if (a.cols() != checked_pow(n, p) || b.cols() != checked_pow(n, q) || a.rows() != b.rows())
    throw dimension_error("build_d_pencil: shapes do not match n^p and n^q");
  if (p < q) return {a * lower_power_E(n, p, q, mu_index), b};
  if (p > q) return {a, b * lower_power_E(n, q, p, mu_index)};
  return {a, b};
}

struct SolveOptions {
  PencilOptions pencil;
  DecomposeOptions decompose;
  double residual_tol = 1e-10;
  int quasi_probes = 7;
  int newton_starts = 32;
  int newton_iterations = 200;
  std::vector<double> family_probes{0.0, 1.0, 2.5};
  double dedup_tol = 1e-6;
  int threads = 1;
  std::size_t max_pair_basis = 30;
  std::optional<std::vector<Index>> only_case;
};

struct EigenWitness {
  std::vector<Index> case_index;
  double lambda = 0.0;
  Vector xi;
  MonicDecomposition decomposition;
  bool diagonal = false;
  bool lambda_free = false;
  double residual = 0.0;
  std::string source;

  Vector x() const { return decomposition.compose(); }
};

struct FamilyTag {
  std::vector<Index> case_index;
  Index component = 0;
  Index entry = 0;
  std::vector<EigenWitness> members;
};

struct KernelSample {
  double lambda = 0.0;
  std::string kind;
  Index dimension = 0;
};

struct CaseReport {
  std::vector<Index> case_index;
  Index pencil_rows = 0;
  Index pencil_cols = 0;
  EssentialSearch essential;
  std::vector<KernelSample> kernels;
  std::vector<Matrix> essential_kernels;
};

struct SolveReport {
  Mode mode = Mode::U;
  Index n = 0, r = 0, s = 0;
  std::vector<CaseReport> cases;
  std::vector<EigenWitness> witnesses;
  std::vector<FamilyTag> families;
  std::string disclaimer =
      "not exhaustive: kernels are sampled at finitely many lambda values and local solves start from finitely many points";
};

namespace detail {

// Unknowns are the distinct monic components; positions maps each of the r factors to a component.
struct Layout {
  Index n = 0, r = 0, s = 0;
  std::vector<Index> mus;
  std::vector<Index> positions;
  std::vector<std::pair<Index, Index>> free;

  static Layout make(const UEigenProblem& prob, const std::vector<Index>& case_index) {
    Layout l;
    l.n = prob.n();
    l.r = prob.r();
    l.s = prob.s();
    if (prob.mode == Mode::D) {
      l.mus = {case_index.at(0)};
      l.positions.assign(static_cast<std::size_t>(l.r), 0);
    } else {
      l.mus = case_index;
      for (Index k = 0; k < l.r; ++k) l.positions.push_back(k);
    }
    for (std::size_t c = 0; c < l.mus.size(); ++c)
      for (Index j = l.mus[c]; j < l.n; ++j) l.free.emplace_back(static_cast<Index>(c), j);
    return l;
  }

  Index params() const { return static_cast<Index>(free.size()) + 1; }

  std::vector<Vector> components(const Vector& theta) const {
    std::vector<Vector> comps(mus.size(), Vector::Zero(n));
    for (std::size_t c = 0; c < mus.size(); ++c) comps[c](mus[c] - 1) = 1.0;
    for (std::size_t k = 0; k < free.size(); ++k) comps[free[k].first](free[k].second) = theta(k);
    return comps;
  }

  Vector theta_of(const std::vector<Vector>& comps, double lambda) const {
    Vector t(params());
    for (std::size_t k = 0; k < free.size(); ++k) t(k) = comps[free[k].first](free[k].second);
    t(params() - 1) = lambda;
    return t;
  }

  std::vector<Vector> factors(const std::vector<Vector>& comps) const {
    std::vector<Vector> f;
    for (Index p : positions) f.push_back(comps[p]);
    return f;
  }
};

struct Evaluation {
  Vector residual;
  Matrix jacobian;
};

inline Evaluation evaluate(const UEigenProblem& prob, const Layout& l, const Vector& theta, bool with_jacobian) {
  const auto comps = l.components(theta);
  const auto fs = l.factors(comps);
  const double lambda = theta(l.params() - 1);
  const Vector x = kron_all(std::span<const Vector>(fs));
  std::vector<Vector> ys;
  for (const auto& b : prob.type.factors) ys.push_back(b * x);
  const Vector bx = kron_all(std::span<const Vector>(ys));
  Evaluation ev;
  ev.residual = prob.a * x - lambda * bx;
  if (!with_jacobian) return ev;
  ev.jacobian.resize(ev.residual.size(), l.params());
  for (std::size_t k = 0; k < l.free.size(); ++k) {
    const auto [c, j] = l.free[k];
    Vector dx = Vector::Zero(x.size());
    for (Index p = 0; p < l.r; ++p) {
      if (l.positions[p] != c) continue;
      auto g = fs;
      g[p] = Vector::Unit(l.n, j);
      dx += kron_all(std::span<const Vector>(g));
    }
    Vector dbx = Vector::Zero(bx.size());
    for (Index u = 0; u < l.s; ++u) {
      auto g = ys;
      g[u] = prob.type.factors[u] * dx;
      dbx += kron_all(std::span<const Vector>(g));
    }
    ev.jacobian.col(k) = prob.a * dx - lambda * dbx;
  }
  ev.jacobian.col(l.params() - 1) = -bx;
  return ev;
}

inline double residual_norm(const UEigenProblem& prob, const Layout& l, const Vector& theta) {
  return evaluate(prob, l, theta, false).residual.norm();
}

struct LMResult {
  Vector theta;
  double residual = 0.0;
};

inline LMResult levenberg_marquardt(const UEigenProblem& prob, const Layout& l, Vector theta,
                                    const std::vector<bool>& fixed, int iterations) {
  std::vector<Index> active;
  for (Index k = 0; k < l.params(); ++k)
    if (!fixed[k]) active.push_back(k);
  auto ev = evaluate(prob, l, theta, true);
  double cost = ev.residual.squaredNorm();
  double damping = 1e-3;
  for (int it = 0; it < iterations && cost > 1e-32 && !active.empty(); ++it) {
    Matrix j(ev.jacobian.rows(), static_cast<Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) j.col(k) = ev.jacobian.col(active[k]);
    const Matrix jtj = j.transpose() * j;
    const Vector g = j.transpose() * ev.residual;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Matrix sys = jtj;
      for (Index k = 0; k < sys.rows(); ++k) sys(k, k) += damping * (1.0 + jtj(k, k));
      const Vector step = sys.ldlt().solve(-g);
      Vector trial = theta;
      for (std::size_t k = 0; k < active.size(); ++k) trial(active[k]) += step(k);
      auto tev = evaluate(prob, l, trial, true);
      const double tcost = tev.residual.squaredNorm();
      if (std::isfinite(tcost) && tcost < cost) {
        const double rel = step.norm() / (1.0 + theta.norm());
        theta = trial;
        ev = std::move(tev);
        cost = tcost;
        damping = std::max(damping / 5.0, 1e-15);
        improved = true;
        if (rel < 1e-16) it = iterations;
        break;
      }
      damping *= 8.0;
    }
    if (!improved) break;
  }
  return {theta, std::sqrt(cost)};
}

inline std::vector<Index> case_key(const EigenWitness& w) { return w.case_index; }

inline bool same_witness(const EigenWitness& a, const EigenWitness& b, double tol) {
  if (a.case_index != b.case_index) return false;
  for (std::size_t c = 0; c < a.decomposition.components.size(); ++c)
    if ((a.decomposition.components[c] - b.decomposition.components[c]).cwiseAbs().maxCoeff() > tol) return false;
  if (a.lambda_free && b.lambda_free) return true;
  return std::abs(a.lambda - b.lambda) <= tol * (1.0 + std::abs(a.lambda));
}

inline bool witness_less(const EigenWitness& a, const EigenWitness& b) {
  if (a.case_index != b.case_index) return a.case_index < b.case_index;
  if (a.lambda_free != b.lambda_free) return !a.lambda_free;
  if (std::abs(a.lambda - b.lambda) > 1e-12) return a.lambda < b.lambda;
  for (std::size_t c = 0; c < a.decomposition.components.size(); ++c)
    for (Index j = 0; j < a.decomposition.components[c].size(); ++j) {
      const double u = a.decomposition.components[c](j), v = b.decomposition.components[c](j);
      if (std::abs(u - v) > 1e-12) return u < v;
    }
  return false;
}

class CaseSearch {
 public:
  CaseSearch(const UEigenProblem& prob, std::vector<Index> case_index, const SolveOptions& opts)
      : prob_(prob), opts_(opts), layout_(Layout::make(prob, case_index)), pencil_(make_pencil(prob, case_index)) {
    report_.case_index = std::move(case_index);
    report_.pencil_rows = pencil_.rows();
    report_.pencil_cols = pencil_.cols();
  }

  void run() {
    report_.essential = essential_eigenvalues_real(pencil_, opts_.pencil);
    const Index rg = report_.essential.generic_rank;
    std::vector<std::pair<double, std::string>> lambdas;
    for (double l : report_.essential.values) lambdas.emplace_back(l, "essential");
    for (double l : {0.0, 1.0})
      if (!contains(lambdas, l)) lambdas.emplace_back(l, classify_name(l, rg));
    const double rho = std::max(prob_.a.norm() / std::max(prob_.type.composed.norm(), 1e-300), 1.0);
    if (opts_.quasi_probes > 0)
      for (double l : chebyshev_nodes(opts_.quasi_probes, -rho, rho))
        if (!contains(lambdas, l)) lambdas.emplace_back(l, classify_name(l, rg));

    for (const auto& [lambda, kind] : lambdas) {
      const Matrix k = kernel_basis(pencil_, lambda, opts_.pencil.rank_tol);
      report_.kernels.push_back({lambda, kind, k.cols()});
      if (kind == "essential") report_.essential_kernels.push_back(k);
      scan_kernel(k, lambda);
    }
    newton_starts(lambdas);
    tag_families();
  }

  CaseReport& report() { return report_; }
  std::vector<EigenWitness>& witnesses() { return witnesses_; }
  std::vector<FamilyTag>& families() { return families_; }

 private:
  static Pencil make_pencil(const UEigenProblem& prob, const std::vector<Index>& c) {
    const Index n = prob.n(), r = prob.r(), s = prob.s();
    if (prob.mode == Mode::D) return build_d_pencil(prob.a, prob.type.composed, n, r, r * s, c.at(0));
    return {raise_power_from_mu(prob.a, index_join(c, n, r), n, r, s), prob.type.composed};
  }

  static bool contains(const std::vector<std::pair<double, std::string>>& v, double l) {
    for (const auto& p : v)
      if (std::abs(p.first - l) <= 1e-9 * (1.0 + std::abs(l))) return true;
    return false;
  }

  std::string classify_name(double l, Index rg) const {
    const auto k = classify(pencil_, l, rg, opts_.pencil);
    return k ? to_string(*k) : "regular";
  }

  // xi is expected to be a product of r*s factors of length n
  void try_xi(const Vector& xi, double lambda, const std::string& source) {
    if (xi.norm() == 0.0) return;
    const Index factors = layout_.r * layout_.s;
    const auto d = monic_decompose(xi, std::vector<Index>(static_cast<std::size_t>(factors), layout_.n), opts_.decompose);
    if (!d) return;
    const Index ncomp = static_cast<Index>(layout_.mus.size());
    std::vector<Vector> comps(d->components.begin(), d->components.begin() + ncomp);
    for (Index k = 0; k < factors; ++k) {
      const Index c = prob_.mode == Mode::D ? 0 : k % layout_.r;
      if ((d->components[k] - comps[c]).cwiseAbs().maxCoeff() > 1e-6) return;
    }
    for (Index c = 0; c < ncomp; ++c)
      if (mu(comps[c], opts_.decompose.zero_tol) != layout_.mus[c]) return;
    polish(layout_.theta_of(comps, lambda), source);
  }

  void scan_kernel(const Matrix& k, double lambda) {
    for (Index j = 0; j < k.cols(); ++j) try_xi(k.col(j), lambda, "kernel-basis");
    if (k.cols() < 2 || static_cast<std::size_t>(k.cols()) > opts_.max_pair_basis) return;
    const Index n = layout_.n;
    const Index rest = k.rows() / n;
    for (Index i = 0; i < k.cols(); ++i)
      for (Index j = i + 1; j < k.cols(); ++j) {
        // 2x2 minors of the n x rest reshape of k_i + t k_j, quadratic in t
        auto entry = [&](Index col, Index p, Index q) { return k(p * rest + q, col); };
        double best = 0.0;
        std::array<double, 3> coef{};
        for (Index p1 = 0; p1 < n; ++p1)
          for (Index p2 = p1 + 1; p2 < n; ++p2)
            for (Index q1 = 0; q1 < rest; ++q1)
              for (Index q2 = q1 + 1; q2 < rest; ++q2) {
                const double a11 = entry(i, p1, q1), a12 = entry(i, p1, q2), a21 = entry(i, p2, q1), a22 = entry(i, p2, q2);
                const double b11 = entry(j, p1, q1), b12 = entry(j, p1, q2), b21 = entry(j, p2, q1), b22 = entry(j, p2, q2);
                const double c2 = b11 * b22 - b12 * b21;
                const double c1 = a11 * b22 + b11 * a22 - a12 * b21 - b12 * a21;
                const double c0 = a11 * a22 - a12 * a21;
                const double mag = std::abs(c2) + std::abs(c1) + std::abs(c0);
                if (mag > best) {
                  best = mag;
                  coef = {c2, c1, c0};
                }
              }
        if (best < 1e-12) continue;
        std::vector<double> ts;
        const auto [c2, c1, c0] = coef;
        if (std::abs(c2) > 1e-12 * best) {
          const double disc = c1 * c1 - 4 * c2 * c0;
          if (disc < -1e-12 * best * best) continue;
          const double sq = std::sqrt(std::max(disc, 0.0));
          ts = {(-c1 + sq) / (2 * c2), (-c1 - sq) / (2 * c2)};
        } else if (std::abs(c1) > 1e-12 * best) {
          ts = {-c0 / c1};
        }
        for (double t : ts) try_xi(k.col(i) + t * k.col(j), lambda, "pair-scan");
      }
  }

  void newton_starts(const std::vector<std::pair<double, std::string>>& lambdas) {
    std::uint64_t seed = opts_.pencil.seed;
    for (Index c : report_.case_index) seed = seed * 1000003u + static_cast<std::uint64_t>(c);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < opts_.newton_starts; ++k) {
      Vector theta(layout_.params());
      const double spread = k % 3 == 2 ? 4.0 : 1.5;
      for (Index j = 0; j + 1 < layout_.params(); ++j) theta(j) = spread * uniform_pm1(rng);
      if (k % 2 == 0) {
        theta(layout_.params() - 1) = 0.0;
        const auto ev = evaluate(prob_, layout_, theta, true);
        const Vector bx = -ev.jacobian.col(layout_.params() - 1);
        const Vector ax = ev.residual;
        const double bb = bx.squaredNorm();
        theta(layout_.params() - 1) = bb > 0.0 ? bx.dot(ax) / bb : 0.0;
      } else {
        theta(layout_.params() - 1) = lambdas[static_cast<std::size_t>(k / 2) % lambdas.size()].first;
      }
      polish(theta, "newton");
    }
  }

  std::optional<EigenWitness> finish(const Vector& theta, const std::string& source) const {
    const double res = residual_norm(prob_, layout_, theta);
    if (!(res <= opts_.residual_tol)) return std::nullopt;
    EigenWitness w;
    w.case_index = report_.case_index;
    w.lambda = theta(layout_.params() - 1);
    const auto comps = layout_.components(theta);
    const auto fs = layout_.factors(comps);
    w.decomposition.components = fs;
    w.decomposition.c0 = 1.0;
    std::vector<Index> idx;
    for (const auto& f : fs) idx.push_back(mu(f, opts_.decompose.zero_tol));
    w.decomposition.index = index_join(idx, layout_.n, layout_.r);
    w.diagonal = is_diagonal(w.decomposition);
    const Vector x = w.x();
    w.xi = stp_power(x, layout_.s);
    if (prob_.mode == Mode::D) w.xi = stp_power(fs.front(), layout_.r * layout_.s);
    const Vector bx = prob_.type.apply(x);
    const Vector ax = prob_.a * x;
    w.lambda_free = bx.norm() <= opts_.residual_tol && ax.norm() <= opts_.residual_tol;
    w.residual = res;
    w.source = source;
    return w;
  }

  bool add(EigenWitness w) {
    for (const auto& v : witnesses_)
      if (same_witness(v, w, opts_.dedup_tol)) return false;
    witnesses_.push_back(std::move(w));
    return true;
  }

  void polish(const Vector& theta0, const std::string& source) {
    std::vector<bool> fixed(static_cast<std::size_t>(layout_.params()), false);
    const auto lm = levenberg_marquardt(prob_, layout_, theta0, fixed, opts_.newton_iterations);
    if (auto w = finish(lm.theta, source)) add(std::move(*w));
  }

  void tag_families() {
    std::set<Index> tagged;
    const std::size_t base = witnesses_.size();
    const int needed = std::min<int>(3, static_cast<int>(opts_.family_probes.size()));
    if (opts_.family_probes.empty()) return;
    for (std::size_t w = 0; w < base; ++w) {
      if (witnesses_[w].lambda_free) continue;
      std::vector<Vector> comps;
      for (std::size_t c = 0; c < layout_.mus.size(); ++c)
        comps.push_back(witnesses_[w].decomposition.components[prob_.mode == Mode::D ? 0 : c]);
      const Vector theta = layout_.theta_of(comps, witnesses_[w].lambda);
      const Matrix j = evaluate(prob_, layout_, theta, true).jacobian;
      Eigen::JacobiSVD<Matrix> svd(j, Eigen::ComputeFullV);
      const Vector sv = svd.singularValues();
      const double top = sv.size() ? sv(0) : 0.0;
      Index rank = 0;
      for (Index k = 0; k < sv.size(); ++k)
        if (sv(k) > 1e-7 * std::max(top, 1.0)) ++rank;
      const Matrix nullv = svd.matrixV().rightCols(layout_.params() - rank);
      for (Index p = 0; p + 1 < layout_.params(); ++p) {
        if (tagged.count(p) || nullv.cols() == 0 || nullv.row(p).cwiseAbs().maxCoeff() < 0.05) continue;
        FamilyTag tag;
        tag.case_index = report_.case_index;
        tag.component = layout_.free[p].first + 1;
        tag.entry = layout_.free[p].second + 1;
        for (double v : opts_.family_probes) {
          std::vector<bool> fixed(static_cast<std::size_t>(layout_.params()), false);
          fixed[p] = true;
          Vector start = theta;
          start(p) = v;
          const auto lm = levenberg_marquardt(prob_, layout_, start, fixed, opts_.newton_iterations);
          if (auto m = finish(lm.theta, "family-probe")) tag.members.push_back(*m);
        }
        if (static_cast<int>(tag.members.size()) >= needed) {
          tagged.insert(p);
          for (const auto& m : tag.members) add(m);
          families_.push_back(std::move(tag));
        }
      }
    }
  }

  const UEigenProblem& prob_;
  const SolveOptions& opts_;
  Layout layout_;
  Pencil pencil_;
  CaseReport report_;
  std::vector<EigenWitness> witnesses_;
  std::vector<FamilyTag> families_;
};

inline std::vector<std::vector<Index>> enumerate_cases(const UEigenProblem& prob) {
  std::vector<std::vector<Index>> cases;
  const Index len = prob.mode == Mode::D ? 1 : prob.r();
  for_each_tuple(prob.n(), len, [&](const std::vector<Index>& t) { cases.push_back(t); });
  return cases;
}

inline SolveReport solve(const UEigenProblem& prob, const SolveOptions& opts) {
  prob.validate();
  SolveReport rep;
  rep.mode = prob.mode;
  rep.n = prob.n();
  rep.r = prob.r();
  rep.s = prob.s();
  auto cases = enumerate_cases(prob);
  if (opts.only_case) {
    if (std::find(cases.begin(), cases.end(), *opts.only_case) == cases.end())
      throw dimension_error("requested case is not a valid leading-index tuple");
    cases = {*opts.only_case};
  }
  auto run_one = [&](const std::vector<Index>& c) {
    CaseSearch search(prob, c, opts);
    search.run();
    return search;
  };
  std::vector<CaseSearch> done;
  if (opts.threads > 1) {
    std::vector<std::future<CaseSearch>> futs;
    for (const auto& c : cases) futs.push_back(std::async(std::launch::async, run_one, c));
    for (auto& f : futs) done.push_back(f.get());
  } else {
    for (const auto& c : cases) done.push_back(run_one(c));
  }
  for (auto& d : done) {
    rep.cases.push_back(std::move(d.report()));
    for (auto& w : d.witnesses()) rep.witnesses.push_back(std::move(w));
    for (auto& f : d.families()) rep.families.push_back(std::move(f));
  }
  std::stable_sort(rep.witnesses.begin(), rep.witnesses.end(), witness_less);
  for (auto& f : rep.families) std::stable_sort(f.members.begin(), f.members.end(), witness_less);
  return rep;
}

}  // namespace detail

inline SolveReport d_solve(UEigenProblem prob, const SolveOptions& opts = {}) {
  prob.mode = Mode::D;
  return detail::solve(prob, opts);
}

inline SolveReport u_solve(UEigenProblem prob, const SolveOptions& opts = {}) {
  prob.mode = Mode::U;
  return detail::solve(prob, opts);
}

inline SolveReport solve(const UEigenProblem& prob, const SolveOptions& opts = {}) { return detail::solve(prob, opts); }

// residual of A x = lambda B(x) for a U witness, or A z^r = lambda B(z^r) for a D witness
inline double witness_residual(const UEigenProblem& prob, const Vector& x, double lambda) {
  return (prob.a * x - lambda * prob.type.apply(x)).norm();
}

struct IterationState {
  Index step = 0;
  Vector x;
  double lambda = 0.0;
  double residual = 0.0;
};

struct IterationOptions {
  double eps = 1e-5;
  int max_iter = 200;
  std::optional<double> rank_tol;
  double zero_tol = default_zero_tol;
};

struct IterationResult {
  std::vector<IterationState> trace;
  bool converged = false;
  bool breakdown = false;
  std::string message;
  std::vector<std::string> notes;

  const IterationState& final_state() const { return trace.back(); }
};

inline IterationState ls_state(const Matrix& a, const Matrix& b, Index p, Index q, const Vector& z, Index step,
                               bool& degenerate) {
  const Vector ax = a * stp_power(z, p);
  const Vector bx = b * stp_power(z, q);
  const double bb = bx.squaredNorm();
  degenerate = !(bb > 1e-28 * std::max(1.0, ax.squaredNorm()));
  IterationState st;
  st.step = step;
  st.x = z;
  st.lambda = degenerate ? 0.0 : bx.dot(ax) / bb;
  st.residual = (ax - st.lambda * bx).norm();
  return st;
}

inline IterationResult iterate_least_squares(const UEigenProblem& prob, const Vector& x0, const IterationOptions& opts = {}) {
  prob.validate();
  if (prob.mode != Mode::D) throw dimension_error("the least-squares iteration runs on D-eigen problems");
  const Index n = prob.n(), p = prob.r(), q = prob.r() * prob.s(), t = std::max(p, q);
  if (x0.size() != n) throw dimension_error("start vector has length " + std::to_string(x0.size()) + ", expected " + std::to_string(n));
  if (!(x0.norm() > 0.0)) throw zero_vector_error("start vector is zero");
  const Matrix& a = prob.a;
  const Matrix& b = prob.type.composed;
  const std::vector<Index> dims(static_cast<std::size_t>(t), n);
  IterationResult res;
  Vector z = x0.normalized();
  for (int step = 0;; ++step) {
    bool degenerate = false;
    res.trace.push_back(ls_state(a, b, p, q, z, step, degenerate));
    if (degenerate) {
      res.breakdown = true;
      res.message = "B(x) vanishes at step " + std::to_string(step);
      return res;
    }
    if (step > 0 && (z - res.trace[res.trace.size() - 2].x).norm() < opts.eps) {
      res.converged = true;
      return res;
    }
    if (step >= opts.max_iter) {
      res.message = "iteration limit reached";
      return res;
    }
    const Index e0 = mu(z, opts.zero_tol);
    const double lead = z(e0 - 1);
    const Vector zm = z / lead;
    const double lambda_m = res.trace.back().lambda * std::pow(lead, static_cast<double>(q - p));
    const Pencil pen = build_d_pencil(a, b, n, p, q, e0);
    const Matrix k = kernel_basis(pen, lambda_m, opts.rank_tol);
    if (k.cols() == 0) {
      res.breakdown = true;
      res.message = "empty kernel at step " + std::to_string(step);
      return res;
    }
    Matrix basis = k;
    if (t > 1) {
      const Index e = diagonal_index(e0, n, t);
      const Matrix xi1 = xi_matrix(e, 1, dims);
      Matrix w((t - 1) * n, k.rows());
      for (Index i = 2; i <= t; ++i) w.middleRows((i - 2) * n, n) = xi1 - xi_matrix(e, i, dims);
      const Matrix d = k * null_space(w * k, opts.rank_tol);
      if (d.cols() > 0)
        basis = d;
      else
        res.notes.push_back("step " + std::to_string(step) + ": no diagonal kernel direction, projected on the full kernel");
    }
    const Vector xi = basis * (basis.transpose() * stp_power(zm, t));
    const Index e = diagonal_index(e0, n, t);
    Vector sum = Vector::Zero(n);
    for (Index i = 1; i <= t; ++i) sum += xi_matrix(e, i, dims) * xi;
    if (!(sum.norm() > 0.0)) {
      res.breakdown = true;
      res.message = "projection vanished at step " + std::to_string(step);
      return res;
    }
    Vector next = sum.normalized();
    if (next.dot(z) < 0.0) next = -next;
    z = next;
  }
}

}  // namespace hypereig
