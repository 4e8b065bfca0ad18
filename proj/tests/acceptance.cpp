#include <functional>
#include <iostream>

#include "hypereig/report.hpp"
#include "support.hpp"

using namespace hypereig;
using namespace testing_support;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Index>(v.size()));
  Index k = 0;
  for (double e : v) x(k++) = e;
  return x;
}

Matrix rows_of(Index rows, Index cols, std::initializer_list<double> v) {
  Matrix m(rows, cols);
  auto it = v.begin();
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

double span_residual(const Vector& v, const Matrix& basis) {
  if (basis.cols() == 0) return v.norm();
  const Matrix q = basis.householderQr().householderQ() * Matrix::Identity(basis.rows(), basis.cols());
  return (v - q * (q.transpose() * v)).norm() / v.norm();
}

Pencil load_pencil(const std::string& a, const std::string& b) {
  return {parse_matrix(load_json_file(problems(a)), a), parse_matrix(load_json_file(problems(b)), b)};
}

std::string list(const std::vector<double>& v) {
  std::string out = "{";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + fixed4(v[k]);
  return out + "}";
}

std::string describe(const EigenWitness& w) {
  std::string out = "lambda=" + fixed4(w.lambda) + " x=";
  for (const auto& c : w.decomposition.components) out += fixed4(c);
  return out + " res=" + sci(w.residual);
}

// the reduced row echelon form makes a kernel basis readable
Matrix rref(Matrix m) {
  Index lead = 0;
  for (Index r = 0; r < m.rows() && lead < m.cols(); ++r, ++lead) {
    Index piv = r;
    while (std::abs(m(piv, lead)) < 1e-12) {
      if (++piv == m.rows()) {
        piv = r;
        if (++lead == m.cols()) return m;
      }
    }
    m.row(piv).swap(m.row(r));
    m.row(r) /= m(r, lead);
    for (Index i = 0; i < m.rows(); ++i)
      if (i != r) m.row(i) -= m(i, lead) * m.row(r);
  }
  return m;
}

Verdict criterion1() {
  Verdict v;
  const Pencil p = load_pencil("wide_pencil_A.json", "wide_pencil_B.json");
  v.check(generic_rank(p) == 2, "generic rank = " + std::to_string(generic_rank(p)) + " (want 2)");
  const auto ess = essential_eigenvalues_real(p);
  v.check(ess.values.size() == 1 && std::abs(ess.values[0] - 1.0) <= 1e-8,
          "essential eigenvalues " + list(ess.values) + " (want {1} within 1e-8)");
  double worst = 0.0;
  for (double l : {-3.0, -0.5, 0.37, 2.0, 7.5}) {
    const Matrix k = kernel_basis(p, l);
    worst = std::max(worst, k.cols() == 1 ? span_residual(vec({0, l, 1}), k) : 1.0);
  }
  v.check(worst <= 1e-10, "kernel at generic lambda proportional to (0,lambda,1), residual " + sci(worst));
  const auto psi = psi_reduction(p);
  v.check(psi.reduced == rows_of(2, 2, {1, 0, 0, 0}), "A Psi = [[1,0],[0,0]] exactly");
  Eigen::EigenSolver<Matrix> es(psi.reduced);
  std::vector<double> eig{es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
  std::sort(eig.begin(), eig.end());
  v.check(eig[0] == 0.0 && eig[1] == 1.0, "eigenvalues of A Psi " + list(eig));
  v.check(classify(p, 0.0) == EigenKind::Quasi, "lambda=0 classified quasi");
  v.check(classify(p, 1.0) == EigenKind::Essential, "lambda=1 classified essential");
  return v;
}

Verdict criterion2() {
  Verdict v;
  const Pencil p = load_pencil("wide_pencil_A.json", "wide_pencil_B.json");
  const Matrix k = kernel_basis(p, 1.0);
  v.check(k.cols() == 2, "kernel at lambda=1 has dimension " + std::to_string(k.cols()) + " (want 2)");
  const double r1 = span_residual(vec({1, 0, 0}), k);
  const double r2 = span_residual(vec({0, 1, -1}), k);
  v.check(r1 <= 1e-10, "(1,0,0) in kernel, projection residual " + sci(r1));
  v.check(r2 <= 1e-10, "(0,1,-1) in kernel, projection residual " + sci(r2));
  const Matrix basis = rref(k.transpose());
  std::string text;
  for (Index i = 0; i < basis.rows(); ++i) text += fixed4(Vector(basis.row(i).transpose()));
  v.info("computed kernel basis " + text + "; (A - B)(0,1,-1) = " + fixed4(Vector(p.at(1.0) * vec({0, 1, -1}))));
  const Matrix spanned(basis.transpose());
  v.info("span residual of (0,1,1): " + sci(span_residual(vec({0, 1, 1}), spanned)));
  return v;
}

bool has_witness(const SolveReport& rep, const std::vector<Vector>& comps, double lambda, double tol) {
  for (const auto& w : rep.witnesses) {
    bool same = std::abs(w.lambda - lambda) <= tol && w.decomposition.components.size() == comps.size();
    for (std::size_t c = 0; same && c < comps.size(); ++c) same = max_abs(w.decomposition.components[c] - comps[c]) <= tol;
    if (same && w.residual <= 1e-10) return true;
  }
  return false;
}

Verdict criterion3() {
  Verdict v;
  const auto pf = load_problem(problems("markov_cubic_d.json"));
  const auto rep = d_solve(pf.problem, pf.solve);
  const bool z1 = has_witness(rep, std::vector<Vector>(3, vec({1, 0})), 1.0, 1e-10);
  const bool z2 = has_witness(rep, std::vector<Vector>(3, vec({0, 1})), 1.0, 1e-10);
  v.check(z1, "witness z=(1,0), lambda=1, residual <= 1e-10");
  v.check(z2, "witness z=(0,1), lambda=1, residual <= 1e-10");
  v.check(rep.witnesses.size() == 2, "exactly these two witnesses (found " + std::to_string(rep.witnesses.size()) + ")");
  for (const auto& w : rep.witnesses) v.info("witness " + describe(w));
  const auto ess = essential_eigenvalues_real(Pencil(pf.problem.a, pf.problem.type.composed));
  v.check(ess.values.empty(), "essential eigenvalues " + list(ess.values) + " (want none)");
  return v;
}

Verdict criterion4() {
  Verdict v;
  const auto pf = load_problem(problems("markov_cubic_u.json"));
  const auto rep = u_solve(pf.problem, pf.solve);
  const std::vector<Index> target{2, 1, 2};
  const FamilyTag* fam = nullptr;
  for (const auto& f : rep.families)
    if (f.case_index == target && f.component == 2 && f.entry == 2) fam = &f;
  v.check(fam != nullptr, "family tagged on the second entry of y in case (2,1,2)");
  for (double theta : {0.0, 1.0, 2.5}) {
    bool hit = false;
    if (fam)
      for (const auto& m : fam->members)
        hit = hit || (m.case_index == target && std::abs(m.lambda - 1.0) <= 1e-10 && m.residual <= 1e-10 &&
                      max_abs(m.decomposition.components[0] - vec({0, 1})) <= 1e-12 &&
                      max_abs(m.decomposition.components[1] - vec({1, theta})) <= 1e-12 &&
                      max_abs(m.decomposition.components[2] - vec({0, 1})) <= 1e-12);
    v.check(hit, "witness x=(0,1) y=(1," + fixed4(theta) + ") z=(0,1) at lambda=1");
  }
  Index in_case = 0;
  for (const auto& w : rep.witnesses) in_case += w.case_index == target;
  v.info(std::to_string(in_case) + " witnesses reported in case (2,1,2), " + std::to_string(rep.witnesses.size()) +
         " over all cases");
  return v;
}

Verdict criterion5() {
  Verdict v;
  const Pencil p = load_pencil("skew_pencil_A.json", "skew_pencil_B.json");
  const auto eig = square_pencil_eigen(p);
  bool dbl = eig.size() == 2;
  for (auto z : eig) dbl = dbl && std::abs(z - 1.0) <= 1e-6;
  v.check(dbl, "square pencil eigenvalues " + fixed4(eig.size() ? eig[0].real() : 0.0) + ", " +
                   fixed4(eig.size() > 1 ? eig[1].real() : 0.0) + " (want 1, double)");
  const Matrix k = kernel_basis(p, 1.0);
  const Vector x = k.cols() == 1 ? monicize(k.col(0)).monic : Vector::Zero(2);
  v.check(k.cols() == 1 && max_abs(x - vec({1, -1})) <= 1e-12, "monic kernel vector " + fixed4(x) + " (want (1,-1))");
  const double orth = std::abs(x.dot(p.b * x));
  v.check(orth <= 1e-12, "x^T B x = " + sci(orth));
  const auto pf = load_problem(problems("skew_plane_d.json"));
  const auto rep = d_solve(pf.problem, pf.solve);
  v.info("solver witnesses: " + std::to_string(rep.witnesses.size()) +
         (rep.witnesses.empty() ? "" : ", first " + describe(rep.witnesses[0])));
  return v;
}

Verdict criterion6() {
  Verdict v;
  const auto pf = load_problem(problems("orthogonal_image_d.json"));
  const auto& prob = pf.problem;
  const Pencil case2 = build_d_pencil(prob.a, prob.type.composed, 3, 1, 2, 2);
  const Index rg = generic_rank(case2);
  v.check(rg == 5, "generic rank of the mu=2 pencil = " + std::to_string(rg) + " (want 5)");
  const auto ess = essential_eigenvalues_real(case2);
  v.info("real essential eigenvalues of the mu=2 pencil " + list(ess.values));
  const auto rep = d_solve(prob, pf.solve);
  const bool sole = rep.witnesses.size() == 1 && max_abs(rep.witnesses[0].decomposition.components[0] - vec({0, 1, 0})) <= 1e-10 &&
                    std::abs(rep.witnesses[0].lambda) <= 1e-10;
  v.check(sole, "sole monic witness delta_3^2 at lambda=0 (found " + std::to_string(rep.witnesses.size()) + ")");
  for (const auto& w : rep.witnesses) v.info("witness " + describe(w));
  const Vector x = vec({0, 1, 0});
  const Vector y1 = prob.type.factors[0] * x, y2 = prob.type.factors[1] * x;
  v.check(max_abs(y1 - vec({1, 0, 0})) == 0.0, "y1 = " + fixed4(y1) + " (want delta_3^1)");
  v.check(max_abs(y2 - vec({0, 0, -1})) == 0.0, "y2 = " + fixed4(y2) + " (want -delta_3^3)");
  v.check(std::abs(x.dot(y1)) <= 1e-12 && std::abs(x.dot(y2)) <= 1e-12, "x orthogonal to y1 and y2");
  return v;
}

Verdict criterion7() {
  Verdict v;
  const auto pf = load_problem(problems("inner_product_quartic_d.json"));
  const auto it = iterate_least_squares(pf.problem, vec({0.5915, -0.7467, -0.3043}), pf.iterate);
  const auto& s0 = it.trace.front();
  v.check(std::abs(s0.lambda + 0.1163) <= 1e-3, "lambda(0) = " + fixed4(s0.lambda) + " (want -0.1163)");
  v.check(std::abs(s0.residual - 0.1787) <= 1e-3, "residual(0) = " + fixed4(s0.residual) + " (want 0.1787)");
  if (it.trace.size() > 1) v.info("x(1) = " + fixed4(it.trace[1].x) + ", lambda(1) = " + fixed4(it.trace[1].lambda));
  const auto& fin = it.final_state();
  v.check(it.converged && fin.step <= 200, "converged at step " + std::to_string(fin.step) + " (limit 200)");
  v.check(fin.residual <= 0.0206, "final residual " + fixed4(fin.residual) + " (bound 0.0206)");
  const Vector want = vec({0.8021, -0.5951, -0.0495});
  v.check(max_abs(fin.x - want) <= 5e-2, "final x " + fixed4(fin.x) + " within 5e-2 of " + fixed4(want));
  v.check(std::abs(fin.lambda) <= 1e-3, "final lambda " + sci(fin.lambda) + " (want |lambda| <= 1e-3)");
  const auto rep = d_solve(pf.problem, pf.solve);
  for (const auto& w : rep.witnesses)
    if (w.case_index == std::vector<Index>{1}) {
      v.info("an exact witness of the same problem: z=" + fixed4(w.decomposition.components[0].normalized()) + " " + describe(w));
      break;
    }
  const auto ess = essential_eigenvalues_real(Pencil(pf.problem.a, pf.problem.type.composed));
  v.check(ess.values.empty(), "essential eigenvalues " + list(ess.values) + " (want none)");
  return v;
}

Verdict criterion8() {
  Verdict v;
  const Matrix a = rows_of(4, 4, {1, 2, 1, 0, 0, 0, 0, 1, 0, 2, 0, 1, 0, 0, 1, 0});
  const std::vector<Index> dims{2, 2};
  const Index cases[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  const Index b_cols[4][4] = {{1, 2, 9, 10}, {5, 6, 13, 14}, {3, 4, 11, 12}, {7, 8, 15, 16}};
  // the displayed A-tilde matrices: (row, col, value) triples
  const std::vector<std::vector<std::array<int, 3>>> at_entries{
      {{1, 1, 1}, {1, 5, 2}, {1, 9, 1}, {3, 5, 2}, {3, 13, 1}},
      {{1, 2, 1}, {1, 6, 2}, {1, 10, 1}, {3, 6, 2}, {3, 14, 1}},
      {{1, 3, 1}, {1, 7, 2}, {1, 11, 1}, {3, 7, 2}, {3, 15, 1}},
      {{1, 4, 1}, {1, 8, 2}, {1, 12, 1}, {3, 8, 2}, {3, 16, 1}}};
  for (int c = 0; c < 4; ++c) {
    const Index e = index_join({cases[c][0], cases[c][1]}, dims);
    const Matrix b = compose_type({xi_matrix(e, 1, dims), xi_matrix(e, 2, dims)}, 2, 2);
    Matrix want_b = Matrix::Zero(4, 16);
    for (int i = 0; i < 4; ++i) want_b(i, b_cols[c][i] - 1) = 1.0;
    const std::string label = "(" + std::to_string(cases[c][0]) + "," + std::to_string(cases[c][1]) + ")";
    v.check(b == want_b, "B for e=" + label + " bit-exact");
    const Matrix at = raise_power(a, index_join({e, e}, {4, 4}), 2, 2, 2);
    Matrix want_at = Matrix::Zero(4, 16);
    for (const auto& t : at_entries[c]) want_at(t[0] - 1, t[1] - 1) = t[2];
    std::string diff;
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 16; ++j)
        if (at(i, j) != want_at(i, j))
          diff += " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")=" + fixed4(at(i, j));
    v.check(at == want_at, "A-tilde for e=" + label + " bit-exact" + (diff.empty() ? "" : "; computed differs at" + diff));
  }
  return v;
}

Verdict criterion9() {
  Verdict v;
  Matrix h = Matrix::Zero(2, 8);
  h(0, 0) = h(1, 7) = 1;
  v.check(named_type_matrix(NamedType::H, 2, 3) == h, "H type, n=2 r=3: B^T = delta_8[1,8]");
  const Matrix markov_shown = rows_of(2, 8, {1, 2, 0, 0, 0, 0, 1, 0, 0, 1, 0, 2, 0, 0, 0, 1});
  const Matrix markov = named_type_matrix(NamedType::Markov, 2, 3);
  std::string diff;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 8; ++j)
      if (markov(i, j) != markov_shown(i, j))
        diff += " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")=" + fixed4(markov(i, j));
  v.check(markov == markov_shown, "Markov type bit-exact" + (diff.empty() ? "" : "; computed differs at" + diff));
  const Vector z = vec({0.3, -1.7});
  v.info("both Markov matrices evaluate (z1+z2)^2 z on z^3: max deviation " +
         sci(max_abs(markov * stp_power(z, 3) - markov_shown * stp_power(z, 3))));
  const Matrix ip_shown = rows_of(2, 8, {1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1});
  v.check(named_type_matrix(NamedType::InnerProduct, 2, 3) == ip_shown, "inner-product type bit-exact");
  return v;
}

// property suites

struct Suite {
  std::string name;
  int failures = 0;
  int trials = 0;
};

Suite stp_laws(std::mt19937_64& rng, int trials) {
  Suite s{"stp associativity/transpose/inverse"};
  for (int t = 0; t < trials; ++t, ++s.trials) {
    const Matrix a = random_matrix(rng, random_int(rng, 1, 3), random_int(rng, 1, 4));
    const Matrix b = random_matrix(rng, random_int(rng, 1, 4), random_int(rng, 1, 3));
    const Matrix c = random_matrix(rng, random_int(rng, 1, 3), random_int(rng, 1, 3));
    bool ok = max_abs(stp(stp(a, b), c) - stp(a, stp(b, c))) <= 1e-12;
    ok = ok && max_abs(stp(a, b) - naive_stp(a, b)) <= 1e-12;
    ok = ok && max_abs(stp(a, b).transpose() - stp(b.transpose(), a.transpose())) <= 1e-12;
    const Index m = random_int(rng, 1, 3), n = random_int(rng, 1, 3);
    const Matrix p = random_matrix(rng, m, m) + 3.0 * Matrix::Identity(m, m);
    const Matrix q = random_matrix(rng, n, n) + 3.0 * Matrix::Identity(n, n);
    ok = ok && max_abs(stp(p, q).inverse() - stp(q.inverse(), p.inverse())) <= 1e-10;
    s.failures += !ok;
  }
  return s;
}

Suite mda(std::mt19937_64& rng, int trials) {
  Suite s{"monic decomposition round trip and scalar uniqueness"};
  for (int t = 0; t < trials; ++t, ++s.trials) {
    const Index r = random_int(rng, 1, 4);
    std::vector<Index> dims;
    std::vector<Vector> fs;
    for (Index k = 0; k < r; ++k) {
      dims.push_back(random_int(rng, 1, 3));
      Vector f = random_vector(rng, dims.back());
      const Index zeros = random_int(rng, 0, dims.back() - 1);
      f.head(zeros).setZero();
      fs.push_back(f);
    }
    const Vector x = kron_all(std::span<const Vector>(fs));
    const auto d = monic_decompose(x, dims);
    bool ok = d.has_value() && relative_error(x, d->compose()) <= 1e-12;
    if (ok) {
      double c0 = 1.0;
      for (Index k = 0; k < r; ++k) {
        const auto m = monicize(fs[k]);
        c0 *= m.c0;
        ok = ok && max_abs(d->components[k] - m.monic) <= 1e-10 && d->components[k](mu(d->components[k]) - 1) == 1.0;
      }
      ok = ok && std::abs(d->c0 - c0) <= 1e-12 * (1 + std::abs(c0));
      const auto scaled = monic_decompose(-2.5 * x, dims);
      ok = ok && scaled && std::abs(scaled->c0 + 2.5 * d->c0) <= 1e-12 * (1 + std::abs(c0));
      for (Index k = 0; ok && k < r; ++k) ok = max_abs(scaled->components[k] - d->components[k]) <= 1e-12;
    }
    s.failures += !ok;
  }
  return s;
}

Suite index_maps(std::mt19937_64& rng, int trials) {
  Suite s{"index_split/index_join/diagonal_index round trips"};
  for (int t = 0; t < trials; ++t, ++s.trials) {
    const Index r = random_int(rng, 1, 5);
    std::vector<Index> dims;
    for (Index k = 0; k < r; ++k) dims.push_back(random_int(rng, 1, 5));
    const Index total = checked_product(dims);
    const Index e = random_int(rng, 1, total);
    const auto comps = index_split(e, dims);
    bool ok = index_join(comps, dims) == e;
    Index brute = 1, stride = 1;
    for (Index k = r - 1; k >= 0; --k) {
      brute += (comps[k] - 1) * stride;
      stride *= dims[k];
    }
    ok = ok && brute == e;
    const Index n = random_int(rng, 2, 5), e0 = random_int(rng, 1, n);
    const Index d = diagonal_index(e0, n, r);
    ok = ok && index_split(d, std::vector<Index>(r, n)) == std::vector<Index>(r, e0);
    s.failures += !ok;
  }
  return s;
}

Suite flatten_roundtrip(std::mt19937_64& rng, int trials) {
  Suite s{"flatten/unflatten round trips"};
  for (int t = 0; t < trials; ++t, ++s.trials) {
    const Index order = random_int(rng, 1, 4);
    std::vector<Index> dims, perm(order);
    for (Index k = 0; k < order; ++k) dims.push_back(random_int(rng, 1, 3));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Index split = random_int(rng, 0, order);
    const IndexPartition p{{perm.begin(), perm.begin() + split}, {perm.begin() + split, perm.end()}};
    const Vector v = random_vector(rng, checked_product(dims));
    const Hypermatrix h(dims, std::vector<double>(v.data(), v.data() + v.size()));
    const Matrix m = flatten(h, p);
    bool ok = unflatten(m, dims, p).data() == h.data();
    const auto idx = h.unravel(random_int(rng, 0, h.size() - 1));
    Index row = 0, col = 0;
    for (Index q : p.rows) row = row * dims[q] + idx[q];
    for (Index q : p.cols) col = col * dims[q] + idx[q];
    ok = ok && m(row, col) == h.at(std::span<const Index>(idx));
    s.failures += !ok;
  }
  return s;
}

Suite compose_vs_stp(std::mt19937_64& rng, int trials) {
  Suite s{"compose_type vs direct STP evaluation"};
  for (int t = 0; t < trials; ++t, ++s.trials) {
    const Index n = random_int(rng, 1, 3), r = random_int(rng, 1, 2), sp = random_int(rng, 1, 3);
    std::vector<Matrix> bs;
    for (Index j = 0; j < sp; ++j) bs.push_back(random_matrix(rng, n, checked_pow(n, r)));
    const Vector x = random_vector(rng, checked_pow(n, r));
    Matrix direct = naive_stp(bs[0], x);
    for (Index j = 1; j < sp; ++j) direct = naive_stp(direct, naive_stp(bs[j], x));
    const Vector composed = compose_type(bs, n, r) * stp_power(x, sp);
    s.failures += !(max_abs(composed - direct) <= 1e-12);
  }
  return s;
}

// A x = lambda (B_1 x) ... (B_s x) with A taken from a hypermatrix through apply
double original_residual(const Hypermatrix& h, const IndexPartition& part, const std::vector<Matrix>& bs,
                         const std::vector<Vector>& comps, double lambda) {
  Matrix x = comps[0];
  for (std::size_t k = 1; k < comps.size(); ++k) x = naive_kron(x, comps[k]);
  Matrix rhs = bs[0] * x;
  for (std::size_t j = 1; j < bs.size(); ++j) rhs = naive_kron(rhs, bs[j] * x);
  return (apply(h, part, x.col(0)) - lambda * rhs.col(0)).norm();
}

std::pair<Suite, Suite> soundness_and_scaling(std::mt19937_64& rng, int trials) {
  Suite sound{"witness soundness against the unconverted equation"};
  Suite scale{"scaling law lambda*k^(1-s), k in {2,-1,0.5}"};
  int literal_fail = 0, literal_total = 0;
  SolveOptions opts;
  opts.newton_starts = 8;
  opts.quasi_probes = 3;
  for (int t = 0; t < trials; ++t, ++sound.trials, ++scale.trials) {
    const Index n = 2, r = random_int(rng, 1, 2), s = random_int(rng, 1, 2);
    const Mode mode = random_int(rng, 0, 1) ? Mode::U : Mode::D;
    std::vector<Matrix> bs;
    for (Index j = 0; j < s; ++j) bs.push_back(random_matrix(rng, n, checked_pow(n, r)));
    const TypeMap type = make_type_map(bs);
    std::vector<Vector> comps;
    for (Index k = 0; k < r; ++k)
      comps.push_back(mode == Mode::D && k > 0 ? comps[0] : vec({1.0, random_vector(rng, 1)(0)}));
    const Vector x0 = kron_all(std::span<const Vector>(comps));
    const double l0 = random_vector(rng, 1)(0);
    Matrix a = random_matrix(rng, checked_pow(n, s), checked_pow(n, r));
    a += (l0 * type.apply(x0) - a * x0) * x0.transpose() / x0.squaredNorm();
    std::vector<Index> dims(static_cast<std::size_t>(r + s), n);
    IndexPartition part;
    for (Index k = 0; k < s; ++k) part.rows.push_back(k);
    for (Index k = 0; k < r; ++k) part.cols.push_back(s + k);
    const Hypermatrix h = unflatten(a, dims, part);
    UEigenProblem prob{flatten(h, part), type, mode};
    const auto rep = solve(prob, opts);
    bool ok = !rep.witnesses.empty();
    bool scaling_ok = true;
    for (const auto& w : rep.witnesses) {
      ok = ok && original_residual(h, part, bs, w.decomposition.components, w.lambda) <= 1e-10;
      if (w.lambda_free) continue;
      const Vector x = w.x();
      for (double k : {2.0, -1.0, 0.5}) {
        const double lk = w.lambda * std::pow(k, 1.0 - static_cast<double>(s));
        const Vector kx = k * x;
        const Vector bkx = prob.type.apply(kx);
        const double scaleref = std::max(1.0, bkx.norm() * std::abs(lk));
        scaling_ok = scaling_ok && (prob.a * kx - lk * bkx).norm() <= 1e-9 * scaleref;
        const double literal = w.lambda * std::pow(k, static_cast<double>(s) - 1.0);
        ++literal_total;
        literal_fail += !((prob.a * kx - literal * bkx).norm() <= 1e-9 * std::max(1.0, bkx.norm() * std::abs(literal)));
      }
    }
    sound.failures += !ok;
    scale.failures += !scaling_ok;
  }
  scale.name += "; lambda*k^(s-1) fails on " + std::to_string(literal_fail) + " of " + std::to_string(literal_total) +
                " witness/k pairs (agrees only when s=1 or lambda=0)";
  return {sound, scale};
}

Verdict criterion10() {
  Verdict v;
  const int trials = 1000;
  std::mt19937_64 rng(20240601);
  std::vector<Suite> suites{stp_laws(rng, trials), mda(rng, trials), index_maps(rng, trials),
                            flatten_roundtrip(rng, trials), compose_vs_stp(rng, trials)};
  auto [sound, scale] = soundness_and_scaling(rng, trials);
  suites.push_back(sound);
  suites.push_back(scale);
  for (const auto& s : suites)
    v.check(s.failures == 0 && s.trials == trials,
            s.name + ": " + std::to_string(s.failures) + " failures in " + std::to_string(s.trials) + " trials");
  return v;
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Verdict()>>> list{
      {"wide pencil: rank, essential eigenvalue, kernels, Psi reduction", criterion1},
      {"wide pencil: kernel basis at lambda=1", criterion2},
      {"Markov cubic D-problem witnesses", criterion3},
      {"Markov cubic U-problem family in case (2,1,2)", criterion4},
      {"skew 2x2 pencil: double eigenvalue and orthogonal eigenvector", criterion5},
      {"orthogonal image problem: rank and sole witness", criterion6},
      {"inner-product quartic: least-squares iteration", criterion7},
      {"selector compositions and raised A matrices", criterion8},
      {"named type matrices", criterion9},
      {"property suites", criterion10}};
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    for (int k = 1; k < argc; ++k) which.push_back(std::atoi(argv[k]));
  } else {
    for (int k = 1; k <= static_cast<int>(criteria().size()); ++k) which.push_back(k);
  }
  int failed = 0;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(criteria().size())) {
      std::cerr << "no criterion " << k << "\n";
      return 2;
    }
    const auto& [title, fn] = criteria()[k - 1];
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << k << ": " << (v.pass ? "PASS" : "FAIL") << "  " << title << "\n";
    for (const auto& n : v.notes) std::cout << "    " << n << "\n";
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
