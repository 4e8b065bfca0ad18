#include <iostream>

#include <CLI11.hpp>

#include "hypereig/hypereig.hpp"
#include "hypereig/report.hpp"

using namespace hypereig;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<double> rank_tol;
  std::optional<double> residual_tol;
  std::optional<double> recon_tol;
  std::optional<int> quasi_probes;
  std::optional<double> eps;
  std::optional<int> max_iter;
  std::string format = "text";
  std::string output;
};

std::vector<Index> parse_list(const std::string& s, const std::string& what) {
  std::vector<Index> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw input_error(what + ": '" + item + "' is not an integer");
    }
  }
  return out;
}

std::vector<double> parse_reals(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw input_error(what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::string matrix_text(const Matrix& m) {
  std::ostringstream os;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << fixed4(m(i, j));
    os << "\n";
  }
  return os.str();
}

void apply_globals(const Globals& g, SolveOptions& so, IterationOptions& io) {
  if (g.seed) so.pencil.seed = *g.seed;
  if (g.rank_tol) so.pencil.rank_tol = io.rank_tol = *g.rank_tol;
  if (g.residual_tol) so.residual_tol = *g.residual_tol;
  if (g.recon_tol) so.decompose.recon_tol = *g.recon_tol;
  if (g.quasi_probes) so.quasi_probes = *g.quasi_probes;
  if (g.eps) io.eps = *g.eps;
  if (g.max_iter) io.max_iter = *g.max_iter;
}

class Emitter {
 public:
  explicit Emitter(const Globals& g) : g_(g) {}

  void emit(const json& structured, const std::string& text) const {
    const std::string body = g_.format == "structured" ? structured.dump(2) + "\n" : text;
    if (g_.output.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream out(g_.output);
    if (!out) throw input_error(g_.output + ": cannot write output");
    out << body;
  }

 private:
  const Globals& g_;
};

Vector parse_x0(const std::string& s, const std::optional<Vector>& fallback) {
  if (!s.empty()) {
    const auto v = parse_reals(s, "--x0");
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
  }
  if (fallback) return *fallback;
  throw input_error("iteration needs a start vector (--x0 or options.x0)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-tensor product tools and u-eigen problem solver"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for rank probes and local solves");
  app.add_option("--rank-tol", g.rank_tol, "Relative rank tolerance");
  app.add_option("--residual-tol", g.residual_tol, "Witness residual tolerance");
  app.add_option("--recon-tol", g.recon_tol, "Monic decomposition reconstruction tolerance");
  app.add_option("--quasi-probes", g.quasi_probes, "Sampled lambda values per case");
  app.add_option("--eps", g.eps, "Iteration stopping tolerance");
  app.add_option("--max-iter", g.max_iter, "Iteration limit");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--output", g.output, "Write output to a file");

  std::string fa, fb;
  auto* stp_cmd = app.add_subcommand("stp", "Semi-tensor product of two matrices");
  stp_cmd->add_option("a", fa)->required();
  stp_cmd->add_option("b", fb)->required();
  auto* kron_cmd = app.add_subcommand("kron", "Kronecker product of two matrices");
  kron_cmd->add_option("a", fa)->required();
  kron_cmd->add_option("b", fb)->required();

  std::string rows_s, cols_s;
  auto* flat_cmd = app.add_subcommand("flatten", "Flatten a hypermatrix by an index partition");
  flat_cmd->add_option("hypermatrix", fa)->required();
  flat_cmd->add_option("--rows", rows_s, "Row positions, 1-based, comma separated")->required();
  flat_cmd->add_option("--cols", cols_s, "Column positions, 1-based, comma separated")->required();

  std::string pairs_s;
  auto* con_cmd = app.add_subcommand("contract", "Contract two hypermatrices");
  con_cmd->add_option("a", fa)->required();
  con_cmd->add_option("b", fb)->required();
  con_cmd->add_option("--pairs", pairs_s, "Pairs i:j of 1-based positions, comma separated")->required();

  std::string dims_s;
  auto* dec_cmd = app.add_subcommand("decompose", "Monic decomposition of a vector");
  dec_cmd->add_option("vector", fa)->required();
  dec_cmd->add_option("--dims", dims_s, "Factor lengths, comma separated")->required();

  std::optional<double> lambda;
  bool complex_search = false;
  auto* pen_cmd = app.add_subcommand("pencil", "Generic rank and essential eigenvalues of a pencil");
  pen_cmd->add_option("a", fa)->required();
  pen_cmd->add_option("b", fb)->required();
  pen_cmd->add_option("--lambda", lambda, "Classify this lambda and print its kernel");
  pen_cmd->add_flag("--complex", complex_search, "Also search non-real essential eigenvalues");

  std::string case_s, x0_s;
  bool with_iteration = false;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a u- or D-eigen problem file");
  solve_cmd->add_option("problem", fa)->required();
  solve_cmd->add_option("--case", case_s, "Restrict to one leading-index case, comma separated");
  solve_cmd->add_flag("--iterate", with_iteration, "Also run the least-squares iteration");
  solve_cmd->add_option("--x0", x0_s, "Iteration start vector, comma separated");

  auto* iter_cmd = app.add_subcommand("iterate", "Least-squares iteration on a D-eigen problem file");
  iter_cmd->add_option("problem", fa)->required();
  iter_cmd->add_option("--x0", x0_s, "Start vector, comma separated");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Emitter out(g);
  try {
    if (stp_cmd->parsed() || kron_cmd->parsed()) {
      const Matrix a = parse_matrix(load_json_file(fa), fa);
      const Matrix b = parse_matrix(load_json_file(fb), fb);
      const Matrix c = stp_cmd->parsed() ? stp(a, b) : kron(a, b);
      out.emit(matrix_to_json(c), matrix_text(c));
    } else if (flat_cmd->parsed()) {
      const Hypermatrix h = parse_hmx(load_json_file(fa), fa);
      const auto p = IndexPartition::from_one_based(parse_list(rows_s, "--rows"), parse_list(cols_s, "--cols"));
      const Matrix m = flatten(h, p);
      out.emit(matrix_to_json(m), matrix_text(m));
    } else if (con_cmd->parsed()) {
      const Hypermatrix a = parse_hmx(load_json_file(fa), fa);
      const Hypermatrix b = parse_hmx(load_json_file(fb), fb);
      std::vector<std::pair<Index, Index>> pairs;
      std::stringstream ss(pairs_s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw input_error("--pairs: expected i:j, got '" + item + "'");
        const auto l = parse_list(item.substr(0, colon), "--pairs");
        const auto r = parse_list(item.substr(colon + 1), "--pairs");
        if (l.size() != 1 || r.size() != 1) throw input_error("--pairs: expected i:j, got '" + item + "'");
        pairs.emplace_back(l[0] - 1, r[0] - 1);
      }
      const Hypermatrix c = contract(a, b, pairs);
      std::ostringstream os;
      os << "dims " << index_tuple(c.dims()) << "\n";
      for (double v : c.data()) os << fixed4(v) << "\n";
      out.emit(hmx_to_json(c), os.str());
    } else if (dec_cmd->parsed()) {
      const Vector x = parse_vector(load_json_file(fa), fa);
      DecomposeOptions d;
      if (g.recon_tol) d.recon_tol = *g.recon_tol;
      const auto res = monic_decompose(x, parse_list(dims_s, "--dims"), d);
      if (!res) {
        out.emit(json{{"decomposable", false}}, "not decomposable\n");
      } else {
        json comps = json::array();
        std::string text = "index " + std::to_string(res->index) + "  c0 " + fixed4(res->c0) + "\n";
        for (const auto& c : res->components) {
          comps.push_back(vector_to_json(c));
          text += fixed4(c) + "\n";
        }
        text += is_diagonal(*res) ? "diagonal\n" : "";
        out.emit(json{{"decomposable", true}, {"index", res->index}, {"c0", res->c0}, {"components", comps},
                      {"diagonal", is_diagonal(*res)}},
                 text);
      }
    } else if (pen_cmd->parsed()) {
      const Pencil p(parse_matrix(load_json_file(fa), fa), parse_matrix(load_json_file(fb), fb));
      SolveOptions so;
      IterationOptions io;
      apply_globals(g, so, io);
      const auto ess = essential_eigenvalues_real(p, so.pencil);
      json j{{"rows", p.rows()}, {"cols", p.cols()}, {"essential", to_json(ess)}};
      std::string text = "pencil " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) + "  generic rank " +
                         std::to_string(ess.generic_rank) + "\nessential:";
      if (ess.values.empty()) text += " none";
      for (double v : ess.values) text += " " + fixed4(v);
      text += "  window [" + fixed4(ess.window_lo) + ", " + fixed4(ess.window_hi) + "]\n";
      for (const auto& d : ess.diagnostics) text += "note: " + d + "\n";
      json kernels = json::array();
      for (double v : ess.values) {
        const Matrix k = kernel_basis(p, v, so.pencil.rank_tol);
        kernels.push_back({{"lambda", v}, {"basis", matrix_to_json(k.transpose())}});
        text += "kernel at " + fixed4(v) + ":\n" + matrix_text(k.transpose());
      }
      j["kernels"] = kernels;
      if (complex_search) {
        json cz = json::array();
        text += "non-real essential (not exhaustive):";
        for (auto z : essential_eigenvalues_complex(p, so.pencil)) {
          if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z))) continue;
          cz.push_back({z.real(), z.imag()});
          text += " " + fixed4(z.real()) + (z.imag() < 0 ? "-" : "+") + fixed4(std::abs(z.imag())) + "i";
        }
        text += "\n";
        j["complex"] = cz;
      }
      if (lambda) {
        const auto kind = classify(p, *lambda, ess.generic_rank, so.pencil);
        const Matrix k = kernel_basis(p, *lambda, so.pencil.rank_tol);
        j["lambda"] = {{"value", *lambda}, {"kind", kind ? to_string(*kind) : "regular"}, {"kernel", matrix_to_json(k.transpose())}};
        text += "lambda " + fixed4(*lambda) + ": " + (kind ? to_string(*kind) : "regular") + "\n" + matrix_text(k.transpose());
      }
      out.emit(j, text);
    } else if (solve_cmd->parsed() || iter_cmd->parsed()) {
      ProblemFile pf = load_problem(fa);
      apply_globals(g, pf.solve, pf.iterate);
      json j;
      std::string text;
      std::optional<IterationResult> it;
      if (solve_cmd->parsed()) {
        if (!case_s.empty()) pf.solve.only_case = parse_list(case_s, "--case");
        const auto rep = solve(pf.problem, pf.solve);
        j = to_json(rep);
        text = to_text(rep);
      }
      if (iter_cmd->parsed() || with_iteration) {
        it = iterate_least_squares(pf.problem, parse_x0(x0_s, pf.x0), pf.iterate);
        j["iteration"] = to_json(*it);
        text += to_text(*it);
      }
      out.emit(j, text);
      if (it && it->breakdown) return 3;
    }
  } catch (const numerical_error& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return 3;
  } catch (const error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
