#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hypermatrix.hpp"
#include "u_eigen.hpp"

namespace hypereig {

using json = nlohmann::json;

class input_error : public error {
  using error::error;
};

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw input_error(path + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

namespace io_detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw input_error(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline Index as_index(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw input_error(where + ": expected an integer");
  return j.get<Index>();
}

inline double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) throw input_error(where + ": expected a number");
  return j.get<double>();
}

inline std::vector<Index> as_index_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw input_error(where + ": expected an array of integers");
  std::vector<Index> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_index(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace io_detail

inline Hypermatrix parse_hmx(const json& j, const std::string& where) {
  using namespace io_detail;
  const auto dims = as_index_list(field(j, "dims", where), where + ".dims");
  if (j.contains("order") && as_index(j.at("order"), where + ".order") != static_cast<Index>(dims.size()))
    throw input_error(where + ": order does not match dims");
  for (Index d : dims)
    if (d < 1) throw input_error(where + ": dims must be positive");
  const std::string format = j.value("format", std::string("dense"));
  Hypermatrix h;
  try {
    h = Hypermatrix::zeros(dims);
  } catch (const error& e) {
    throw input_error(where + ": " + e.what());
  }
  if (format == "dense") {
    const auto& entries = field(j, "entries", where);
    if (!entries.is_array()) throw input_error(where + ".entries: expected an array");
    if (static_cast<Index>(entries.size()) != h.size())
      throw input_error(where + ".entries: " + std::to_string(entries.size()) + " values, dims require " +
                        std::to_string(h.size()));
    std::vector<double> data;
    for (std::size_t k = 0; k < entries.size(); ++k)
      data.push_back(as_double(entries[k], where + ".entries[" + std::to_string(k) + "]"));
    return Hypermatrix(dims, std::move(data));
  }
  if (format == "sparse") {
    const auto& nz = field(j, "nz", where);
    if (!nz.is_array()) throw input_error(where + ".nz: expected an array");
    for (std::size_t k = 0; k < nz.size(); ++k) {
      const std::string w = where + ".nz[" + std::to_string(k) + "]";
      auto idx = as_index_list(field(nz[k], "idx", w), w + ".idx");
      if (idx.size() != dims.size()) throw input_error(w + ".idx: wrong number of indices");
      for (std::size_t q = 0; q < idx.size(); ++q) {
        if (idx[q] < 1 || idx[q] > dims[q]) throw input_error(w + ".idx: index out of range");
        --idx[q];
      }
      h.at(std::span<const Index>(idx)) += as_double(field(nz[k], "val", w), w + ".val");
    }
    return h;
  }
  throw input_error(where + ".format: expected 'dense' or 'sparse'");
}

inline json hmx_to_json(const Hypermatrix& h) {
  return json{{"order", h.order()}, {"dims", h.dims()}, {"format", "dense"}, {"entries", h.data()}};
}

inline Matrix parse_matrix(const json& j, const std::string& where) {
  if (j.is_array()) {
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0 || !j[0].is_array()) throw input_error(where + ": expected a non-empty array of rows");
    const Index cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      if (!j[i].is_array() || static_cast<Index>(j[i].size()) != cols) throw input_error(where + ": ragged rows");
      for (Index c = 0; c < cols; ++c)
        m(i, c) = io_detail::as_double(j[i][c], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
    }
    return m;
  }
  const Hypermatrix h = parse_hmx(j, where);
  if (h.order() != 2) throw input_error(where + ": expected an order-2 hypermatrix");
  return flatten(h, {{0}, {1}});
}

inline Vector parse_vector(const json& j, const std::string& where) {
  if (j.is_array()) {
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v(k) = io_detail::as_double(j[k], where + "[" + std::to_string(k) + "]");
    return v;
  }
  const Hypermatrix h = parse_hmx(j, where);
  if (h.order() != 1) throw input_error(where + ": expected an order-1 hypermatrix");
  return vectorize(h);
}

inline json matrix_to_json(const Matrix& m) {
  std::vector<double> data;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(m(i, c));
  return json{{"order", 2}, {"dims", {m.rows(), m.cols()}}, {"format", "dense"}, {"entries", data}};
}

inline json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

struct ProblemFile {
  Hypermatrix hypermatrix;
  IndexPartition partition;
  UEigenProblem problem;
  SolveOptions solve;
  IterationOptions iterate;
  std::optional<Vector> x0;
};

inline void apply_options(const json& o, SolveOptions& so, IterationOptions& io, std::optional<Vector>& x0,
                          const std::string& where) {
  using namespace io_detail;
  if (!o.is_object()) throw input_error(where + ": options must be an object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    const std::string k = it.key(), w = where + "." + k;
    const json& v = it.value();
    if (k == "rank_tol") {
      so.pencil.rank_tol = as_double(v, w);
      io.rank_tol = so.pencil.rank_tol;
    } else if (k == "residual_tol") {
      so.residual_tol = as_double(v, w);
    } else if (k == "recon_tol") {
      so.decompose.recon_tol = as_double(v, w);
    } else if (k == "quasi_probes") {
      so.quasi_probes = static_cast<int>(as_index(v, w));
    } else if (k == "rank_probes") {
      so.pencil.rank_probes = static_cast<int>(as_index(v, w));
    } else if (k == "seed") {
      so.pencil.seed = static_cast<std::uint64_t>(as_index(v, w));
    } else if (k == "newton_starts") {
      so.newton_starts = static_cast<int>(as_index(v, w));
    } else if (k == "family_probes") {
      so.family_probes.clear();
      if (!v.is_array()) throw input_error(w + ": expected an array");
      for (const auto& e : v) so.family_probes.push_back(as_double(e, w));
    } else if (k == "eps") {
      io.eps = as_double(v, w);
    } else if (k == "max_iter") {
      io.max_iter = static_cast<int>(as_index(v, w));
    } else if (k == "x0") {
      x0 = parse_vector(v, w);
    } else {
      throw input_error(w + ": unknown option");
    }
  }
}

inline ProblemFile parse_problem(const json& j, const std::string& where) {
  using namespace io_detail;
  ProblemFile pf;
  pf.hypermatrix = parse_hmx(field(j, "hypermatrix", where), where + ".hypermatrix");
  const auto& part = field(j, "partition", where);
  try {
    pf.partition = IndexPartition::from_one_based(as_index_list(field(part, "rows", where + ".partition"), where + ".partition.rows"),
                                                  as_index_list(field(part, "cols", where + ".partition"), where + ".partition.cols"));
    pf.partition.validate(pf.hypermatrix.order());
  } catch (const dimension_error& e) {
    throw input_error(where + ".partition: " + e.what());
  }
  const auto& type = field(j, "type", where);
  try {
    if (type.contains("named")) {
      if (!type.at("named").is_string()) throw input_error(where + ".type.named: expected a string");
      const auto name = parse_named_type(type.at("named").get<std::string>());
      pf.problem.type = named_type(name, as_index(field(type, "n", where + ".type"), where + ".type.n"),
                                   as_index(field(type, "r", where + ".type"), where + ".type.r"),
                                   as_index(field(type, "s", where + ".type"), where + ".type.s"));
    } else if (type.contains("explicit")) {
      const auto& list = type.at("explicit");
      if (!list.is_array() || list.empty()) throw input_error(where + ".type.explicit: expected a non-empty array");
      std::vector<Matrix> bs;
      for (std::size_t k = 0; k < list.size(); ++k)
        bs.push_back(parse_matrix(list[k], where + ".type.explicit[" + std::to_string(k) + "]"));
      pf.problem.type = make_type_map(std::move(bs));
    } else {
      throw input_error(where + ".type: expected 'named' or 'explicit'");
    }
  } catch (const dimension_error& e) {
    throw input_error(where + ".type: " + e.what());
  }
  const std::string mode = j.value("mode", std::string("U"));
  if (mode == "D")
    pf.problem.mode = Mode::D;
  else if (mode == "U")
    pf.problem.mode = Mode::U;
  else
    throw input_error(where + ".mode: expected 'D' or 'U'");
  pf.problem.a = flatten(pf.hypermatrix, pf.partition);
  try {
    pf.problem.validate();
  } catch (const dimension_error& e) {
    throw input_error(where + ": " + e.what());
  }
  if (j.contains("options")) apply_options(j.at("options"), pf.solve, pf.iterate, pf.x0, where + ".options");
  return pf;
}

inline ProblemFile load_problem(const std::string& path) { return parse_problem(load_json_file(path), path); }

}  // namespace hypereig
