#pragma once

#include <cstdio>

#include "io.hpp"

namespace hypereig {

inline std::string fixed4(double v) {
  if (std::abs(v) < 5e-5) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string fixed4(const Vector& v) {
  std::string out = "(";
  for (Index k = 0; k < v.size(); ++k) out += (k ? ", " : "") + fixed4(v(k));
  return out + ")";
}

inline std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string index_tuple(const std::vector<Index>& c) {
  std::string out = "(";
  for (std::size_t k = 0; k < c.size(); ++k) out += (k ? "," : "") + std::to_string(c[k]);
  return out + ")";
}

inline json to_json(const EssentialSearch& e) {
  return json{{"generic_rank", e.generic_rank},
              {"values", e.values},
              {"window", {e.window_lo, e.window_hi}},
              {"square_reduced", e.square_reduced},
              {"diagnostics", e.diagnostics}};
}

inline json to_json(const EigenWitness& w) {
  json comps = json::array();
  for (const auto& c : w.decomposition.components) comps.push_back(vector_to_json(c));
  return json{{"case", w.case_index},       {"lambda", w.lambda},         {"components", comps},
              {"index", w.decomposition.index}, {"diagonal", w.diagonal}, {"lambda_free", w.lambda_free},
              {"residual", w.residual},      {"source", w.source}};
}

inline json to_json(const SolveReport& rep) {
  json cases = json::array();
  for (const auto& c : rep.cases) {
    json kernels = json::array();
    for (const auto& k : c.kernels) kernels.push_back({{"lambda", k.lambda}, {"kind", k.kind}, {"dimension", k.dimension}});
    cases.push_back({{"case", c.case_index},
                     {"pencil", {c.pencil_rows, c.pencil_cols}},
                     {"essential", to_json(c.essential)},
                     {"kernels", kernels}});
  }
  json ws = json::array();
  for (const auto& w : rep.witnesses) ws.push_back(to_json(w));
  json fams = json::array();
  for (const auto& f : rep.families) {
    json members = json::array();
    for (const auto& m : f.members) members.push_back(to_json(m));
    fams.push_back({{"case", f.case_index}, {"component", f.component}, {"entry", f.entry}, {"members", members}});
  }
  return json{{"mode", to_string(rep.mode)}, {"n", rep.n},           {"r", rep.r},
              {"s", rep.s},                  {"cases", cases},       {"witnesses", ws},
              {"families", fams},            {"exhaustive", false},  {"note", rep.disclaimer}};
}

inline json to_json(const IterationResult& it) {
  json trace = json::array();
  for (const auto& s : it.trace)
    trace.push_back({{"step", s.step}, {"x", vector_to_json(s.x)}, {"lambda", s.lambda}, {"residual", s.residual}});
  return json{{"converged", it.converged}, {"breakdown", it.breakdown}, {"message", it.message},
              {"notes", it.notes},         {"trace", trace}};
}

inline std::string to_text(const SolveReport& rep) {
  std::ostringstream os;
  os << "mode " << to_string(rep.mode) << "  n=" << rep.n << " r=" << rep.r << " s=" << rep.s << "\n";
  for (const auto& c : rep.cases) {
    os << "case " << index_tuple(c.case_index) << "  pencil " << c.pencil_rows << "x" << c.pencil_cols
       << "  generic rank " << c.essential.generic_rank << "\n";
    os << "  essential:";
    if (c.essential.values.empty()) os << " none";
    for (double v : c.essential.values) os << " " << fixed4(v);
    os << "  window [" << fixed4(c.essential.window_lo) << ", " << fixed4(c.essential.window_hi) << "]\n";
    for (const auto& d : c.essential.diagnostics) os << "  note: " << d << "\n";
  }
  os << "witnesses: " << rep.witnesses.size() << "\n";
  for (const auto& w : rep.witnesses) {
    os << "  case " << index_tuple(w.case_index) << "  lambda ";
    os << (w.lambda_free ? "free" : fixed4(w.lambda));
    for (const auto& c : w.decomposition.components) os << "  " << fixed4(c);
    os << "  residual " << sci(w.residual) << (w.diagonal ? "  diagonal" : "") << "\n";
  }
  for (const auto& f : rep.families) {
    os << "family case " << index_tuple(f.case_index) << " component " << f.component << " entry " << f.entry
       << " probes:";
    for (const auto& m : f.members) os << " " << fixed4(m.decomposition.components[f.component - 1](f.entry - 1));
    os << "\n";
  }
  os << "note: " << rep.disclaimer << "\n";
  return os.str();
}

inline std::string to_text(const IterationResult& it) {
  std::ostringstream os;
  os << "step  x  lambda  residual\n";
  for (const auto& s : it.trace)
    os << s.step << "  " << fixed4(s.x) << "  " << fixed4(s.lambda) << "  " << fixed4(s.residual) << "\n";
  os << (it.converged ? "converged" : it.breakdown ? "breakdown" : "not converged");
  if (!it.message.empty()) os << ": " << it.message;
  os << "\n";
  for (const auto& n : it.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace hypereig
