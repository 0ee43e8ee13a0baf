#pragma once

// Runs a problem document and renders the report. Exit status: 0 success,
// 1 invalid input, 2 numerical failure.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mifit/mifit.hpp"
#include "mifit/oracle.hpp"
#include "mifit/io/problem.hpp"
#include "mifit/io/report_writer.hpp"

namespace mifit::io {

/// Command-line overrides; a set flag wins over the value in the document.
struct RunOptions {
  std::optional<double> epsilon;
  std::optional<std::size_t> probe_samples;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  int status = 0;
  std::string report;      // empty unless status == 0
  std::string diagnostic;  // empty on success
};

namespace detail {

inline Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Json vector_json(const CVector& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(complex_json(z));
  return out;
}

inline Json field_json(const VectorField& f) {
  Json out = Json::array();
  for (std::size_t w = 0; w < f.grid()->size(); ++w) out.push_back(vector_json(f[w]));
  return out;
}

inline Json signal_json(const Signal& s) { return vector_json(s.values()); }

inline Json element_json(const FiniteAbelianGroup& g, std::size_t idx) {
  Json out = Json::array();
  for (long c : g.element(idx)) out.push_back(c);
  return out;
}

inline Json elements_json(const FiniteAbelianGroup& g, const std::vector<std::size_t>& idx) {
  Json out = Json::array();
  for (std::size_t i : idx) out.push_back(element_json(g, i));
  return out;
}

inline Json picks_json(const std::vector<PooledPick>& picks) {
  Json out = Json::array();
  for (const auto& p : picks) {
    Json e = Json::object();
    e["component"] = p.component;
    e["index"] = p.index;
    e["eigenvalue"] = p.value;
    out.push_back(std::move(e));
  }
  return out;
}

inline Json counts_json(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (auto c : v) out.push_back(c);
  return out;
}

inline Json probe_json(std::span<const VectorField> fields, std::size_t length, double solver_residual,
                       std::size_t samples, std::uint64_t seed) {
  const double best = oracle::mi_candidate_sampler(fields, length, samples, seed);
  Json p = Json::object();
  p["samples"] = samples;
  p["seed"] = seed;
  p["best_candidate_residual"] = best;
  p["solver_residual"] = solver_residual;
  p["passed"] = solver_residual <= best + 1e-9;
  return p;
}

inline Json fibers_json(const MISolution& s, const GridPtr& grid) {
  Json out = Json::array();
  for (std::size_t w = 0; w < grid->size(); ++w) {
    Json f = Json::object();
    f["id"] = grid->fiber(w);
    f["weight"] = grid->weight(w);
    f["eigenvalues"] = s.spectral->eigenvalues(w);
    f["rank"] = s.spectral->rank(w);
    out.push_back(std::move(f));
  }
  return out;
}

inline Json fibers_json(const DecomposedSolution& s, const GridPtr& grid) {
  Json out = Json::array();
  for (std::size_t w = 0; w < grid->size(); ++w) {
    Json f = Json::object();
    f["id"] = grid->fiber(w);
    f["weight"] = grid->weight(w);
    f["eigenvalues"] = s.pooled[w];
    f["picks"] = picks_json(s.picks[w]);
    f["allocation"] = counts_json(s.allocations[w].counts);
    out.push_back(std::move(f));
  }
  return out;
}

inline void common_fields(Json& r, const ProblemSpec& p, double eps, const MISolution& s,
                          std::span<const VectorField> fields) {
  const double res = residual(fields, s.range);
  r["kind"] = to_string(p.kind);
  r["length"] = p.length;
  r["epsilon"] = eps;
  r["error"] = s.error;
  r["residual"] = res;
  r["error_residual_gap"] = std::abs(s.error - res);
  r["achieved_length"] = s.achieved_length;
  r["parseval_max_deviation"] = parseval_deviation(s.generators, s.range);
}

inline Json lattice_json(const FiniteAbelianGroup& g, const Lattice& l) { return elements_json(g, l.elements()); }

inline void si_time_domain(Json& r, const FiniteAbelianGroup& g, const Lattice& h,
                           const std::vector<Signal>& gens, const std::vector<Signal>& data,
                           const RangeBasis& range, const FiberizationData& fd) {
  Json td = Json::array();
  for (const auto& s : gens) td.push_back(signal_json(s));
  r["time_domain_generators"] = std::move(td);
  std::vector<Signal> tests;
  for (const auto& f : data) tests.push_back(project_shift_invariant(range, fd, f));
  tests.insert(tests.end(), gens.begin(), gens.end());
  r["translation_parseval_max_deviation"] = translate_parseval_deviation(gens, h, tests);
  r["wiener_set"] = elements_json(g, wiener_set(g, gens));
}

inline Json run_problem(const ProblemSpec& p, double eps, std::size_t probe, std::uint64_t seed) {
  Json r = Json::object();
  switch (p.kind) {
    case ProblemKind::mi: {
      const MISolution s = solve_problem1(p.data, p.length, eps);
      common_fields(r, p, eps, s, p.data);
      r["fibers"] = fibers_json(s, p.grid);
      Json gens = Json::array();
      for (const auto& g : s.generators) gens.push_back(field_json(g));
      r["generators"] = std::move(gens);
      if (probe > 0) r["probe"] = probe_json(p.data, p.length, residual(p.data, s.range), probe, seed);
      break;
    }
    case ProblemKind::mi_decomposed: {
      const DecomposedSolution d = solve_problem2(p.data, *p.decomposition, p.length, eps);
      common_fields(r, p, eps, d.solution, p.data);
      r["decomposable"] = decomposable_check(d.solution.range, *p.decomposition);
      r["fibers"] = fibers_json(d, p.grid);
      Json gens = Json::array();
      for (const auto& g : d.solution.generators) gens.push_back(field_json(g));
      r["generators"] = std::move(gens);
      break;
    }
    case ProblemKind::si: {
      const FiniteAbelianGroup& g = *p.group;
      const SIResult s = solve_si(p.signals, *p.lattice, p.length, eps);
      const std::vector<VectorField> fields = mifit::detail::fiberize_all(p.signals, s.fibers);
      common_fields(r, p, eps, s.mi, fields);
      r["group"] = g.orders();
      r["lattice"] = lattice_json(g, *p.lattice);
      r["annihilator"] = elements_json(g, s.fibers.annihilator);
      r["section"] = elements_json(g, s.fibers.section);
      r["fibers"] = fibers_json(s.mi, s.fibers.grid);
      Json gens = Json::array();
      for (const auto& f : s.mi.generators) gens.push_back(field_json(f));
      r["generators"] = std::move(gens);
      si_time_domain(r, g, *p.lattice, s.generators, p.signals, s.range(), s.fibers);
      if (probe > 0) r["probe"] = probe_json(fields, p.length, residual(fields, s.range()), probe, seed);
      break;
    }
    case ProblemKind::si_extra: {
      const FiniteAbelianGroup& g = *p.group;
      const SIExtraResult s = solve_si_extra(p.signals, *p.lattice, *p.extra_lattice, p.length, eps);
      const std::vector<VectorField> fields = mifit::detail::fiberize_all(p.signals, s.fibers);
      common_fields(r, p, eps, s.mi.solution, fields);
      r["group"] = g.orders();
      r["lattice"] = lattice_json(g, *p.lattice);
      r["extra_lattice"] = lattice_json(g, *p.extra_lattice);
      r["annihilator"] = elements_json(g, s.fibers.annihilator);
      r["section"] = elements_json(g, s.fibers.section);
      r["coset_section"] = elements_json(g, s.layout.coset_section);
      Json blocks = Json::array();
      for (const auto& b : s.layout.blocks) blocks.push_back(counts_json(b));
      r["blocks"] = std::move(blocks);
      Json parts = Json::array();
      for (const auto& b : s.layout.spectral_partition) parts.push_back(elements_json(g, b));
      r["spectral_partition"] = std::move(parts);
      r["fibers"] = fibers_json(s.mi, s.fibers.grid);
      Json gens = Json::array();
      for (const auto& f : s.mi.solution.generators) gens.push_back(field_json(f));
      r["generators"] = std::move(gens);
      si_time_domain(r, g, *p.lattice, s.generators, p.signals, s.range(), s.fibers);
      break;
    }
    case ProblemKind::check_translation_invariance: {
      const FiniteAbelianGroup& g = *p.group;
      r["kind"] = to_string(p.kind);
      r["group"] = g.orders();
      r["lattice"] = lattice_json(g, *p.lattice);
      r["translation_invariant"] = is_translation_invariant(p.signals, *p.lattice);
      r["totally_decomposable"] = totally_decomposable_check(p.signals, *p.lattice);
      r["wiener_set"] = p.signals.empty() ? Json::array() : elements_json(g, wiener_set(g, p.signals));
      break;
    }
  }
  return r;
}

inline std::string describe_parse_error(const std::string& text, const nlohmann::json::parse_error& e) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what();
}

}  // namespace detail

inline RunResult run_document(const std::string& text, const RunOptions& opts = {}) {
  RunResult out;
  try {
    const InputJson doc = InputJson::parse(text);
    const ProblemSpec p = parse_problem(doc);
    const double eps = opts.epsilon.value_or(p.epsilon.value_or(kDefaultEpsilon));
    if (!(eps >= 0.0 && eps < 1.0)) throw InvalidInput("epsilon must lie in [0, 1)");
    const std::size_t probe = opts.probe_samples.value_or(0);
    const std::uint64_t seed = opts.seed.value_or(p.seed.value_or(0));
    out.report = to_report_string(detail::run_problem(p, eps, probe, seed));
  } catch (const nlohmann::json::parse_error& e) {
    out = {1, "", detail::describe_parse_error(text, e)};
  } catch (const nlohmann::json::exception& e) {
    out = {1, "", std::string("invalid input: ") + e.what()};
  } catch (const NumericalFailure& e) {
    out = {2, "", std::string("numerical failure: ") + e.what()};
  } catch (const Error& e) {
    out = {1, "", std::string("invalid input: ") + e.what()};
  }
  return out;
}

inline RunResult run_file(const std::string& path, const RunOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {1, "", "cannot open problem file '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_document(buf.str(), opts);
}

}  // namespace mifit::io
