#pragma once

// Problem documents for the batch driver.
//
// A problem is a UTF-8 JSON object. Complex numbers are [re, im] pairs (a bare
// number is read as a real value); group elements are integer tuples.
//
//   kind            "mi" | "mi-decomposed" | "si" | "si-extra" |
//                   "check-translation-invariance"
//   length          l >= 1 (not used by check-translation-invariance)
//   epsilon         optional relative rank threshold, default 1e-10
//   seed            optional probe seed
//
//   mi, mi-decomposed:
//     grid          {"fibers": [ids...] (optional), "weights": [w...]}
//     data          [field...], field = [vector per fiber], vector = [complex...]
//     decomposition {"blocks": [[coord...]...], "basis": [[complex...] per row]}
//                   (mi-decomposed only; basis optional)
//
//   si, si-extra, check-translation-invariance:
//     group         [N_1, ..., N_d]
//     lattice       {"generators": [elem...]} or {"elements": [elem...]}
//     extra_lattice same form; the subgroup Gamma containing H (si-extra only)
//     signals       [signal...], signal = [complex per element, lexicographic]
//                   (check-translation-invariance reads "generators" instead)

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mifit/errors.hpp"
#include "mifit/lca.hpp"
#include "mifit/linalg.hpp"
#include "mifit/measure.hpp"

namespace mifit::io {

using InputJson = nlohmann::json;

/// Malformed problem document; the message names the offending field.
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& field, const std::string& what)
      : InvalidInput("field '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ProblemKind { mi, mi_decomposed, si, si_extra, check_translation_invariance };

inline const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::mi: return "mi";
    case ProblemKind::mi_decomposed: return "mi-decomposed";
    case ProblemKind::si: return "si";
    case ProblemKind::si_extra: return "si-extra";
    case ProblemKind::check_translation_invariance: return "check-translation-invariance";
  }
  return "?";
}

struct ProblemSpec {
  ProblemKind kind = ProblemKind::mi;
  std::size_t length = 1;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;

  // mi, mi-decomposed
  GridPtr grid;
  std::vector<VectorField> data;
  std::optional<Decomposition> decomposition;

  // si, si-extra, check-translation-invariance
  std::optional<FiniteAbelianGroup> group;
  std::optional<Lattice> lattice;
  std::optional<Lattice> extra_lattice;
  std::vector<Signal> signals;
};

namespace detail {

inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const InputJson& require(const InputJson& obj, const char* key, const std::string& path = "") {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(field, "missing");
  return obj.at(key);
}

inline double parse_real(const InputJson& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

inline Complex parse_complex(const InputJson& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError(path, "expected a complex number [re, im]");
  return {parse_real(j[0], at(path, 0)), parse_real(j[1], at(path, 1))};
}

inline CVector parse_vector(const InputJson& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of complex numbers");
  CVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(parse_complex(j[i], at(path, i)));
  return v;
}

inline std::size_t parse_count(const InputJson& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(path, "expected a non-negative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

inline GridPtr parse_grid(const InputJson& j) {
  const InputJson& w = require(j, "weights", "grid");
  if (!w.is_array() || w.empty()) throw ParseError("grid.weights", "expected a non-empty array");
  std::vector<std::string> ids;
  if (j.contains("fibers")) {
    const InputJson& f = j.at("fibers");
    if (!f.is_array() || f.size() != w.size()) throw ParseError("grid.fibers", "must list one id per weight");
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i].is_string()) ids.push_back(f[i].get<std::string>());
      else if (f[i].is_number_integer()) ids.push_back(std::to_string(f[i].get<long long>()));
      else throw ParseError(at("grid.fibers", i), "fiber ids must be strings or integers");
    }
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) ids.push_back(std::to_string(i));
  }
  std::vector<double> weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = parse_real(w[i], at("grid.weights", i));
    if (!(v > 0.0)) {
      throw ParseError(at("grid.weights", i), "weight of fiber " + std::to_string(i) + " ('" + ids[i] +
                                                  "') must be positive");
    }
    weights.push_back(v);
  }
  return make_grid(std::move(ids), std::move(weights));
}

inline std::vector<VectorField> parse_fields(const InputJson& j, const GridPtr& grid, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty array of fields");
  std::vector<VectorField> out;
  std::optional<std::size_t> dim;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string fp = at(path, k);
    if (!j[k].is_array() || j[k].size() != grid->size()) {
      throw ParseError(fp, "expected one vector per fiber (" + std::to_string(grid->size()) + ")");
    }
    std::vector<CVector> values;
    for (std::size_t w = 0; w < j[k].size(); ++w) {
      CVector v = parse_vector(j[k][w], at(fp, w));
      if (!dim) dim = v.size();
      if (v.empty() || v.size() != *dim) {
        throw ParseError(at(fp, w), "vector length " + std::to_string(v.size()) + " differs from " +
                                        std::to_string(*dim));
      }
      values.push_back(std::move(v));
    }
    out.emplace_back(grid, *dim, std::move(values));
  }
  return out;
}

inline Decomposition parse_decomposition(const InputJson& j, std::size_t dim) {
  const InputJson& b = require(j, "blocks", "decomposition");
  if (!b.is_array()) throw ParseError("decomposition.blocks", "expected an array of index arrays");
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i].is_array()) throw ParseError(at("decomposition.blocks", i), "expected an index array");
    std::vector<std::size_t> blk;
    for (std::size_t k = 0; k < b[i].size(); ++k) blk.push_back(parse_count(b[i][k], at(at("decomposition.blocks", i), k)));
    blocks.push_back(std::move(blk));
  }
  std::optional<Matrix> basis;
  if (j.contains("basis")) {
    const InputJson& rows = j.at("basis");
    if (!rows.is_array() || rows.size() != dim) throw ParseError("decomposition.basis", "expected " + std::to_string(dim) + " rows");
    Matrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      const CVector row = parse_vector(rows[r], at("decomposition.basis", r));
      if (row.size() != dim) throw ParseError(at("decomposition.basis", r), "row has the wrong length");
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = row[c];
    }
    basis = std::move(m);
  }
  try {
    return Decomposition(dim, std::move(blocks), std::move(basis));
  } catch (const InvalidInput& e) {
    throw ParseError("decomposition", e.what());
  }
}

inline std::size_t parse_element(const InputJson& raw, const FiniteAbelianGroup& g, const std::string& path) {
  const InputJson j = raw.is_number_integer() && g.rank() == 1 ? InputJson::array({raw}) : raw;
  if (!j.is_array() || j.size() != g.rank()) {
    throw ParseError(path, "expected an element tuple of length " + std::to_string(g.rank()));
  }
  GroupElement x;
  for (std::size_t t = 0; t < j.size(); ++t) {
    if (!j[t].is_number_integer()) throw ParseError(at(path, t), "expected an integer");
    const long v = j[t].get<long>();
    const long n = g.orders()[t];
    x.push_back(((v % n) + n) % n);
  }
  return g.index(x);
}

inline Lattice parse_lattice(const InputJson& j, const FiniteAbelianGroup& g, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected {\"generators\": [...]} or {\"elements\": [...]}");
  const bool gens = j.contains("generators");
  if (!gens && !j.contains("elements")) throw ParseError(path, "needs \"generators\" or \"elements\"");
  const std::string key = gens ? "generators" : "elements";
  const InputJson& list = j.at(key);
  if (!list.is_array()) throw ParseError(path + "." + key, "expected an array of elements");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < list.size(); ++i) idx.push_back(parse_element(list[i], g, at(path + "." + key, i)));
  try {
    return gens ? Lattice::generated_by(g, idx) : Lattice(g, idx);
  } catch (const InvalidInput& e) {
    throw ParseError(path, e.what());
  }
}

inline std::vector<Signal> parse_signals(const InputJson& j, const FiniteAbelianGroup& g, const std::string& path,
                                         bool allow_empty) {
  if (!j.is_array() || (!allow_empty && j.empty())) throw ParseError(path, "expected an array of signals");
  std::vector<Signal> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    CVector v = parse_vector(j[k], at(path, k));
    if (v.size() != g.size()) {
      throw ParseError(at(path, k), "expected " + std::to_string(g.size()) + " values, got " + std::to_string(v.size()));
    }
    out.emplace_back(g, std::move(v));
  }
  return out;
}

}  // namespace detail

inline ProblemKind parse_kind(const InputJson& j) {
  const InputJson& k = detail::require(j, "kind");
  if (!k.is_string()) throw ParseError("kind", "expected a string");
  const std::string s = k.get<std::string>();
  if (s == "mi") return ProblemKind::mi;
  if (s == "mi-decomposed") return ProblemKind::mi_decomposed;
  if (s == "si") return ProblemKind::si;
  if (s == "si-extra") return ProblemKind::si_extra;
  if (s == "check-translation-invariance") return ProblemKind::check_translation_invariance;
  throw ParseError("kind", "unknown problem kind '" + s + "'");
}

inline ProblemSpec parse_problem(const InputJson& j) {
  using namespace detail;
  if (!j.is_object()) throw ParseError("<document>", "expected a JSON object");
  ProblemSpec p;
  p.kind = parse_kind(j);

  if (p.kind != ProblemKind::check_translation_invariance) {
    p.length = parse_count(require(j, "length"), "length");
    if (p.length == 0) throw ParseError("length", "must be at least 1");
  } else if (j.contains("length")) {
    p.length = parse_count(j.at("length"), "length");
  }
  if (j.contains("epsilon")) {
    const double e = parse_real(j.at("epsilon"), "epsilon");
    if (!(e >= 0.0 && e < 1.0)) throw ParseError("epsilon", "must lie in [0, 1)");
    p.epsilon = e;
  }
  if (j.contains("seed")) p.seed = parse_count(j.at("seed"), "seed");

  switch (p.kind) {
    case ProblemKind::mi:
    case ProblemKind::mi_decomposed: {
      p.grid = parse_grid(require(j, "grid"));
      p.data = parse_fields(require(j, "data"), p.grid, "data");
      if (j.contains("dim") && parse_count(j.at("dim"), "dim") != p.data.front().dim()) {
        throw ParseError("dim", "does not match the data vectors");
      }
      if (p.kind == ProblemKind::mi_decomposed) {
        p.decomposition = parse_decomposition(require(j, "decomposition"), p.data.front().dim());
      }
      break;
    }
    case ProblemKind::si:
    case ProblemKind::si_extra:
    case ProblemKind::check_translation_invariance: {
      const InputJson& orders = require(j, "group");
      if (!orders.is_array() || orders.empty()) throw ParseError("group", "expected an array of factor orders");
      std::vector<long> ns;
      for (std::size_t t = 0; t < orders.size(); ++t) {
        if (!orders[t].is_number_integer() || orders[t].get<long>() < 1) {
          throw ParseError(at("group", t), "factor order must be a positive integer");
        }
        ns.push_back(orders[t].get<long>());
      }
      p.group = FiniteAbelianGroup(std::move(ns));
      if (p.group->size() > 4096) throw ParseError("group", "group order above 4096 is not supported");
      p.lattice = parse_lattice(require(j, "lattice"), *p.group, "lattice");
      if (p.kind == ProblemKind::si_extra) {
        p.extra_lattice = parse_lattice(require(j, "extra_lattice"), *p.group, "extra_lattice");
        if (!p.extra_lattice->contains(*p.lattice)) throw ParseError("extra_lattice", "must contain the lattice");
      }
      if (p.kind == ProblemKind::check_translation_invariance) {
        p.signals = parse_signals(require(j, "generators"), *p.group, "generators", true);
      } else {
        p.signals = parse_signals(require(j, "signals"), *p.group, "signals", false);
      }
      break;
    }
  }
  return p;
}

}  // namespace mifit::io
