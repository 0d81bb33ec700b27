// Copyright 2026 The nca authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nca/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nca/quotient.hpp"

namespace nca {

SpecError::SpecError(std::vector<std::string> messages)
    : InputError([&] {
        std::string s = "invalid spec:";
        for (const auto& m : messages) s += "\n  " + m;
        return s;
      }()),
      messages_(std::move(messages)) {}

namespace {

class Diagnostics {
 public:
  void error(const std::string& path, const std::string& msg) {
    errors_.push_back((path.empty() ? std::string("/") : path) + ": " + msg);
  }
  bool empty() const { return errors_.empty(); }
  std::size_t count() const { return errors_.size(); }
  void raise() const {
    if (!errors_.empty()) throw SpecError(errors_);
  }

 private:
  std::vector<std::string> errors_;
};

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

std::optional<double> read_real(const Json& j, const std::string& path, Diagnostics& d) {
  if (!j.is_number()) {
    d.error(path, "expected a number");
    return std::nullopt;
  }
  double v = j.get<double>();
  if (!std::isfinite(v)) {
    d.error(path, "number must be finite");
    return std::nullopt;
  }
  return v;
}

std::optional<cplx> read_complex(const Json& j, const std::string& path, Diagnostics& d) {
  if (j.is_number()) {
    auto v = read_real(j, path, d);
    return v ? std::optional<cplx>(*v) : std::nullopt;
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    auto re = read_real(j[0], at(path, 0), d);
    auto im = read_real(j[1], at(path, 1), d);
    if (re && im) return cplx(*re, *im);
    return std::nullopt;
  }
  d.error(path, "expected a number or a [re, im] pair");
  return std::nullopt;
}

std::optional<Matrix> read_matrix(const Json& j, const std::string& path, Diagnostics& d,
                                  int rows = -1, int cols = -1) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    d.error(path, "expected a nonempty 2-D array");
    return std::nullopt;
  }
  int r = static_cast<int>(j.size());
  int c = static_cast<int>(j[0].size());
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
    d.error(path, "expected a " + std::to_string(rows) + " x " + std::to_string(cols) +
                      " array, got " + std::to_string(r) + " x " + std::to_string(c));
    return std::nullopt;
  }
  Matrix m(r, c);
  std::size_t before = d.count();
  for (int i = 0; i < r; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != c) {
      d.error(at(path, i), "rows must all have length " + std::to_string(c));
      continue;
    }
    for (int k = 0; k < c; ++k)
      if (auto v = read_complex(row[k], at(at(path, i), k), d)) m(i, k) = *v;
  }
  if (d.count() != before) return std::nullopt;
  return m;
}

std::optional<RealMatrix> read_real_matrix(const Json& j, const std::string& path,
                                           Diagnostics& d, int n = -1) {
  auto m = read_matrix(j, path, d, n, n);
  if (!m) return std::nullopt;
  if (m->rows() != m->cols()) {
    d.error(path, "matrix must be square");
    return std::nullopt;
  }
  if (m->imag().cwiseAbs().maxCoeff() > 0.0) {
    d.error(path, "matrix must be real");
    return std::nullopt;
  }
  return RealMatrix(m->real());
}

std::optional<Element> read_element(const Json& j, const std::string& path,
                                    const AlgebraPtr& alg, Diagnostics& d) {
  if (!alg) return std::nullopt;
  if (!j.is_array() || static_cast<int>(j.size()) != alg->num_blocks()) {
    d.error(path, "element must be an array of " + std::to_string(alg->num_blocks()) +
                      " blocks");
    return std::nullopt;
  }
  std::vector<Matrix> blocks;
  std::size_t before = d.count();
  for (int b = 0; b < alg->num_blocks(); ++b) {
    int n = alg->block_size(b);
    auto m = read_matrix(j[b], at(path, b), d, n, n);
    blocks.push_back(m ? *m : Matrix::Zero(n, n));
  }
  if (d.count() != before) return std::nullopt;
  return Element(alg, std::move(blocks));
}

std::optional<std::vector<int>> read_int_list(const Json& j, const std::string& path,
                                              Diagnostics& d) {
  if (!j.is_array()) {
    d.error(path, "expected an array of integers");
    return std::nullopt;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) {
      d.error(at(path, i), "expected an integer");
      return std::nullopt;
    }
    out.push_back(j[i].get<int>());
  }
  return out;
}

AlgebraPtr read_algebra(const Json& j, const std::string& path, Diagnostics& d) {
  if (!j.is_object()) {
    d.error(path, "algebra must be an object {\"blocks\", \"trace_weights\"}");
    return nullptr;
  }
  std::optional<std::vector<int>> blocks;
  std::vector<double> weights;
  bool ok = true;
  if (!j.contains("blocks")) {
    d.error(at(path, "blocks"), "missing");
    ok = false;
  } else {
    blocks = read_int_list(j["blocks"], at(path, "blocks"), d);
    ok = ok && blocks.has_value();
    if (blocks) {
      if (blocks->empty()) {
        d.error(at(path, "blocks"), "need at least one block");
        ok = false;
      }
      for (std::size_t i = 0; i < blocks->size(); ++i)
        if ((*blocks)[i] < 1) {
          d.error(at(at(path, "blocks"), i), "block sizes must be positive");
          ok = false;
        }
    }
  }
  if (!j.contains("trace_weights")) {
    d.error(at(path, "trace_weights"), "missing");
    ok = false;
  } else if (!j["trace_weights"].is_array()) {
    d.error(at(path, "trace_weights"), "expected an array of numbers");
    ok = false;
  } else {
    const Json& w = j["trace_weights"];
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto v = read_real(w[i], at(at(path, "trace_weights"), i), d);
      if (!v) {
        ok = false;
      } else if (*v <= 0.0) {
        d.error(at(at(path, "trace_weights"), i), "trace weights must be positive");
        ok = false;
      } else {
        weights.push_back(*v);
      }
    }
  }
  if (blocks && j.contains("trace_weights") && j["trace_weights"].is_array() &&
      blocks->size() != j["trace_weights"].size()) {
    d.error(path, "/algebra/blocks has " + std::to_string(blocks->size()) +
                      " entries but /algebra/trace_weights has " +
                      std::to_string(j["trace_weights"].size()));
    ok = false;
  }
  for (const auto& [key, _] : j.items())
    if (key != "blocks" && key != "trace_weights") d.error(at(path, key), "unknown field");
  if (!ok) return nullptr;
  return build_algebra(*blocks, weights);
}

std::optional<GeneratorSpec> read_generator(const Json& j, const std::string& path,
                                            AlgebraPtr& alg, Diagnostics& d) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    d.error(path, "generator must be an object with a string \"kind\"");
    return std::nullopt;
  }
  GeneratorSpec g;
  g.kind = j["kind"].get<std::string>();
  std::size_t before = d.count();
  auto require = [&](const char* key) {
    if (j.contains(key)) return true;
    d.error(at(path, key), "missing (required for kind \"" + g.kind + "\")");
    return false;
  };
  std::set<std::string> known{"kind"};

  if (g.kind == "network") {
    known.insert({"c", "allow_negative", "symmetry"});
    if (require("c")) {
      int n = alg ? alg->dim() : -1;
      if (auto c = read_real_matrix(j["c"], at(path, "c"), d, n)) {
        g.c = *c;
        if (!alg) alg = counting_algebra(static_cast<int>(c->rows()));
        if (!alg->is_commutative())
          d.error(at(path, "c"), "network generators need a commutative algebra");
      }
    }
    if (j.contains("allow_negative")) {
      if (j["allow_negative"].is_boolean())
        g.allow_negative = j["allow_negative"].get<bool>();
      else
        d.error(at(path, "allow_negative"), "expected a boolean");
    }
    if (j.contains("symmetry")) {
      const Json& s = j["symmetry"];
      if (s == "strict")
        g.symmetry = SymmetryPolicy::strict;
      else if (s != "symmetrize")
        d.error(at(path, "symmetry"), "expected \"strict\" or \"symmetrize\"");
    }
  } else if (!alg) {
    d.error(path, "kind \"" + g.kind + "\" needs an explicit algebra");
    return std::nullopt;
  } else if (g.kind == "lindblad") {
    known.insert("vs");
    if (require("vs")) {
      const Json& vs = j["vs"];
      if (!vs.is_array() || vs.empty())
        d.error(at(path, "vs"), "expected a nonempty array of elements");
      else
        for (std::size_t i = 0; i < vs.size(); ++i)
          if (auto v = read_element(vs[i], at(at(path, "vs"), i), alg, d))
            g.vs.push_back(*v);
    }
  } else if (g.kind == "matrix") {
    known.insert({"superop", "scale"});
    if (require("superop"))
      if (auto m = read_matrix(j["superop"], at(path, "superop"), d, alg->dim(), alg->dim()))
        g.superop = SuperOperator(alg, *m);
    if (j.contains("scale"))
      if (auto s = read_real(j["scale"], at(path, "scale"), d)) g.scale = *s;
  } else if (g.kind == "group") {
    known.insert({"autos", "weights"});
    if (require("autos") && require("weights")) {
      const Json& autos = j["autos"];
      const Json& weights = j["weights"];
      if (!autos.is_array() || !weights.is_array() || autos.size() != weights.size()) {
        d.error(path, "/autos and /weights must be arrays of equal length");
      } else {
        for (std::size_t i = 0; i < autos.size(); ++i) {
          std::string p = at(at(path, "autos"), i);
          const Json& a = autos[i];
          if (a.is_object() && a.contains("permutation")) {
            auto perm = read_int_list(a["permutation"], at(p, "permutation"), d);
            if (!perm) continue;
            if (!alg->is_commutative() || static_cast<int>(perm->size()) != alg->dim()) {
              d.error(at(p, "permutation"),
                      "permutations act on commutative algebras and need one entry per point");
              continue;
            }
            auto sigma = *perm;
            g.autos.push_back(SuperOperator::from_map(alg, [sigma, alg](const Element& x) {
              std::vector<cplx> v = x.values(), out(v.size());
              for (std::size_t k = 0; k < v.size(); ++k)
                out[k] = (sigma[k] >= 0 && sigma[k] < static_cast<int>(v.size()))
                             ? v[sigma[k]]
                             : cplx(0.0);
              return Element::function(alg, out);
            }));
          } else if (a.is_object() && a.contains("superop")) {
            if (auto m = read_matrix(a["superop"], at(p, "superop"), d, alg->dim(), alg->dim()))
              g.autos.push_back(SuperOperator(alg, *m));
          } else {
            d.error(p, "expected {\"permutation\": [...]} or {\"superop\": [[...]]}");
          }
          if (auto w = read_real(weights[i], at(at(path, "weights"), i), d)) {
            if (*w < 0.0) d.error(at(at(path, "weights"), i), "weights must be nonnegative");
            g.weights.push_back(*w);
          }
        }
      }
    }
  } else if (g.kind == "spectral_triple") {
    known.insert("D");
    if (require("D"))
      if (auto m = read_matrix(j["D"], at(path, "D"), d, alg->unit_size(), alg->unit_size()))
        g.dirac = *m;
  } else {
    d.error(at(path, "kind"), "unknown generator kind \"" + g.kind +
                                  "\" (lindblad, matrix, network, group, spectral_triple)");
  }
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) d.error(at(path, key), "unknown field");
  if (d.count() != before) return std::nullopt;
  return g;
}

std::size_t line_of(const std::string& text, std::size_t byte, std::size_t& column) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  column = col;
  return line;
}

}  // namespace

ProblemSpec parse_spec(const Json& doc) {
  Diagnostics d;
  ProblemSpec spec;
  if (!doc.is_object()) {
    d.error("", "spec must be a JSON object");
    d.raise();
  }
  static const std::set<std::string> known{
      "algebra", "nodes",     "c",     "generator",  "states", "projection",
      "keep_blocks", "weight_element", "t", "tolerances", "seed"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) d.error("/" + key, "unknown field");

  if (doc.contains("algebra")) spec.algebra = read_algebra(doc["algebra"], "/algebra", d);

  // Network file form: {"nodes": n, "c": [[...]]}.
  if (doc.contains("nodes") || doc.contains("c")) {
    std::optional<int> nodes;
    if (doc.contains("nodes")) {
      if (doc["nodes"].is_number_integer() && doc["nodes"].get<int>() >= 1)
        nodes = doc["nodes"].get<int>();
      else
        d.error("/nodes", "expected a positive integer");
    }
    if (!doc.contains("c")) {
      d.error("/c", "missing (network files need a conductance matrix)");
    } else if (doc.contains("generator")) {
      d.error("/generator", "give either a generator or a top-level network \"c\", not both");
    } else {
      if (nodes && spec.algebra && spec.algebra->dim() != *nodes)
        d.error("/nodes", "does not match the dimension of /algebra");
      if (nodes && !spec.algebra) spec.algebra = counting_algebra(*nodes);
      Json gen = {{"kind", "network"}, {"c", doc["c"]}};
      spec.generator = read_generator(gen, "", spec.algebra, d);
    }
  }
  if (doc.contains("generator"))
    spec.generator = read_generator(doc["generator"], "/generator", spec.algebra, d);

  if (doc.contains("states")) {
    const Json& s = doc["states"];
    if (!s.is_array()) {
      d.error("/states", "expected an array of {\"density\": element}");
    } else if (!spec.algebra) {
      d.error("/states", "states need an algebra");
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::string p = at(std::string("/states"), i);
        if (!s[i].is_object() || !s[i].contains("density")) {
          d.error(p, "expected {\"density\": element}");
          continue;
        }
        if (auto e = read_element(s[i]["density"], at(p, "density"), spec.algebra, d))
          spec.states.push_back(*e);
      }
    }
  }

  if (doc.contains("projection") && doc.contains("keep_blocks"))
    d.error("/projection", "give either projection or keep_blocks, not both");
  if (doc.contains("projection")) {
    if (!spec.algebra)
      d.error("/projection", "a projection needs an algebra");
    else
      spec.projection = read_element(doc["projection"], "/projection", spec.algebra, d);
  } else if (doc.contains("keep_blocks")) {
    auto keep = read_int_list(doc["keep_blocks"], "/keep_blocks", d);
    if (!spec.algebra) {
      d.error("/keep_blocks", "keep_blocks needs an algebra");
    } else if (keep) {
      bool ok = true;
      for (std::size_t i = 0; i < keep->size(); ++i)
        if ((*keep)[i] < 0 || (*keep)[i] >= spec.algebra->num_blocks()) {
          d.error(at(std::string("/keep_blocks"), i), "block index out of range");
          ok = false;
        }
      if (ok) spec.projection = projection_from_blocks(spec.algebra, *keep);
    }
  }

  if (doc.contains("weight_element")) {
    if (!spec.algebra)
      d.error("/weight_element", "a weight element needs an algebra");
    else
      spec.weight_element =
          read_element(doc["weight_element"], "/weight_element", spec.algebra, d);
  }

  if (doc.contains("t")) {
    const Json& t = doc["t"];
    if (!t.is_array()) {
      d.error("/t", "expected an array of times");
    } else {
      for (std::size_t i = 0; i < t.size(); ++i)
        if (auto v = read_real(t[i], at(std::string("/t"), i), d)) {
          if (*v < 0.0) d.error(at(std::string("/t"), i), "times must be nonnegative");
          spec.times.push_back(*v);
        }
    }
  }

  if (doc.contains("tolerances")) {
    const Json& t = doc["tolerances"];
    Tolerances tol;
    if (!t.is_object()) {
      d.error("/tolerances", "expected an object {pos, rank, eq}");
    } else {
      for (const auto& [key, val] : t.items()) {
        double* slot = key == "pos" ? &tol.pos : key == "rank" ? &tol.rank
                     : key == "eq"  ? &tol.eq
                                    : nullptr;
        if (!slot) {
          d.error("/tolerances/" + key, "unknown tolerance");
          continue;
        }
        if (auto v = read_real(val, "/tolerances/" + key, d)) {
          if (*v <= 0.0) d.error("/tolerances/" + key, "tolerances must be positive");
          *slot = *v;
        }
      }
      spec.tolerances = tol;
    }
  }

  if (doc.contains("seed")) {
    if (doc["seed"].is_number_unsigned())
      spec.seed = doc["seed"].get<std::uint64_t>();
    else
      d.error("/seed", "expected a nonnegative integer");
  }

  if (!spec.algebra && d.empty())
    d.error("/algebra", "missing (and no network \"c\" to infer it from)");
  d.raise();
  return spec;
}

ProblemSpec parse_spec_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t col = 0;
    std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1, col);
    throw SpecError({"line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": malformed JSON (" + e.what() + ")"});
  }
  return parse_spec(doc);
}

ProblemSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError({path + ": cannot open spec file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

// ---------------------------------------------------------------- encoding

static Json encode_complex(cplx z) { return Json::array({z.real(), z.imag()}); }

Json encode_matrix(const Matrix& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(encode_complex(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json encode_real_matrix(const RealMatrix& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json encode_element(const Element& a) {
  Json out = Json::array();
  for (const auto& b : a.blocks()) out.push_back(encode_matrix(b));
  return out;
}

Element decode_element(const Json& j, const AlgebraPtr& algebra) {
  Diagnostics d;
  auto e = read_element(j, "", algebra, d);
  d.raise();
  return *e;
}

Json encode_algebra(const Algebra& a) {
  return Json{{"blocks", a.blocks()}, {"trace_weights", a.weights()}};
}

// ---------------------------------------------------------------- emission

static void emit(const Json& j, std::string& out, int indent) {
  std::string pad(indent, ' ');
  std::string inner(indent + 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        emit(val, out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = std::all_of(j.begin(), j.end(), [](const Json& v) {
        return v.is_primitive() ||
               (v.is_array() && std::all_of(v.begin(), v.end(),
                                            [](const Json& w) { return w.is_primitive(); }));
      });
      out += flat ? "[" : "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",\n";
        if (!flat) out += inner;
        emit(j[i], out, indent + 2);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

std::string emit_json(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace nca
