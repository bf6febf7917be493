// Copyright 2026 The losys Authors.
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

#pragma once

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "losys/maps.hpp"
#include "losys/projlim.hpp"
#include "losys/tensor.hpp"

namespace losys::io {

using nlohmann::json;

inline json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError("complex entries are [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a 2-d array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw ParseError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
  }
  return m;
}

inline json coords_to_json(const std::vector<Complex>& c) {
  json out = json::array();
  for (const Complex& z : c) out.push_back(complex_to_json(z));
  return out;
}

inline std::vector<Complex> coords_from_json(const json& j) {
  std::vector<Complex> out;
  for (const auto& z : j) out.push_back(complex_from_json(z));
  return out;
}

/// System spec schema (UTF-8 JSON):
///   ambient_dim: integer d
///   basis: list of d x d matrices, entries [re, im]; first must be the unit
///   stages: list of (rank integer | coordinate index list | explicit matrix)
///   poset: optional list of [a, b] pairs meaning stage a <= stage b,
///          0-based; default is the chain in listed order
///   labels: optional list of strings
inline json system_to_json(const LocalSystem& sys) {
  json out;
  out["ambient_dim"] = sys.ambient_dim();
  json basis = json::array();
  for (const auto& b : sys.basis()) basis.push_back(matrix_to_json(b));
  out["basis"] = std::move(basis);
  json stages = json::array();
  for (std::size_t s = 0; s < sys.stage_count(); ++s) {
    const Projection& p = sys.filtration().stage(s);
    if (p.coordinate()) {
      bool prefix = true;
      for (std::size_t i = 0; i < p.coords().size(); ++i)
        prefix = prefix && p.coords()[i] == i;
      if (prefix)
        stages.push_back(p.rank());
      else
        stages.push_back(json(p.coords()));
    } else {
      stages.push_back(matrix_to_json(p.matrix()));
    }
  }
  out["stages"] = std::move(stages);
  json pairs = json::array();
  const StagePoset& poset = sys.filtration().poset();
  for (auto [a, b] : poset.cover_pairs()) pairs.push_back(json::array({a, b}));
  out["poset"] = std::move(pairs);
  if (!sys.labels().empty()) out["labels"] = sys.labels();
  return out;
}

inline SystemPtr system_from_json(const json& j) {
  if (!j.contains("ambient_dim") || !j.contains("basis") || !j.contains("stages"))
    throw ParseError("system spec needs ambient_dim, basis, stages");
  const std::size_t d = j["ambient_dim"].get<std::size_t>();
  std::vector<ComplexMatrix> basis;
  for (const auto& b : j["basis"]) basis.push_back(matrix_from_json(b));
  std::vector<Projection> stages;
  for (const auto& s : j["stages"]) {
    if (s.is_number_integer()) {
      stages.push_back(Projection::onto_first(d, s.get<std::size_t>()));
    } else if (s.is_array() && !s.empty() && s[0].is_number_integer()) {
      stages.push_back(Projection::onto_coords(d, s.get<std::vector<std::size_t>>()));
    } else {
      stages.push_back(Projection::from_matrix(matrix_from_json(s)));
    }
  }
  StagePoset poset = StagePoset::chain(stages.size());
  if (j.contains("poset") && !j["poset"].empty()) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& p : j["poset"])
      pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    poset = StagePoset::from_pairs(stages.size(), pairs);
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  try {
    return std::make_shared<LocalSystem>(
        std::move(basis), Filtration(d, std::move(stages), std::move(poset)),
        std::move(labels));
  } catch (const Error& e) {
    throw ParseError(std::string("invalid system spec: ") + e.what());
  }
}

inline json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("cannot parse " + path.string() + ": " + e.what());
  }
  return j;
}

inline void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(1) << "\n";
}

inline SystemPtr load_system(const std::filesystem::path& path) {
  return system_from_json(load_json(path));
}

/// Resolves a field that may hold an inline object or a file path.
inline json resolve_ref(const json& j, const std::filesystem::path& base_dir) {
  if (j.is_string())
    return load_json(base_dir / j.get<std::string>());
  return j;
}

/// Element spec: { "level": n, "coords": n x n array of coordinate vectors }.
inline json element_to_json(const LevelElement& x) {
  json out;
  out["level"] = x.level();
  json cells = json::array();
  for (std::size_t i = 0; i < x.level(); ++i) {
    json row = json::array();
    for (std::size_t j2 = 0; j2 < x.level(); ++j2)
      row.push_back(coords_to_json(x.coord(i, j2)));
    cells.push_back(std::move(row));
  }
  out["coords"] = std::move(cells);
  return out;
}

inline LevelElement element_from_json(const json& j, SystemPtr system) {
  if (!j.contains("level") || !j.contains("coords"))
    throw ParseError("element spec needs level and coords");
  const std::size_t level = j["level"].get<std::size_t>();
  const auto& cells = j["coords"];
  if (cells.size() != level) throw ParseError("coords row count != level");
  std::vector<std::vector<Complex>> coords(level * level);
  for (std::size_t i = 0; i < level; ++i) {
    if (cells[i].size() != level) throw ParseError("coords col count != level");
    for (std::size_t j2 = 0; j2 < level; ++j2)
      coords[i * level + j2] = coords_from_json(cells[i][j2]);
  }
  try {
    return LevelElement(std::move(system), level, std::move(coords));
  } catch (const Error& e) {
    throw ParseError(std::string("invalid element spec: ") + e.what());
  }
}

/// Map spec: { "source": path|object, "target": path|object,
///             "matrix": k_target x k_source, "stage_correspondence": [...] }.
inline json map_to_json(const LinearMapData& f) {
  json out;
  out["source"] = system_to_json(*f.source);
  out["target"] = system_to_json(*f.target);
  out["matrix"] = matrix_to_json(f.matrix);
  out["stage_correspondence"] = f.stage_correspondence;
  return out;
}

inline LinearMapData map_from_json(const json& j,
                                   const std::filesystem::path& base_dir) {
  LinearMapData f;
  f.source = system_from_json(resolve_ref(j.at("source"), base_dir));
  f.target = system_from_json(resolve_ref(j.at("target"), base_dir));
  f.matrix = matrix_from_json(j.at("matrix"));
  f.stage_correspondence =
      j.at("stage_correspondence").get<std::vector<std::size_t>>();
  f.validate();
  return f;
}

/// Tensor spec: { "left": path|object, "right": path|object,
///                "structure": "lmin"|"lmax" }.
struct TensorSpec {
  SystemPtr left;
  SystemPtr right;
  TensorStructure structure{TensorStructure::lmin};
};

inline TensorSpec tensor_spec_from_json(const json& j,
                                        const std::filesystem::path& base_dir) {
  TensorSpec spec;
  spec.left = system_from_json(resolve_ref(j.at("left"), base_dir));
  spec.right = system_from_json(resolve_ref(j.at("right"), base_dir));
  const std::string s = j.at("structure").get<std::string>();
  if (s == "lmin")
    spec.structure = TensorStructure::lmin;
  else if (s == "lmax")
    spec.structure = TensorStructure::lmax;
  else
    throw ParseError("tensor structure must be lmin or lmax");
  return spec;
}

/// Projective-system spec:
///   { "poset": [[a, b], ...],          // a <= b, 0-based
///     "stages": [path|object, ...],    // single-stage systems
///     "connecting": [ { "to": a, "from": b, "matrix": [[...]] }, ... ] }.
inline ProjectiveSystem projective_from_json(
    const json& j, const std::filesystem::path& base_dir) {
  std::vector<SystemPtr> stages;
  for (const auto& s : j.at("stages"))
    stages.push_back(system_from_json(resolve_ref(s, base_dir)));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& p : j.at("poset"))
    pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
  StagePoset poset = StagePoset::from_pairs(stages.size(), pairs);
  std::vector<ProjectiveSystem::Arrow> arrows;
  for (const auto& a : j.at("connecting")) {
    ProjectiveSystem::Arrow ar;
    ar.to = a.at("to").get<std::size_t>();
    ar.from = a.at("from").get<std::size_t>();
    if (ar.to >= stages.size() || ar.from >= stages.size())
      throw ParseError("connecting map endpoint out of range");
    ar.map.source = stages[ar.from];
    ar.map.target = stages[ar.to];
    ar.map.matrix = matrix_from_json(a.at("matrix"));
    ar.map.stage_correspondence = {0};
    ar.map.validate();
    arrows.push_back(std::move(ar));
  }
  try {
    return ProjectiveSystem(std::move(poset), std::move(stages),
                            std::move(arrows));
  } catch (const Error& e) {
    throw ParseError(std::string("invalid projective spec: ") + e.what());
  }
}

inline json certificate_to_json(const Certificate& c) {
  json out;
  if (std::holds_alternative<std::monostate>(c)) {
    out["type"] = "none";
  } else if (const auto* w = std::get_if<WitnessVector>(&c)) {
    out["type"] = "witness_vector";
    out["vector"] = coords_to_json(w->vector);
    out["violation"] = w->violation;
    out["threshold"] = w->threshold;
    out["context"] = w->context;
    out["unit_shift"] = w->unit_shift;
  } else if (const auto* w = std::get_if<WitnessFunctional>(&c)) {
    out["type"] = "witness_functional";
    out["matrix"] = matrix_to_json(w->matrix);
    out["value"] = w->value;
    out["threshold"] = w->threshold;
    out["generator_floor"] = w->generator_floor;
    out["unit_shift"] = w->unit_shift;
  } else if (const auto* d = std::get_if<Decomposition>(&c)) {
    out["type"] = "decomposition";
    out["residual"] = d->residual;
    json terms = json::array();
    for (const auto& t : d->terms) {
      json term;
      term["scalar"] = matrix_to_json(t.scalar);
      json factors = json::array();
      for (const auto& f : t.factors) factors.push_back(element_to_json(f));
      term["factors"] = std::move(factors);
      terms.push_back(std::move(term));
    }
    out["terms"] = std::move(terms);
  }
  return out;
}

/// Reads a certificate back; decomposition factors are rebuilt over the
/// provided factor systems (one for plain cones, two for tensor cones).
inline Certificate certificate_from_json(const json& j,
                                         const std::vector<SystemPtr>& factors) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "none") return std::monostate{};
  if (type == "witness_vector") {
    WitnessVector w;
    w.vector = coords_from_json(j.at("vector"));
    w.violation = j.at("violation").get<double>();
    w.threshold = j.at("threshold").get<double>();
    w.context = j.value("context", std::string{});
    w.unit_shift = j.value("unit_shift", 0.0);
    return w;
  }
  if (type == "witness_functional") {
    WitnessFunctional w;
    w.matrix = matrix_from_json(j.at("matrix"));
    w.value = j.at("value").get<double>();
    w.threshold = j.at("threshold").get<double>();
    w.generator_floor = j.value("generator_floor", 0.0);
    w.unit_shift = j.value("unit_shift", 0.0);
    return w;
  }
  if (type == "decomposition") {
    Decomposition d;
    d.residual = j.at("residual").get<double>();
    for (const auto& t : j.at("terms")) {
      DecompositionTerm term;
      term.scalar = matrix_from_json(t.at("scalar"));
      const auto& fs = t.at("factors");
      if (fs.size() != factors.size())
        throw ParseError("decomposition factor count mismatch");
      for (std::size_t i = 0; i < fs.size(); ++i)
        term.factors.push_back(element_from_json(fs[i], factors[i]));
      d.terms.push_back(std::move(term));
    }
    return d;
  }
  throw ParseError("unknown certificate type: " + type);
}

}  // namespace losys::io
