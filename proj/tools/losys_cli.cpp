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

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "losys/io.hpp"
#include "losys/suites.hpp"
#include "losys/version.hpp"

namespace {

using namespace losys;
using nlohmann::json;

constexpr int kExitMember = 0;
constexpr int kExitNotMember = 1;
constexpr int kExitUnresolved = 2;
constexpr int kExitParseError = 3;
constexpr int kExitError = 4;

struct CommonOpts {
  std::uint64_t seed = 20260808;
  double tol_psd = 1e-9;
  double tol_decide = 1e-7;
  std::size_t n_max = 3;
  std::size_t samples = 200;
  bool rigorous = false;
  std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "random seed recorded in the report");
  cmd->add_option("--tol-psd", o.tol_psd, "positive-semidefinite slack");
  cmd->add_option("--tol-decide", o.tol_decide, "certificate decision slack");
  cmd->add_option("--n-max", o.n_max, "matrix level cap");
  cmd->add_option("--samples", o.samples, "sample count for randomized checks");
  cmd->add_flag("--rigorous", o.rigorous, "enable exhaustive grid searches");
  cmd->add_option("--output", o.output, "write the report to this file");
}

RunConfig to_config(const CommonOpts& o) {
  RunConfig cfg;
  cfg.seed = o.seed;
  cfg.tol.eps_psd = o.tol_psd;
  cfg.tol.eps_decide = o.tol_decide;
  cfg.tol.validate();
  cfg.n_max = o.n_max;
  cfg.samples = o.samples;
  cfg.rigorous = o.rigorous;
  return cfg;
}

std::string header(const CommonOpts& o, const std::string& command) {
  std::ostringstream os;
  os << "losys-report v1\n";
  os << "tool: losys " << kVersion << "\n";
  os << "seed: " << o.seed << "\n";
  os << "tol-psd: " << num(o.tol_psd) << "\n";
  os << "tol-decide: " << num(o.tol_decide) << "\n";
  os << "n-max: " << o.n_max << "\n";
  os << "samples: " << o.samples << "\n";
  os << "rigorous: " << (o.rigorous ? 1 : 0) << "\n";
  os << "command: " << command << "\n";
  os << "---\n";
  return os.str();
}

void emit(const CommonOpts& o, const std::string& body) {
  if (o.output.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(o.output);
    out << body;
  }
}

int verdict_exit(Membership m) {
  switch (m) {
    case Membership::member: return kExitMember;
    case Membership::not_member: return kExitNotMember;
    default: return kExitUnresolved;
  }
}

std::string diagnostics_line(const Diagnostics& d) {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.stats.size(); ++i) {
    if (i) os << " ";
    os << d.stats[i].first << "=" << num(d.stats[i].second);
  }
  if (!d.note.empty()) {
    if (!d.stats.empty()) os << " ";
    os << "note=\"" << d.note << "\"";
  }
  return os.str();
}

int run_member(const CommonOpts& o, const std::string& system_path,
               const std::string& element_path, std::size_t stage_1based,
               const std::string& cone, const std::string& command) {
  const RunConfig cfg = to_config(o);
  const SystemPtr sys = io::load_system(system_path);
  const LevelElement x = io::element_from_json(io::load_json(element_path), sys);
  if (stage_1based == 0 || stage_1based > sys->stage_count())
    throw StageOutOfRange("stages are numbered 1.." +
                          std::to_string(sys->stage_count()));
  const std::size_t stage = stage_1based - 1;

  ConeVerdict v;
  if (cone == "concrete") {
    v = cone_member_concrete(x, stage, cfg.tol);
  } else if (cone == "lomin") {
    LominOptions opts;
    opts.rigorous = cfg.rigorous;
    opts.restarts = cfg.tol.max_restarts;
    v = LominOracle(AlouSpace::from_concrete(sys), cfg.seed, opts)
            .membership(x, stage);
  } else if (cone == "lomax") {
    v = lomax_cones(AlouSpace::from_concrete(sys), cfg.seed)
            ->membership(x, stage);
  } else {
    throw ParseError("cone must be one of concrete|lomin|lomax");
  }

  std::ostringstream body;
  body << header(o, command);
  body << "verdict: " << to_string(v.status) << "\n";
  body << "cone: " << cone << "\n";
  body << "stage: " << stage_1based << "\n";
  body << "diagnostics: " << diagnostics_line(v.diagnostics) << "\n";
  body << "certificate: " << io::certificate_to_json(v.certificate).dump()
       << "\n";
  body << "element: " << io::element_to_json(x).dump() << "\n";
  body << "system-inline: " << io::system_to_json(*sys).dump() << "\n";
  emit(o, body.str());
  return verdict_exit(v.status);
}

int run_tensor(const CommonOpts& o, const std::string& spec_path,
               const std::string& left_path, const std::string& right_path,
               const std::string& structure, const std::string& element_path,
               std::size_t a1, std::size_t b1, const std::string& command) {
  const RunConfig cfg = to_config(o);
  SystemPtr left, right;
  TensorStructure ts;
  std::string structure_name = structure;
  if (!spec_path.empty()) {
    const auto spec = io::tensor_spec_from_json(
        io::load_json(spec_path),
        std::filesystem::path(spec_path).parent_path());
    left = spec.left;
    right = spec.right;
    ts = spec.structure;
    structure_name = to_string(ts);
  } else {
    if (left_path.empty() || right_path.empty())
      throw ParseError("tensor needs --spec or both --left and --right");
    left = io::load_system(left_path);
    right = io::load_system(right_path);
    if (structure == "lmin")
      ts = TensorStructure::lmin;
    else if (structure == "lmax")
      ts = TensorStructure::lmax;
    else
      throw ParseError("structure must be lmin|lmax");
  }
  const TensorSystem t(TensorFactor::concrete(left),
                       TensorFactor::concrete(right), ts, cfg.seed);
  const LevelElement x =
      io::element_from_json(io::load_json(element_path), t.space());
  if (a1 == 0 || a1 > left->stage_count() || b1 == 0 ||
      b1 > right->stage_count())
    throw StageOutOfRange("stage pair out of range");
  const ConeVerdict v = t.member(x, a1 - 1, b1 - 1);

  std::ostringstream body;
  body << header(o, command);
  body << "verdict: " << to_string(v.status) << "\n";
  body << "structure: " << structure_name << "\n";
  body << "stage-left: " << a1 << "\n";
  body << "stage-right: " << b1 << "\n";
  body << "diagnostics: " << diagnostics_line(v.diagnostics) << "\n";
  body << "certificate: " << io::certificate_to_json(v.certificate).dump()
       << "\n";
  body << "element: " << io::element_to_json(x).dump() << "\n";
  body << "system-left-inline: " << io::system_to_json(*left).dump() << "\n";
  body << "system-right-inline: " << io::system_to_json(*right).dump() << "\n";
  emit(o, body.str());
  return verdict_exit(v.status);
}

int run_suite_cmd(const CommonOpts& o, const std::string& name,
                  const std::string& command) {
  const RunConfig cfg = to_config(o);
  const auto t0 = std::chrono::steady_clock::now();
  const Report rep = suites::run_suite(name, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  std::ostringstream body;
  body << header(o, command);
  body << rep.render();
  emit(o, body.str());
  // wall time goes to stderr so the report body stays byte-reproducible
  std::cerr << "suite " << name << " wall-time "
            << std::chrono::duration<double>(t1 - t0).count() << " s\n";
  return rep.passed() ? 0 : 1;
}

std::string find_line(const std::vector<std::string>& lines,
                      const std::string& key) {
  for (const auto& l : lines)
    if (l.rfind(key + ": ", 0) == 0) return l.substr(key.size() + 2);
  return {};
}

int run_verify(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw ParseError("cannot open " + report_path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);

  const std::string verdict = find_line(lines, "verdict");
  if (verdict.empty()) throw ParseError("report has no verdict line");
  const std::string cert_text = find_line(lines, "certificate");
  const std::string element_text = find_line(lines, "element");
  if (verdict != "NotMember") {
    std::cout << "verify-certificate: verdict " << verdict
              << " carries no refutation certificate; nothing to check\n";
    return 0;
  }

  const json cert_json = json::parse(cert_text);
  const json element_json = json::parse(element_text);
  const std::uint64_t seed = std::stoull(find_line(lines, "seed"));
  bool ok = false;

  const std::string tensor_left = find_line(lines, "system-left-inline");
  if (!tensor_left.empty()) {
    const SystemPtr left = io::system_from_json(json::parse(tensor_left));
    const SystemPtr right = io::system_from_json(
        json::parse(find_line(lines, "system-right-inline")));
    const std::string structure = find_line(lines, "structure");
    const std::size_t a1 = std::stoul(find_line(lines, "stage-left"));
    const std::size_t b1 = std::stoul(find_line(lines, "stage-right"));
    const TensorSystem t(TensorFactor::concrete(left),
                         TensorFactor::concrete(right),
                         structure == "lmax" ? TensorStructure::lmax
                                             : TensorStructure::lmin,
                         seed);
    const LevelElement x = io::element_from_json(element_json, t.space());
    const Certificate cert =
        io::certificate_from_json(cert_json, {left, right});
    RandomStream rng(seed ^ 0xc0ffee);
    if (const auto* w = std::get_if<WitnessFunctional>(&cert)) {
      const LevelElement shifted =
          w->unit_shift == 0.0
              ? x
              : x + LevelElement::unit(x.system(), x.level()) *
                        Complex(w->unit_shift, 0.0);
      ok = pairing(w->matrix, shifted.realization()) < -w->threshold;
      for (std::size_t s = 0; s < 256 && ok; ++s) {
        const ComplexMatrix g = kron(
            rng.density(x.level()),
            kron(sample_corner_member(left, a1 - 1, 1, rng).realization(),
                 sample_corner_member(right, b1 - 1, 1, rng).realization()));
        ok = pairing(w->matrix, g) >=
             -std::max(w->generator_floor, 1e-9) * (1.0 + g.frobenius_norm());
      }
    } else if (const auto* wv = std::get_if<WitnessVector>(&cert)) {
      ok = verify_corner_witness(x, t.stage_pair_index(a1 - 1, b1 - 1), *wv);
    }
  } else {
    const SystemPtr sys =
        io::system_from_json(json::parse(find_line(lines, "system-inline")));
    const LevelElement x = io::element_from_json(element_json, sys);
    const Certificate cert = io::certificate_from_json(cert_json, {sys});
    const std::size_t stage = std::stoul(find_line(lines, "stage")) - 1;
    if (const auto* w = std::get_if<WitnessVector>(&cert)) {
      const LevelElement probe =
          w->unit_shift == 0.0
              ? x
              : x + LevelElement::unit(sys, x.level()) *
                        Complex(w->unit_shift, 0.0);
      if (w->context == "lambda") {
        // lomin witness: the contraction must leave the level-1 cone
        const LevelElement contr = lambda_contraction(probe, w->vector);
        ok = cone_member_concrete(contr, stage).not_member();
      } else {
        ok = verify_corner_witness(probe, stage, *w);
      }
    } else if (const auto* wf = std::get_if<WitnessFunctional>(&cert)) {
      RandomStream rng(seed ^ 0xc0ffee);
      ok = verify_witness_functional(x, stage, *wf, *corner_cones(sys), rng,
                                     256);
    }
  }
  std::cout << "verify-certificate: " << (ok ? "valid" : "INVALID") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local operator system toolkit"};
  app.require_subcommand(1);

  CommonOpts o_member, o_tensor, o_suite;
  std::string system_path, element_path, cone = "concrete";
  std::size_t stage = 1;
  auto* member = app.add_subcommand(
      "member", "decide cone membership of an element at a stage");
  member->add_option("--system", system_path)->required();
  member->add_option("--element", element_path)->required();
  member->add_option("--stage", stage, "1-based stage index")->required();
  member->add_option("--cone", cone, "concrete|lomin|lomax");
  add_common(member, o_member);

  std::string spec_path, left_path, right_path, structure = "lmin", t_element;
  std::size_t stage_left = 1, stage_right = 1;
  auto* tensor = app.add_subcommand(
      "tensor", "decide tensor-cone membership at a stage pair");
  tensor->add_option("--spec", spec_path,
                     "tensor spec file (left, right, structure)");
  tensor->add_option("--left", left_path);
  tensor->add_option("--right", right_path);
  tensor->add_option("--structure", structure, "lmin|lmax");
  tensor->add_option("--element", t_element)->required();
  tensor->add_option("--stage-left", stage_left, "1-based")->required();
  tensor->add_option("--stage-right", stage_right, "1-based")->required();
  add_common(tensor, o_tensor);

  std::string suite_name;
  auto* suite = app.add_subcommand("suite", "run a named property suite");
  suite->add_option("--name", suite_name,
                    "sandwich|seminorm-oracle|choi|lomin-lomax-identities|"
                    "projlim-roundtrip|tensor-axioms")
      ->required();
  add_common(suite, o_suite);

  std::string report_path;
  auto* verify = app.add_subcommand("verify-certificate",
                                    "re-validate the certificate in a report");
  verify->add_option("--report", report_path)->required();

  CLI11_PARSE(app, argc, argv);

  // the echoed command omits the output destination so that identical
  // (input, seed, config) runs produce byte-identical reports
  std::ostringstream cmdline;
  bool first = true;
  for (int i = 1; i < argc; ++i) {
    if (std::string_view(argv[i]) == "--output") {
      ++i;
      continue;
    }
    cmdline << (first ? "" : " ") << argv[i];
    first = false;
  }

  try {
    if (member->parsed())
      return run_member(o_member, system_path, element_path, stage, cone,
                        cmdline.str());
    if (tensor->parsed())
      return run_tensor(o_tensor, spec_path, left_path, right_path, structure,
                        t_element, stage_left, stage_right, cmdline.str());
    if (suite->parsed())
      return run_suite_cmd(o_suite, suite_name, cmdline.str());
    if (verify->parsed()) return run_verify(report_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
