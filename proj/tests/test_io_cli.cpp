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

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "losys/catalog.hpp"
#include "losys/io.hpp"
#include "losys/suites.hpp"

using namespace losys;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("losys_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string(LOSYS_CLI_PATH) + " " + args;
  if (!out) {
    const int rc = std::system((cmd + " > /dev/null 2>/dev/null").c_str());
    return WEXITSTATUS(rc);
  }
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::ostringstream os;
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
    os.write(buf, static_cast<std::streamsize>(got));
  const int rc = pclose(pipe);
  *out = os.str();
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("system specs round trip losslessly", "[io]") {
  RandomStream rng(91);
  for (const auto& sys :
       {catalog::full_matrix_system(3), catalog::tridiagonal_system(4),
        catalog::sampled_function_system({{0.5}, {0.5, 1.25}})}) {
    const auto j = io::system_to_json(*sys);
    // serialize through text to exercise the printed representation
    const auto back = io::system_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back->basis_size() == sys->basis_size());
    REQUIRE(back->stage_count() == sys->stage_count());
    for (std::size_t i = 0; i < sys->basis_size(); ++i)
      CHECK(back->basis_element(i).approx_equal(sys->basis_element(i), 0.0));
    for (std::size_t s = 0; s < sys->stage_count(); ++s)
      CHECK(back->filtration().stage(s).matrix().approx_equal(
          sys->filtration().stage(s).matrix(), 0.0));
  }
}

TEST_CASE("elements and certificates round trip", "[io]") {
  RandomStream rng(92);
  const auto sys = catalog::tridiagonal_system(3);
  const LevelElement x = sample_hermitian(sys, 2, rng);
  const LevelElement back = io::element_from_json(
      nlohmann::json::parse(io::element_to_json(x).dump()), sys);
  CHECK(back.realization().approx_equal(x.realization(), 0.0));

  WitnessVector wv;
  wv.vector = rng.unit_vector(3);
  wv.violation = -0.25;
  wv.threshold = 1e-9;
  wv.context = "corner";
  const Certificate c1 = wv;
  const auto c1b = io::certificate_from_json(
      nlohmann::json::parse(io::certificate_to_json(c1).dump()), {sys});
  const auto* wvb = std::get_if<WitnessVector>(&c1b);
  REQUIRE(wvb != nullptr);
  CHECK(wvb->violation == wv.violation);
  for (std::size_t i = 0; i < 3; ++i) CHECK(wvb->vector[i] == wv.vector[i]);

  Decomposition dec;
  dec.terms.push_back({rng.psd(2), {sample_corner_member(sys, 1, 1, rng)}});
  dec.residual = 1e-12;
  const Certificate c2 = dec;
  const auto c2b = io::certificate_from_json(
      nlohmann::json::parse(io::certificate_to_json(c2).dump()), {sys});
  const auto* decb = std::get_if<Decomposition>(&c2b);
  REQUIRE(decb != nullptr);
  REQUIRE(decb->terms.size() == 1);
  CHECK(decb->terms[0].scalar.approx_equal(dec.terms[0].scalar, 0.0));
  CHECK(decb->terms[0].factors[0].realization().approx_equal(
      dec.terms[0].factors[0].realization(), 0.0));
}

TEST_CASE("map specs round trip", "[io]") {
  const auto src = catalog::matrix_system(2);
  const auto t = LinearMapData::from_action(
      src, src, {0}, [](const ComplexMatrix& m) { return m.transpose(); });
  const auto back = io::map_from_json(
      nlohmann::json::parse(io::map_to_json(t).dump()), ".");
  CHECK(back.matrix.approx_equal(t.matrix, 0.0));
  CHECK(back.stage_correspondence == t.stage_correspondence);
}

TEST_CASE("cli decides membership with documented exit codes", "[io]") {
  TempDir tmp;
  const auto sys = catalog::full_matrix_system(2);
  io::save_json(tmp.path / "m2.json", io::system_to_json(*sys));

  // unit element: member at every stage
  io::save_json(tmp.path / "unit.json",
                io::element_to_json(LevelElement::unit(sys, 1)));
  CHECK(run_cli("member --system " + (tmp.path / "m2.json").string() +
                " --element " + (tmp.path / "unit.json").string() +
                " --stage 1 --cone concrete") == 0);

  // diag(1, -1): member at stage 1, rejected at stage 2 with a witness
  io::save_json(tmp.path / "diag.json",
                io::element_to_json(LevelElement::from_matrix(
                    sys, 1, ComplexMatrix::diag({1.0, -1.0}))));
  CHECK(run_cli("member --system " + (tmp.path / "m2.json").string() +
                " --element " + (tmp.path / "diag.json").string() +
                " --stage 1") == 0);
  const std::string report_path = (tmp.path / "diag_report.txt").string();
  CHECK(run_cli("member --system " + (tmp.path / "m2.json").string() +
                " --element " + (tmp.path / "diag.json").string() +
                " --stage 2 --output " + report_path) == 1);
  const std::string report = slurp(report_path);
  CHECK(report.find("verdict: NotMember") != std::string::npos);
  CHECK(report.find("witness_vector") != std::string::npos);

  // the standalone verifier revalidates the stored certificate
  std::string verify_out;
  CHECK(run_cli("verify-certificate --report " + report_path, &verify_out) == 0);
  CHECK(verify_out.find("valid") != std::string::npos);

  // SWAP is accepted by the rigorous lomin grid
  const auto m2full = catalog::matrix_system(2);
  io::save_json(tmp.path / "m2full.json", io::system_to_json(*m2full));
  std::vector<std::vector<Complex>> sc(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      sc[i * 2 + j] = m2full->coords_of(ComplexMatrix::unit(2, j, i));
  io::save_json(tmp.path / "swap.json",
                io::element_to_json(LevelElement(m2full, 2, std::move(sc))));
  CHECK(run_cli("member --system " + (tmp.path / "m2full.json").string() +
                " --element " + (tmp.path / "swap.json").string() +
                " --stage 1 --cone lomin --rigorous") == 0);

  // bad stage and bad file map to error exit codes
  CHECK(run_cli("member --system " + (tmp.path / "m2.json").string() +
                " --element " + (tmp.path / "unit.json").string() +
                " --stage 9") == 4);
  CHECK(run_cli("member --system /nonexistent.json --element " +
                (tmp.path / "unit.json").string() + " --stage 1") == 3);
}

TEST_CASE("cli tensor subcommand with certificates", "[io]") {
  TempDir tmp;
  const auto m2 = catalog::matrix_system(2);
  io::save_json(tmp.path / "m2.json", io::system_to_json(*m2));

  const TensorSystem t(TensorFactor::concrete(m2), TensorFactor::concrete(m2),
                       TensorStructure::lmax, 1);
  // unit (x) unit: member
  io::save_json(tmp.path / "unit.json", io::element_to_json(t.unit(1)));
  CHECK(run_cli("tensor --left " + (tmp.path / "m2.json").string() +
                " --right " + (tmp.path / "m2.json").string() +
                " --structure lmin --element " +
                (tmp.path / "unit.json").string() +
                " --stage-left 1 --stage-right 1") == 0);

  // entangled projector: rejected from lmax with a functional witness
  ComplexMatrix bell(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) bell(i * 2 + i, j * 2 + j) += 0.5;
  io::save_json(
      tmp.path / "bell.json",
      io::element_to_json(LevelElement::from_matrix(t.space(), 1, bell)));
  const std::string report_path = (tmp.path / "bell_report.txt").string();
  CHECK(run_cli("tensor --left " + (tmp.path / "m2.json").string() +
                " --right " + (tmp.path / "m2.json").string() +
                " --structure lmax --element " +
                (tmp.path / "bell.json").string() +
                " --stage-left 1 --stage-right 1 --output " + report_path) ==
        1);
  std::string verify_out;
  CHECK(run_cli("verify-certificate --report " + report_path, &verify_out) == 0);
  CHECK(verify_out.find("valid") != std::string::npos);

  // generator element: accepted with a decomposition certificate
  RandomStream rng(93);
  const LevelElement gen = t.elementary(sample_corner_member(m2, 0, 1, rng),
                                        sample_corner_member(m2, 0, 1, rng));
  io::save_json(tmp.path / "gen.json", io::element_to_json(gen));
  const std::string gen_report = (tmp.path / "gen_report.txt").string();
  CHECK(run_cli("tensor --left " + (tmp.path / "m2.json").string() +
                " --right " + (tmp.path / "m2.json").string() +
                " --structure lmax --element " +
                (tmp.path / "gen.json").string() +
                " --stage-left 1 --stage-right 1 --output " + gen_report) == 0);
  CHECK(slurp(gen_report).find("decomposition") != std::string::npos);
}

TEST_CASE("cli suite reports are deterministic given the seed", "[io]") {
  TempDir tmp;
  const std::string r1 = (tmp.path / "r1.txt").string();
  const std::string r2 = (tmp.path / "r2.txt").string();
  const std::string args =
      "suite --name choi --samples 20 --seed 777 --output ";
  CHECK(run_cli(args + r1) == 0);
  CHECK(run_cli(args + r2) == 0);
  const std::string a = slurp(r1);
  const std::string b = slurp(r2);
  REQUIRE_FALSE(a.empty());
  CHECK(a == b);

  // a different seed changes the sampled panel but not the outcome
  const std::string r3 = (tmp.path / "r3.txt").string();
  CHECK(run_cli("suite --name choi --samples 20 --seed 778 --output " + r3) ==
        0);
}

TEST_CASE("tensor spec files resolve paths and inline objects", "[io]") {
  TempDir tmp;
  const auto m2 = catalog::matrix_system(2);
  io::save_json(tmp.path / "m2.json", io::system_to_json(*m2));
  nlohmann::json spec;
  spec["left"] = "m2.json";                    // by path, relative to the spec
  spec["right"] = io::system_to_json(*m2);     // inline
  spec["structure"] = "lmax";
  io::save_json(tmp.path / "tensor.json", spec);
  const auto parsed =
      io::tensor_spec_from_json(io::load_json(tmp.path / "tensor.json"),
                                tmp.path);
  CHECK(parsed.structure == TensorStructure::lmax);
  CHECK(parsed.left->basis_size() == 4);
  CHECK(parsed.right->basis_size() == 4);

  // the CLI accepts the spec file directly
  const TensorSystem t(TensorFactor::concrete(parsed.left),
                       TensorFactor::concrete(parsed.right),
                       TensorStructure::lmax, 1);
  io::save_json(tmp.path / "unit.json", io::element_to_json(t.unit(1)));
  CHECK(run_cli("tensor --spec " + (tmp.path / "tensor.json").string() +
                " --element " + (tmp.path / "unit.json").string() +
                " --stage-left 1 --stage-right 1") == 0);
}

TEST_CASE("projective system spec files build and validate", "[io]") {
  TempDir tmp;
  RandomStream rng(94);
  const auto m2 = catalog::matrix_system(2);
  const auto m1 = catalog::matrix_system(1);
  // evaluation of the (0,0) entry as the connecting map M_2 -> C
  const auto f = LinearMapData::from_action(
      m2, m1, {0}, [](const ComplexMatrix& m) {
        ComplexMatrix out(1, 1);
        out(0, 0) = m(0, 0);
        return out;
      });
  nlohmann::json spec;
  spec["poset"] = nlohmann::json::array({nlohmann::json::array({0, 1})});
  spec["stages"] = nlohmann::json::array(
      {io::system_to_json(*m1), io::system_to_json(*m2)});
  spec["connecting"] = nlohmann::json::array();
  nlohmann::json arrow;
  arrow["to"] = 0;
  arrow["from"] = 1;
  arrow["matrix"] = io::matrix_to_json(f.matrix);
  spec["connecting"].push_back(arrow);
  io::save_json(tmp.path / "proj.json", spec);

  const ProjectiveSystem sys =
      io::projective_from_json(io::load_json(tmp.path / "proj.json"), tmp.path);
  const Report val = sys.validate(rng, 4);
  INFO(val.render());
  CHECK(val.passed());
  const LimitSystem lim(sys);
  CHECK(lim.dim() == 4);  // threads determined by the top component
}

TEST_CASE("fixture specs on disk stay loadable", "[io]") {
  const fs::path dir(LOSYS_FIXTURE_DIR);
  const SystemPtr sys = io::load_system(dir / "truncated_m2.json");
  CHECK(sys->ambient_dim() == 2);
  CHECK(sys->stage_count() == 2);
  const LevelElement x = io::element_from_json(
      io::load_json(dir / "diag_plus_minus.json"), sys);
  CHECK(cone_member_concrete(x, 0).member());
  CHECK(cone_member_concrete(x, 1).not_member());
}

TEST_CASE("suite runner rejects unknown names", "[io]") {
  RunConfig cfg;
  CHECK_THROWS_AS(suites::run_suite("no-such-suite", cfg), ParseError);
}
