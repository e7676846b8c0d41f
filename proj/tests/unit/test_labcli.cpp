#include "holo/labcli.hpp"
#include "holo/tomo.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace holo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("holo_labcli_" + name);
  fs::remove_all(p);
  return p;
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  return {};
}

}  // namespace

TEST_SUITE("labcli") {

TEST_CASE("defaults and field-level validation") {
  const ExperimentConfig c = parse_config("{}");
  CHECK(c.eps_points == 41);
  CHECK(c.realizations == 2000);
  CHECK(c.omega_max == doctest::Approx(2 * kPi * 1e4));
  CHECK(c.epsilon_grid().front() == doctest::Approx(-0.2));
  CHECK(c.epsilon_grid()[20] == doctest::Approx(0.0));
  CHECK(c.sweep_schemes.size() == 4);

  auto message = [](const std::string& json) {
    try {
      parse_config(json);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"colour": 1})").find("unknown key 'colour'") != std::string::npos);
  CHECK(message(R"({"noise": {"eps": 0.1}})").find("noise: unknown key 'eps'") != std::string::npos);
  CHECK(message(R"({"sweep": {"epsilon": {"min": -0.7}}})").find("sweep.epsilon") != std::string::npos);
  CHECK(message(R"({"sweep": {"realizations": 0}})").find("sweep.realizations") != std::string::npos);
  CHECK(message(R"({"gate": "CNOT"})").find("gate") != std::string::npos);
  CHECK(message(R"({"eta": "big"})").find("eta") != std::string::npos);
  CHECK(message(R"({"kind": "sweep", "sweep": {"schemes": ["holonomic:1"]}})").find("sweep.schemes") !=
        std::string::npos);
  CHECK(message(R"({"scheme": "dynamical", "eta": 0.3, "gate": "X"})").find("cannot realise") != std::string::npos);
  CHECK(message("{not json").find("config") != std::string::npos);
}

TEST_CASE("scheme choices") {
  const SchemeChoice s = parse_scheme_choice("dynamical:0.5");
  CHECK(s.scheme == Scheme::Dynamical);
  CHECK(s.eta == 0.5);
  CHECK_THROWS_AS(parse_scheme_choice("holonomic"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scheme_choice("dynamical:0"), std::invalid_argument);
}

TEST_CASE("resolved config echoes every default") {
  const ExperimentConfig c = parse_config(R"({"noise": {"t2_1a": 0.02}})");
  CHECK(c.resolved_noise().dephasing_1a == doctest::Approx(100.0));
  const std::string j = config_to_json(c);
  CHECK(j.find("\"t2_1a\": 0.02") != std::string::npos);
  CHECK(j.find("\"threads\"") == std::string::npos);
  // The echo is itself a valid config that resolves to the same echo.
  CHECK(config_to_json(parse_config(j)) == j);
}

TEST_CASE("qpt on ideal X in analytic mode") {
  ExperimentConfig c = parse_config(R"({"kind": "qpt", "gate": "X", "qpt": {"shots": 0}})");
  const fs::path dir = scratch("qpt");
  const RunResult r = run_experiment(c, dir);
  CHECK(r.converged);
  const double f = std::stod(value_of(slurp(dir / "qpt_summary.txt"), "F_att"));
  CHECK(f >= 0.999);
  CHECK(slurp(dir / "chi.csv").rfind("## holoqutrit 0.1.0\n", 0) == 0);
  CHECK(fs::exists(dir / "manifest.txt"));
}

TEST_CASE("rb zero-noise smoke run") {
  ExperimentConfig c = parse_config(R"({"kind": "rb", "rb": {"lengths": [1, 4, 8], "sequences": 5}})");
  const fs::path dir = scratch("rb");
  run_experiment(c, dir);
  const std::string sum = slurp(dir / "rb_summary.txt");
  CHECK(std::stod(value_of(sum, "reference.p")) >= 0.999);
  CHECK(slurp(dir / "rb_reference.csv").find("m,mean_fidelity,std,n_sequences\n") != std::string::npos);
}

TEST_CASE("direct sweep rows") {
  ExperimentConfig c = parse_config(R"({"kind": "sweep", "sweep": {"epsilon": {"points": 3}}})");
  const auto tables = run_sweep(c);
  REQUIRE(tables.size() == 2);
  for (const SweepTable& t : tables) {
    REQUIRE(t.rows.size() == 12);
    auto at = [&](std::size_t e, const std::string& s) {
      for (const SweepRow& r : t.rows)
        if (r.epsilon == c.epsilon_grid()[e] && r.scheme == s) return r.infidelity_mean;
      FAIL("missing row");
      return 0.0;
    };
    for (const char* s : {"holonomic:0", "holonomic:1", "holonomic:0.5", "dynamical:0.5"}) CHECK(at(1, s) < 1e-6);
    for (std::size_t e : {std::size_t{0}, std::size_t{2}}) {
      CHECK(at(e, "holonomic:1") < at(e, "holonomic:0"));
      CHECK(at(e, "holonomic:0.5") < at(e, "dynamical:0.5"));
    }
  }
}

TEST_CASE("outputs are deterministic and thread-count independent") {
  const std::string cfg = R"({"kind": "qpt", "gate": "H", "qpt": {"shots": 5000}, "seed": 7})";
  ExperimentConfig c = parse_config(cfg);
  c.threads = 1;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const RunResult ra = run_experiment(c, a);
  c.threads = 3;
  run_experiment(c, b);
  for (const fs::path& f : ra.files) CHECK(slurp(a / f) == slurp(b / f));
  c.seed = 8;
  const fs::path d = scratch("det_c");
  run_experiment(c, d);
  CHECK(slurp(a / "counts.csv") != slurp(d / "counts.csv"));
}

TEST_CASE("exported tone file parses back") {
  ExperimentConfig c = parse_config(R"({"kind": "export-awg", "gate": "T", "eta": 1.0, "n_samples": 1024})");
  const fs::path dir = scratch("awg");
  run_experiment(c, dir);
  const PulseSchedule s = load_tones(dir / "tones.csv");
  CHECK(s.intervals() == 1024);
  CHECK(s.spec.gamma == doctest::Approx(kPi / 4));
  CHECK(slurp(dir / "tones.csv").rfind("## holoqutrit 0.1.0\n", 0) == 0);
}

TEST_CASE("sideband and propagate runs report their checks") {
  ExperimentConfig c = parse_config(R"({"kind": "sideband", "n_samples": 512, "steps": 1024})");
  const fs::path dir = scratch("sb");
  CHECK(run_experiment(c, dir).converged);
  const std::string rep = slurp(dir / "sideband_report.txt");
  CHECK(std::stod(value_of(rep, "subspace_fidelity")) >= 0.999);
  c.kind = ExperimentKind::Propagate;
  const fs::path pd = scratch("prop");
  CHECK(run_experiment(c, pd).converged);
  CHECK(value_of(slurp(pd / "propagate_summary.txt"), "converged") == "true");
}

}
