#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "polardyn/app/commands.hpp"
#include "polardyn/app/config.hpp"
#include "polardyn/app/format.hpp"

using namespace polardyn;
using namespace polardyn::app;
using nlohmann::json;

namespace {

RunConfig parse(const char* text) { return parse_config(json::parse(text)); }

std::vector<std::vector<double>> read_csv(const std::string& text, std::vector<std::string>* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::istringstream l(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(l, cell, ',')) row.push_back(cell == "nan" ? std::nan("") : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const char* kDepolarizing = R"({
  "system": {"dimension": 4},
  "generator": {"model": "isotropic", "gamma": 1.0},
  "time_grid": {"start": 0, "stop": 3, "count": 31},
  "initial_state": {"ket": [1, 0, 0, 0]}
})";

}  // namespace

TEST_SUITE("app") {

TEST_CASE("shortest round-trip formatting") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 123456789.123456789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(json_number(std::numeric_limits<double>::infinity()) == json("inf"));
  CHECK(json_number(2.0) == json(2.0));
  const Table t{{"a", "b"}, {{1.0, 0.25}}};
  CHECK(to_csv(t) == "a,b\n1,0.25\n");
}

TEST_CASE("time grids") {
  TimeGrid lin{0.0, 1.0, 5, Spacing::linear};
  CHECK(lin.points() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  TimeGrid lg{0.01, 100.0, 5, Spacing::log};
  const auto p = lg.points();
  CHECK(p[2] == doctest::Approx(1.0));
  CHECK(p.back() == 100.0);
  TimeGrid single{2.0, 2.0, 1, Spacing::linear};
  CHECK(single.points() == std::vector<double>{2.0});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("[]"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"system": {"dimension": 2}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gamma": 1}, "channel": {"model": "bit_flip", "p": 0.1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "unknown"}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic"}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gamma": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"channel": {"model": "bit_flip", "p": 2}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"system": {"dimension": 3}, "channel": {"model": "bit_flip", "p": 0.2}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"channel": {"model": "kraus", "kraus": [[[0.5, 0], [0, 0.5]]]}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"hamiltonian": [[0, 1], [0, 0]]}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"hamiltonian": [[0, 0], [0, 0]], "gksl_convention": "other"}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gamma": 1}, "time_grid": {"start": 1, "stop": 0.5}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gamma": 1}, "time_grid": {"start": 0, "stop": 1, "spacing": "log"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gamma": 1}, "initial_state": {"bloch": [1, 0, 0]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gamma": 1}, "initial_state": {"matrix": [[1, 0], [0, 1]]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse(R"({"system": {"basis": "pauli"}, "generator": {"model": "isotropic", "gamma": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gamma": 1}, "tolerance": {}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gama": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"generator": {"model": "isotropic", "gamma": 1}, "initial_state": {"bloch": [0, 0, 0], "ket": [1, 0]}})"),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("complex matrices parse from [re, im] pairs") {
  const RunConfig cfg = parse(R"({
    "generator": {"hamiltonian": [[1, [0, -1]], [[0, 1], -1]], "jumps": [[[0, 1], [0, 0]]], "gksl_convention": "standard"}
  })");
  REQUIRE(cfg.generator);
  CHECK(cfg.generator->hamiltonian(0, 1) == cplx(0, -1));
  CHECK(cfg.generator->jumps.size() == 1);
  const json round = generator_to_json(*cfg.generator);
  const LindbladGenerator back = generator_from_json(round, 2);
  CHECK(max_abs(CMat(back.hamiltonian - cfg.generator->hamiltonian)) == 0.0);
  CHECK(max_abs(CMat(back.jumps[0] - cfg.generator->jumps[0])) == 0.0);
}

TEST_CASE("evolve output does not depend on the worker count") {
  const RunConfig cfg = parse(kDepolarizing);
  CommandOptions one, many;
  many.threads = 7;
  const std::string a = cmd_evolve(cfg, one);
  CHECK(a == cmd_evolve(cfg, many));
  CHECK(a == cmd_evolve(cfg, one));
  std::vector<std::string> header;
  const auto rows = read_csv(a, &header);
  CHECK(header.front() == "t");
  CHECK(header.size() == 1 + 15 + 2);
  CHECK(rows.size() == 31);
  CHECK(header.back() == "S_L");
  for (const auto& row : rows) CHECK(std::abs(row.back() - 0.75 * (1 - std::exp(-2 * row[0]))) < 1e-12);
}

TEST_CASE("entropy columns and closed-form agreement") {
  const RunConfig cfg = parse(kDepolarizing);
  std::vector<std::string> header;
  const auto rows = read_csv(cmd_entropy(cfg, {}), &header);
  CHECK(header == std::vector<std::string>{"t", "S_L_direct", "S_L_predicted", "S_vN", "abs_err"});
  for (const auto& row : rows) CHECK(row[4] < 1e-12);

  const RunConfig damping = parse(R"({
    "channel": {"model": "amplitude_damping", "p": 0.3},
    "time_grid": {"count": 4},
    "initial_state": {"bloch": [0.3, 0, 0]}
  })");
  const auto drows = read_csv(cmd_entropy(damping, {}));
  CHECK(drows.size() == 4);
  CHECK(std::isnan(drows[1][2]));
}

TEST_CASE("channel entropy prediction uses per-block rates") {
  const RunConfig cfg = parse(R"({
    "channel": {"model": "bit_flip", "p": 0.2},
    "time_grid": {"count": 6},
    "initial_state": {"bloch": [0.2, 0.3, 0.4]}
  })");
  for (const auto& row : read_csv(cmd_entropy(cfg, {}))) CHECK(row[4] < 1e-12);
}

TEST_CASE("commands need an initial state") {
  const RunConfig cfg = parse(R"({"generator": {"model": "isotropic", "gamma": 1}})");
  CHECK_THROWS_AS(cmd_evolve(cfg, {}), ConfigError);
  CHECK_THROWS_AS(cmd_entropy(cfg, {}), ConfigError);
}

TEST_CASE("decompose reports structure and keeps going on non-normal input") {
  const json bf = json::parse(cmd_decompose(parse(R"({"channel": {"model": "bit_flip", "p": 0.25}})"), {}));
  CHECK(bf["canonical_form"]["isotropy"] == "anisotropic");
  CHECK(bf["canonical_form"]["spheroid"] == "prolate");
  const json dp = json::parse(cmd_decompose(parse(R"({"channel": {"model": "depolarizing", "p": 0.3}})"), {}));
  CHECK(dp["canonical_form"]["isotropy"] == "isotropic");
  CHECK(dp["canonical_form"]["spheroid"] == "ball");

  const json nn = json::parse(cmd_decompose(parse(R"({
    "generator": {"hamiltonian": [[0.3, 0.5], [0.5, -0.3]], "jumps": [[[0, 0.8], [0, 0]]]}
  })"), {}));
  CHECK(nn["normal"] == false);
  CHECK(nn["canonical_form"]["error"]["type"] == "normality_violation");
  CHECK(nn["rate_fit"]["error"]["type"] == "normality_violation");
}

TEST_CASE("NMR decomposition lists per-block rates") {
  const json doc = json::parse(cmd_decompose(parse(R"({
    "generator": {"model": "nmr", "omega": 1.5, "gamma_plus": 0.4, "gamma_minus": 0.4, "gamma_z": 0.2},
    "time_grid": {"start": 0, "stop": 5, "count": 11}
  })"), {}));
  const auto gammas = doc["rate_fit"]["gammas"].get<std::vector<double>>();
  REQUIRE(gammas.size() == 2);
  CHECK(gammas[0] == doctest::Approx(0.4));
  CHECK(gammas[1] == doctest::Approx(0.4));
  CHECK(doc["rate_fit"]["omegas"][0].get<double>() == doctest::Approx(1.5));
  CHECK(doc["rate_fit"]["residual"].get<double>() < 1e-10);
}

TEST_CASE("verify flags non-unital channels and accepts the gallery") {
  const json ad = json::parse(cmd_verify(parse(R"({"channel": {"model": "amplitude_damping", "p": 0.3}})"), {}));
  CHECK(ad["checks"]["C1"]["pass"] == true);
  CHECK(ad["checks"]["C2"]["pass"] == true);
  CHECK(ad["checks"]["C3"]["pass"] == false);
  CHECK(ad["checks"]["L1"]["pass"] == true);
  for (const char* model : {"bit_flip", "phase_flip", "depolarizing"}) {
    json doc{{"channel", {{"model", model}, {"p", 0.4}}}};
    const json report = json::parse(cmd_verify(parse_config(doc), {}));
    CHECK(report["checks"]["C1"]["pass"] == true);
    CHECK(report["checks"]["C2"]["pass"] == true);
    CHECK(report["checks"]["C3"]["pass"] == true);
  }
  const json pauli = json::parse(cmd_verify(parse(R"({"generator": {"model": "pauli_depolarizing", "gamma": 0.5}})"), {}));
  CHECK(pauli["checks"]["spohn"]["commutant_dimension"] == 1);
  CHECK(pauli["checks"]["spohn"]["kernel_dimension"] == 1);
  CHECK(pauli["checks"]["L3"]["pass"] == true);
}

TEST_CASE("format resolution") {
  RunConfig cfg;
  CHECK(resolve_format(std::nullopt, cfg, OutputFormat::csv) == OutputFormat::csv);
  cfg.format = "json";
  CHECK(resolve_format(std::nullopt, cfg, OutputFormat::csv) == OutputFormat::json);
  CHECK(resolve_format(std::string("csv"), cfg, OutputFormat::json) == OutputFormat::csv);
  CHECK_THROWS_AS(resolve_format(std::string("xml"), cfg, OutputFormat::csv), ConfigError);
}

}
