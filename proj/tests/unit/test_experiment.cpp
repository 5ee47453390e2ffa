#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stochmatch/errors.hpp"
#include "stochmatch/experiment.hpp"

using namespace stochmatch;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  return parse_config(R"({
    "graph": {"generator": {"family": "erdos-renyi", "n": 6, "p": 0.5, "seed": 3}},
    "instances": 3, "p_v": [0.5, 1.0], "p_e": 0.8, "epsilon": [0.2],
    "r_cap": 150, "samples": 3000, "seed": 9})");
}

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = small_config();
  CHECK(cfg.generator->family == Family::erdos_renyi);
  CHECK(cfg.generator->weights.kind == WeightKind::unit);
  CHECK(cfg.p_e == std::vector<double>{0.8});
  CHECK(cfg.p_v.size() == 2);
  CHECK(*cfg.seed == 9);
  CHECK(*cfg.r_cap == 150);
  CHECK(cfg.q_mode == QMode::automatic);

  auto w = parse_config(R"({"graph": {"generator": {"family": "path", "n": 4}}, "weighted": true,
                            "p_v": 1, "p_e": 1, "epsilon": 0.1, "seed": 1})");
  CHECK(w.generator->weights.kind == WeightKind::uniform);

  CHECK_THROWS_AS(parse_config(R"({"seed": 1, "colour": "red"})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"graph": {"generator": {"family": "path", "size": 3}}})"), InputError);
  CHECK_THROWS_AS(parse_config("{not json"), InputError);

  auto no_seed = cfg;
  no_seed.seed.reset();
  CHECK_THROWS_AS(validate(no_seed), InputError);
  auto empty = cfg;
  empty.epsilon.clear();
  CHECK_THROWS_AS(validate(empty), InputError);
  auto no_graph = cfg;
  no_graph.generator.reset();
  CHECK_THROWS_AS(validate(no_graph), InputError);

  // Sidecar re-parses to the same config and does not mention workers.
  auto sidecar = config_to_json(cfg);
  CHECK(sidecar.find("workers") == std::string::npos);
  CHECK(config_to_json(parse_config(sidecar)) == sidecar);
}

TEST_CASE("degenerate rows have ratio 1") {
  auto cfg = parse_config(R"({
    "graph": {"generator": {"family": "erdos-renyi", "n": 7, "p": 0.5, "seed": 4,
                            "weights": {"model": "uniform", "lo": 0.1, "hi": 10}}},
    "weighted": true, "instances": 4, "p_v": 1, "p_e": 1, "epsilon": [0.1, 0.3],
    "r_cap": 100, "seed": 5})");
  for (auto alg : {Algorithm::algorithm1, Algorithm::edcs}) {
    cfg.algorithm = alg;
    cfg.beta = 4;
    for (const auto& row : run_experiment(cfg)) {
      if (alg == Algorithm::algorithm1) CHECK(row.ratio == 1.0);
      CHECK(row.checks_passed);
      CHECK(row.q_mode == EstimateMode::exact);
    }
  }
}

TEST_CASE("rows and CSV") {
  auto cfg = small_config();
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].graph_id == "erdos-renyi-6-0");
  CHECK(rows[0].p_v == 0.5);
  CHECK(rows[1].p_v == 1.0);
  CHECK(rows[2].graph_id == "erdos-renyi-6-1");
  for (const auto& r : rows) {
    CHECK(r.checks_passed);
    CHECK(r.r_or_beta == 150);
    CHECK(r.max_deg_q <= 150);
  }
  auto csv = rows_to_csv(rows);
  CHECK(csv.rfind("graph_id,n,m,p_v,p_e,epsilon,algorithm,R_or_beta,q_mode,ratio,ratio_ci,max_deg_Q,checks_passed\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  cfg.workers = 3;
  CHECK(rows_to_csv(run_experiment(cfg)) == csv);
  cfg.seed = 10;
  CHECK(rows_to_csv(run_experiment(cfg)) != csv);

  // Monte Carlo path is reproducible too.
  cfg.q_mode = QMode::monte_carlo;
  cfg.workers = 1;
  auto mc = rows_to_csv(run_experiment(cfg));
  cfg.workers = 4;
  CHECK(rows_to_csv(run_experiment(cfg)) == mc);
  CHECK(mc.find("monte-carlo") != std::string::npos);
}

TEST_CASE("outputs on disk") {
  auto dir = std::filesystem::temp_directory_path() / "stochmatch_exp_test";
  std::filesystem::create_directories(dir);
  auto cfg = small_config();
  cfg.output = (dir / "rows.csv").string();
  auto rows = run_experiment(cfg);
  write_experiment_outputs(cfg, rows);
  CHECK(slurp(cfg.output) == rows_to_csv(rows));
  auto side = nlohmann::json::parse(slurp(cfg.output + ".json"));
  CHECK(side.at("seed") == 9);
  std::filesystem::remove_all(dir);
}

TEST_CASE("errors name the sweep point") {
  auto cfg = small_config();
  cfg.epsilon = {0.2, 1.5};
  try {
    run_experiment(cfg);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("sweep point 1") != std::string::npos);
  }
}
