#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "hignn/run_config.hpp"
#include "hignn/text_io.hpp"

using namespace hignn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hignn_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args, const std::string& log_name = "") {
  std::string cmd = std::string(HIGNN_CLI_PATH) + " " + args;
  if (!log_name.empty())
    cmd += " >" + log_name + ".out 2>" + log_name + ".err";
  else
    cmd += " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::string gen_config(const TempDir& dir, int count, int seed) {
  const std::string path = dir.file("gen.json");
  write_text_file(path, R"({
  "command": "gen-data",
  "seed": )" + std::to_string(seed) + R"(,
  "domain": {"type": "unbounded"},
  "sampler": {"count": )" + std::to_string(count) + R"(, "max_extent": 60.0},
  "output": {"training_set": ")" + dir.file("train.csv") + R"("}
})");
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config validation rejects unknown keys and bad values") {
  TempDir dir;
  SUBCASE("unknown top-level key") {
    write_text_file(dir.file("c.json"),
                    R"({"command": "gen-data", "bogus": 1, "sampler": {"count": 5},
                        "output": {"training_set": "x.csv"}})");
    CHECK_THROWS_WITH_AS(load_run_config(dir.file("c.json")), doctest::Contains("bogus"),
                         ConfigError);
  }
  SUBCASE("unknown nested key") {
    write_text_file(dir.file("c.json"),
                    R"({"command": "gen-data", "sampler": {"count": 5, "oops": 2},
                        "output": {"training_set": "x.csv"}})");
    CHECK_THROWS_WITH_AS(load_run_config(dir.file("c.json")), doctest::Contains("oops"),
                         ConfigError);
  }
  SUBCASE("out-of-range values fail before compute") {
    write_text_file(dir.file("c.json"),
                    R"({"command": "gen-data", "physics": {"viscosity": -1.0},
                        "sampler": {"count": 5}, "output": {"training_set": "x.csv"}})");
    CHECK_THROWS_AS(load_run_config(dir.file("c.json")), ConfigError);

    write_text_file(dir.file("c2.json"),
                    R"({"command": "simulate", "domain": {"type": "unbounded"},
                        "simulate": {"placement": {"kind": "cubic_lattice", "per_side": 2, "spacing": 4.0},
                                     "backend": {"kind": "oracle", "order": 3},
                                     "dt": -0.5, "steps": 10},
                        "output": {"trajectory": "t.csv"}})");
    CHECK_THROWS_AS(load_run_config(dir.file("c2.json")), ConfigError);
  }
  SUBCASE("domain edge rules") {
    write_text_file(dir.file("c.json"),
                    R"({"command": "gen-data", "domain": {"type": "unbounded", "edge": 32.0},
                        "sampler": {"count": 5}, "output": {"training_set": "x.csv"}})");
    CHECK_THROWS_AS(load_run_config(dir.file("c.json")), ConfigError);
  }
  SUBCASE("unknown command") {
    write_text_file(dir.file("c.json"), R"({"command": "transmogrify"})");
    CHECK_THROWS_AS(load_run_config(dir.file("c.json")), ConfigError);
  }
}

TEST_CASE("gen-data produces deterministic CSVs") {
  TempDir dir;
  const std::string config = gen_config(dir, 50, 7);
  REQUIRE(run_cli("gen-data --config " + config) == 0);
  const std::string first = read_text_file(dir.file("train.csv"));
  std::size_t lines = 0;
  for (char c : first)
    if (c == '\n') ++lines;
  CHECK(lines == 51);  // header + 50 rows

  REQUIRE(run_cli("gen-data --config " + config) == 0);
  CHECK(read_text_file(dir.file("train.csv")) == first);

  SUBCASE("seed override changes the output") {
    REQUIRE(run_cli("gen-data --config " + config + " --seed 8") == 0);
    CHECK(read_text_file(dir.file("train.csv")) != first);
  }
}

TEST_CASE("command echo mismatch is an error") {
  TempDir dir;
  const std::string config = gen_config(dir, 5, 1);
  CHECK(run_cli("train --config " + config) != 0);
}

TEST_CASE("train/predict pipeline on a tiny dataset") {
  TempDir dir;
  REQUIRE(run_cli("gen-data --config " + gen_config(dir, 60, 3)) == 0);

  write_text_file(dir.file("train.json"), R"({
  "command": "train",
  "seed": 5,
  "domain": {"type": "unbounded"},
  "train": {"data": ")" + dir.file("train.csv") + R"(",
            "batch_size": 16, "epochs": 2, "face_r_cut": 5.0},
  "output": {"model": ")" + dir.file("model.json") + R"(",
             "loss_history": ")" + dir.file("loss.csv") + R"("}
})");
  REQUIRE(run_cli("train --config " + dir.file("train.json"), dir.file("train_log")) == 0);
  const std::string model_a = read_text_file(dir.file("model.json"));
  const std::string loss_csv = read_text_file(dir.file("loss.csv"));
  CHECK(loss_csv.rfind("epoch,lr,train_loss,test_loss\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : loss_csv)
    if (c == '\n') ++lines;
  CHECK(lines == 3);

  SUBCASE("training is reproducible byte for byte") {
    REQUIRE(run_cli("train --config " + dir.file("train.json")) == 0);
    CHECK(read_text_file(dir.file("model.json")) == model_a);
  }

  SUBCASE("prediction runs identically across worker counts") {
    write_text_file(dir.file("pos.csv"), "x,y,z\n0,0,0\n3,0,0\n0,4,0\n");
    write_text_file(dir.file("forces.csv"), "fx,fy,fz\n0,0,-1\n0,0,-1\n0,0,-1\n");
    write_text_file(dir.file("predict.json"), R"({
  "command": "predict",
  "domain": {"type": "unbounded"},
  "predict": {"model": ")" + dir.file("model.json") + R"(",
              "positions": ")" + dir.file("pos.csv") + R"(",
              "forces": ")" + dir.file("forces.csv") + R"("},
  "output": {"velocities": ")" + dir.file("vel.csv") + R"("}
})");
    REQUIRE(run_cli("predict --config " + dir.file("predict.json") + " --workers 1") == 0);
    const std::string v1 = read_text_file(dir.file("vel.csv"));
    REQUIRE(run_cli("predict --config " + dir.file("predict.json") + " --workers 4") == 0);
    CHECK(read_text_file(dir.file("vel.csv")) == v1);
  }

  SUBCASE("single-particle prediction is the bare mobility") {
    write_text_file(dir.file("pos1.csv"), "x,y,z\n0,0,0\n");
    write_text_file(dir.file("f1.csv"), "fx,fy,fz\n0,0,-1\n");
    write_text_file(dir.file("p1.json"), R"({
  "command": "predict",
  "domain": {"type": "unbounded"},
  "predict": {"model": ")" + dir.file("model.json") + R"(",
              "positions": ")" + dir.file("pos1.csv") + R"(",
              "forces": ")" + dir.file("f1.csv") + R"("},
  "output": {"velocities": ")" + dir.file("v1.csv") + R"("}
})");
    REQUIRE(run_cli("predict --config " + dir.file("p1.json")) == 0);
    const std::string out = read_text_file(dir.file("v1.csv"));
    const auto lines2 = out.find('\n');
    REQUIRE(lines2 != std::string::npos);
    const auto cells = split_csv_line(out.substr(lines2 + 1, out.find('\n', lines2 + 1) - lines2 - 1));
    REQUIRE(cells.size() == 3);
    CHECK(std::strtod(cells[2].c_str(), nullptr) ==
          doctest::Approx(-1.0 / (6.0 * 3.14159265358979324)).epsilon(1e-12));
  }

  SUBCASE("corrupt training rows report the line number") {
    std::string csv = read_text_file(dir.file("train.csv"));
    const auto second_line = csv.find('\n', csv.find('\n') + 1);
    csv.replace(second_line + 1, 5, "junk,");
    write_text_file(dir.file("corrupt.csv"), csv);
    write_text_file(dir.file("train_bad.json"), R"({
  "command": "train",
  "domain": {"type": "unbounded"},
  "train": {"data": ")" + dir.file("corrupt.csv") + R"(", "batch_size": 16, "epochs": 1},
  "output": {"model": ")" + dir.file("m.json") + R"(",
             "loss_history": ")" + dir.file("l.csv") + R"("}
})");
    CHECK(run_cli("train --config " + dir.file("train_bad.json"), dir.file("bad")) != 0);
    const std::string err = read_text_file(dir.file("bad") + ".err");
    CHECK(err.find("line 3") != std::string::npos);
  }
}

TEST_CASE("simulate command writes trajectories and reports overlaps") {
  TempDir dir;
  write_text_file(dir.file("sim.json"), R"({
  "command": "simulate",
  "seed": 2,
  "domain": {"type": "unbounded"},
  "simulate": {
    "placement": {"kind": "cubic_lattice", "per_side": 2, "spacing": 4.0},
    "backend": {"kind": "oracle", "order": 3},
    "force": {"uniform": [0, 0, -1]},
    "dt": 0.001, "steps": 100, "output_every": 10},
  "output": {"trajectory": ")" + dir.file("traj.csv") + R"("}
})");
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json")) == 0);
  const std::string traj = read_text_file(dir.file("traj.csv"));
  std::size_t lines = 0;
  for (char c : traj)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 11 * 8);  // header + (initial + 10 recorded frames) x 8 particles

  SUBCASE("deterministic rerun") {
    const std::string first = traj;
    REQUIRE(run_cli("simulate --config " + dir.file("sim.json")) == 0);
    CHECK(read_text_file(dir.file("traj.csv")) == first);
  }

  SUBCASE("morse self-assembly runs on 27 particles") {
    write_text_file(dir.file("morse.json"), R"({
  "command": "simulate",
  "seed": 3,
  "domain": {"type": "unbounded"},
  "simulate": {
    "placement": {"kind": "cubic_lattice", "per_side": 3, "spacing": 3.2},
    "backend": {"kind": "oracle", "order": 2},
    "force": {"morse": {"rho": 1.0, "depth": 1.0, "r_eq": 2.5}},
    "dt": 0.0005, "steps": 40, "output_every": 10},
  "output": {"trajectory": ")" + dir.file("morse.csv") + R"("}
})");
    CHECK(run_cli("simulate --config " + dir.file("morse.json")) == 0);
  }

  SUBCASE("overlap from an oversized step aborts with the step index") {
    write_text_file(dir.file("crash.json"), R"({
  "command": "simulate",
  "domain": {"type": "unbounded"},
  "simulate": {
    "placement": {"kind": "cubic_lattice", "per_side": 2, "spacing": 2.5},
    "backend": {"kind": "oracle", "order": 1},
    "force": {"morse": {"rho": 2.0, "depth": 5.0, "r_eq": 1.0}},
    "dt": 10.0, "steps": 10},
  "output": {"trajectory": ")" + dir.file("crash.csv") + R"("}
})");
    CHECK(run_cli("simulate --config " + dir.file("crash.json"), dir.file("crash")) != 0);
    CHECK(read_text_file(dir.file("crash") + ".err").find("step") != std::string::npos);
  }
}

TEST_CASE("bench command emits the three tables") {
  TempDir dir;
  write_text_file(dir.file("bench.json"), R"({
  "command": "bench",
  "domain": {"type": "unbounded"},
  "bench": {
    "lattice": {"L_values": [2.5, 6.0, 100.0], "direction": "perpendicular",
                "backend": {"kind": "oracle", "order": 3}},
    "chain": {"N_values": [1, 5], "L": 3.0, "direction": "perpendicular",
              "backend": {"kind": "oracle", "order": 3}}},
  "output": {"lattice_table": ")" + dir.file("lattice.csv") + R"(",
             "chain_table": ")" + dir.file("chain.csv") + R"(",
             "timing_table": ")" + dir.file("timing.csv") + R"("}
})");
  REQUIRE(run_cli("bench --config " + dir.file("bench.json")) == 0);
  const std::string lattice = read_text_file(dir.file("lattice.csv"));
  CHECK(lattice.find("with_faces") != std::string::npos);
  CHECK(lattice.find("without_faces") != std::string::npos);
  const std::string chain = read_text_file(dir.file("chain.csv"));
  CHECK(chain.rfind("N,L,direction,backend,central_velocity,rel_error_vs_oracle\n", 0) == 0);
}

}  // TEST_SUITE
