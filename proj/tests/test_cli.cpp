#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kBin = POLARCP_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kBin + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -2;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

// Fresh scratch directory per test case; everything lives under one root so
// a previous run's leftovers never leak in.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void make_dataset(const fs::path& dir, int n, int seed = 7) {
  REQUIRE(run("synth --n " + std::to_string(n) + " --seed " +
              std::to_string(seed) + " --out " + dir.string()) == 0);
}

}  // namespace

TEST_CASE("synth writes a dataset and a manifest, reruns byte identical") {
  const fs::path dir = scratch("synth");
  REQUIRE(run("synth --n 50 --seed 3 --out " + dir.string()) == 0);
  REQUIRE(fs::exists(dir / "dataset.csv"));
  REQUIRE(fs::exists(dir / "synth_manifest.json"));

  const std::string csv = slurp(dir / "dataset.csv");
  const auto lines = lines_of(csv);
  REQUIRE(lines.size() == 52);  // comment + header + 50 rows
  CHECK(lines[0].rfind("#", 0) == 0);
  CHECK(lines[1] ==
        "id,f0,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,f12,f13,f14,f15,"
        "gt_angle,gt_mag,pred_angle,pred_mag");
  const std::string manifest = slurp(dir / "synth_manifest.json");
  CHECK(manifest.find("\"command\": \"synth\"") != std::string::npos);
  CHECK(manifest.find("\"n\": 50") != std::string::npos);

  const fs::path dir2 = scratch("synth_rerun");
  REQUIRE(run("synth --n 50 --seed 3 --out " + dir2.string()) == 0);
  CHECK(slurp(dir2 / "dataset.csv") == csv);

  // A different seed must change the data.
  const fs::path dir3 = scratch("synth_seed");
  REQUIRE(run("synth --n 50 --seed 4 --out " + dir3.string()) == 0);
  CHECK(slurp(dir3 / "dataset.csv") != csv);
}

TEST_CASE("config file seeds options and explicit flags win") {
  const fs::path dir = scratch("config");
  {
    std::ofstream os(dir / "cfg.json");
    os << "{\"n\": 23, \"seed\": 9, \"out\": \"" << (dir / "from_cfg").string()
       << "\"}\n";
  }
  REQUIRE(run("synth --config " + (dir / "cfg.json").string()) == 0);
  CHECK(lines_of(slurp(dir / "from_cfg" / "dataset.csv")).size() == 25);

  // --n on the command line overrides the config value.
  REQUIRE(run("synth --config " + (dir / "cfg.json").string() + " --n 11 --out " +
              (dir / "override").string()) == 0);
  CHECK(lines_of(slurp(dir / "override" / "dataset.csv")).size() == 13);

  // Config seed matches an explicit --seed 9 run.
  const fs::path ref = scratch("config_ref");
  REQUIRE(run("synth --n 23 --seed 9 --out " + ref.string()) == 0);
  CHECK(slurp(dir / "from_cfg" / "dataset.csv") == slurp(ref / "dataset.csv"));

  CHECK(run("synth --config " + (dir / "missing.json").string()) == 2);
  {
    std::ofstream os(dir / "broken.json");
    os << "{not json";
  }
  CHECK(run("synth --config " + (dir / "broken.json").string()) == 1);
}

TEST_CASE("usage errors exit 1, io errors exit 2") {
  const fs::path dir = scratch("errors");
  CHECK(run("") == 1);                    // a subcommand is required
  CHECK(run("frobnicate") == 1);          // unknown subcommand
  CHECK(run("synth --bogus 3") == 1);     // unknown flag
  CHECK(run("synth --n 0 --out " + dir.string()) == 1);  // invalid parameter
  CHECK(run("train --alpha 0.2") == 1);   // missing required --data
  CHECK(run("--help") == 0);

  make_dataset(dir, 60);
  const std::string data = (dir / "dataset.csv").string();
  CHECK(run("train --data " + (dir / "nope.csv").string()) == 2);
  CHECK(run("evaluate --data " + data +
            " --alpha 1.5 --method cp --n-trials 2 --n-cal 20 --n-test 20 "
            "--n-train 0 --out " + dir.string()) == 1);
  CHECK(run("calibrate --data " + data + " --method cqr --n-cal 30 --out " +
            dir.string()) == 1);  // cqr needs --model
  CHECK(run("calibrate --data " + data + " --n-cal 500 --out " +
            dir.string()) == 1);  // more rows than the file has
}

TEST_CASE("evaluate writes results and is reproducible, serial included") {
  const fs::path dir = scratch("evaluate");
  make_dataset(dir, 600);
  const std::string data = (dir / "dataset.csv").string();
  const std::string common =
      "evaluate --data " + data +
      " --method cp --target joint angle --correction none bonferroni"
      " --alpha 0.3 --n-trials 3 --n-cal 150 --n-test 300 --n-train 0";

  REQUIRE(run(common + " --out " + (dir / "a").string()) == 0);
  REQUIRE(fs::exists(dir / "a" / "results.csv"));
  REQUIRE(fs::exists(dir / "a" / "evaluate_manifest.json"));
  const std::string csv = slurp(dir / "a" / "results.csv");
  const auto lines = lines_of(csv);
  // Header + joint/none + joint/bonferroni + angle/none.
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].rfind("method,target,correction,alpha", 0) == 0);

  REQUIRE(run(common + " --out " + (dir / "b").string()) == 0);
  CHECK(slurp(dir / "b" / "results.csv") == csv);

  // The serial reference produces the same numbers.
  REQUIRE(run(common + " --serial --out " + (dir / "c").string()) == 0);
  CHECK(slurp(dir / "c" / "results.csv") == csv);
}

TEST_CASE("train, calibrate, heatmap chain runs and reruns byte identical") {
  const fs::path dir = scratch("chain");
  make_dataset(dir, 500);
  const std::string data = (dir / "dataset.csv").string();

  const std::string train_cmd =
      "train --data " + data +
      " --n-train 300 --alpha 0.3 --epochs 40 --hidden 12 --seed 5 --out ";
  REQUIRE(run(train_cmd + (dir / "model").string()) == 0);
  const fs::path model = dir / "model" / "heads.json";
  REQUIRE(fs::exists(model));
  REQUIRE(fs::exists(dir / "model" / "train_manifest.json"));

  // Same seed, same bytes; training is deterministic.
  REQUIRE(run(train_cmd + (dir / "model2").string()) == 0);
  CHECK(slurp(dir / "model2" / "heads.json") == slurp(model));

  const std::string cal_cmd =
      "calibrate --data " + data + " --method cqr --model " + model.string() +
      " --skip 300 --n-cal 150 --alpha 0.2 0.4 0.6 --correction none --out ";
  REQUIRE(run(cal_cmd + (dir / "cal").string()) == 0);
  const fs::path bundle = dir / "cal" / "calibration.json";
  REQUIRE(fs::exists(bundle));
  const std::string bundle_text = slurp(bundle);
  CHECK(bundle_text.find("\"entries\"") != std::string::npos);
  CHECK(bundle_text.find("\"cqr\"") != std::string::npos);

  REQUIRE(run(cal_cmd + (dir / "cal2").string()) == 0);
  CHECK(slurp(dir / "cal2" / "calibration.json") == bundle_text);

  const std::string heat_cmd = "heatmap --calibration " + bundle.string() +
                               " --model " + model.string() + " --data " +
                               data + " --width 64 --height 48 --out ";
  REQUIRE(run(heat_cmd + (dir / "map").string()) == 0);
  const std::string pgm = slurp(dir / "map" / "heatmap.pgm");
  CHECK(pgm.rfind("P5\n64 48\n255\n", 0) == 0);
  CHECK(pgm.size() == std::string("P5\n64 48\n255\n").size() + 64 * 48);
  const std::string legend = slurp(dir / "map" / "heatmap_legend.json");
  CHECK(legend.find("\"levels\"") != std::string::npos);
  CHECK(legend.find("\"target_coverage\"") != std::string::npos);

  REQUIRE(run(heat_cmd + (dir / "map2").string()) == 0);
  CHECK(slurp(dir / "map2" / "heatmap.pgm") == pgm);
  CHECK(slurp(dir / "map2" / "heatmap_legend.json") == legend);

  // Ladder selection errors: absent correction and unknown sample id.
  CHECK(run("heatmap --calibration " + bundle.string() + " --model " +
            model.string() + " --data " + data +
            " --correction sidak --out " + (dir / "bad").string()) == 1);
  CHECK(run(heat_cmd + (dir / "bad2").string() + " --sample-id 999999") == 1);
  // cqr bundle without --model cannot rebuild its calibrators.
  CHECK(run("heatmap --calibration " + bundle.string() + " --data " + data +
            " --out " + (dir / "bad3").string()) == 1);
}

TEST_CASE("calibrate bundles cp ladders usable by heatmap") {
  const fs::path dir = scratch("cp_ladder");
  make_dataset(dir, 400);
  const std::string data = (dir / "dataset.csv").string();
  REQUIRE(run("calibrate --data " + data +
              " --method cp --n-cal 300 --alpha 0.1 0.3 0.5"
              " --correction bonferroni --out " + (dir / "cal").string()) == 0);
  REQUIRE(run("heatmap --calibration " + (dir / "cal" / "calibration.json").string() +
              " --data " + data + " --correction bonferroni --width 32"
              " --height 32 --no-gt --out " + (dir / "map").string()) == 0);
  const std::string pgm = slurp(dir / "map" / "heatmap.pgm");
  CHECK(pgm.rfind("P5\n32 32\n255\n", 0) == 0);
  // --no-gt leaves no full-intensity overlay pixels.
  const std::size_t header = std::string("P5\n32 32\n255\n").size();
  for (std::size_t k = header; k < pgm.size(); ++k) {
    REQUIRE(static_cast<unsigned char>(pgm[k]) != 255);
  }
}
