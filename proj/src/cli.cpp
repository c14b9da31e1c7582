#include "polarcp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarcp/conformal.hpp"
#include "polarcp/dataset.hpp"
#include "polarcp/errors.hpp"
#include "polarcp/eval.hpp"
#include "polarcp/heatmap.hpp"
#include "polarcp/quantreg.hpp"
#include "polarcp/synthdata.hpp"

namespace polarcp {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// --config <file> seeds option values before the regular flags are parsed,
// so explicit flags always win. Keys are the long option names without the
// leading dashes ("n-cal", "angle-noise", ...).
json load_config_json(int argc, const char* const* argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
      break;
    }
    if (arg.rfind("--config=", 0) == 0) {
      path = std::string(arg.substr(9));
      break;
    }
  }
  if (path.empty()) return json::object();
  std::ifstream is(path);
  if (!is) throw IoError("config: cannot open " + path);
  try {
    json j;
    is >> j;
    if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ValidationError("config: bad JSON in " + path + ": " + e.what());
  }
}

template <typename T>
void cfg(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError("config: bad value for '" + std::string(key) +
                          "': " + e.what());
  }
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + out + ": " + ec.message());
  return dir;
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os << j.dump(2) << "\n";
  os.flush();
  if (!os) throw IoError("write failed: " + path.string());
}

// One manifest next to every command's outputs: the effective parameters and
// the files read and written. Deliberately no timestamps or host details, so
// reruns stay byte identical.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& params, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  write_json_file(out_dir / (command + "_manifest.json"),
                  json{{"command", command},
                       {"parameters", params},
                       {"inputs", inputs},
                       {"outputs", outputs}});
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(method_from_string(n));
  return out;
}

std::vector<Target> parse_targets(const std::vector<std::string>& names) {
  std::vector<Target> out;
  for (const auto& n : names) out.push_back(target_from_string(n));
  return out;
}

std::vector<CorrectionKind> parse_corrections(
    const std::vector<std::string>& names) {
  std::vector<CorrectionKind> out;
  for (const auto& n : names) out.push_back(correction_from_string(n));
  return out;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  GeneratorConfig gen;
  std::string out = "out";
};

int cmd_synth(const SynthArgs& a) {
  const fs::path dir = ensure_out_dir(a.out);
  const std::vector<Sample> samples = generate(a.gen);
  const fs::path csv = dir / "dataset.csv";
  write_dataset_csv(csv, samples);
  write_manifest(dir, "synth",
                 {{"n", a.gen.n},
                  {"seed", a.gen.seed},
                  {"angle-noise", a.gen.angle_noise},
                  {"mag-noise", a.gen.mag_noise},
                  {"angle-bias", a.gen.angle_bias},
                  {"mag-bias", a.gen.mag_bias},
                  {"feature-dim", a.gen.feature_dim}},
                 {}, {csv.string()});
  std::cout << "wrote " << samples.size() << " samples to " << csv.string()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string data;
  double alpha = 0.1;
  int n_train = 0;  // 0 = use every row
  TrainConfig train;
  std::string out = "out";
};

int cmd_train(const TrainArgs& a) {
  const std::vector<Sample> rows = read_dataset_csv(a.data);
  std::span<const Sample> train_rows(rows);
  if (a.n_train < 0)
    throw ValidationError("train: n-train must be >= 0");
  if (a.n_train > 0) {
    if (static_cast<std::size_t>(a.n_train) > rows.size())
      throw ValidationError("train: n-train exceeds dataset size " +
                            std::to_string(rows.size()));
    train_rows = train_rows.first(a.n_train);
  }
  const fs::path dir = ensure_out_dir(a.out);
  const QuantileHeads heads = train_quantile_heads(train_rows, a.alpha, a.train);
  const fs::path model = dir / "heads.json";
  save_heads(model, heads);
  write_manifest(dir, "train",
                 {{"data", a.data},
                  {"alpha", a.alpha},
                  {"n-train", a.n_train},
                  {"epochs", a.train.epochs},
                  {"batch-size", a.train.batch_size},
                  {"lr", a.train.learning_rate},
                  {"momentum", a.train.momentum},
                  {"anneal-fraction", a.train.anneal_fraction},
                  {"hidden", a.train.hidden_sizes},
                  {"seed", a.train.seed}},
                 {a.data}, {model.string()});
  std::cout << "trained quantile heads on " << train_rows.size()
            << " samples, final pinball loss "
            << format_double(mean_loss(heads, train_rows)) << ", saved to "
            << model.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateArgs {
  std::string data;
  std::string method = "cp";
  std::string model;  // quantile heads, required for cqr
  std::vector<double> alphas = {0.2};
  std::vector<std::string> corrections = {"none"};
  int skip = 0;
  int n_cal = 500;
  std::string out = "out";
};

int cmd_calibrate(const CalibrateArgs& a) {
  const Method method = method_from_string(a.method);
  const std::vector<Sample> rows = read_dataset_csv(a.data);
  if (a.skip < 0) throw ValidationError("calibrate: skip must be >= 0");
  if (a.n_cal < 1) throw ValidationError("calibrate: n-cal must be >= 1");
  if (static_cast<std::size_t>(a.skip) + a.n_cal > rows.size())
    throw ValidationError("calibrate: skip + n-cal exceeds dataset size " +
                          std::to_string(rows.size()));
  const std::span<const Sample> cal =
      std::span<const Sample>(rows).subspan(a.skip, a.n_cal);

  std::shared_ptr<const QuantileHeads> heads;
  std::vector<std::string> inputs = {a.data};
  if (method == Method::kCqr) {
    if (a.model.empty())
      throw ValidationError("calibrate: --model is required for method cqr");
    heads = std::make_shared<const QuantileHeads>(load_heads(a.model));
    inputs.push_back(a.model);
  }

  json entries = json::array();
  for (double alpha : a.alphas) {
    for (const std::string& cname : a.corrections) {
      const Correction corr{correction_from_string(cname), 2};
      const JointCalibrator jc =
          JointCalibrator::calibrate(method, corr, alpha, cal, heads);
      entries.push_back(jc.to_json());
    }
  }

  const fs::path dir = ensure_out_dir(a.out);
  const fs::path bundle_path = dir / "calibration.json";
  write_json_file(bundle_path, json{{"method", a.method},
                                    {"n_cal", a.n_cal},
                                    {"model", a.model},
                                    {"entries", entries}});
  write_manifest(dir, "calibrate",
                 {{"data", a.data},
                  {"method", a.method},
                  {"model", a.model},
                  {"alpha", a.alphas},
                  {"correction", a.corrections},
                  {"skip", a.skip},
                  {"n-cal", a.n_cal}},
                 inputs, {bundle_path.string()});
  std::cout << "calibrated " << entries.size() << " (alpha, correction) cells on "
            << a.n_cal << " samples, saved to " << bundle_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string data;
  std::vector<std::string> methods = {"cp", "cqr"};
  std::vector<std::string> targets = {"joint"};
  std::vector<std::string> corrections = {"none", "bonferroni", "sidak",
                                          "maxrank"};
  std::vector<double> alphas = {0.3};
  ProtocolConfig proto;
  bool serial = false;
  std::string out = "out";
};

int cmd_evaluate(EvaluateArgs a) {
  const std::vector<Sample> rows = read_dataset_csv(a.data);
  a.proto.methods = parse_methods(a.methods);
  a.proto.targets = parse_targets(a.targets);
  a.proto.corrections = parse_corrections(a.corrections);
  a.proto.alphas = a.alphas;

  const ProtocolResult result =
      a.serial ? run_protocol_serial(rows, a.proto) : run_protocol(rows, a.proto);

  const fs::path dir = ensure_out_dir(a.out);
  const fs::path csv = dir / "results.csv";
  {
    std::ofstream os(csv);
    if (!os) throw IoError("cannot open for writing: " + csv.string());
    write_results_csv(os, result.aggregates);
    os.flush();
    if (!os) throw IoError("write failed: " + csv.string());
  }
  print_results_table(std::cout, result.aggregates);
  write_manifest(dir, "evaluate",
                 {{"data", a.data},
                  {"method", a.methods},
                  {"target", a.targets},
                  {"correction", a.corrections},
                  {"alpha", a.alphas},
                  {"n-trials", a.proto.n_trials},
                  {"n-cal", a.proto.n_cal},
                  {"n-test", a.proto.n_test},
                  {"n-train", a.proto.n_train},
                  {"seed", a.proto.seed},
                  {"epochs", a.proto.train.epochs},
                  {"batch-size", a.proto.train.batch_size},
                  {"lr", a.proto.train.learning_rate},
                  {"momentum", a.proto.train.momentum},
                  {"anneal-fraction", a.proto.train.anneal_fraction},
                  {"hidden", a.proto.train.hidden_sizes},
                  {"train-seed", a.proto.train.seed},
                  {"serial", a.serial}},
                 {a.data}, {csv.string()});
  std::cout << "wrote results to " << csv.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// heatmap

struct HeatmapArgs {
  std::string calibration;
  std::string model;
  std::string data;
  std::int64_t sample_id = -1;  // -1 = first row of the dataset
  std::string correction = "none";
  int width = 256;
  int height = 256;
  double origin_x = 0.5;
  double origin_y = 0.5;
  bool no_gt = false;
  std::string out = "out";
};

int cmd_heatmap(const HeatmapArgs& a) {
  std::ifstream bundle_is(a.calibration);
  if (!bundle_is) throw IoError("heatmap: cannot open " + a.calibration);
  json bundle;
  try {
    bundle_is >> bundle;
  } catch (const json::exception& e) {
    throw ValidationError("heatmap: bad calibration JSON: " + std::string(e.what()));
  }

  Method method;
  std::vector<std::string> inputs = {a.calibration, a.data};
  std::shared_ptr<const QuantileHeads> heads;
  try {
    method = method_from_string(bundle.at("method").get<std::string>());
  } catch (const json::exception& e) {
    throw ValidationError("heatmap: calibration bundle missing method: " +
                          std::string(e.what()));
  }
  if (method == Method::kCqr) {
    if (a.model.empty())
      throw ValidationError("heatmap: --model is required for cqr calibrations");
    heads = std::make_shared<const QuantileHeads>(load_heads(a.model));
    inputs.push_back(a.model);
  }

  const std::vector<Sample> rows = read_dataset_csv(a.data);
  if (rows.empty()) throw ValidationError("heatmap: dataset is empty");
  const Sample* query = &rows.front();
  if (a.sample_id >= 0) {
    query = nullptr;
    for (const Sample& s : rows) {
      if (s.id == a.sample_id) {
        query = &s;
        break;
      }
    }
    if (!query)
      throw ValidationError("heatmap: no sample with id " +
                            std::to_string(a.sample_id));
  }

  const CorrectionKind wanted = correction_from_string(a.correction);
  std::vector<std::pair<double, JointCalibrator>> selected;  // coverage keyed
  try {
    for (const json& e : bundle.at("entries")) {
      if (correction_from_string(e.at("correction").get<std::string>()) != wanted)
        continue;
      JointCalibrator jc = JointCalibrator::from_json(e, heads);
      selected.emplace_back(1.0 - jc.alpha(), std::move(jc));
    }
  } catch (const json::exception& e) {
    throw ValidationError("heatmap: bad calibration entries: " +
                          std::string(e.what()));
  }
  if (selected.empty())
    throw ValidationError("heatmap: no calibration entries with correction '" +
                          a.correction + "'");
  std::sort(selected.begin(), selected.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<CoverageLevel> levels;
  levels.reserve(selected.size());
  for (const auto& [coverage, jc] : selected) {
    levels.push_back({coverage, jc.interval(*query)});
  }

  const HeatmapGrid grid =
      rasterize(levels, a.origin_x, a.origin_y, a.width, a.height);
  std::optional<MotionVector> gt;
  if (!a.no_gt) gt = from_polar(query->gt_angle, query->gt_mag);
  const PgmImage img = render_heatmap(grid, gt);

  const fs::path dir = ensure_out_dir(a.out);
  const fs::path pgm = dir / "heatmap.pgm";
  const fs::path legend = dir / "heatmap_legend.json";
  write_pgm(pgm, img);
  write_json_file(legend, legend_json(grid, levels));
  write_manifest(dir, "heatmap",
                 {{"calibration", a.calibration},
                  {"model", a.model},
                  {"data", a.data},
                  {"sample-id", a.sample_id},
                  {"correction", a.correction},
                  {"width", a.width},
                  {"height", a.height},
                  {"origin-x", a.origin_x},
                  {"origin-y", a.origin_y},
                  {"no-gt", a.no_gt}},
                 inputs, {pgm.string(), legend.string()});
  std::cout << "wrote " << a.width << "x" << a.height << " heatmap with "
            << levels.size() << " levels to " << pgm.string() << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Conformal prediction intervals for 2-D motion vectors in polar form"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  TrainArgs train_args;
  CalibrateArgs cal_args;
  EvaluateArgs eval_args;
  HeatmapArgs heat_args;
  std::string config_path;  // consumed by load_config_json; registered so
                            // CLI11 accepts the flag

  try {
    const json cfg_json = load_config_json(argc, argv);

    cfg(cfg_json, "n", synth_args.gen.n);
    cfg(cfg_json, "seed", synth_args.gen.seed);
    cfg(cfg_json, "angle-noise", synth_args.gen.angle_noise);
    cfg(cfg_json, "mag-noise", synth_args.gen.mag_noise);
    cfg(cfg_json, "angle-bias", synth_args.gen.angle_bias);
    cfg(cfg_json, "mag-bias", synth_args.gen.mag_bias);
    cfg(cfg_json, "feature-dim", synth_args.gen.feature_dim);
    cfg(cfg_json, "out", synth_args.out);

    cfg(cfg_json, "data", train_args.data);
    cfg(cfg_json, "alpha", train_args.alpha);
    cfg(cfg_json, "n-train", train_args.n_train);
    cfg(cfg_json, "epochs", train_args.train.epochs);
    cfg(cfg_json, "batch-size", train_args.train.batch_size);
    cfg(cfg_json, "lr", train_args.train.learning_rate);
    cfg(cfg_json, "momentum", train_args.train.momentum);
    cfg(cfg_json, "anneal-fraction", train_args.train.anneal_fraction);
    cfg(cfg_json, "hidden", train_args.train.hidden_sizes);
    cfg(cfg_json, "seed", train_args.train.seed);
    cfg(cfg_json, "out", train_args.out);

    cfg(cfg_json, "data", cal_args.data);
    cfg(cfg_json, "method", cal_args.method);
    cfg(cfg_json, "model", cal_args.model);
    cfg(cfg_json, "alpha", cal_args.alphas);
    cfg(cfg_json, "correction", cal_args.corrections);
    cfg(cfg_json, "skip", cal_args.skip);
    cfg(cfg_json, "n-cal", cal_args.n_cal);
    cfg(cfg_json, "out", cal_args.out);

    cfg(cfg_json, "data", eval_args.data);
    cfg(cfg_json, "method", eval_args.methods);
    cfg(cfg_json, "target", eval_args.targets);
    cfg(cfg_json, "correction", eval_args.corrections);
    cfg(cfg_json, "alpha", eval_args.alphas);
    cfg(cfg_json, "n-trials", eval_args.proto.n_trials);
    cfg(cfg_json, "n-cal", eval_args.proto.n_cal);
    cfg(cfg_json, "n-test", eval_args.proto.n_test);
    cfg(cfg_json, "n-train", eval_args.proto.n_train);
    cfg(cfg_json, "seed", eval_args.proto.seed);
    cfg(cfg_json, "epochs", eval_args.proto.train.epochs);
    cfg(cfg_json, "batch-size", eval_args.proto.train.batch_size);
    cfg(cfg_json, "lr", eval_args.proto.train.learning_rate);
    cfg(cfg_json, "momentum", eval_args.proto.train.momentum);
    cfg(cfg_json, "anneal-fraction", eval_args.proto.train.anneal_fraction);
    cfg(cfg_json, "hidden", eval_args.proto.train.hidden_sizes);
    cfg(cfg_json, "train-seed", eval_args.proto.train.seed);
    cfg(cfg_json, "serial", eval_args.serial);
    cfg(cfg_json, "out", eval_args.out);

    cfg(cfg_json, "calibration", heat_args.calibration);
    cfg(cfg_json, "model", heat_args.model);
    cfg(cfg_json, "data", heat_args.data);
    cfg(cfg_json, "sample-id", heat_args.sample_id);
    cfg(cfg_json, "correction", heat_args.correction);
    cfg(cfg_json, "width", heat_args.width);
    cfg(cfg_json, "height", heat_args.height);
    cfg(cfg_json, "origin-x", heat_args.origin_x);
    cfg(cfg_json, "origin-y", heat_args.origin_y);
    cfg(cfg_json, "no-gt", heat_args.no_gt);
    cfg(cfg_json, "out", heat_args.out);

    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic motion-vector forecast dataset");
    synth->add_option("--n", synth_args.gen.n, "Number of samples");
    synth->add_option("--seed", synth_args.gen.seed, "Generator seed");
    synth->add_option("--angle-noise", synth_args.gen.angle_noise,
                      "Angle noise scale per stratum (3 values, radians)");
    synth->add_option("--mag-noise", synth_args.gen.mag_noise,
                      "Magnitude noise scale per stratum (3 values)");
    synth->add_option("--angle-bias", synth_args.gen.angle_bias,
                      "Systematic angle bias (radians)");
    synth->add_option("--mag-bias", synth_args.gen.mag_bias,
                      "Systematic magnitude bias");
    synth->add_option("--feature-dim", synth_args.gen.feature_dim,
                      "Feature vector length (>= 9)");
    synth->add_option("--out", synth_args.out, "Output directory");
    synth->add_option("--config", config_path, "JSON config file");

    CLI::App* train = app.add_subcommand(
        "train", "Train quantile heads on the leading rows of a dataset");
    train->add_option("--data", train_args.data, "Dataset CSV")->required();
    train->add_option("--alpha", train_args.alpha,
                      "Miscoverage level targeted by the heads");
    train->add_option("--n-train", train_args.n_train,
                      "Rows to train on from the head of the file (0 = all)");
    train->add_option("--epochs", train_args.train.epochs, "Training epochs");
    train->add_option("--batch-size", train_args.train.batch_size, "Minibatch size");
    train->add_option("--lr", train_args.train.learning_rate, "Learning rate");
    train->add_option("--momentum", train_args.train.momentum, "SGD momentum");
    train->add_option("--anneal-fraction", train_args.train.anneal_fraction,
                      "Fraction of epochs with learning rate annealed to 0");
    train->add_option("--hidden", train_args.train.hidden_sizes,
                      "Hidden layer sizes");
    train->add_option("--seed", train_args.train.seed, "Training seed");
    train->add_option("--out", train_args.out, "Output directory");
    train->add_option("--config", config_path, "JSON config file");

    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "Calibrate joint interval thresholds on held-out rows");
    calibrate->add_option("--data", cal_args.data, "Dataset CSV")->required();
    calibrate->add_option("--method", cal_args.method, "cp or cqr");
    calibrate->add_option("--model", cal_args.model,
                          "Trained quantile heads JSON (required for cqr)");
    calibrate->add_option("--alpha", cal_args.alphas,
                          "Miscoverage levels to calibrate (one per ladder rung)");
    calibrate->add_option("--correction", cal_args.corrections,
                          "none, bonferroni, sidak or maxrank (repeatable)");
    calibrate->add_option("--skip", cal_args.skip,
                          "Rows at the head of the file to leave out (e.g. "
                          "the training block)");
    calibrate->add_option("--n-cal", cal_args.n_cal, "Calibration rows");
    calibrate->add_option("--out", cal_args.out, "Output directory");
    calibrate->add_option("--config", config_path, "JSON config file");

    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Run the shuffled-trials coverage protocol");
    evaluate->add_option("--data", eval_args.data, "Dataset CSV")->required();
    evaluate->add_option("--method", eval_args.methods, "cp, cqr (repeatable)");
    evaluate->add_option("--target", eval_args.targets,
                         "angle, magnitude, joint (repeatable)");
    evaluate->add_option("--correction", eval_args.corrections,
                         "Corrections for the joint target (repeatable)");
    evaluate->add_option("--alpha", eval_args.alphas,
                         "Miscoverage levels (repeatable)");
    evaluate->add_option("--n-trials", eval_args.proto.n_trials,
                         "Shuffled calibration/test trials");
    evaluate->add_option("--n-cal", eval_args.proto.n_cal,
                         "Calibration samples per trial");
    evaluate->add_option("--n-test", eval_args.proto.n_test,
                         "Test samples per trial");
    evaluate->add_option("--n-train", eval_args.proto.n_train,
                         "Rows reserved for quantile-head training");
    evaluate->add_option("--seed", eval_args.proto.seed, "Protocol seed");
    evaluate->add_option("--epochs", eval_args.proto.train.epochs,
                         "Quantile-head training epochs");
    evaluate->add_option("--batch-size", eval_args.proto.train.batch_size,
                         "Quantile-head minibatch size");
    evaluate->add_option("--lr", eval_args.proto.train.learning_rate,
                         "Quantile-head learning rate");
    evaluate->add_option("--momentum", eval_args.proto.train.momentum,
                         "Quantile-head SGD momentum");
    evaluate->add_option("--anneal-fraction",
                         eval_args.proto.train.anneal_fraction,
                         "Quantile-head learning rate anneal fraction");
    evaluate->add_option("--hidden", eval_args.proto.train.hidden_sizes,
                         "Quantile-head hidden layer sizes");
    evaluate->add_option("--train-seed", eval_args.proto.train.seed,
                         "Quantile-head training seed");
    evaluate->add_flag("--serial", eval_args.serial,
                       "Use the serial reference implementation");
    evaluate->add_option("--out", eval_args.out, "Output directory");
    evaluate->add_option("--config", config_path, "JSON config file");

    CLI::App* heatmap = app.add_subcommand(
        "heatmap", "Rasterize a nested coverage-region map for one sample");
    heatmap->add_option("--calibration", heat_args.calibration,
                        "Calibration bundle JSON")->required();
    heatmap->add_option("--model", heat_args.model,
                        "Trained quantile heads JSON (required for cqr)");
    heatmap->add_option("--data", heat_args.data, "Dataset CSV")->required();
    heatmap->add_option("--sample-id", heat_args.sample_id,
                        "Query sample id (default: first row)");
    heatmap->add_option("--correction", heat_args.correction,
                        "Correction whose ladder is rendered");
    heatmap->add_option("--width", heat_args.width, "Image width in pixels");
    heatmap->add_option("--height", heat_args.height, "Image height in pixels");
    heatmap->add_option("--origin-x", heat_args.origin_x,
                        "Motion origin x, unit-square coordinates");
    heatmap->add_option("--origin-y", heat_args.origin_y,
                        "Motion origin y, unit-square coordinates");
    heatmap->add_flag("--no-gt", heat_args.no_gt,
                      "Skip the ground-truth overlay");
    heatmap->add_option("--out", heat_args.out, "Output directory");
    heatmap->add_option("--config", config_path, "JSON config file");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 1;
    }

    if (*synth) return cmd_synth(synth_args);
    if (*train) return cmd_train(train_args);
    if (*calibrate) return cmd_calibrate(cal_args);
    if (*evaluate) return cmd_evaluate(eval_args);
    if (*heatmap) return cmd_heatmap(heat_args);
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace polarcp
