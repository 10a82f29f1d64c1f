// Command-line front end: dataset preparation, training, evaluation, rate
// sweeps, cost reports, and netlist export.
//
// Exit codes: 0 success, 1 validation error (bad flags or config), 2 data
// error (missing or malformed files). Long runs print one progress line per
// epoch to stderr; machine-readable outputs go to stdout or files.

#include <sys/stat.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lgn/common.hpp"
#include "lgn/cost.hpp"
#include "lgn/ecg.hpp"
#include "lgn/idx.hpp"
#include "lgn/metrics.hpp"
#include "lgn/netlist.hpp"
#include "lgn/network.hpp"
#include "lgn/rate.hpp"
#include "lgn/rng.hpp"
#include "lgn/runconfig.hpp"

namespace {

using namespace lgn;

// Published per-class beat totals (N, S, V, F, Q) over the 44 unpaced
// records; cmd_features prints its counts next to these.
constexpr uint64_t kPublishedTotals[5] = {89474, 6986, 3018, 801, 15};
constexpr const char* kCountClassNames[5] = {"N", "S", "V", "F", "Q"};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_text(const std::string& path) {
  std::vector<uint8_t> bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void make_dirs(const std::string& path) {
  if (path.empty() || path == ".") return;
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec)
    throw ArgumentError("cannot create directory '" + path +
                        "': " + ec.message());
}

/**
 * Loads a dataset by path shape: "images,labels" reads an IDX pair (MNIST
 * style; `rate_encoded` picks pixel/255 over the binary threshold), ".bin"
 * reads packed binary features, ".csv" reads the real-feature table.
 */
Dataset load_dataset(const std::string& spec, bool rate_encoded) {
  size_t comma = spec.find(',');
  if (comma != std::string::npos) {
    IdxImages images = read_idx_images(spec.substr(0, comma));
    std::vector<uint8_t> labels = read_idx_labels(spec.substr(comma + 1));
    return idx_to_dataset(images, labels, rate_encoded);
  }
  if (ends_with(spec, ".bin")) return read_packed_features(spec);
  if (ends_with(spec, ".csv")) return parse_features_csv(read_text(spec));
  throw ArgumentError("dataset path '" + spec +
                      "': expected .bin, .csv, or an 'images,labels' IDX pair");
}

void check_width(uint64_t net_width, uint64_t data_width) {
  if (net_width != data_width)
    throw ArgumentError("the network expects input width " +
                        std::to_string(net_width) + " but the dataset is " +
                        std::to_string(data_width) + " wide");
}

HardNetwork to_hard(const LoadedCheckpoint& lc) {
  return lc.hard ? *lc.hardnet : discretize(*lc.soft);
}

double fraction_correct(const std::vector<int>& preds, const Dataset& data) {
  size_t correct = 0;
  for (size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == int(data.y[i])) ++correct;
  return double(correct) / double(preds.size());
}

std::vector<uint64_t> parse_length_list(const std::string& s) {
  std::vector<uint64_t> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string tok = s.substr(pos, comma - pos);
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0' || errno != 0 || v < 1)
      throw ArgumentError("bad stream length '" + tok +
                          "' (expected positive integers)");
    out.push_back(uint64_t(v));
    pos = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// features
// ---------------------------------------------------------------------------

struct FeaturesArgs {
  std::string records_dir;
  std::string out_dir = ".";
  std::string format = "wfdb";
};

void record_paths(const std::string& dir, int id, const std::string& format,
                  std::string& signal, std::string& annotation) {
  std::string base = dir + "/" + std::to_string(id);
  if (format == "wfdb") {
    signal = base + ".dat";
    annotation = base + ".atr";
  } else {
    signal = base + ".csv";
    annotation = base + ".ann.csv";
  }
}

int cmd_features(const FeaturesArgs& args) {
  InterPatientSplit split = split_inter_patient();
  std::vector<int> all = split.ds1;
  all.insert(all.end(), split.ds2.begin(), split.ds2.end());

  std::vector<int> missing;
  for (int id : all) {
    std::string sig, ann;
    record_paths(args.records_dir, id, args.format, sig, ann);
    if (!std::filesystem::exists(sig) || !std::filesystem::exists(ann))
      missing.push_back(id);
  }
  if (!missing.empty()) {
    std::string list;
    for (int id : missing) list += " " + std::to_string(id);
    throw ParseError("records directory '" + args.records_dir + "' is missing " +
                     std::to_string(missing.size()) + " of " +
                     std::to_string(all.size()) + " records:" + list);
  }

  auto load_split = [&](const std::vector<int>& ids) {
    std::vector<EcgRecord> records;
    for (int id : ids) {
      std::string sig, ann;
      record_paths(args.records_dir, id, args.format, sig, ann);
      records.push_back(read_record(sig, ann));
      std::fprintf(stderr, "read record %d (%zu annotations)\n", id,
                   records.back().annotations.size());
    }
    return build_dataset(records);
  };
  EcgDataset ds1 = load_split(split.ds1);
  EcgDataset ds2 = load_split(split.ds2);

  make_dirs(args.out_dir);
  write_packed_features(args.out_dir + "/ds1.bin", ds1.binary);
  write_packed_features(args.out_dir + "/ds2.bin", ds2.binary);
  write_file_atomic(args.out_dir + "/ds1.csv", features_csv(ds1.real));
  write_file_atomic(args.out_dir + "/ds2.csv", features_csv(ds2.real));

  std::printf("class   count   published   diff\n");
  for (int k = 0; k < 5; ++k) {
    uint64_t count = ds1.class_counts[size_t(k)] + ds2.class_counts[size_t(k)];
    int64_t diff = int64_t(count) - int64_t(kPublishedTotals[k]);
    std::printf("%-5s %7llu   %9llu   %+lld\n", kCountClassNames[k],
                static_cast<unsigned long long>(count),
                static_cast<unsigned long long>(kPublishedTotals[k]),
                static_cast<long long>(diff));
  }
  std::printf("rows written: ds1=%llu ds2=%llu (width %zu bits / %zu reals)\n",
              static_cast<unsigned long long>(ds1.emitted),
              static_cast<unsigned long long>(ds2.emitted), kBinaryFeatureBits,
              kRealFeatureCount);

  std::string params = "command = features\nformat = " + args.format +
                       "\nrecords = " + args.records_dir +
                       "\nout = " + args.out_dir + "\n";
  write_file_atomic(args.out_dir + "/features.manifest",
                    manifest_text(params, "features", {}));
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

int cmd_train(const TrainArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty())
    cfg = parse_run_config(read_text(args.config_path));
  for (const std::string& ov : args.overrides) {
    size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ArgumentError("--set needs key=value, got '" + ov + "'");
    set_run_config_key(cfg, ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (cfg.train_data.empty())
    throw ArgumentError(
        "train_data is required (config key or --set train_data=PATH)");

  bool rate_encoded = cfg.encoding == "rate";
  Dataset train_set = load_dataset(cfg.train_data, rate_encoded);
  if (train_set.size() == 0) throw ArgumentError("training dataset is empty");
  std::optional<Dataset> test_set;
  if (!cfg.test_data.empty())
    test_set = load_dataset(cfg.test_data, rate_encoded);

  make_dirs(cfg.out_dir);
  for (uint64_t seed : cfg.seeds) {
    NetworkConfig ncfg = network_config(cfg, seed, train_set.input_width);
    check_width(ncfg.input_width, train_set.input_width);
    if (test_set) check_width(ncfg.input_width, test_set->input_width);

    SoftNetwork net = build_network(ncfg);
    std::string log = "epoch,train_loss,holdout_loss,holdout_accuracy\n";
    train(net, train_set, [&](const SoftNetwork&, const EpochStats& st) {
      std::fprintf(stderr,
                   "seed %llu epoch %d/%d train_loss %.6f holdout_loss %.6f "
                   "holdout_acc %.4f\n",
                   static_cast<unsigned long long>(seed), st.epoch, ncfg.epochs,
                   st.train_loss, st.holdout_loss, st.holdout_accuracy);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g\n", st.epoch,
                    st.train_loss, st.holdout_loss, st.holdout_accuracy);
      log += buf;
    });

    std::string tag = "seed" + std::to_string(seed);
    std::string ck_path = cfg.out_dir + "/checkpoint_" + tag + ".lgnckpt";
    write_file_atomic(ck_path, serialize_checkpoint(net));
    write_file_atomic(cfg.out_dir + "/train_log_" + tag + ".csv", log);
    std::printf("seed %llu: wrote %s\n",
                static_cast<unsigned long long>(seed), ck_path.c_str());

    if (test_set) {
      HardNetwork hard = discretize(net);
      std::vector<int> preds = predict_hard_all(hard, *test_set);
      std::printf("seed %llu: test accuracy %.6f (hard)\n",
                  static_cast<unsigned long long>(seed),
                  fraction_correct(preds, *test_set));
      if (ncfg.num_classes == kNumClasses) {
        std::vector<int> labels(test_set->y.begin(), test_set->y.end());
        ConfusionMatrix c = confusion(preds, labels);
        std::fputs(metrics_report_text(c).c_str(), stdout);
        write_file_atomic(cfg.out_dir + "/metrics_" + tag + ".csv",
                          metrics_report_csv(c));
      }
    }
  }
  write_file_atomic(cfg.out_dir + "/train.manifest",
                    manifest_text(cfg, "train"));
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  bool hard = false;
  bool soft = false;
  int64_t rate_length = 0;  // 0: rate mode off
  uint64_t seed = 1;
  std::string encoding = "binary";
  std::string out;
};

int cmd_eval(const EvalArgs& args) {
  int modes = int(args.hard) + int(args.soft) + int(args.rate_length > 0);
  if (modes != 1)
    throw ArgumentError("pick exactly one of --hard, --soft, --rate L");

  LoadedCheckpoint lc = parse_checkpoint(read_file(args.checkpoint));
  const NetworkConfig& ncfg =
      lc.hard ? lc.hardnet->config : lc.soft->config;
  Dataset data = load_dataset(args.data, args.encoding == "rate");
  if (data.size() == 0) throw ArgumentError("evaluation dataset is empty");
  check_width(ncfg.input_width, data.input_width);

  std::vector<int> preds;
  if (args.soft) {
    if (lc.hard)
      throw ArgumentError(
          "--soft needs gate distributions, but this checkpoint is "
          "discretized; use --hard or --rate");
    preds = predict_soft_all(*lc.soft, data);
  } else {
    HardNetwork hard = to_hard(lc);
    preds = args.hard
                ? predict_hard_all(hard, data)
                : predict_rate_all(hard, data, uint64_t(args.rate_length),
                                   args.seed);
  }

  std::printf("samples %zu\n", data.size());
  if (ncfg.num_classes == kNumClasses) {
    std::vector<int> labels(data.y.begin(), data.y.end());
    ConfusionMatrix c = confusion(preds, labels);
    std::fputs(metrics_report_text(c).c_str(), stdout);
    if (!args.out.empty()) write_file_atomic(args.out, metrics_report_csv(c));
  } else {
    // The clinical report is defined for the 4-class readout only.
    std::printf("accuracy=%.6f\n", fraction_correct(preds, data));
    if (!args.out.empty()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "samples,accuracy\n%zu,%.6f\n",
                    data.size(), fraction_correct(preds, data));
      write_file_atomic(args.out, std::string(buf));
    }
  }
  if (!args.out.empty()) {
    std::string params = "command = eval\ncheckpoint = " + args.checkpoint +
                         "\ndata = " + args.data + "\n";
    write_file_atomic(args.out + ".manifest",
                      manifest_text(params, "eval", {args.seed}));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string checkpoint;
  std::string data;
  std::string lengths = "1,2,4,8,16,32,64,128,256,512,1024";
  uint64_t seed = 1;
  std::string encoding = "binary";
  std::string out;
};

int cmd_sweep(const SweepArgs& args) {
  std::vector<uint64_t> lengths = parse_length_list(args.lengths);
  LoadedCheckpoint lc = parse_checkpoint(read_file(args.checkpoint));
  Dataset data = load_dataset(args.data, args.encoding == "rate");
  HardNetwork hard = to_hard(lc);
  check_width(hard.config.input_width, data.input_width);

  std::vector<RateSweepRow> rows = rate_sweep(hard, data, lengths, args.seed);
  std::string csv = rate_sweep_csv(rows, args.seed);
  std::fputs(csv.c_str(), stdout);
  if (!args.out.empty()) {
    write_file_atomic(args.out, csv);
    std::string params = "command = sweep\ncheckpoint = " + args.checkpoint +
                         "\ndata = " + args.data +
                         "\nlengths = " + args.lengths + "\n";
    write_file_atomic(args.out + ".manifest",
                      manifest_text(params, "sweep", {args.seed}));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cost
// ---------------------------------------------------------------------------

struct CostArgs {
  std::string arch;
  std::string checkpoint;
  int classes = 4;
  double preproc = 2246.0;
  bool csv = false;
};

int cmd_cost(const CostArgs& args) {
  if (args.arch.empty() == args.checkpoint.empty())
    throw ArgumentError("give exactly one of --arch or --checkpoint");
  std::vector<LayerSpec> layers;
  int classes = args.classes;
  if (!args.arch.empty()) {
    layers = parse_arch(args.arch);
  } else {
    LoadedCheckpoint lc = parse_checkpoint(read_file(args.checkpoint));
    const NetworkConfig& ncfg =
        lc.hard ? lc.hardnet->config : lc.soft->config;
    for (uint64_t width : ncfg.layer_sizes) {
      LayerSpec l;
      l.is_lut = ncfg.is_lut;
      l.fanin = ncfg.fanin();
      l.width = width;
      layers.push_back(l);
    }
    classes = ncfg.num_classes;
  }
  CostReport r = cost_report(layers, classes, args.preproc);
  std::fputs((args.csv ? cost_report_csv(r) : cost_report_text(r)).c_str(),
             stdout);
  return 0;
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

struct ExportArgs {
  std::string checkpoint;
  std::string out;
  std::string style = "auto";
  uint64_t check = 0;  // random inputs to verify through the interpreter
};

int cmd_export(const ExportArgs& args) {
  NetlistStyle style;
  if (args.style == "auto") {
    style = NetlistStyle::kAuto;
  } else if (args.style == "assign") {
    style = NetlistStyle::kAssign;
  } else if (args.style == "lut") {
    style = NetlistStyle::kLutPrimitive;
  } else {
    throw ArgumentError("--style must be auto, assign, or lut");
  }

  LoadedCheckpoint lc = parse_checkpoint(read_file(args.checkpoint));
  HardNetwork hard = to_hard(lc);
  std::string verilog = emit_netlist(hard, style);

  if (args.check > 0) {
    Netlist nl = parse_netlist(verilog);
    Rng rng(7);
    std::vector<uint8_t> bits(size_t(hard.config.input_width));
    for (uint64_t k = 0; k < args.check; ++k) {
      for (uint8_t& b : bits) b = uint8_t(rng.next() & 1);
      int from_netlist = netlist_class(eval_netlist(nl, bits));
      int from_network = forward_hard(hard, bits).predicted_class;
      if (from_netlist != from_network)
        throw NumericError("netlist disagrees with the network on a random "
                           "input (check " + std::to_string(k) + ")");
    }
  }

  write_file_atomic(args.out, verilog);
  std::string params = "command = export\ncheckpoint = " + args.checkpoint +
                       "\nstyle = " + args.style + "\n";
  write_file_atomic(args.out + ".manifest",
                    manifest_text(params, "export", {}));
  std::printf("wrote %zu bytes to %s", verilog.size(), args.out.c_str());
  if (args.check > 0)
    std::printf(" (verified on %llu random inputs)",
                static_cast<unsigned long long>(args.check));
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logic gate network training and compilation toolkit"};
  app.require_subcommand(1);

  FeaturesArgs fa;
  CLI::App* features =
      app.add_subcommand("features", "Build ECG feature files from records");
  features->add_option("--records", fa.records_dir, "Record directory")
      ->required();
  features->add_option("--out", fa.out_dir, "Output directory");
  features->add_option("--format", fa.format, "Record format: wfdb or csv")
      ->check(CLI::IsMember({"wfdb", "csv"}));

  TrainArgs ta;
  CLI::App* train_cmd = app.add_subcommand("train", "Train from a config file");
  train_cmd->add_option("--config", ta.config_path, "key = value config file");
  train_cmd->add_option("--set", ta.overrides,
                        "Override a config key (key=value, repeatable)");

  EvalArgs ea;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  eval_cmd->add_option("--checkpoint", ea.checkpoint, "Checkpoint file")
      ->required();
  eval_cmd->add_option("--data", ea.data, "Dataset file")->required();
  eval_cmd->add_flag("--hard", ea.hard, "Discretized boolean evaluation");
  eval_cmd->add_flag("--soft", ea.soft, "Real-valued soft evaluation");
  eval_cmd->add_option("--rate", ea.rate_length,
                       "Rate-coded evaluation with L time steps")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", ea.seed, "Stream seed for --rate");
  eval_cmd->add_option("--encoding", ea.encoding,
                       "IDX pixel encoding: binary or rate")
      ->check(CLI::IsMember({"binary", "rate"}));
  eval_cmd->add_option("--out", ea.out, "Also write the report CSV here");

  SweepArgs sa;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Rate-coded accuracy over stream lengths");
  sweep_cmd->add_option("--checkpoint", sa.checkpoint, "Checkpoint file")
      ->required();
  sweep_cmd->add_option("--data", sa.data, "Dataset file")->required();
  sweep_cmd->add_option("--lengths", sa.lengths, "Comma-separated lengths");
  sweep_cmd->add_option("--seed", sa.seed, "Stream seed");
  sweep_cmd->add_option("--encoding", sa.encoding,
                        "IDX pixel encoding: binary or rate")
      ->check(CLI::IsMember({"binary", "rate"}));
  sweep_cmd->add_option("--out", sa.out, "Also write the CSV here");

  CostArgs ca;
  CLI::App* cost_cmd =
      app.add_subcommand("cost", "Gate-count and FLOP cost report");
  cost_cmd->add_option("--arch", ca.arch, "Architecture, e.g. gate:1x8000");
  cost_cmd->add_option("--checkpoint", ca.checkpoint,
                       "Cost an existing checkpoint instead");
  cost_cmd->add_option("--classes", ca.classes, "Readout classes")
      ->check(CLI::Range(2, 1000000));
  cost_cmd->add_option("--preproc", ca.preproc,
                       "Preprocessing FLOPs added to the total");
  cost_cmd->add_flag("--csv", ca.csv, "CSV instead of the text table");

  ExportArgs xa;
  CLI::App* export_cmd =
      app.add_subcommand("export", "Emit a Verilog netlist for a checkpoint");
  export_cmd->add_option("--checkpoint", xa.checkpoint, "Checkpoint file")
      ->required();
  export_cmd->add_option("--out", xa.out, "Netlist output path")->required();
  export_cmd->add_option("--style", xa.style,
                         "Emission style: auto, assign, or lut");
  export_cmd->add_option("--check", xa.check,
                         "Verify this many random inputs via the bundled "
                         "netlist interpreter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (features->parsed()) return cmd_features(fa);
    if (train_cmd->parsed()) return cmd_train(ta);
    if (eval_cmd->parsed()) return cmd_eval(ea);
    if (sweep_cmd->parsed()) return cmd_sweep(sa);
    if (cost_cmd->parsed()) return cmd_cost(ca);
    if (export_cmd->parsed()) return cmd_export(xa);
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
