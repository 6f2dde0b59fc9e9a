#include <atomic>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "salmap/config.hpp"
#include "salmap/image_io.hpp"
#include "salmap/mlp.hpp"
#include "salmap/pipeline.hpp"
#include "salmap/rasterops.hpp"
#include "salmap/voc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace salmap;

namespace {

// Shortest decimal that round-trips; keeps printed accuracies comparable
// across commands.
std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Mlp load_required_model(const std::string& path) {
  if (path.empty())
    throw Error("a model file is required: pass --model or set 'model' in the config");
  return load_model(path);
}

LutBank load_bank(const PipelineConfig& cfg) {
  return cfg.lut_bank.empty() ? default_lut_bank() : load_lut_bank(cfg.lut_bank);
}

ContextMapping load_mapping(const std::string& path) {
  return path.empty() ? default_context_mapping() : load_context_mapping(path);
}

struct PipelineFlags {
  std::string config, model, lut_bank;
  std::string lut_mode = "auto";
  bool lut_mode_set = false;
  bool no_center_prior = false;
  bool no_smooth = false;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("--config", f.config, "pipeline config file (key = value lines)");
  cmd->add_option("--model", f.model, "context-classifier model file");
  cmd->add_option("--lut-bank", f.lut_bank, "LUT bank file (defaults built in)");
  cmd->add_option("--lut", f.lut_mode, "LUT selection: auto (by detected context) or user")
      ->check(CLI::IsMember({"auto", "user"}));
  cmd->add_flag("--no-center-prior", f.no_center_prior, "disable the center prior stage");
  cmd->add_flag("--no-smooth", f.no_smooth, "disable the mean-filter stage");
}

PipelineConfig assemble_config(const CLI::App* cmd, const PipelineFlags& f) {
  PipelineConfig cfg;
  if (!f.config.empty()) apply_config_file(cfg, f.config);
  if (!f.model.empty()) cfg.model = f.model;
  if (!f.lut_bank.empty()) cfg.lut_bank = f.lut_bank;
  if (cmd->count("--lut") > 0) cfg.user_lut = (f.lut_mode == "user");
  if (f.no_center_prior) cfg.params.center.enabled = false;
  if (f.no_smooth) cfg.params.smooth = false;
  validate(cfg);
  return cfg;
}

json counts_json(const std::array<std::size_t, kContextCount>& counts) {
  json j = json::object();
  for (int c = 0; c < kContextCount; ++c)
    j[std::string(context_name(static_cast<Context>(c)))] = counts[c];
  return j;
}

int run_saliency(const std::string& image_path, const std::string& label_path,
                 const std::string& outdir, const PipelineConfig& cfg, bool intermediates,
                 bool json_out) {
  const Mlp model = load_required_model(cfg.model);
  const LutBank bank = load_bank(cfg);
  const RgbImage img = load_rgb_image(image_path);
  const LabelMap labels = decode_label_png(label_path);

  const PipelineResult r = run_pipeline(img, labels, cfg.params, bank, model, cfg.user_lut);

  fs::create_directories(outdir);
  std::vector<std::string> outputs;
  auto emit = [&outputs, &outdir](const char* name, const SaliencyMap& m) {
    const std::string path = outdir + "/" + name;
    write_gray_png(path, quantize_to_gray(m));
    outputs.push_back(path);
  };
  emit("final.png", r.final);
  if (intermediates) {
    emit("s_cn.png", r.s_cn);
    emit("s_cl.png", r.s_cl);
    emit("s_sege.png", r.s_sege);
    emit("s_cncl.png", r.s_cncl);
  }

  if (json_out) {
    json j;
    j["context"] = std::string(context_name(r.context));
    j["outputs"] = outputs;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "context: " << context_name(r.context) << "\n";
    for (const std::string& p : outputs) std::cout << "wrote " << p << "\n";
  }
  return 0;
}

int run_train(const std::string& root, const std::string& split, const std::string& mapping_path,
              const std::string& model_out, std::uint64_t seed, const TrainOptions& opt,
              const std::string& history_path, bool json_out) {
  if (model_out.empty()) throw Error("an output model path is required (--model)");
  const VocCorpus corpus = load_corpus(root, split);
  if (!corpus.count_warning.empty()) std::cerr << "warning: " << corpus.count_warning << "\n";
  const ContextMapping mapping = load_mapping(mapping_path);
  const ContextDataset ds = build_context_dataset(corpus, mapping);
  const int n = static_cast<int>(ds.features.size());
  if (n == 0) throw Error("split '" + split + "' contains no images to train on");

  std::vector<double> xs(static_cast<std::size_t>(n) * kMlpInput);
  for (int i = 0; i < n; ++i)
    std::copy_n(ds.features[i].areas.data(), kMlpInput,
                xs.data() + static_cast<std::size_t>(i) * kMlpInput);

  if (!json_out) {
    std::cout << "context counts:";
    for (int c = 0; c < kContextCount; ++c)
      std::cout << " " << context_name(static_cast<Context>(c)) << "=" << ds.counts[c];
    std::cout << "\n";
  }

  Mlp model = init_mlp(seed);
  const auto on_epoch = [&](int epoch, const EpochStats& s) {
    if (!json_out)
      std::cout << "epoch " << epoch << "/" << opt.epochs << " loss " << fmt_double(s.loss)
                << " accuracy " << fmt_double(s.accuracy) << "\n";
  };
  const std::vector<EpochStats> history = train_mlp(model, xs.data(), ds.labels.data(), n, opt,
                                                    on_epoch);
  save_model(model, model_out);

  if (!history_path.empty()) {
    std::ofstream csv(history_path, std::ios::binary);
    if (!csv) throw IoError("cannot open history file for writing: " + history_path);
    for (std::size_t e = 0; e < history.size(); ++e)
      csv << (e + 1) << "," << fmt_double(history[e].loss) << ","
          << fmt_double(history[e].accuracy) << "\n";
    if (!csv.flush()) throw IoError("failed writing history file: " + history_path);
  }

  if (json_out) {
    json j;
    j["model"] = model_out;
    j["seed"] = seed;
    j["epochs"] = opt.epochs;
    j["final_train_accuracy"] = model.train_accuracy;
    j["context_counts"] = counts_json(ds.counts);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "final train accuracy: " << fmt_double(model.train_accuracy) << "\n";
    std::cout << "model written to " << model_out << "\n";
  }
  return 0;
}

int run_eval(const std::string& root, const std::string& split, const std::string& mapping_path,
             const std::string& model_path, bool json_out) {
  const Mlp model = load_required_model(model_path);
  const VocCorpus corpus = load_corpus(root, split);
  if (!corpus.count_warning.empty()) std::cerr << "warning: " << corpus.count_warning << "\n";
  const ContextDataset ds = build_context_dataset(corpus, load_mapping(mapping_path));
  const int n = static_cast<int>(ds.features.size());
  if (n == 0) throw Error("split '" + split + "' contains no images to evaluate");

  std::array<std::array<std::size_t, kContextCount>, kContextCount> confusion{};
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const int pred = mlp_predict(model, ds.features[i].areas.data());
    const int truth = ds.labels[i];
    ++confusion[truth][pred];
    if (pred == truth) ++hits;
  }
  const double accuracy = static_cast<double>(hits) / n;

  if (json_out) {
    json j;
    j["split"] = split;
    j["samples"] = n;
    j["accuracy"] = accuracy;
    json rows = json::array();
    for (int t = 0; t < kContextCount; ++t) {
      json row = json::array();
      for (int p = 0; p < kContextCount; ++p) row.push_back(confusion[t][p]);
      rows.push_back(row);
    }
    j["confusion"] = rows;
    j["context_counts"] = counts_json(ds.counts);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "accuracy: " << fmt_double(accuracy) << " (" << hits << "/" << n << ")\n";
    std::cout << "confusion matrix (rows = true context, columns = predicted):\n";
    for (int t = 0; t < kContextCount; ++t) {
      std::cout << context_name(static_cast<Context>(t)) << ":";
      for (int p = 0; p < kContextCount; ++p) std::cout << " " << confusion[t][p];
      std::cout << "\n";
    }
  }
  return 0;
}

int run_batch(const std::string& root, const std::string& split, const std::string& outdir,
              const PipelineConfig& cfg, int jobs, bool json_out) {
  const Mlp model = load_required_model(cfg.model);
  const LutBank bank = load_bank(cfg);
  const VocCorpus corpus = load_corpus(root, split);
  if (!corpus.count_warning.empty()) std::cerr << "warning: " << corpus.count_warning << "\n";

  fs::create_directories(outdir);
  const std::size_t n = corpus.entries.size();
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> ok{0};
  std::atomic<std::size_t> failed{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      const VocEntry& e = corpus.entries[i];
      try {
        const RgbImage img = load_rgb_image(e.image_path);
        const LabelMap labels = decode_label_png(e.label_path);
        const PipelineResult r = run_pipeline(img, labels, cfg.params, bank, model, cfg.user_lut);
        write_gray_png(outdir + "/" + e.id + "_saliency.png", quantize_to_gray(r.final));
        ok.fetch_add(1);
      } catch (const std::exception& ex) {
        failed.fetch_add(1);
        const std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << e.id << ": " << ex.what() << "\n";
      }
    }
  };

  if (jobs < 1) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  const std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                                         n > 0 ? n : 1);
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  if (json_out) {
    json j;
    j["ok"] = ok.load();
    j["failed"] = failed.load();
    j["outdir"] = outdir;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << ok.load() << " ok, " << failed.load() << " failed\n";
  }
  return (ok.load() > 0 || n == 0) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"context-aware saliency map generator"};
  app.require_subcommand(1);

  // saliency
  auto* sal = app.add_subcommand("saliency", "saliency map for one image/label pair");
  std::string sal_image, sal_labels, sal_outdir;
  PipelineFlags sal_flags;
  bool sal_intermediates = false, sal_json = false;
  sal->add_option("image", sal_image, "input image (PNG or JPEG)")->required();
  sal->add_option("labels", sal_labels, "segmentation label PNG (palette-indexed)")->required();
  sal->add_option("outdir", sal_outdir, "output directory")->required();
  add_pipeline_flags(sal, sal_flags);
  sal->add_flag("--intermediates", sal_intermediates, "also write the intermediate maps");
  sal->add_flag("--json", sal_json, "machine-readable summary on stdout");

  // train-context
  auto* train = app.add_subcommand("train-context", "train the context classifier on a corpus");
  std::string train_root, train_split, train_mapping, train_model, train_history;
  std::uint64_t train_seed = 1;
  TrainOptions train_opt;
  bool train_json = false;
  train->add_option("root", train_root, "corpus root directory")->required();
  train->add_option("split", train_split, "split name (e.g. train)")->required();
  train->add_option("--mapping", train_mapping, "class-to-context mapping file");
  train->add_option("--model", train_model, "output model path")->required();
  train->add_option("--seed", train_seed, "initialization/shuffle seed");
  train->add_option("--lr", train_opt.learning_rate, "SGD learning rate");
  train->add_option("--epochs", train_opt.epochs, "training epochs");
  train->add_option("--batch-size", train_opt.batch_size, "mini-batch size");
  train->add_option("--history", train_history, "write per-epoch loss/accuracy CSV here");
  train->add_flag("--json", train_json, "machine-readable summary on stdout");

  // eval-context
  auto* ev = app.add_subcommand("eval-context", "evaluate a trained context classifier");
  std::string eval_root, eval_split, eval_mapping, eval_model;
  bool eval_json = false;
  ev->add_option("root", eval_root, "corpus root directory")->required();
  ev->add_option("split", eval_split, "split name (e.g. val)")->required();
  ev->add_option("--mapping", eval_mapping, "class-to-context mapping file");
  ev->add_option("--model", eval_model, "model file to evaluate")->required();
  ev->add_flag("--json", eval_json, "machine-readable summary on stdout");

  // batch
  auto* bat = app.add_subcommand("batch", "run the pipeline over a whole split");
  std::string bat_root, bat_split, bat_outdir;
  PipelineFlags bat_flags;
  int bat_jobs = 0;
  bool bat_json = false;
  bat->add_option("root", bat_root, "corpus root directory")->required();
  bat->add_option("split", bat_split, "split name")->required();
  bat->add_option("outdir", bat_outdir, "output directory")->required();
  add_pipeline_flags(bat, bat_flags);
  bat->add_option("--jobs", bat_jobs, "worker threads (default: hardware parallelism)");
  bat->add_flag("--json", bat_json, "machine-readable summary on stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(sal))
      return run_saliency(sal_image, sal_labels, sal_outdir, assemble_config(sal, sal_flags),
                          sal_intermediates, sal_json);
    if (app.got_subcommand(train))
      return run_train(train_root, train_split, train_mapping, train_model, train_seed, train_opt,
                       train_history, train_json);
    if (app.got_subcommand(ev))
      return run_eval(eval_root, eval_split, eval_mapping, eval_model, eval_json);
    if (app.got_subcommand(bat))
      return run_batch(bat_root, bat_split, bat_outdir, assemble_config(bat, bat_flags), bat_jobs,
                       bat_json);
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DivergedLoss& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
