#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "salmap/image_io.hpp"
#include "salmap/lut.hpp"
#include "salmap/mlp.hpp"
#include "support/fixture.hpp"
#include "support/proc.hpp"
#include "support/tempdir.hpp"

using namespace salmap;
using nlohmann::json;
using testsupport::TempDir;
using testsupport::VocFixture;
using testsupport::cli_path;
using testsupport::run_process;

namespace fs = std::filesystem;

namespace {

void spit(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

// Token following `prefix` in `text`, up to whitespace.
std::string token_after(const std::string& text, const std::string& prefix) {
  const std::size_t at = text.find(prefix);
  REQUIRE(at != std::string::npos);
  std::size_t b = at + prefix.size();
  std::size_t e = b;
  while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e]))) ++e;
  return text.substr(b, e - b);
}

// One shared corpus + trained model for the CLI cases; built on first use.
struct CliWorld {
  TempDir tmp;
  std::string root;
  std::vector<std::string> ids;
  std::string model_path;   // freshly initialized (untrained) model
  std::string trained_out;  // stdout of the training run
  std::string trained_model_path;
  std::string history_path;

  CliWorld() {
    VocFixture fix(tmp.sub("voc"));
    root = fix.root();
    ids = fix.add_images("scene", 30, 101);
    fix.write_split("toy", ids);
    fix.write_split("tiny", {ids.begin(), ids.begin() + 4});

    model_path = tmp.sub("init.ctx");
    save_model(init_mlp(5), model_path);

    trained_model_path = tmp.sub("trained.ctx");
    history_path = tmp.sub("history.csv");
    const auto r = run_process({cli_path(), "train-context", root, "toy", "--model",
                                trained_model_path, "--seed", "9", "--epochs", "25",
                                "--batch-size", "8", "--lr", "0.05", "--history", history_path});
    REQUIRE(r.exit_code == 0);
    trained_out = r.out;
  }
};

CliWorld& world() {
  static CliWorld w;
  return w;
}

}  // namespace

TEST_CASE("train-context trains, reports and writes a model plus history") {
  CliWorld& w = world();
  CHECK(w.trained_out.find("context counts:") != std::string::npos);
  CHECK(w.trained_out.find("final train accuracy: ") != std::string::npos);
  CHECK(w.trained_out.find("model written to " + w.trained_model_path) != std::string::npos);

  const std::string model_text = slurp(w.trained_model_path);
  CHECK(model_text.rfind("CTXMODEL v1 20 120 120 5 9\n", 0) == 0);

  // 25 epochs -> exactly 25 CSV rows, no header, "epoch,loss,accuracy".
  const auto rows = lines_of(slurp(w.history_path));
  REQUIRE(rows.size() == 25);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t c1 = rows[i].find(',');
    const std::size_t c2 = rows[i].find(',', c1 + 1);
    REQUIRE(c1 != std::string::npos);
    REQUIRE(c2 != std::string::npos);
    CHECK(rows[i].substr(0, c1) == std::to_string(i + 1));
    const double loss = std::stod(rows[i].substr(c1 + 1, c2 - c1 - 1));
    const double acc = std::stod(rows[i].substr(c2 + 1));
    CHECK(std::isfinite(loss));
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }

  // Per-epoch progress lines appear on stdout.
  CHECK(w.trained_out.find("epoch 1/25 ") != std::string::npos);
  CHECK(w.trained_out.find("epoch 25/25 ") != std::string::npos);
}

TEST_CASE("eval-context on the training split reproduces the reported accuracy exactly") {
  CliWorld& w = world();
  const std::string trained_acc = token_after(w.trained_out, "final train accuracy: ");

  const auto r = run_process(
      {cli_path(), "eval-context", w.root, "toy", "--model", w.trained_model_path});
  REQUIRE(r.exit_code == 0);
  CHECK(token_after(r.out, "accuracy: ") == trained_acc);
  CHECK(r.out.find("confusion matrix") != std::string::npos);
}

TEST_CASE("json summaries agree between train and eval") {
  CliWorld& w = world();
  const std::string model2 = w.tmp.sub("trained2.ctx");
  const auto tr = run_process({cli_path(), "train-context", w.root, "toy", "--model", model2,
                               "--seed", "9", "--epochs", "25", "--batch-size", "8", "--lr",
                               "0.05", "--json"});
  REQUIRE(tr.exit_code == 0);
  const json tj = json::parse(tr.out);
  CHECK(tj["model"] == model2);
  CHECK(tj["seed"] == 9);
  CHECK(tj["epochs"] == 25);

  // Same seed and data: the run is a bitwise replay of the first one.
  CHECK(slurp(model2) == slurp(w.trained_model_path));

  const auto ev =
      run_process({cli_path(), "eval-context", w.root, "toy", "--model", model2, "--json"});
  REQUIRE(ev.exit_code == 0);
  const json ej = json::parse(ev.out);
  CHECK(ej["samples"] == 30);
  CHECK(ej["accuracy"].get<double>() == tj["final_train_accuracy"].get<double>());

  // Confusion rows sum to the per-context truth counts.
  static const char* tokens[] = {"pet", "other_animals", "vehicle", "indoor", "others"};
  std::size_t total = 0;
  for (int t = 0; t < 5; ++t) {
    std::size_t row_sum = 0;
    for (int p = 0; p < 5; ++p) row_sum += ej["confusion"][t][p].get<std::size_t>();
    CHECK(row_sum == ej["context_counts"][tokens[t]].get<std::size_t>());
    total += row_sum;
  }
  CHECK(total == 30);
}

TEST_CASE("an untrained model still evaluates cleanly") {
  CliWorld& w = world();
  const auto r =
      run_process({cli_path(), "eval-context", w.root, "toy", "--model", w.model_path});
  REQUIRE(r.exit_code == 0);
  const double acc = std::stod(token_after(r.out, "accuracy: "));
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
}

TEST_CASE("saliency writes the final map and optional intermediates") {
  CliWorld& w = world();
  const std::string img = w.root + "/JPEGImages/" + w.ids[0] + ".jpg";
  const std::string lab = w.root + "/SegmentationClass/" + w.ids[0] + ".png";

  const std::string out1 = w.tmp.sub("sal1");
  const auto r1 = run_process(
      {cli_path(), "saliency", img, lab, out1, "--model", w.trained_model_path});
  REQUIRE(r1.exit_code == 0);
  CHECK(fs::exists(out1 + "/final.png"));
  CHECK_FALSE(fs::exists(out1 + "/s_cn.png"));
  CHECK(r1.out.find("context: ") != std::string::npos);
  CHECK(r1.out.find("wrote " + out1 + "/final.png") != std::string::npos);

  const std::string out2 = w.tmp.sub("sal2");
  const auto r2 = run_process({cli_path(), "saliency", img, lab, out2, "--model",
                               w.trained_model_path, "--intermediates", "--json"});
  REQUIRE(r2.exit_code == 0);
  for (const char* name : {"final.png", "s_cn.png", "s_cl.png", "s_sege.png", "s_cncl.png"})
    CHECK(fs::exists(out2 + "/" + std::string(name)));
  const json j = json::parse(r2.out);
  CHECK(j["outputs"].size() == 5);
  const std::string ctx = j["context"].get<std::string>();
  CHECK(parse_context(ctx).has_value());
}

TEST_CASE("saliency runs are deterministic and ISA-independent") {
  CliWorld& w = world();
  const std::string img = w.root + "/JPEGImages/" + w.ids[1] + ".jpg";
  const std::string lab = w.root + "/SegmentationClass/" + w.ids[1] + ".png";

  const std::string out_a = w.tmp.sub("isa_a");
  const std::string out_b = w.tmp.sub("isa_b");
  const std::string out_c = w.tmp.sub("isa_c");
  REQUIRE(run_process({cli_path(), "saliency", img, lab, out_a, "--model", w.model_path})
              .exit_code == 0);
  REQUIRE(run_process({cli_path(), "saliency", img, lab, out_b, "--model", w.model_path})
              .exit_code == 0);
  REQUIRE(run_process({cli_path(), "saliency", img, lab, out_c, "--model", w.model_path},
                      "SALMAP_ISA=scalar")
              .exit_code == 0);
  const std::string a = slurp(out_a + "/final.png");
  CHECK(a == slurp(out_b + "/final.png"));
  CHECK(a == slurp(out_c + "/final.png"));
  CHECK(!a.empty());
}

TEST_CASE("dimension mismatches exit with code 3 and write nothing") {
  CliWorld& w = world();
  const std::string img = w.tmp.sub("wide.jpg");
  const std::string lab = w.tmp.sub("short.png");
  write_rgb_jpeg(img, RgbImage(20, 15, Rgb8{90, 90, 90}));
  write_indexed_png(lab, LabelMap(20, 14, 0));
  const std::string out = w.tmp.sub("mismatch_out");
  const auto r = run_process({cli_path(), "saliency", img, lab, out, "--model", w.model_path});
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("error: ") != std::string::npos);
  CHECK_FALSE(fs::exists(out + "/final.png"));
}

TEST_CASE("requesting the user LUT without one fails as an input error") {
  CliWorld& w = world();
  const std::string img = w.root + "/JPEGImages/" + w.ids[2] + ".jpg";
  const std::string lab = w.root + "/SegmentationClass/" + w.ids[2] + ".png";
  const auto r = run_process({cli_path(), "saliency", img, lab, w.tmp.sub("ulut"), "--model",
                              w.model_path, "--lut", "user"});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("user LUT") != std::string::npos);
}

TEST_CASE("a bank with a [user] section supports the user LUT") {
  CliWorld& w = world();
  // Build a bank: five complete context sections plus [user].
  std::string bank_text;
  const LutBank def = default_lut_bank();
  auto section = [](const SaliencyLut& lut, const std::string& name) {
    std::ostringstream out;
    out << "[" << name << "]\n";
    for (int c = 0; c < kClassCount; ++c)
      out << class_names()[c] << " = " << lut.weights[c] << "\n";
    out << "void = " << lut.void_weight << "\n";
    return out.str();
  };
  for (int i = 0; i < kContextCount; ++i)
    bank_text += section(def.context_luts[i], std::string(context_name(static_cast<Context>(i))));
  SaliencyLut user;
  user.weights.fill(0.9);
  user.weights[0] = 0.05;
  user.void_weight = 0.0;
  bank_text += section(user, "user");
  const std::string bank_path = w.tmp.sub("bank.cfg");
  spit(bank_path, bank_text);

  const std::string img = w.root + "/JPEGImages/" + w.ids[2] + ".jpg";
  const std::string lab = w.root + "/SegmentationClass/" + w.ids[2] + ".png";
  const auto r = run_process({cli_path(), "saliency", img, lab, w.tmp.sub("ulut2"), "--model",
                              w.model_path, "--lut-bank", bank_path, "--lut", "user"});
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(w.tmp.sub("ulut2") + "/final.png"));
}

TEST_CASE("command-line flags override config-file values") {
  CliWorld& w = world();
  const std::string img = w.root + "/JPEGImages/" + w.ids[3] + ".jpg";
  const std::string lab = w.root + "/SegmentationClass/" + w.ids[3] + ".png";

  // The config points at a model that does not exist; the flag must win.
  const std::string cfg = w.tmp.sub("precedence.cfg");
  spit(cfg, "model = /nonexistent/model.ctx\nsmooth_size = 5\n");
  const auto good = run_process({cli_path(), "saliency", img, lab, w.tmp.sub("prec1"), "--config",
                                 cfg, "--model", w.model_path});
  CHECK(good.exit_code == 0);

  // Without the flag the config value is used and fails.
  const auto bad =
      run_process({cli_path(), "saliency", img, lab, w.tmp.sub("prec2"), "--config", cfg});
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("/nonexistent/model.ctx") != std::string::npos);
}

TEST_CASE("config files with unknown keys or bad values are input errors") {
  CliWorld& w = world();
  const std::string img = w.root + "/JPEGImages/" + w.ids[3] + ".jpg";
  const std::string lab = w.root + "/SegmentationClass/" + w.ids[3] + ".png";

  spit(w.tmp.sub("typo.cfg"), "blocksize = 8\n");
  const auto r1 = run_process({cli_path(), "saliency", img, lab, w.tmp.sub("cfg1"), "--config",
                               w.tmp.sub("typo.cfg"), "--model", w.model_path});
  CHECK(r1.exit_code == 2);
  CHECK(r1.err.find("unknown key") != std::string::npos);

  spit(w.tmp.sub("range.cfg"), "w1 = -1\n");
  const auto r2 = run_process({cli_path(), "saliency", img, lab, w.tmp.sub("cfg2"), "--config",
                               w.tmp.sub("range.cfg"), "--model", w.model_path});
  CHECK(r2.exit_code == 2);
}

TEST_CASE("batch processes a split and tolerates partial failures") {
  CliWorld& w = world();
  const std::string out = w.tmp.sub("batch1");
  const auto r = run_process(
      {cli_path(), "batch", w.root, "tiny", out, "--model", w.model_path, "--jobs", "2"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("4 ok, 0 failed") != std::string::npos);
  for (int i = 0; i < 4; ++i) CHECK(fs::exists(out + "/" + w.ids[i] + "_saliency.png"));

  // Corrupt one label: that entry fails, the rest still succeed, exit stays 0.
  VocFixture fix2(w.tmp.sub("voc_partial"));
  const auto ids2 = fix2.add_images("part", 4, 102);
  fix2.write_split("mini", ids2);
  spit(fix2.root() + "/SegmentationClass/" + ids2[1] + ".png", "junk");
  const std::string out2 = w.tmp.sub("batch2");
  const auto r2 = run_process(
      {cli_path(), "batch", fix2.root(), "mini", out2, "--model", w.model_path, "--json"});
  REQUIRE(r2.exit_code == 0);
  const json j = json::parse(r2.out);
  CHECK(j["ok"] == 3);
  CHECK(j["failed"] == 1);
  CHECK(r2.err.find(ids2[1]) != std::string::npos);
  CHECK_FALSE(fs::exists(out2 + "/" + ids2[1] + "_saliency.png"));

  // All labels corrupt: nothing succeeds, exit code 2.
  for (const auto& id : ids2) spit(fix2.root() + "/SegmentationClass/" + id + ".png", "junk");
  const auto r3 =
      run_process({cli_path(), "batch", fix2.root(), "mini", w.tmp.sub("batch3"), "--model",
                   w.model_path});
  CHECK(r3.exit_code == 2);
  CHECK(r3.out.find("0 ok, 4 failed") != std::string::npos);

  // An empty split is a no-op success.
  spit(fix2.root() + "/ImageSets/Segmentation/none.txt", "");
  const auto r4 = run_process({cli_path(), "batch", fix2.root(), "none", w.tmp.sub("batch4"),
                               "--model", w.model_path});
  CHECK(r4.exit_code == 0);
  CHECK(r4.out.find("0 ok, 0 failed") != std::string::npos);
}

TEST_CASE("nonstandard counts on standard split names only warn") {
  CliWorld& w = world();
  VocFixture fix(w.tmp.sub("voc_warn"));
  const auto ids = fix.add_images("warn", 3, 103);
  fix.write_split("train", ids);
  const auto r = run_process({cli_path(), "batch", fix.root(), "train", w.tmp.sub("warn_out"),
                              "--model", w.model_path});
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("warning: split 'train': 3 entries (expected 1464)") != std::string::npos);
  CHECK(r.out.find("3 ok, 0 failed") != std::string::npos);
}

TEST_CASE("a diverging training run exits with code 4") {
  CliWorld& w = world();
  const auto r = run_process({cli_path(), "train-context", w.root, "toy", "--model",
                              w.tmp.sub("diverge.ctx"), "--lr", "1e150", "--epochs", "5"});
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("error: ") != std::string::npos);
}

TEST_CASE("missing inputs are input errors") {
  CliWorld& w = world();
  const auto r1 = run_process({cli_path(), "eval-context", w.root, "nosuchsplit", "--model",
                               w.model_path});
  CHECK(r1.exit_code == 2);

  const auto r2 = run_process({cli_path(), "eval-context", w.root, "toy", "--model",
                               w.tmp.sub("ghost.ctx")});
  CHECK(r2.exit_code == 2);

  const auto r3 = run_process({cli_path(), "saliency", w.tmp.sub("no.png"), w.tmp.sub("no2.png"),
                               w.tmp.sub("no_out"), "--model", w.model_path});
  CHECK(r3.exit_code == 2);

  // No model from either the flag or a config file.
  const std::string img = w.root + "/JPEGImages/" + w.ids[0] + ".jpg";
  const std::string lab = w.root + "/SegmentationClass/" + w.ids[0] + ".png";
  const auto r4 = run_process({cli_path(), "saliency", img, lab, w.tmp.sub("nom")});
  CHECK(r4.exit_code == 2);
  CHECK(r4.err.find("a model file is required") != std::string::npos);

  const auto r5 = run_process({cli_path()});
  CHECK(r5.exit_code != 0);
}
