#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "alime/dataset.hpp"
#include "alime/errors.hpp"
#include "alime/evaluation.hpp"
#include "alime/explain.hpp"
#include "alime/models.hpp"
#include "alime/sampling.hpp"
#include "alime/util.hpp"

namespace {

using alime::Json;

void write_json_file(const std::filesystem::path& path, const Json& j) {
  alime::write_text_file(path, j.dump(2) + "\n");
}

Json read_json_file(const std::filesystem::path& path) {
  return Json::parse(alime::read_text_file(path));
}

alime::TabularDataset load_standardized(const std::string& schema,
                                        const std::string& data_path,
                                        std::uint64_t seed) {
  const alime::RawDataset raw = alime::load_csv(data_path, schema);
  return alime::standardize_and_split(alime::impute_missing(raw), 0.30, seed);
}

alime::BlackBoxPredictor load_blackbox(const Json& cfg) {
  alime::BlackBoxPredictor f = alime::blackbox_from_json(
      read_json_file(cfg.at("blackbox").get<std::string>()));
  const auto dataset = cfg.at("dataset").get<std::string>();
  if (f.dataset != dataset) {
    throw alime::ConfigError("black box was trained on '" + f.dataset +
                             "' but --dataset is '" + dataset + "'");
  }
  return f;
}

alime::DenoisingAutoencoder load_autoencoder(const Json& cfg) {
  alime::DenoisingAutoencoder ae = alime::autoencoder_from_json(
      read_json_file(cfg.at("autoencoder").get<std::string>()));
  const auto dataset = cfg.at("dataset").get<std::string>();
  if (ae.dataset != dataset) {
    throw alime::ConfigError("autoencoder was trained on '" + ae.dataset +
                             "' but --dataset is '" + dataset + "'");
  }
  return ae;
}

// Loads the pool from pool_file when that file exists; otherwise draws a
// fresh pool from seed + 10 and, when a path was given, saves it there.
alime::SamplePool obtain_pool(const Json& cfg, Eigen::Index k,
                              const alime::DenoisingAutoencoder& ae) {
  const auto pool_file = cfg.at("pool_file").get<std::string>();
  const auto m = cfg.at("m").get<Eigen::Index>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  if (!pool_file.empty() && std::filesystem::exists(pool_file)) {
    alime::SamplePool pool = alime::pool_from_json(read_json_file(pool_file));
    if (pool.points.cols() != k) {
      throw alime::ConfigError("pool file has width " +
                               std::to_string(pool.points.cols()) +
                               " but the dataset has " + std::to_string(k) +
                               " features");
    }
    if (!pool.embeddings.has_value() ||
        pool.ae_fingerprint != alime::autoencoder_fingerprint(ae)) {
      pool = alime::attach_embeddings(std::move(pool), ae);
    }
    return pool;
  }
  alime::SamplePool pool =
      alime::attach_embeddings(alime::sample_pool(k, m, seed + 10), ae);
  if (!pool_file.empty()) {
    write_json_file(pool_file, alime::pool_to_json(pool));
  }
  return pool;
}

int run_train_blackbox(const Json& cfg) {
  const auto dataset = cfg.at("dataset").get<std::string>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const alime::TabularDataset data =
      load_standardized(dataset, cfg.at("data_path").get<std::string>(), seed);

  alime::TrainConfig tc;
  tc.epochs = cfg.at("epochs").get<int>();
  tc.batch_size = cfg.at("batch_size").get<int>();
  tc.learning_rate = cfg.at("lr").get<double>();
  tc.seed = seed + 1;
  alime::BlackBoxPredictor f = alime::train_blackbox(data, tc);
  f.seed = seed;  // later commands re-derive the split from this

  const std::filesystem::path out = cfg.at("out").get<std::string>();
  write_json_file(out / "blackbox.json", alime::blackbox_to_json(f));

  Json summary;
  summary["format"] = "alime-blackbox-summary";
  summary["version"] = 1;
  summary["dataset"] = dataset;
  summary["seed"] = seed;
  summary["train_rows"] = static_cast<Eigen::Index>(data.train_idx.size());
  summary["test_rows"] = static_cast<Eigen::Index>(data.test_idx.size());
  summary["epochs"] = tc.epochs;
  summary["learning_rate"] = tc.learning_rate;
  summary["batch_size"] = tc.batch_size;
  summary["train_accuracy"] = alime::accuracy(f, data, data.train_idx);
  summary["test_accuracy"] = alime::accuracy(f, data, data.test_idx);
  write_json_file(out / "blackbox_summary.json", summary);
  write_json_file(out / "run_config.json", cfg);
  std::cout << dataset
            << " test accuracy: " << summary["test_accuracy"].dump() << "\n";
  return 0;
}

int run_train_ae(const Json& cfg) {
  const auto dataset = cfg.at("dataset").get<std::string>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const alime::TabularDataset data =
      load_standardized(dataset, cfg.at("data_path").get<std::string>(), seed);

  auto latent_dim = cfg.at("latent_dim").get<Eigen::Index>();
  if (latent_dim == 0) latent_dim = alime::default_latent_dim(data.feature_count());
  const auto noise_sigma = cfg.at("noise_sigma").get<double>();

  alime::TrainConfig tc;
  tc.epochs = cfg.at("epochs").get<int>();
  tc.batch_size = cfg.at("batch_size").get<int>();
  tc.learning_rate = cfg.at("lr").get<double>();
  tc.seed = seed + 2;
  std::vector<double> epoch_loss;
  alime::DenoisingAutoencoder ae =
      alime::train_autoencoder(data, latent_dim, noise_sigma, tc, &epoch_loss);
  ae.seed = seed;

  const std::filesystem::path out = cfg.at("out").get<std::string>();
  write_json_file(out / "autoencoder.json", alime::autoencoder_to_json(ae));

  Json summary;
  summary["format"] = "alime-autoencoder-summary";
  summary["version"] = 1;
  summary["dataset"] = dataset;
  summary["seed"] = seed;
  summary["latent_dim"] = latent_dim;
  summary["noise_sigma"] = noise_sigma;
  summary["epochs"] = tc.epochs;
  summary["learning_rate"] = tc.learning_rate;
  summary["batch_size"] = tc.batch_size;
  summary["final_train_loss"] = epoch_loss.back();
  summary["train_reconstruction_mse"] =
      alime::reconstruction_mse(ae, data.train_features());
  summary["test_reconstruction_mse"] =
      alime::reconstruction_mse(ae, data.test_features());
  write_json_file(out / "autoencoder_summary.json", summary);
  write_json_file(out / "run_config.json", cfg);
  std::cout << dataset << " test reconstruction mse: "
            << summary["test_reconstruction_mse"].dump() << "\n";
  return 0;
}

int run_explain(const Json& cfg) {
  const auto dataset = cfg.at("dataset").get<std::string>();
  const alime::BlackBoxPredictor f = load_blackbox(cfg);
  const alime::TabularDataset data = load_standardized(
      dataset, cfg.at("data_path").get<std::string>(), f.seed);

  const auto instance = cfg.at("instance").get<Eigen::Index>();
  const auto n_test = static_cast<Eigen::Index>(data.test_idx.size());
  if (instance < 0 || instance >= n_test) {
    throw alime::ConfigError("instance " + std::to_string(instance) +
                             " outside the test split [0, " +
                             std::to_string(n_test) + ")");
  }
  const Eigen::VectorXd x =
      data.features.row(data.test_idx[static_cast<std::size_t>(instance)]);

  const alime::Method method =
      alime::method_from_string(cfg.at("method").get<std::string>());
  const auto n = cfg.at("n").get<Eigen::Index>();
  const auto alpha = cfg.at("alpha").get<double>();
  const auto kernel_scale = cfg.at("kernel_scale").get<double>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();

  alime::Explanation e;
  if (method == alime::Method::kLime) {
    e = alime::explain_lime(f, x, n, alpha, seed, kernel_scale,
                            data.feature_names);
  } else {
    const alime::DenoisingAutoencoder ae = load_autoencoder(cfg);
    const alime::SamplePool pool = obtain_pool(cfg, data.feature_count(), ae);
    e = alime::explain_alime(f, ae, pool, x, n, alpha, kernel_scale,
                             data.feature_names);
  }

  Json j = alime::explanation_to_json(e, alpha);
  j["dataset"] = dataset;
  j["instance_test_position"] = instance;
  j["instance_index"] =
      data.test_idx[static_cast<std::size_t>(instance)];

  const std::filesystem::path out = cfg.at("out").get<std::string>();
  write_json_file(out / "explanation.json", j);
  alime::write_text_file(out / "explanation_bars.csv",
                         alime::explanation_bar_csv(e));
  write_json_file(out / "run_config.json", cfg);
  std::cout << e.method << " explanation for test instance " << instance
            << ": local_r2 " << alime::format_double(e.local_r2) << "\n";
  return 0;
}

// Appends csv b under csv a, dropping b's header line.
std::string combine_csv(const std::string& a, const std::string& b) {
  return a + b.substr(b.find('\n') + 1);
}

int run_benchmark(const Json& cfg) {
  const auto kind = cfg.at("kind").get<std::string>();
  if (kind != "fidelity" && kind != "stability") {
    throw alime::ConfigError("unknown benchmark kind '" + kind +
                             "' (expected fidelity or stability)");
  }
  const auto dataset = cfg.at("dataset").get<std::string>();
  const alime::BlackBoxPredictor f = load_blackbox(cfg);
  const alime::DenoisingAutoencoder ae = load_autoencoder(cfg);
  const alime::TabularDataset data = load_standardized(
      dataset, cfg.at("data_path").get<std::string>(), f.seed);

  std::vector<Eigen::Index> n_values;
  for (const auto& v : cfg.at("n_values")) {
    n_values.push_back(v.get<Eigen::Index>());
  }
  const auto m = cfg.at("m").get<Eigen::Index>();
  const auto alpha = cfg.at("alpha").get<double>();
  const auto kernel_scale = cfg.at("kernel_scale").get<double>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const std::filesystem::path out = cfg.at("out").get<std::string>();

  if (kind == "fidelity") {
    const alime::FidelityReport lime =
        alime::fidelity_sweep(f, nullptr, nullptr, data, alime::Method::kLime,
                              n_values, alpha, seed, kernel_scale);
    const alime::SamplePool pool = obtain_pool(cfg, data.feature_count(), ae);
    const alime::FidelityReport al =
        alime::fidelity_sweep(f, &ae, &pool, data, alime::Method::kAlime,
                              n_values, alpha, seed, kernel_scale);
    write_json_file(out / "fidelity_lime.json",
                    alime::fidelity_report_to_json(lime));
    write_json_file(out / "fidelity_alime.json",
                    alime::fidelity_report_to_json(al));
    alime::write_text_file(out / "fidelity.csv",
                           combine_csv(alime::fidelity_report_csv(lime),
                                       alime::fidelity_report_csv(al)));
  } else {
    const auto iterations = cfg.at("iterations").get<int>();
    const alime::StabilityReport lime =
        alime::stability_sweep(f, nullptr, data, alime::Method::kLime,
                               n_values, iterations, alpha, m, seed,
                               kernel_scale);
    const alime::StabilityReport al =
        alime::stability_sweep(f, &ae, data, alime::Method::kAlime, n_values,
                               iterations, alpha, m, seed, kernel_scale);
    write_json_file(out / "stability_lime.json",
                    alime::stability_report_to_json(lime));
    write_json_file(out / "stability_alime.json",
                    alime::stability_report_to_json(al));
    alime::write_text_file(out / "stability.csv",
                           combine_csv(alime::stability_report_csv(lime),
                                       alime::stability_report_csv(al)));
  }
  write_json_file(out / "run_config.json", cfg);
  std::cout << kind << " benchmark on " << dataset << " written to "
            << out.string() << "\n";
  return 0;
}

int dispatch(const Json& cfg) {
  const auto cmd = cfg.at("command").get<std::string>();
  if (cmd == "train-blackbox") return run_train_blackbox(cfg);
  if (cmd == "train-ae") return run_train_ae(cfg);
  if (cmd == "explain") return run_explain(cfg);
  if (cmd == "benchmark") return run_benchmark(cfg);
  throw alime::ConfigError("unknown command '" + cmd + "' in config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LIME and ALIME local explanations for tabular classifiers"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "rerun the command recorded in a run_config.json");

  std::string dataset = "breast_cancer";
  std::string data_path;  // default data/<dataset>.csv
  std::string out;        // default out/<command>
  std::uint64_t seed = 7;
  long long epochs = 200;
  long long batch_size = 32;
  double lr = 0.05;
  long long latent_dim = 0;
  double noise_sigma = 0.1;
  std::string blackbox_path;  // default out/train-blackbox/blackbox.json
  std::string ae_path;        // default out/train-ae/autoencoder.json
  std::string pool_file;
  std::string method = "lime";
  std::string kind = "fidelity";
  long long instance = 0;
  long long n = 1000;
  long long m = 10000;
  long long iterations = 10;
  double alpha = 1.0;
  double kernel_scale = 1.0;
  std::vector<long long> n_values = {100, 200, 500, 1000, 2000, 5000, 10000};

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dataset", dataset,
                    "schema: breast_cancer | hepatitis | liver")
        ->capture_default_str();
    sub->add_option("--data-path", data_path,
                    "CSV file (default data/<dataset>.csv)");
    sub->add_option("--out", out, "output directory (default out/<command>)");
    sub->add_option("--seed", seed, "base seed for every stream in the run")
        ->capture_default_str();
  };
  const auto add_training = [&](CLI::App* sub) {
    sub->add_option("--epochs", epochs)->capture_default_str();
    sub->add_option("--lr", lr, "sgd learning rate")->capture_default_str();
    sub->add_option("--batch-size", batch_size)->capture_default_str();
  };
  const auto add_artifacts = [&](CLI::App* sub) {
    sub->add_option("--blackbox", blackbox_path,
                    "trained classifier file (default "
                    "out/train-blackbox/blackbox.json)");
    sub->add_option("--autoencoder", ae_path,
                    "trained autoencoder file (default "
                    "out/train-ae/autoencoder.json)");
    sub->add_option("--pool-file", pool_file,
                    "alime sample pool: loaded when present, else drawn "
                    "and saved here");
    sub->add_option("--m", m, "alime shared pool size")->capture_default_str();
    sub->add_option("--alpha", alpha, "ridge penalty")->capture_default_str();
    sub->add_option("--kernel-scale", kernel_scale,
                    "weight = exp(-distance / scale)")
        ->capture_default_str();
  };

  CLI::App* tb = app.add_subcommand("train-blackbox",
                                    "train the classifier under explanation");
  add_common(tb);
  add_training(tb);

  CLI::App* ta =
      app.add_subcommand("train-ae", "train the denoising autoencoder");
  add_common(ta);
  add_training(ta);
  ta->add_option("--latent-dim", latent_dim, "0 picks min(K-1, 8)")
      ->capture_default_str();
  ta->add_option("--noise-sigma", noise_sigma, "training corruption level")
      ->capture_default_str();

  CLI::App* ex = app.add_subcommand("explain", "explain one test instance");
  add_common(ex);
  add_artifacts(ex);
  ex->add_option("--method", method, "lime | alime")->capture_default_str();
  ex->add_option("--instance", instance, "position within the test split")
      ->capture_default_str();
  ex->add_option("--n", n, "local surrogate sample count")
      ->capture_default_str();

  CLI::App* bm = app.add_subcommand(
      "benchmark", "fidelity or stability sweep over both methods");
  add_common(bm);
  add_artifacts(bm);
  bm->add_option("--kind", kind, "fidelity | stability")
      ->capture_default_str();
  bm->add_option("--n-values", n_values, "comma-separated sweep sizes")
      ->delimiter(',');
  bm->add_option("--iterations", iterations, "stability repetitions")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    (void)app.exit(e);
    return 2;
  }

  try {
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) {
        throw alime::ConfigError("--config cannot be combined with a "
                                 "subcommand");
      }
      return dispatch(read_json_file(config_path));
    }

    const auto resolve_paths = [&](const std::string& cmd) {
      if (data_path.empty()) data_path = "data/" + dataset + ".csv";
      if (out.empty()) out = "out/" + cmd;
      if (blackbox_path.empty()) {
        blackbox_path = "out/train-blackbox/blackbox.json";
      }
      if (ae_path.empty()) ae_path = "out/train-ae/autoencoder.json";
    };

    Json cfg;
    if (tb->parsed()) {
      resolve_paths("train-blackbox");
      cfg["command"] = "train-blackbox";
      cfg["dataset"] = dataset;
      cfg["data_path"] = data_path;
      cfg["out"] = out;
      cfg["seed"] = seed;
      cfg["epochs"] = epochs;
      cfg["lr"] = lr;
      cfg["batch_size"] = batch_size;
    } else if (ta->parsed()) {
      resolve_paths("train-ae");
      cfg["command"] = "train-ae";
      cfg["dataset"] = dataset;
      cfg["data_path"] = data_path;
      cfg["out"] = out;
      cfg["seed"] = seed;
      cfg["epochs"] = epochs;
      cfg["lr"] = lr;
      cfg["batch_size"] = batch_size;
      cfg["latent_dim"] = latent_dim;
      cfg["noise_sigma"] = noise_sigma;
    } else if (ex->parsed()) {
      resolve_paths("explain");
      cfg["command"] = "explain";
      cfg["dataset"] = dataset;
      cfg["data_path"] = data_path;
      cfg["out"] = out;
      cfg["seed"] = seed;
      cfg["blackbox"] = blackbox_path;
      cfg["method"] = method;
      cfg["autoencoder"] = ae_path;
      cfg["pool_file"] = pool_file;
      cfg["instance"] = instance;
      cfg["n"] = n;
      cfg["m"] = m;
      cfg["alpha"] = alpha;
      cfg["kernel_scale"] = kernel_scale;
    } else if (bm->parsed()) {
      resolve_paths("benchmark");
      cfg["command"] = "benchmark";
      cfg["kind"] = kind;
      cfg["dataset"] = dataset;
      cfg["data_path"] = data_path;
      cfg["out"] = out;
      cfg["seed"] = seed;
      cfg["blackbox"] = blackbox_path;
      cfg["autoencoder"] = ae_path;
      cfg["pool_file"] = pool_file;
      cfg["n_values"] = n_values;
      cfg["m"] = m;
      cfg["alpha"] = alpha;
      cfg["kernel_scale"] = kernel_scale;
      cfg["iterations"] = iterations;
    } else {
      std::cerr << app.help();
      return 2;
    }
    return dispatch(cfg);
  } catch (const alime::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
