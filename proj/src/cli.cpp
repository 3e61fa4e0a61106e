// Copyright 2026 The isingclf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "isingclf/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "isingclf/errors.hpp"
#include "isingclf/io.hpp"
#include "isingclf/ising.hpp"
#include "isingclf/model_io.hpp"
#include "isingclf/pipeline.hpp"
#include "isingclf/rng.hpp"
#include "isingclf/solvers.hpp"

namespace isingclf {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// File-based run configuration. Command-line flags and ISINGCLF_* environment
// variables take precedence over values read from --config.
struct RunConfig {
  std::string dataset;
  std::vector<std::string> methods{"sa"};
  std::uint64_t seed = 0;
  std::size_t pca_k = 44;
  std::optional<std::size_t> n_splits;
  double train_fraction = 0.8;
  std::vector<double> fractions = SweepConfig{}.fractions;
  int cv_folds = 10;
  std::string out_dir = ".";
  std::size_t threads = 1;
  MethodSettings settings;
  HyperparameterGrids grids = default_grids();
};

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + path.string() + "': " + e.what());
  }
  static const char* known[] = {"dataset", "methods", "seed",     "pca_k",    "n_splits",
                                "train_fraction",     "fractions", "cv_folds", "out_dir",
                                "threads",  "capacity", "solver",   "grids",    "rbm",
                                "ridge"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return it.key() == k; }) == std::end(known)) {
      throw ParseError("config '" + path.string() + "': unknown key '" + it.key() + "'");
    }
  }
  RunConfig c;
  try {
    read_key(j, "dataset", c.dataset);
    read_key(j, "methods", c.methods);
    read_key(j, "seed", c.seed);
    read_key(j, "pca_k", c.pca_k);
    if (j.contains("n_splits")) c.n_splits = j.at("n_splits").get<std::size_t>();
    read_key(j, "train_fraction", c.train_fraction);
    read_key(j, "fractions", c.fractions);
    read_key(j, "cv_folds", c.cv_folds);
    read_key(j, "out_dir", c.out_dir);
    read_key(j, "threads", c.threads);
    read_key(j, "capacity", c.settings.capacity);
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      read_key(s, "sweeps", c.settings.schedule.sweeps);
      read_key(s, "beta_initial", c.settings.schedule.beta_initial);
      read_key(s, "beta_final", c.settings.schedule.beta_final);
      read_key(s, "restarts", c.settings.restarts);
      read_key(s, "random_samples", c.settings.random_samples);
      read_key(s, "top_n", c.settings.top_n);
      read_key(s, "exhaustive_keep", c.settings.exhaustive_keep);
    }
    if (j.contains("rbm")) {
      const auto& r = j.at("rbm");
      read_key(r, "n_hidden", c.settings.rbm.n_hidden);
      read_key(r, "epochs", c.settings.rbm.epochs);
      read_key(r, "batch_size", c.settings.rbm.batch_size);
      read_key(r, "cd_steps", c.settings.rbm.cd_steps);
      read_key(r, "learning_rate", c.settings.rbm.learning_rate);
    }
    if (j.contains("ridge")) {
      const auto& r = j.at("ridge");
      read_key(r, "tolerance", c.settings.ridge.tolerance);
      read_key(r, "max_iterations", c.settings.ridge.max_iterations);
    }
    if (j.contains("grids")) {
      for (auto it = j.at("grids").begin(); it != j.at("grids").end(); ++it) {
        c.grids[parse_method(it.key())] = it.value().get<std::vector<double>>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + path.string() + "': " + e.what());
  }
  return c;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("invalid fraction '" + item + "'");
    }
  }
  return out;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// Values given on the command line or through the environment.
struct Overrides {
  std::string config;
  std::string data;
  std::string methods;
  std::string fractions;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t pca_k = 0;
  std::size_t splits = 0;
  std::size_t threads = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* pca_opt = nullptr;
  CLI::Option* splits_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* methods_opt = nullptr;
  CLI::Option* fractions_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* data_opt = nullptr;
};

RunConfig resolve_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (o.data_opt->count()) c.dataset = o.data;
  if (o.methods_opt->count()) c.methods = split_list(o.methods);
  if (o.seed_opt->count()) c.seed = o.seed;
  if (o.pca_opt->count()) c.pca_k = o.pca_k;
  if (o.splits_opt->count()) c.n_splits = o.splits;
  if (o.fractions_opt->count()) c.fractions = parse_fractions(o.fractions);
  if (o.out_opt->count()) c.out_dir = o.out_dir;
  if (o.threads_opt->count()) c.threads = o.threads;
  c.settings.threads = std::max<std::size_t>(c.threads, 1);
  return c;
}

LabeledDataset load_configured_dataset(const RunConfig& c) {
  if (c.dataset.empty()) throw Error("no dataset given (use --data or the config 'dataset' key)");
  return load_dataset_csv(c.dataset);
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  int classes = 2;
  std::size_t features = 10;
  std::size_t n_per_class = 250;
  double separation = 3.0;
  double noise = 1.0;
  std::string layout = "axis";
};

SyntheticSpec synth_spec(const SynthArgs& a) {
  if (a.classes < 2) throw DomainError("--classes must be >= 2");
  if (a.features < 1) throw DomainError("--features must be >= 1");
  const auto m = static_cast<Eigen::Index>(a.features);
  if (a.layout == "uniform") {
    if (a.classes != 2) throw DomainError("--layout uniform needs --classes 2");
    auto spec = separable_binomial_spec(a.features, a.separation, a.n_per_class);
    spec.covariances.front() *= a.noise * a.noise;
    return spec;
  }
  SyntheticSpec spec;
  spec.n_per_class = a.n_per_class;
  spec.covariances = {a.noise * a.noise * Eigen::MatrixXd::Identity(m, m)};
  for (int c = 0; c < a.classes; ++c) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(m);
    if (a.layout == "axis") {
      if (a.classes == 2) {
        mu(0) = c == 0 ? a.separation : -a.separation;
      } else {
        mu(c % m) = a.separation;
      }
    } else if (a.layout == "spread") {
      // Signal spread evenly over all features with fixed signs.
      for (Eigen::Index j = 0; j < m; ++j) {
        const bool positive = a.classes == 2
                                  ? (j % 2 == 0) == (c == 0)
                                  : (splitmix64((static_cast<std::uint64_t>(c) << 32) ^
                                                static_cast<std::uint64_t>(j)) & 1U) != 0;
        mu(j) = (positive ? 1.0 : -1.0) * a.separation / std::sqrt(static_cast<double>(m));
      }
    } else {
      throw DomainError("--layout must be axis, spread or uniform");
    }
    spec.means.push_back(mu);
  }
  return spec;
}

// ---------------------------------------------------------------------------

int cmd_benchmark(const RunConfig& c, std::ostream& out) {
  const auto data = load_configured_dataset(c);
  BenchmarkConfig bc;
  bc.methods = parse_methods(c.methods);
  bc.n_splits = c.n_splits.value_or(100);
  bc.train_fraction = c.train_fraction;
  bc.pca_k = c.pca_k;
  bc.seed = c.seed;
  bc.cv_folds = c.cv_folds;
  bc.settings = c.settings;
  bc.grids = c.grids;
  auto report = run_benchmark(data, bc);
  report.config_snapshot["dataset_path"] = c.dataset;
  const fs::path dir = c.out_dir;
  write_file(dir / "benchmark_report.json", dump(to_json(report)));
  write_file(dir / "benchmark_splits.csv", splits_csv(report));
  write_file(dir / "benchmark_aggregate.csv", aggregate_csv(report));
  for (const auto& a : report.aggregate) {
    out << a.method << ": balanced accuracy " << a.mean.balanced_accuracy << " +- "
        << a.sem.balanced_accuracy << " (n=" << a.n << ")\n";
  }
  return 0;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const auto data = load_configured_dataset(c);
  SweepConfig sc;
  sc.methods = parse_methods(c.methods);
  sc.fractions = c.fractions;
  sc.n_splits = c.n_splits.value_or(50);
  sc.holdout_train_fraction = c.train_fraction;
  sc.pca_k = c.pca_k;
  sc.seed = c.seed;
  sc.cv_folds = c.cv_folds;
  sc.settings = c.settings;
  sc.grids = c.grids;
  auto report = fraction_sweep(data, sc);
  report.config_snapshot["dataset_path"] = c.dataset;
  const fs::path dir = c.out_dir;
  write_file(dir / "sweep_report.json", dump(to_json(report)));
  write_file(dir / "sweep_splits.csv", splits_csv(report));
  write_file(dir / "sweep_aggregate.csv", aggregate_csv(report));
  for (const auto& a : report.aggregate) {
    out << "fraction " << *a.fraction << ", " << a.method << ": balanced accuracy "
        << a.mean.balanced_accuracy << " +- " << a.sem.balanced_accuracy << "\n";
  }
  return 0;
}

int cmd_train(const RunConfig& c, const std::string& model_path, std::optional<double> hyper,
              std::ostream& out) {
  const auto data = load_configured_dataset(c);
  data.validate();
  if (c.methods.size() != 1) throw Error("train takes exactly one method");
  const auto method = parse_method(c.methods.front());
  const auto prep = std::make_shared<const Preprocessing>(fit_preprocessing(data, c.pca_k));
  const auto train = prep->apply(data);
  double chosen = std::numeric_limits<double>::quiet_NaN();
  if (hyper) {
    chosen = *hyper;
  } else {
    const auto it = c.grids.find(method);
    if (it != c.grids.end() && !it->second.empty()) {
      chosen = cross_validate(train, method, it->second, c.settings, c.cv_folds,
                              derive_seed(c.seed, 200 + static_cast<std::uint64_t>(method), 0))
                   .best;
    }
  }
  auto model = train_method(method, train, chosen, c.settings,
                            derive_seed(c.seed, 100 + static_cast<std::uint64_t>(method), 0));
  model.preprocessing = prep;
  auto j = to_json(model);
  j["hyperparameter"] = std::isnan(chosen) ? ojson(nullptr) : ojson(chosen);
  j["label_names"] = data.label_names;
  j["feature_names"] = data.feature_names;
  j["seed"] = c.seed;
  j["diagnostics"] = model.diagnostics;
  const fs::path path = model_path.empty() ? fs::path(c.out_dir) / "model.json" : fs::path(model_path);
  write_file(path, dump(j));
  const auto fit = evaluate(model, train).metrics;
  out << "trained " << model.method_tag << " on " << data.n_samples()
      << " samples; training balanced accuracy " << fit.balanced_accuracy << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& c, const std::string& model_path, const std::string& out_path,
                 std::ostream& out) {
  std::ifstream in(model_path);
  if (!in) throw ParseError("cannot open model '" + model_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("model '" + model_path + "': " + e.what());
  }
  const auto model = model_from_json(j);
  auto data = load_configured_dataset(c);
  const auto names = j.value("label_names", std::vector<std::string>{});
  if (!names.empty()) {
    // Map the dataset's labels onto the model's class indices by name.
    std::map<std::string, int> index;
    for (std::size_t k = 0; k < names.size(); ++k) index[names[k]] = static_cast<int>(k);
    for (auto& y : data.labels) {
      const auto& name = data.label_names[static_cast<std::size_t>(y)];
      const auto it = index.find(name);
      if (it == index.end()) throw Error("label '" + name + "' is unknown to the model");
      y = it->second;
    }
    data.label_names = names;
    data.n_classes = static_cast<int>(names.size());
  }
  if (data.n_classes != model.n_classes) throw DimensionError("dataset and model disagree on K");
  const auto prepared = model.preprocessing ? model.preprocessing->apply(data) : data;
  const auto result = evaluate(model, prepared);
  std::vector<int> pred;
  const Eigen::MatrixXd proba = predict_proba(model, prepared.features);
  for (Eigen::Index i = 0; i < proba.rows(); ++i) pred.push_back(argmax_lowest(proba.row(i).transpose()));
  const auto confusion = confusion_matrix(data.labels, pred, data.n_classes);

  ojson r;
  r["model"] = model_path;
  r["dataset_path"] = c.dataset;
  r["method"] = model.method_tag;
  r["n_samples"] = data.n_samples();
  r["metrics"] = {{"accuracy", result.metrics.accuracy},
                  {"balanced_accuracy", result.metrics.balanced_accuracy},
                  {"auc", result.metrics.auc},
                  {"f1", result.metrics.f1}};
  r["warnings"] = result.warnings;
  ojson cm = ojson::array();
  for (Eigen::Index a = 0; a < confusion.rows(); ++a) {
    ojson row = ojson::array();
    for (Eigen::Index b = 0; b < confusion.cols(); ++b) row.push_back(confusion(a, b));
    cm.push_back(row);
  }
  r["confusion_matrix"] = cm;
  r["label_names"] = data.label_names;
  const std::string text = dump(r);
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
    out << "balanced accuracy " << result.metrics.balanced_accuracy << "\n";
  }
  return 0;
}

// Rebuilds per-split records from a splits CSV written by benchmark/sweep.
RunReport report_from_splits_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  const auto need = [&](const std::string& name) {
    const auto it = col.find(name);
    if (it == col.end()) throw ParseError(path.string() + ": missing column '" + name + "'");
    return it->second;
  };
  RunReport report;
  report.kind = "stats";
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw ParseError(path.string() + ": row " + std::to_string(row) + " has " +
                       std::to_string(f.size()) + " fields, header has " +
                       std::to_string(header.size()));
    }
    const auto number = [&](const std::string& name) {
      const auto& cell = f[need(name)];
      try {
        return std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError(path.string() + ": row " + std::to_string(row) + ", column '" + name +
                         "': invalid number '" + cell + "'");
      }
    };
    SplitRecord r;
    r.split_id = static_cast<std::size_t>(number("split_id"));
    r.method = f[need("method")];
    if (col.count("fraction") && !f[col["fraction"]].empty()) r.fraction = number("fraction");
    MetricSet* sets[] = {&r.test, &r.train};
    const char* prefixes[] = {"test_", "train_"};
    for (int s = 0; s < 2; ++s) {
      double* fields[] = {&sets[s]->accuracy, &sets[s]->balanced_accuracy, &sets[s]->auc, &sets[s]->f1};
      for (std::size_t k = 0; k < std::size(kMetricNames); ++k) {
        const auto name = std::string(prefixes[s]) + kMetricNames[k];
        *fields[k] = col.count(name) ? number(name) : 0.0;
      }
    }
    if (report.config_snapshot.is_null() && col.count("master_seed")) {
      report.config_snapshot["seed"] = f[col["master_seed"]];
    }
    report.splits.push_back(r);
  }
  if (report.splits.empty()) throw ParseError(path.string() + ": no data rows");
  return report;
}

int cmd_stats(const std::string& input, const std::string& out_path, std::ostream& out) {
  auto report = report_from_splits_csv(input);
  ojson snapshot;
  snapshot["source"] = input;
  snapshot["seed"] = report.config_snapshot.value("seed", "");
  report.config_snapshot = snapshot;
  summarize(report);
  auto j = to_json(report);
  j.erase("per_split");
  const std::string text = dump(j);
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
    out << report.pairwise_tests.size() << " pairwise tests written to " << out_path << "\n";
  }
  return 0;
}

struct SolveArgs {
  std::string problem;
  std::string solver = "sa";
  std::size_t restarts = 1000;
  std::size_t sweeps = 1000;
  double beta_initial = 0.01;
  double beta_final = 3.0;
  std::size_t samples = 1000;
  std::size_t keep = 0;
  std::size_t top_n = 20;
  std::size_t report = 10;
  bool scale = false;
  std::string out;
};

int cmd_solve(const SolveArgs& a, std::uint64_t seed, std::size_t threads, std::ostream& out) {
  auto problem = load_ising_text(a.problem);
  if (a.scale) problem = scale_to_unit(problem);
  SolveResult result;
  if (a.solver == "sa") {
    AnnealSchedule schedule{a.sweeps, a.beta_initial, a.beta_final};
    result = simulated_anneal(problem, schedule, AnnealOptions{a.restarts, seed, threads});
  } else if (a.solver == "random") {
    result = random_search(problem, a.samples, seed);
  } else if (a.solver == "field") {
    result.configurations.push_back(field_solve(problem));
    result.restarts = 1;
  } else if (a.solver == "exhaustive") {
    result = exhaustive_solve(problem, a.keep);
  } else {
    throw Error("unknown solver '" + a.solver + "' (expected sa, random, field or exhaustive)");
  }
  const auto weights = ensemble_average(problem, result, a.top_n);

  ojson j;
  j["solver"] = a.solver;
  j["problem"] = a.problem;
  j["n_spins"] = problem.n_spins();
  j["seed"] = seed;
  j["scaled"] = a.scale;
  j["candidates"] = result.configurations.size();
  ojson configs = ojson::array();
  for (std::size_t i = 0; i < std::min(a.report, result.configurations.size()); ++i) {
    const auto& c = result.configurations[i];
    ojson spins = ojson::array();
    for (auto s : c.spins) spins.push_back(static_cast<int>(s));
    configs.push_back({{"energy", *c.energy}, {"spins", spins}});
  }
  j["configurations"] = configs;
  ojson w = ojson::array();
  for (Eigen::Index i = 0; i < weights.size(); ++i) w.push_back(weights(i));
  j["ensemble"] = {{"top_n", a.top_n}, {"energy_real", energy_real(problem, weights)}, {"weights", w}};
  const std::string text = dump(j);
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
    out << "best energy " << *result.best().energy << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"isingclf: classification by Ising energy minimization", "isingclf"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration")->envname("ISINGCLF_CONFIG");
  o.data_opt = app.add_option("--data", o.data, "Dataset CSV (sample_id,label,features...)")
                   ->envname("ISINGCLF_DATA");
  o.seed_opt = app.add_option("--seed", o.seed, "Master seed")->envname("ISINGCLF_SEED");
  o.methods_opt = app.add_option("--methods", o.methods,
                                 "Comma-separated methods: sa,random,field,exhaustive,rbm,ridge")
                      ->envname("ISINGCLF_METHODS");
  o.pca_opt = app.add_option("--pca-k", o.pca_k, "Principal components to keep (0 = no PCA)")
                  ->envname("ISINGCLF_PCA_K");
  o.splits_opt = app.add_option("--splits", o.splits, "Number of random splits")
                     ->envname("ISINGCLF_SPLITS");
  o.fractions_opt = app.add_option("--fractions", o.fractions, "Comma-separated training fractions")
                        ->envname("ISINGCLF_FRACTIONS");
  o.out_opt = app.add_option("--out-dir", o.out_dir, "Output directory")->envname("ISINGCLF_OUT_DIR");
  o.threads_opt = app.add_option("--threads", o.threads, "Worker threads")->envname("ISINGCLF_THREADS");

  auto* synth = app.add_subcommand("synth", "Generate a Gaussian synthetic dataset");
  SynthArgs sa;
  synth->add_option("--out", sa.out, "Output CSV")->required();
  synth->add_option("--classes", sa.classes, "Number of classes");
  synth->add_option("--features", sa.features, "Number of features");
  synth->add_option("--n-per-class", sa.n_per_class, "Samples per class");
  synth->add_option("--separation", sa.separation, "Distance of class means from the origin");
  synth->add_option("--noise", sa.noise, "Per-feature noise standard deviation");
  synth->add_option("--layout", sa.layout, "Mean layout: axis, spread or uniform");

  auto* train = app.add_subcommand("train", "Train one method on a whole dataset");
  std::string model_path;
  std::optional<double> hyper;
  train->add_option("--model", model_path, "Output model JSON (default <out-dir>/model.json)");
  train->add_option("--hyperparameter", hyper, "Skip CV and use this value");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a saved model on a dataset");
  std::string eval_model, eval_out;
  evaluate_cmd->add_option("--model", eval_model, "Model JSON")->required();
  evaluate_cmd->add_option("--out", eval_out, "Metrics JSON (default: stdout)");

  auto* benchmark = app.add_subcommand("benchmark", "Repeated split benchmark");
  auto* sweep = app.add_subcommand("sweep", "Training-fraction sweep on a fixed held-out set");

  auto* stats = app.add_subcommand("stats", "Pairwise Wilcoxon tests from a per-split CSV");
  std::string stats_in, stats_out;
  stats->add_option("--input", stats_in, "Per-split metrics CSV")->required();
  stats->add_option("--out", stats_out, "Output JSON (default: stdout)");

  auto* solve = app.add_subcommand("solve", "Solve an Ising problem from a text file");
  SolveArgs so;
  solve->add_option("--problem", so.problem, "Ising problem file")->required();
  solve->add_option("--solver", so.solver, "sa, random, field or exhaustive");
  solve->add_option("--restarts", so.restarts, "SA restarts");
  solve->add_option("--sweeps", so.sweeps, "SA sweeps per restart");
  solve->add_option("--beta-initial", so.beta_initial, "Initial inverse temperature");
  solve->add_option("--beta-final", so.beta_final, "Final inverse temperature");
  solve->add_option("--samples", so.samples, "Random-search samples");
  solve->add_option("--keep", so.keep, "Exhaustive: keep this many lowest states (0 = all)");
  solve->add_option("--top-n", so.top_n, "Configurations considered for ensemble averaging");
  solve->add_option("--report", so.report, "Configurations listed in the output");
  solve->add_flag("--scale", so.scale, "Scale coefficients into [-1, 1] first");
  solve->add_option("--out", so.out, "Output JSON (default: stdout)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "isingclf: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto config = resolve_config(o);
    if (synth->parsed()) {
      const auto data = generate_synthetic(synth_spec(sa), config.seed);
      const fs::path p = sa.out;
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      save_dataset_csv(data, p);
      out << "wrote " << data.n_samples() << " samples to " << sa.out << "\n";
      return 0;
    }
    if (train->parsed()) return cmd_train(config, model_path, hyper, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(config, eval_model, eval_out, out);
    if (benchmark->parsed()) return cmd_benchmark(config, out);
    if (sweep->parsed()) return cmd_sweep(config, out);
    if (stats->parsed()) return cmd_stats(stats_in, stats_out, out);
    if (solve->parsed()) return cmd_solve(so, config.seed, config.settings.threads, out);
  } catch (const std::exception& e) {
    err << "isingclf: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace isingclf
