#include "ramanpcr/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv.hpp"
#include "ramanpcr/crossval.hpp"
#include "ramanpcr/error.hpp"
#include "ramanpcr/model_io.hpp"
#include "ramanpcr/report.hpp"
#include "ramanpcr/selector.hpp"
#include "ramanpcr/significance.hpp"

namespace ramanpcr {

namespace fs = std::filesystem;

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  fs::path spectra;
  fs::path concentrations;
  fs::path output_dir = ".";
  fs::path model;
  fs::path report;       // select: output; train: chosen pair source
  fs::path predictions;  // predict output
  std::vector<std::string> candidates;
  std::string pipeline = "identity";
  int pcs = 0;
  double alpha = 0.05;
  bool log_press = false;
  unsigned threads = 1;
  Index synth_n = 40;
  std::uint64_t seed = 1;
  std::string recipe;  // JSON text of the synth.recipe section
};

// Values as typed on the command line; only options actually given override
// the config file.
struct Flags {
  std::string config;
  std::string spectra, concentrations, output_dir, model, report, predictions, pipeline;
  std::vector<std::string> candidates;
  int pcs = 0;
  double alpha = 0.05;
  bool log_press = false;
  unsigned threads = 1;
  long long n = 40;
  std::uint64_t seed = 1;
};

Json read_json(const fs::path& path, ErrorCode code) {
  const std::string text = detail::read_text(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(code, path.string() + ": " + e.what());
  }
}

RunConfig load_config(const fs::path& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  const Json doc = read_json(path, ErrorCode::ConfigError);
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, path.string() + ": top level must be an object");
  const fs::path base = path.parent_path();
  const auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  try {
    if (doc.contains("spectra")) cfg.spectra = resolve(doc["spectra"].get<std::string>());
    if (doc.contains("concentrations")) cfg.concentrations = resolve(doc["concentrations"].get<std::string>());
    if (doc.contains("output_dir")) cfg.output_dir = resolve(doc["output_dir"].get<std::string>());
    if (doc.contains("model")) cfg.model = resolve(doc["model"].get<std::string>());
    if (doc.contains("report")) cfg.report = resolve(doc["report"].get<std::string>());
    if (doc.contains("predictions")) cfg.predictions = resolve(doc["predictions"].get<std::string>());
    if (doc.contains("candidates")) cfg.candidates = doc["candidates"].get<std::vector<std::string>>();
    if (doc.contains("pipeline")) cfg.pipeline = doc["pipeline"].get<std::string>();
    if (doc.contains("pcs")) cfg.pcs = doc["pcs"].get<int>();
    if (doc.contains("alpha")) cfg.alpha = doc["alpha"].get<double>();
    if (doc.contains("log_press")) cfg.log_press = doc["log_press"].get<bool>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<unsigned>();
    if (doc.contains("synth")) {
      const auto& s = doc["synth"];
      if (s.contains("n")) cfg.synth_n = s["n"].get<Index>();
      if (s.contains("seed")) cfg.seed = s["seed"].get<std::uint64_t>();
      if (s.contains("recipe")) cfg.recipe = s["recipe"].dump();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return cfg;
}

bool given(const CLI::App* sub, const std::string& name) {
  const auto* opt = sub->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

RunConfig merge(const CLI::App& app, const CLI::App* sub, const Flags& f) {
  RunConfig cfg = load_config(f.config);
  if (given(sub, "--spectra")) cfg.spectra = f.spectra;
  if (given(sub, "--concentrations")) cfg.concentrations = f.concentrations;
  if (given(sub, "--out-dir")) cfg.output_dir = f.output_dir;
  if (given(sub, "--model")) cfg.model = f.model;
  if (given(sub, "--report")) cfg.report = f.report;
  if (given(sub, "--out")) cfg.predictions = f.predictions;
  if (given(sub, "--pipeline")) cfg.pipeline = f.pipeline;
  if (given(sub, "--candidate")) cfg.candidates = f.candidates;
  if (given(sub, "--pcs")) cfg.pcs = f.pcs;
  if (given(sub, "--alpha")) cfg.alpha = f.alpha;
  if (given(sub, "--log-press")) cfg.log_press = f.log_press;
  if (given(sub, "--n")) cfg.synth_n = static_cast<Index>(f.n);
  if (given(sub, "--seed")) cfg.seed = f.seed;
  if (given(&app, "--threads")) cfg.threads = f.threads;
  if (cfg.threads == 0) cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw Error(ErrorCode::ConfigError, "alpha must lie in (0, 1)");
  return cfg;
}

void require_path(const fs::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorCode::ConfigError, std::string("no ") + what + " given");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

std::vector<Peak> peaks_from_json(const Json& j) {
  std::vector<Peak> peaks;
  for (const auto& p : j) {
    if (p.is_array()) {
      if (p.size() != 3) throw Error(ErrorCode::ConfigError, "peak needs [center, width, amplitude]");
      peaks.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    } else {
      peaks.push_back({p.at("center").get<double>(), p.at("width").get<double>(), p.value("amplitude", 1.0)});
    }
  }
  return peaks;
}

std::pair<double, double> range(const Json& j, const char* key, std::pair<double, double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = j[key].get<std::vector<double>>();
  if (v.size() != 2) throw Error(ErrorCode::ConfigError, std::string(key) + " needs [min, max]");
  return {v[0], v[1]};
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.spectra, "spectra file");
  const SpectraSet set = load_spectra(cfg.spectra);
  out << "i=" << set.rows() << " j=" << set.channels();
  if (!cfg.concentrations.empty()) {
    const ConcentrationSet conc = load_concentrations(cfg.concentrations, set);
    out << " q=" << conc.species_count();
  }
  out << "\n";
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  const SynthRecipe recipe = recipe_from_json(cfg.recipe, cfg.seed);
  const ConcentrationSet conc = cfg.concentrations.empty() ? random_concentrations(recipe, cfg.synth_n, cfg.seed)
                                                           : load_concentrations(cfg.concentrations);
  const SpectraSet set = generate(recipe, conc);
  ensure_dir(cfg.output_dir);
  save_spectra(cfg.output_dir / "spectra.csv", set);
  save_concentrations(cfg.output_dir / "concentrations.csv", conc);
  out << "wrote " << set.rows() << " synthetic spectra (" << set.channels() << " channels) to "
      << (cfg.output_dir / "spectra.csv").string() << "\n";
  return kExitOk;
}

int cmd_crossval(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.spectra, "spectra file");
  require_path(cfg.concentrations, "concentrations file");
  const SpectraSet set = load_spectra(cfg.spectra);
  const ConcentrationSet conc = load_concentrations(cfg.concentrations, set);
  const Pipeline pipeline = Pipeline::parse(cfg.pipeline);
  CrossvalOptions options;
  options.threads = cfg.threads;
  const PressMatrix press = loo_press_matrix(set, conc, pipeline, options);
  const PcVerdict verdict = select_optimal_pc(press, cfg.alpha, AnovaOptions{cfg.log_press});
  ensure_dir(cfg.output_dir);
  save_press_matrix(cfg.output_dir / "press_matrix.csv", press);
  save_boxplot(cfg.output_dir / "boxplot.csv", verdict.boxplot);
  out << "pipeline=" << pipeline.name() << " S=" << press.samples() << "x" << press.pcs()
      << " F=" << format_number(verdict.anova.f) << " p=" << format_number(verdict.anova.p_value)
      << " significant=" << (verdict.significant ? "yes" : "no") << " optimal_pc=" << verdict.optimal_pc << "\n";
  for (const auto& a : verdict.alerts) out << "alert: " << a << "\n";
  if (!press.notes.empty())
    out << "notes: " << press.notes.size() << " fold notes, first: " << press.notes.front() << "\n";
  return kExitOk;
}

int cmd_select(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.spectra, "spectra file");
  require_path(cfg.concentrations, "concentrations file");
  const SpectraSet set = load_spectra(cfg.spectra);
  const ConcentrationSet conc = load_concentrations(cfg.concentrations, set);
  const auto names = cfg.candidates.empty() ? default_candidates() : cfg.candidates;
  std::vector<Pipeline> candidates;
  for (const auto& n : names) candidates.push_back(Pipeline::parse(n));

  SelectOptions options;
  options.alpha = cfg.alpha;
  options.anova.log10_press = cfg.log_press;
  options.threads = cfg.threads;
  const SelectionReport report = select_method(set, conc, candidates, options);

  const std::vector<InputFile> inputs{{"spectra", cfg.spectra.filename().string(), sha256_file(cfg.spectra)},
                                      {"concentrations", cfg.concentrations.filename().string(),
                                       sha256_file(cfg.concentrations)}};
  const fs::path path = cfg.report.empty() ? cfg.output_dir / "report.json" : cfg.report;
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  save_report(path, report_to_json(report, inputs, set, conc));

  for (const auto& e : report.entries) {
    out << e.index << " " << e.pipeline << ": ";
    if (e.failed)
      out << "failed\n";
    else
      out << "F=" << format_number(e.verdict.anova.f) << " p=" << format_number(e.verdict.anova.p_value)
          << " optimal_pc=" << e.verdict.optimal_pc << " sum_press=" << format_number(e.sum_press_at_optimal)
          << (e.verdict.significant ? " significant" : " not significant") << "\n";
  }
  out << "chosen pipeline=" << report.chosen_pipeline << " pc=" << report.chosen_pc << "\n";
  for (const auto& a : report.alerts) out << "alert: " << a << "\n";
  out << "report: " << path.string() << "\n";
  return report.significant ? kExitOk : kExitNotSignificant;
}

int cmd_train(const RunConfig& cfg, const CLI::App* sub, std::ostream& out, std::ostream& err) {
  require_path(cfg.spectra, "spectra file");
  require_path(cfg.concentrations, "concentrations file");
  std::string pipeline_text = cfg.pipeline;
  int pcs = cfg.pcs;
  // A selection report supplies the pair unless overridden on the command line.
  if (!cfg.report.empty()) {
    const Json doc = read_json(cfg.report, ErrorCode::ConfigError);
    try {
      if (!given(sub, "--pipeline")) pipeline_text = doc.at("chosen").at("pipeline").get<std::string>();
      if (!given(sub, "--pcs")) pcs = doc.at("chosen").at("pc").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ConfigError, cfg.report.string() + ": " + e.what());
    }
  }
  const SpectraSet set = load_spectra(cfg.spectra);
  const ConcentrationSet conc = load_concentrations(cfg.concentrations, set);
  const PcrModel model = train_final(set, conc, Pipeline::parse(pipeline_text), pcs);
  if (model.components() < pcs)
    err << "warning: data supports only " << model.components() << " components; model truncated\n";
  const fs::path path = cfg.model.empty() ? cfg.output_dir / "model.json" : cfg.model;
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  save_model(path, model);
  out << "model pipeline=" << model.pipeline.name() << " pc=" << model.components() << " -> " << path.string()
      << "\n";
  return kExitOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.model, "model file");
  require_path(cfg.spectra, "spectra file");
  const PcrModel model = load_model(cfg.model);
  const SpectraSet set = load_spectra(cfg.spectra);
  const ConcentrationSet predicted = predict_concentrations(model, set);
  const fs::path path = cfg.predictions.empty() ? cfg.output_dir / "predictions.csv" : cfg.predictions;
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  save_concentrations(path, predicted);
  const auto negatives = (predicted.matrix().array() < 0.0).count();
  if (negatives > 0) err << "warning: " << negatives << " negative predicted concentrations\n";
  out << "predicted " << predicted.samples() << " spectra -> " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

SynthRecipe recipe_from_json(const std::string& text, std::uint64_t seed) {
  if (text.empty()) return tears_recipe(seed);
  try {
    const Json j = Json::parse(text);
    if (j.contains("preset")) {
      if (j["preset"].get<std::string>() != "tears")
        throw Error(ErrorCode::ConfigError, "unknown recipe preset '" + j["preset"].get<std::string>() + "'");
      return tears_recipe(seed);
    }
    SynthRecipe r;
    r.seed = seed;
    if (j.contains("axis")) {
      const auto& a = j["axis"];
      r.axis = {a.value("start", 400.0), a.value("stop", 1800.0), a.value("step", 2.0)};
    }
    for (const auto& s : j.at("species")) {
      SynthSpecies sp;
      sp.name = s.at("name").get<std::string>();
      sp.unit = s.value("unit", "");
      sp.peaks = peaks_from_json(s.at("peaks"));
      sp.response = s.value("response", 1.0);
      std::tie(sp.conc_min, sp.conc_max) = range(s, "range", {0.0, 1.0});
      r.species.push_back(std::move(sp));
    }
    if (j.contains("background")) r.background = peaks_from_json(j["background"]);
    if (j.contains("baseline")) {
      const auto& b = j["baseline"];
      const std::string kind = b.value("kind", "none");
      if (kind == "polynomial")
        r.baseline.kind = BaselineKind::Polynomial;
      else if (kind == "exponential")
        r.baseline.kind = BaselineKind::Exponential;
      else if (kind != "none")
        throw Error(ErrorCode::ConfigError, "unknown baseline kind '" + kind + "'");
      r.baseline.coefficients = b.value("coefficients", std::vector<double>{});
      std::tie(r.baseline.scale_min, r.baseline.scale_max) = range(b, "scale", {1.0, 1.0});
    }
    r.noise = j.value("noise", 0.0);
    if (j.contains("spikes")) {
      r.spikes.rate = j["spikes"].value("rate", 0.0);
      std::tie(r.spikes.amplitude_min, r.spikes.amplitude_max) = range(j["spikes"], "amplitude", {0.0, 0.0});
    }
    std::tie(r.drift_min, r.drift_max) = range(j, "drift", {1.0, 1.0});
    r.validate();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("recipe: ") + e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PCR calibration of Raman spectra with significance-gated pre-treatment selection", "ramanpcr"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("-c,--config", f.config, "JSON run configuration");
  app.add_option("-t,--threads", f.threads, "worker threads (0 = all cores)");

  const auto data_options = [&](CLI::App* sub, bool conc) {
    sub->add_option("-s,--spectra", f.spectra, "wide spectra CSV");
    if (conc) sub->add_option("-k,--concentrations", f.concentrations, "concentrations CSV");
    sub->add_option("-o,--out-dir", f.output_dir, "output directory");
  };

  auto* validate = app.add_subcommand("validate", "load inputs and print their dimensions");
  data_options(validate, true);

  auto* synth = app.add_subcommand("synth", "write a synthetic spectra/concentrations pair");
  synth->add_option("-o,--out-dir", f.output_dir, "output directory");
  synth->add_option("-n,--n", f.n, "number of spectra")->check(CLI::PositiveNumber);
  synth->add_option("--seed", f.seed, "random seed");
  synth->add_option("-k,--concentrations", f.concentrations, "use these concentrations instead of random ones");

  auto* crossval = app.add_subcommand("crossval", "leave-one-out PRESS matrix and box-plot summary");
  data_options(crossval, true);
  crossval->add_option("-p,--pipeline", f.pipeline, "pre-treatment pipeline");
  crossval->add_option("-a,--alpha", f.alpha, "significance level");
  crossval->add_flag("--log-press", f.log_press, "test log10(PRESS)");

  auto* select = app.add_subcommand("select", "qualify candidate pipelines and choose the PC count");
  data_options(select, true);
  select->add_option("--candidate", f.candidates, "candidate pipeline (repeatable)");
  select->add_option("-a,--alpha", f.alpha, "significance level");
  select->add_flag("--log-press", f.log_press, "test log10(PRESS)");
  select->add_option("-r,--report", f.report, "report path (default <out-dir>/report.json)");

  auto* train = app.add_subcommand("train", "fit the final model");
  data_options(train, true);
  train->add_option("-p,--pipeline", f.pipeline, "pre-treatment pipeline");
  train->add_option("--pcs", f.pcs, "number of components");
  train->add_option("-r,--report", f.report, "take pipeline and PC count from a selection report");
  train->add_option("-m,--model", f.model, "model path (default <out-dir>/model.json)");

  auto* predict = app.add_subcommand("predict", "predict concentrations with a saved model");
  data_options(predict, false);
  predict->add_option("-m,--model", f.model, "model file");
  predict->add_option("--out", f.predictions, "predictions CSV (default <out-dir>/predictions.csv)");

  std::vector<const char*> argv{"ramanpcr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const RunConfig cfg = merge(app, sub, f);
    if (sub == validate) return cmd_validate(cfg, out);
    if (sub == synth) return cmd_synth(cfg, out);
    if (sub == crossval) return cmd_crossval(cfg, out);
    if (sub == select) return cmd_select(cfg, out);
    if (sub == train) return cmd_train(cfg, sub, out, err);
    return cmd_predict(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace ramanpcr
