#include "fcmstop/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fcmstop/calibration.hpp"
#include "fcmstop/cost.hpp"
#include "fcmstop/earlystop.hpp"
#include "fcmstop/errors.hpp"
#include "fcmstop/imagery.hpp"
#include "fcmstop/synthetic.hpp"

namespace fcmstop::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<double> kDefaultAccuracies{0.85, 0.90, 0.95, 0.99, 0.999};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct FcmFlags {
  std::optional<std::size_t> clusters;
  std::optional<double> fuzzifier;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iter;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> init;

  void add(CLI::App& app) {
    app.add_option("--clusters", clusters, "Number of clusters");
    app.add_option("--fuzzifier", fuzzifier, "Fuzzifier m > 1");
    app.add_option("--epsilon", epsilon, "Membership change tolerance");
    app.add_option("--max-iter", max_iter, "Iteration cap");
    app.add_option("--seed", seed, "Initialization seed");
    app.add_option("--init", init, "Initialization: seeded_centers | dirichlet")
        ->check(CLI::IsMember({"seeded_centers", "dirichlet"}));
  }

  FcmConfig apply(FcmConfig c) const {
    if (clusters) c.n_clusters = *clusters;
    if (fuzzifier) c.fuzzifier = *fuzzifier;
    if (epsilon) c.epsilon = *epsilon;
    if (max_iter) c.max_iterations = *max_iter;
    if (seed) c.seed = *seed;
    if (init) c.init = *init == "dirichlet" ? InitMethod::dirichlet : InitMethod::seeded_centers;
    c.validate();
    return c;
  }
};

struct RunFlags {
  std::size_t jobs = 1;
  std::string timing = "modeled";
  std::string backend = "parallel";

  void add(CLI::App& app, bool with_jobs) {
    if (with_jobs) {
      app.add_option("-j,--jobs", jobs, "Images processed concurrently")
          ->envname("FCMSTOP_JOBS")
          ->check(CLI::PositiveNumber);
    }
    app.add_option("--timing", timing, "Iteration timing: modeled | wall")
        ->check(CLI::IsMember({"modeled", "wall"}))
        ->capture_default_str();
    app.add_option("--backend", backend, "Kernel backend: parallel | serial")
        ->check(CLI::IsMember({"parallel", "serial"}))
        ->capture_default_str();
  }

  RunOptions options() const {
    RunOptions o;
    o.timing = timing == "wall" ? TimingMode::wall : TimingMode::modeled;
    o.backend = backend == "serial" ? Backend::serial : Backend::parallel;
    return o;
  }
};

void check_accuracies(const std::vector<double>& acc) {
  if (acc.empty()) throw ConfigError("accuracy list is empty");
  for (double a : acc) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("accuracy " + fmt("%g", a) + " outside (0, 1)");
  }
}

std::vector<ImageRecord> load_input_dir(const fs::path& dir, bool header) {
  if (!fs::is_directory(dir)) throw ConfigError("input directory not found: " + dir.string());
  auto paths = list_inputs(dir);
  if (paths.empty()) throw ConfigError("no loadable inputs in " + dir.string());
  return load_corpus(paths, header);
}

// calibrate ------------------------------------------------------------------

struct CalibrateArgs {
  fs::path input;
  fs::path out;
  std::vector<double> accuracies = kDefaultAccuracies;
  FcmFlags fcm;
  RunFlags run;
  LofConfig lof;
  SvrHyperparams svr;
  std::optional<double> svr_gamma;
  std::optional<fs::path> points_out;
  bool header = false;
  bool verbose = false;
};

int do_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  check_accuracies(a.accuracies);
  const FcmConfig config = a.fcm.apply(FcmConfig{});
  SvrHyperparams svr = a.svr;
  svr.gamma = a.svr_gamma;
  svr.validate();

  const auto corpus = load_input_dir(a.input, a.header);
  if (a.verbose) err << "calibrate: " << corpus.size() << " inputs\n";

  CollectOptions collect;
  collect.jobs = a.run.jobs;
  collect.run = a.run.options();
  const auto harvest = collect_calibration_points(corpus, config, collect);
  for (const auto& f : harvest.failures) err << "warning: " << f.image_id << ": " << f.message << "\n";

  auto fit = fit_threshold_model(harvest.points, a.lof, svr, a.accuracies);
  fit.model.fcm_config = config;
  fit.model.corpus_fingerprint = corpus_fingerprint(corpus);
  fit.model.training_time_seconds = harvest.training_time_seconds;
  save_model(fit.model, a.out);
  if (a.points_out) write_calibration_points_csv(harvest.points, *a.points_out);

  out << "images " << harvest.n_images - harvest.failures.size() << "/" << harvest.n_images << "\n";
  out << "points " << fit.n_points << " zero_rate " << fit.n_zero_rate << " outliers_removed " << fit.removed.size()
      << " used " << fit.used.size() << "\n";
  if (!fit.model.regressor.converged) err << "warning: SVR solver hit the pass limit\n";
  out << "accuracy,threshold\n";
  for (const auto& e : fit.model.threshold_table) out << fmt("%g", e.accuracy) << "," << fmt("%.6e", e.threshold) << "\n";
  return kSuccess;
}

// classify -------------------------------------------------------------------

struct ClassifyArgs {
  fs::path model;
  double accuracy = 0.0;
  std::vector<fs::path> images;
  std::optional<fs::path> out;
  std::optional<fs::path> out_dir;
  std::optional<std::size_t> clusters;
  std::optional<std::uint64_t> seed;
  RunFlags run;
  bool header = false;
};

void write_labels(const ImageRecord& rec, const Labels& labels, std::size_t n_clusters, const fs::path& path) {
  if (path.extension() == ".csv") {
    std::ofstream f(path);
    if (!f) throw OutputError("cannot write " + path.string());
    for (Label l : labels) f << l << "\n";
    if (!f) throw OutputError("write failed: " + path.string());
    return;
  }
  write_label_image(LabelMap{rec.width, rec.height, labels, n_clusters}, path);
}

int do_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.accuracy > 0.0 && a.accuracy < 1.0)) throw ConfigError("--accuracy must lie in (0, 1)");
  if (a.out && a.images.size() != 1) throw ConfigError("--out takes exactly one --image; use --out-dir");
  const CalibrationModel model = load_model(a.model);
  FcmConfig config = model.fcm_config;
  if (a.clusters && *a.clusters != config.n_clusters) {
    throw ConfigError("--clusters " + std::to_string(*a.clusters) + " does not match the model's " +
                      std::to_string(config.n_clusters));
  }
  if (a.seed) config.seed = *a.seed;

  const double threshold = threshold_for(model, a.accuracy);
  if (!in_threshold_table(model, a.accuracy)) {
    err << "note: accuracy " << fmt("%g", a.accuracy) << " not in the model table; interpolated threshold "
        << fmt("%.6e", threshold) << "\n";
  }
  if (a.out_dir) fs::create_directories(*a.out_dir);

  for (const auto& path : a.images) {
    const ImageRecord rec = path.extension() == ".csv" ? load_feature_record(path, a.header) : load_image_features(path);
    const auto res = classify_early_stop(rec.features, config, threshold, a.run.options());
    fs::path dest;
    if (a.out) {
      dest = *a.out;
    } else {
      const std::string ext = path.extension() == ".csv" ? ".csv" : ".png";
      dest = (a.out_dir ? *a.out_dir : path.parent_path()) / (rec.id + "_labels" + ext);
    }
    write_labels(rec, res.labels, config.n_clusters, dest);
    out << rec.id << " stop_iteration=" << res.stop_iteration << " elapsed=" << fmt("%.6f", res.elapsed)
        << " stopped_early=" << (res.stopped_early ? "true" : "false") << " threshold=" << fmt("%.6e", threshold)
        << (in_threshold_table(model, a.accuracy) ? "" : " (interpolated)") << " out=" << dest.string() << "\n";
  }
  return kSuccess;
}

// evaluate -------------------------------------------------------------------

struct EvaluateArgs {
  fs::path model;
  fs::path input;
  fs::path out;
  std::optional<fs::path> accuracy_table;
  std::optional<fs::path> time_table;
  std::vector<double> accuracies = kDefaultAccuracies;
  std::optional<std::size_t> clusters;
  RunFlags run;
  bool header = false;
};

int do_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  check_accuracies(a.accuracies);
  const CalibrationModel model = load_model(a.model);
  FcmConfig config = model.fcm_config;
  if (a.clusters) config.n_clusters = *a.clusters;
  const auto corpus = load_input_dir(a.input, a.header);

  EvaluateOptions opts;
  opts.jobs = a.run.jobs;
  opts.run = a.run.options();
  const auto report = evaluate_corpus(corpus, model, a.accuracies, config, opts);
  for (const auto& f : report.failures) err << "warning: " << f.image_id << ": " << f.message << "\n";
  if (report.records.empty()) throw CalibrationError("every evaluation image failed");

  const fs::path stem = a.out.parent_path() / a.out.stem();
  save_report(report, a.out);
  write_accuracy_table(report, a.accuracy_table.value_or(fs::path(stem.string() + "_accuracy.csv")));
  write_time_table(report, a.time_table.value_or(fs::path(stem.string() + "_time.csv")));

  out << "accuracy,threshold,mean_achieved,std_achieved,mean_time_fraction,images\n";
  for (const auto& l : report.levels) {
    out << fmt("%g", l.desired_accuracy) << "," << fmt("%.6e", l.threshold) << "," << fmt("%.6f", l.mean_achieved)
        << "," << fmt("%.6f", l.std_achieved) << "," << fmt("%.6f", l.mean_time_fraction) << "," << l.n_images << "\n";
  }
  return kSuccess;
}

// cost -----------------------------------------------------------------------

struct CostArgs {
  std::optional<double> unit_price;
  std::string currency = "USD";
  std::optional<fs::path> report;
  std::optional<double> accuracy;
  std::optional<double> train_hours;
  std::optional<double> actual_hours;
  std::optional<double> total_hours;
  std::optional<double> area_km2;
  std::optional<double> image_area_m2;
  std::optional<double> saved_hours_per_image;
  std::optional<fs::path> json_out;
};

int do_cost(const CostArgs& a, std::ostream& out, std::ostream&) {
  if (!a.unit_price) throw ConfigError("--unit-price is required");
  if (!(*a.unit_price >= 0.0) || !std::isfinite(*a.unit_price)) throw ConfigError("--unit-price must be >= 0");
  const PriceSheet price{*a.unit_price, a.currency};

  std::optional<CostReport> report;
  std::optional<double> report_saved_per_image;
  if (a.report) {
    const EvaluationReport ev = load_report(*a.report);
    if (ev.levels.empty()) throw InputError("report has no accuracy levels");
    double level = a.accuracy.value_or(ev.levels.front().desired_accuracy);
    double stop_s = 0.0, total_s = 0.0;
    std::size_t n = 0;
    for (const auto& r : ev.records) {
      if (r.desired_accuracy != level) continue;
      ++n;
      stop_s += r.stop_seconds;
      total_s += r.total_seconds;
    }
    if (n == 0) throw ConfigError("accuracy " + fmt("%g", level) + " not present in the report");
    report = make_cost_report(price, a.train_hours.value_or(ev.training_time_seconds / 3600.0),
                              a.actual_hours.value_or(stop_s / 3600.0), a.total_hours.value_or(total_s / 3600.0));
    report_saved_per_image = (total_s - stop_s) / 3600.0 / static_cast<double>(n);
    out << "accuracy " << fmt("%g", level) << "\n";
  } else if (a.actual_hours || a.total_hours || a.train_hours) {
    if (!a.actual_hours || !a.total_hours) throw ConfigError("--actual-hours and --total-hours go together");
    report = make_cost_report(price, a.train_hours.value_or(0.0), *a.actual_hours, *a.total_hours);
  }

  if (report) {
    out << cost_report_summary(*report);
    if (a.json_out) {
      std::ofstream f(*a.json_out);
      if (!f) throw OutputError("cannot write " + a.json_out->string());
      f << cost_report_to_json(*report);
    }
  }

  const bool want_extrapolation = a.area_km2 || a.image_area_m2 || a.saved_hours_per_image;
  if (want_extrapolation) {
    if (!a.area_km2 || !a.image_area_m2) throw ConfigError("--area-km2 and --image-area-m2 go together");
    if (!a.saved_hours_per_image && !report_saved_per_image) {
      throw ConfigError("--saved-hours-per-image or --report is needed for the extrapolation");
    }
    const double per_image = a.saved_hours_per_image.value_or(report_saved_per_image.value_or(0.0));
    const auto ex = extrapolate_savings(*a.area_km2, *a.image_area_m2, per_image, price);
    out << "images " << ex.image_count << " (" << fmt("%.4e", static_cast<double>(ex.image_count)) << ")\n";
    out << "saved_hours " << fmt("%.2f", ex.saved_hours) << "\n";
    out << "saved " << Cents::from_amount(ex.saved_dollars).to_string() << " " << price.currency << "\n";
  }
  if (!report && !want_extrapolation) {
    out << "cost " << Cents::from_amount(0.0).to_string() << " " << price.currency << "\n";
  }
  return kSuccess;
}

// synth ----------------------------------------------------------------------

struct SynthArgs {
  fs::path out;
  std::size_t count = 10;
  std::size_t size = 64;
  std::size_t regions = 6;
  double noise = 0.15;
  std::uint64_t seed = 1;
  std::string format = "png";
  std::string prefix = "scene";
};

int do_synth(const SynthArgs& a, std::ostream& out, std::ostream&) {
  if (a.count == 0 || a.size < 2 || a.regions < 2 || a.noise < 0.0) throw ConfigError("synth settings out of range");
  fs::create_directories(a.out);
  for (std::size_t i = 0; i < a.count; ++i) {
    synthetic::SceneSpec spec;
    spec.width = spec.height = a.size;
    spec.n_regions = a.regions;
    spec.noise_sigma = a.noise;
    const auto scene = synthetic::make_scene(spec, a.seed + i);
    std::ostringstream name;
    name << a.prefix << "_" << std::setw(4) << std::setfill('0') << i;
    const fs::path p = a.out / (name.str() + "." + a.format);
    if (a.format == "ppm") {
      write_rgb_ppm(scene.rgb, scene.width, scene.height, p);
    } else {
      write_rgb_png(scene.rgb, scene.width, scene.height, p);
    }
  }
  out << "wrote " << a.count << " scenes to " << a.out.string() << "\n";
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy c-means clustering with calibrated early stopping"};
  app.name("fcmstop");
  app.require_subcommand(1);
  app.set_version_flag("--version", "fcmstop 1.0.0");

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "Learn change-rate thresholds from a training corpus");
  c->add_option("-i,--input", cal.input, "Directory of .png/.ppm/.csv inputs")->required();
  c->add_option("-o,--out", cal.out, "Model JSON to write")->required();
  c->add_option("--accuracies", cal.accuracies, "Desired accuracies")->delimiter(',')->capture_default_str();
  cal.fcm.add(*c);
  cal.run.add(*c, true);
  c->add_option("--lof-neighbors", cal.lof.n_neighbors, "LOF neighborhood size")->capture_default_str();
  c->add_option("--outliers-fraction", cal.lof.outliers_fraction, "Fraction of points removed")->capture_default_str();
  c->add_option("--svr-c", cal.svr.c, "SVR box constraint")->capture_default_str();
  c->add_option("--svr-epsilon", cal.svr.epsilon_tube, "SVR tube half-width")->capture_default_str();
  c->add_option("--svr-gamma", cal.svr_gamma, "RBF gamma (default: 1/var)");
  c->add_option("--svr-tol", cal.svr.tolerance, "SMO KKT tolerance")->capture_default_str();
  c->add_option("--svr-max-passes", cal.svr.max_passes, "SMO pass limit")->capture_default_str();
  c->add_option("--points-out", cal.points_out, "Also write the calibration points as CSV");
  c->add_flag("--header", cal.header, "CSV inputs have a header row");
  c->add_flag("-v,--verbose", cal.verbose, "Progress on stderr");

  ClassifyArgs cls;
  auto* k = app.add_subcommand("classify", "Cluster images with the calibrated early stop");
  k->add_option("-m,--model", cls.model, "Model JSON")->envname("FCMSTOP_MODEL")->required();
  k->add_option("-a,--accuracy", cls.accuracy, "Desired accuracy in (0, 1)")->required();
  k->add_option("--image", cls.images, "Input image or CSV (repeatable)")->required();
  k->add_option("-o,--out", cls.out, "Label map path (.png or .csv) for a single image");
  k->add_option("--out-dir", cls.out_dir, "Directory for label maps");
  k->add_option("--clusters", cls.clusters, "Must match the model");
  k->add_option("--seed", cls.seed, "Override the model's seed");
  cls.run.add(*k, false);
  k->add_flag("--header", cls.header, "CSV inputs have a header row");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Measure achieved accuracy and time fraction on a test corpus");
  e->add_option("-m,--model", ev.model, "Model JSON")->envname("FCMSTOP_MODEL")->required();
  e->add_option("-i,--input", ev.input, "Directory of test inputs")->required();
  e->add_option("-o,--out", ev.out, "Report JSON")->default_val("report.json");
  e->add_option("--accuracy-table", ev.accuracy_table, "CSV of achieved accuracy per level");
  e->add_option("--time-table", ev.time_table, "CSV of time fraction per level");
  e->add_option("--accuracies", ev.accuracies, "Desired accuracies")->delimiter(',')->capture_default_str();
  e->add_option("--clusters", ev.clusters, "Must match the model");
  ev.run.add(*e, true);
  e->add_flag("--header", ev.header, "CSV inputs have a header row");

  CostArgs co;
  auto* p = app.add_subcommand("cost", "Cloud cost of a run and extrapolated savings");
  p->add_option("--unit-price", co.unit_price, "Price per compute hour");
  p->add_option("--currency", co.currency)->capture_default_str();
  p->add_option("--report", co.report, "EvaluationReport JSON");
  p->add_option("--accuracy", co.accuracy, "Level of the report to price (default: first)");
  p->add_option("--train-hours", co.train_hours);
  p->add_option("--actual-hours", co.actual_hours);
  p->add_option("--total-hours", co.total_hours);
  p->add_option("--area-km2", co.area_km2, "Area to cover");
  p->add_option("--image-area-m2", co.image_area_m2, "Ground area of one image");
  p->add_option("--saved-hours-per-image", co.saved_hours_per_image);
  p->add_option("--json", co.json_out, "Write the cost report as JSON");

  SynthArgs sy;
  auto* s = app.add_subcommand("synth", "Write synthetic piecewise-constant RGB scenes");
  s->add_option("-o,--out", sy.out, "Output directory")->required();
  s->add_option("-n,--count", sy.count)->capture_default_str();
  s->add_option("--size", sy.size)->capture_default_str();
  s->add_option("--regions", sy.regions)->capture_default_str();
  s->add_option("--noise", sy.noise)->capture_default_str();
  s->add_option("--seed", sy.seed)->capture_default_str();
  s->add_option("--format", sy.format)->check(CLI::IsMember({"png", "ppm"}))->capture_default_str();
  s->add_option("--prefix", sy.prefix)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (c->parsed()) return do_calibrate(cal, out, err);
    if (k->parsed()) return do_classify(cls, out, err);
    if (e->parsed()) return do_evaluate(ev, out, err);
    if (p->parsed()) return do_cost(co, out, err);
    if (s->parsed()) return do_synth(sy, out, err);
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const SchemaError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const VersionError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const IngestionError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace fcmstop::cli
