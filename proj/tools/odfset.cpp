// Command-line front end: odf / expect / metrics / experiment / simulate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "odfset/contour.hpp"
#include "odfset/edt.hpp"
#include "odfset/errors.hpp"
#include "odfset/expectations.hpp"
#include "odfset/experiments.hpp"
#include "odfset/io.hpp"
#include "odfset/metrics.hpp"
#include "odfset/shapes.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace odfset;

namespace {

// Fixed default seed: results must not depend on wall-clock time.
constexpr std::uint64_t kDefaultSeed = 17;

BinaryMask maybe_invert(BinaryMask mask, bool invert) {
  return invert ? complement(mask) : mask;
}

// Per-coordinate [lo, hi] hull of a parameter law's support.
std::pair<std::vector<double>, std::vector<double>> law_bounds(const ParamLaw& law,
                                                               std::size_t dim) {
  std::vector<double> lo(dim, 0.0), hi(dim, 0.0);
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          lo = hi = l.value;
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          lo = l.a;
          hi = l.b;
        } else if constexpr (std::is_same_v<T, BernoulliLaw>) {
          lo.assign(dim, 0.0);
          hi.assign(dim, 1.0);
        } else {
          lo = hi = l.values.front();
          for (const auto& v : l.values) {
            for (std::size_t k = 0; k < dim; ++k) {
              lo[k] = std::min(lo[k], v[k]);
              hi[k] = std::max(hi[k], v[k]);
            }
          }
        }
      },
      law);
  return {lo, hi};
}

/// Default rendering grid for a model: 512x512, square, covering the model's
/// bounding box plus a 25% margin. Unbounded shapes (half-planes, slabs) get
/// a unit-scale box around their boundary range.
GridSpec default_model_grid(const RandomSetModel& model, int n = 512) {
  const auto [lo, hi] = law_bounds(model.law, param_dim(model));
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  switch (model.family) {
    case ShapeFamily::Singleton:
      x0 = lo[0]; x1 = hi[0]; y0 = lo[1]; y1 = hi[1];
      break;
    case ShapeFamily::Ball: {
      const double r = std::max(hi[0], 0.0);
      x0 = model.center.x - r; x1 = model.center.x + r;
      y0 = model.center.y - r; y1 = model.center.y + r;
      break;
    }
    case ShapeFamily::BallSqrtRadius: {
      const double r = std::sqrt(std::max(hi[0], 0.0));
      x0 = model.center.x - r; x1 = model.center.x + r;
      y0 = model.center.y - r; y1 = model.center.y + r;
      break;
    }
    case ShapeFamily::HalfPlane:
      x0 = lo[0] - 1.0; x1 = hi[0] + 1.0;
      break;
    case ShapeFamily::UpperHalfPlane:
      break;  // boundary through the origin; unit box
    case ShapeFamily::FlashingDisc:
      x0 = std::min(0.0, model.alt_center.x) - model.radius;
      x1 = std::max(0.0, model.alt_center.x) + model.radius;
      y0 = std::min(0.0, model.alt_center.y) - model.radius;
      y1 = std::max(0.0, model.alt_center.y) + model.radius;
      break;
    case ShapeFamily::SlabOrBoundary:
      x0 = model.slab_lo - 0.5; x1 = model.slab_hi + 0.5;
      break;
  }
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  double side = std::max(x1 - x0, y1 - y0);
  if (!(side > 0.0)) side = 2.0;
  side *= 1.25;
  const double h = side / n;
  return GridSpec({cx - 0.5 * side, cy - 0.5 * side}, h, n, n);
}

SetEstimate run_estimator(Estimator est, const std::vector<BinaryMask>& masks,
                          const std::vector<ScalarField>& fields, double q_norm) {
  switch (est) {
    case Estimator::Vorobev:
      return vorobev_expectation(masks);
    case Estimator::DistanceAverage:
      return distance_average_expectation(fields, q_norm);
    case Estimator::Empirical:
      return empirical_mean_set(fields);
    case Estimator::Odf: {
      SetEstimate e = empirical_mean_set(fields);
      e.estimator = Estimator::Odf;
      return e;
    }
  }
  throw BadConfigError("unknown estimator");
}

// Deterministic text-like test pattern: a disc, two bars and a frame gap.
BinaryMask synthetic_truth(int n) {
  GridSpec grid({0.0, 0.0}, 1.0, n, n);
  BinaryMask mask(grid);
  const double cx = 0.32 * n, cy = 0.35 * n, r = 0.2 * n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dx = j + 0.5 - cx, dy = i + 0.5 - cy;
      bool v = dx * dx + dy * dy <= r * r;
      v = v || (i > 0.7 * n && i < 0.8 * n && j > 0.1 * n && j < 0.9 * n);
      v = v || (j > 0.65 * n && j < 0.75 * n && i > 0.1 * n && i < 0.6 * n);
      mask.set(i, j, v);
    }
  }
  return mask;
}

double da_loss(const SetEstimate& est, double q_norm) {
  const ScalarField b = oriented_distance_field(est.mask);
  double acc = 0.0;
  const auto& g = est.source_field.grid();
  for (std::size_t k = 0; k < b.values().size(); ++k) {
    acc += std::pow(std::abs(est.source_field.values()[k] - b.values()[k]), q_norm) *
           g.cell_area();
  }
  return std::pow(acc, 1.0 / q_norm);
}

int cmd_odf(const std::string& input, const std::string& out, double spacing,
            bool invert) {
  const BinaryMask mask = maybe_invert(read_mask_pgm(input, {}, spacing), invert);
  const ScalarField field = oriented_distance_field(mask);
  fs::create_directories(out);
  write_field_csv(field, fs::path(out) / "field.csv");
  write_field_pgm16(field, fs::path(out) / "field.pgm");
  std::cout << "rows " << field.grid().rows() << " cols " << field.grid().cols()
            << "\nmin " << format_double(field.min_value()) << " max "
            << format_double(field.max_value()) << "\n";
  return 0;
}

int cmd_expect(const std::vector<std::string>& inputs, const std::string& out,
               const std::string& estimator, int m, double q_norm, double spacing,
               bool invert) {
  bool any_pgm = false, any_json = false;
  for (const auto& in : inputs) {
    const std::string ext = fs::path(in).extension().string();
    (ext == ".json" ? any_json : any_pgm) = true;
  }
  if (any_pgm && any_json) {
    throw MixedInputsError("expect: inputs must be all PGM images or one model JSON");
  }
  const Estimator est = estimator_from_name(estimator);

  std::vector<BinaryMask> masks;
  std::vector<ScalarField> fields;
  if (any_json) {
    if (inputs.size() != 1) throw MixedInputsError("expect: exactly one model JSON");
    if (m < 1) throw BadConfigError("expect: model input requires --m >= 1");
    const RandomSetModel model = read_model_json(inputs[0]);
    const GridSpec grid = default_model_grid(model);
    for (auto& [mask, field] : sample_realizations(model, m, grid)) {
      masks.push_back(std::move(mask));
      fields.push_back(std::move(field));
    }
  } else {
    if (inputs.empty()) throw BadConfigError("expect: no inputs");
    for (const auto& in : inputs) {
      masks.push_back(maybe_invert(read_mask_pgm(in, {}, spacing), invert));
    }
    if (est != Estimator::Vorobev) {
      for (const auto& mask : masks) fields.push_back(oriented_distance_field(mask));
    }
  }

  const SetEstimate result = run_estimator(est, masks, fields, q_norm);
  std::vector<std::pair<std::string, double>> extra;
  if (est == Estimator::DistanceAverage) {
    extra = {{"q_norm", q_norm}, {"minimized_loss", da_loss(result, q_norm)}};
  }
  write_set_estimate(result, out, extra);
  std::cout << "threshold_used " << format_double(result.threshold_used)
            << "\nmeasure " << format_double(result.mask.measure()) << "\n";
  return 0;
}

int cmd_metrics(const std::string& a_path, const std::string& b_path,
                const std::string& out, double q_norm, double spacing, bool invert) {
  const BinaryMask a = maybe_invert(read_mask_pgm(a_path, {}, spacing), invert);
  const BinaryMask b = maybe_invert(read_mask_pgm(b_path, {}, spacing), invert);
  const MetricReport report = compare_masks(a, b, q_norm);
  fs::create_directories(out);
  write_metric_report_json(report, fs::path(out) / "report.json");
  write_metric_report_csv(report, fs::path(out) / "report.csv");
  const auto& cols = metric_report_columns();
  const auto row = metric_report_row(report);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::cout << cols[k] << " " << format_double(row[k]) << "\n";
  }
  return 0;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

int cmd_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out, std::uint64_t seed, double q_norm) {
  json cfg = load_config(config_path);
  seed = cfg.value("seed", seed);
  if (name == "radius-ratio" || name == "angle-diff") {
    const bool radius = name == "radius-ratio";
    const double a = cfg.value("a", radius ? 0.8 : std::asin(1.0) / 4.0);
    const double b = cfg.value("b", radius ? 1.2 : 3.0 * std::asin(1.0) / 4.0);
    const auto m_values =
        cfg.value("m_values", std::vector<std::size_t>{10, 100, 1000});
    const auto reps = cfg.value("reps", std::size_t{200});
    const UniformLaw law{{a}, {b}};
    ExperimentReport report = radius
                                  ? radius_ratio_experiment(law, m_values, reps, seed)
                                  : angle_diff_experiment(law, m_values, reps, seed);
    json echo = {{"name", name}, {"a", a},       {"b", b},
                 {"m_values", m_values}, {"reps", reps}, {"seed", seed}};
    report.config_json = echo.dump(2) + "\n";
    write_experiment(report, out);
    return 0;
  }
  if (name == "flashing-discs") {
    const double p = cfg.value("p", 0.8);
    const double r = cfg.value("r", 1.0);
    const auto a_values = cfg.value("a_values", std::vector<double>{3.0, 2.0, 1.5});
    const auto levels = cfg.value("levels", std::vector<double>{0.0});
    const double h = cfg.value("spacing", 0.01);
    const double amax = *std::max_element(a_values.begin(), a_values.end());
    const int cols = static_cast<int>(std::lround((amax + 4.0) / h));
    const int rows = static_cast<int>(std::lround(4.0 / h));
    const GridSpec grid({-2.0, -2.0}, h, rows, cols);
    FlashingDiscResult result = flashing_disc_contours(p, r, a_values, levels, grid);
    json echo = {{"name", name},         {"p", p},           {"r", r},
                 {"a_values", a_values}, {"levels", levels}, {"spacing", h},
                 {"seed", seed}};
    result.report.config_json = echo.dump(2) + "\n";
    write_experiment(result.report, out);
    for (const auto& [fname, field] : result.fields) {
      write_field_csv(field, fs::path(out) / fname);
    }
    for (const auto& [fname, contours] : result.contours) {
      write_polylines_csv(contours, fs::path(out) / fname);
    }
    return 0;
  }
  if (name == "image-average") {
    const double flip_prob = cfg.value("flip_prob", 0.1);
    const auto m = cfg.value("m", std::size_t{15});
    q_norm = cfg.value("q", q_norm);
    BinaryMask truth = cfg.contains("truth_pgm")
                           ? read_mask_pgm(cfg["truth_pgm"].get<std::string>())
                           : synthetic_truth(cfg.value("size", 96));
    const auto realizations = noisy_realizations(truth, flip_prob, m, seed);
    const std::vector<Estimator> estimators = {
        Estimator::Odf, Estimator::Vorobev, Estimator::DistanceAverage};
    const auto outcomes =
        image_averaging_pipeline(truth, realizations, estimators, q_norm);

    double single_mean = 0.0;
    const double total =
        static_cast<double>(truth.grid().size()) * truth.grid().cell_area();
    for (const auto& real : realizations) {
      single_mean += symmetric_difference(real, truth) / total;
    }
    single_mean /= static_cast<double>(realizations.size());

    ExperimentReport report;
    report.name = name;
    report.columns = {"estimator_id", "misclassification", "l2_odf_distance",
                      "symmetric_difference", "single_realization_mean"};
    fs::create_directories(out);
    write_mask_pgm(truth, fs::path(out) / "truth.pgm");
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      const auto& oc = outcomes[k];
      const std::string tag = estimator_name(oc.estimator);
      report.rows.push_back({static_cast<double>(k),
                             oc.report.misclassification_fraction,
                             oc.report.l2_odf_distance,
                             oc.report.symmetric_difference_area, single_mean});
      write_gray_pgm(oc.residual, fs::path(out) / ("residual_" + tag + ".pgm"));
      write_metric_report_json(oc.report, fs::path(out) / ("metrics_" + tag + ".json"));
      write_metric_report_csv(oc.report, fs::path(out) / ("metrics_" + tag + ".csv"));
      write_set_estimate(oc.estimate, fs::path(out) / tag);
    }
    json echo = {{"name", name}, {"flip_prob", flip_prob}, {"m", m},
                 {"q", q_norm},  {"size", truth.grid().rows()}, {"seed", seed}};
    report.config_json = echo.dump(2) + "\n";
    write_experiment(report, out);
    return 0;
  }
  throw UnknownExperimentError(
      "unknown experiment '" + name +
      "'; valid names: radius-ratio, angle-diff, flashing-discs, image-average");
}

int cmd_simulate(const std::string& model_path, const std::string& out, int m,
                 bool fields_too) {
  if (m < 1) throw BadConfigError("simulate: --m must be >= 1");
  const RandomSetModel model = read_model_json(model_path);
  const GridSpec grid = default_model_grid(model);
  const auto realizations = sample_realizations(model, m, grid);
  fs::create_directories(out);
  write_model_json(model, fs::path(out) / "model.json");
  for (std::size_t k = 0; k < realizations.size(); ++k) {
    char tag[16];
    std::snprintf(tag, sizeof(tag), "%03zu", k);
    write_mask_pgm(realizations[k].first, fs::path(out) / ("real_" + std::string(tag) + ".pgm"));
    if (fields_too) {
      write_field_csv(realizations[k].second,
                      fs::path(out) / ("field_" + std::string(tag) + ".csv"));
    }
  }
  std::cout << "realizations " << m << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set expectations and boundary estimates via oriented distance fields"};
  app.require_subcommand(1);

  std::string out = "out";
  std::uint64_t seed = kDefaultSeed;
  double q_norm = 2.0;
  double tol = 1e-9;
  int threads = 1;
  bool invert = false;
  double spacing = 1.0;

  auto add_common = [&](CLI::App* sub, bool with_invert = true) {
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "RNG seed (fixed default, never time-based)");
    sub->add_option("--q", q_norm, "L^q norm exponent")->check(CLI::Range(1.0, 64.0));
    sub->add_option("--tol", tol, "Zero-contour tolerance");
    sub->add_option("--threads", threads, "Worker threads (results identical for any N)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--spacing", spacing, "Grid spacing for image inputs")
        ->check(CLI::PositiveNumber);
    if (with_invert) sub->add_flag("--invert", invert, "Swap foreground/background");
  };

  std::string input, input_b, est_name = "odf", exp_name, config_path;
  std::vector<std::string> inputs;
  int m = 0;
  bool fields_too = false;

  CLI::App* odf = app.add_subcommand("odf", "Oriented distance field of a mask image");
  odf->add_option("image", input, "Input PGM mask")->required();
  add_common(odf);

  CLI::App* expect = app.add_subcommand("expect", "Set expectation of realizations");
  expect->add_option("inputs", inputs, "PGM masks, or one model JSON")->required();
  expect->add_option("--estimator", est_name, "odf | vorobev | da | empirical");
  expect->add_option("--m", m, "Realization count for model input");
  add_common(expect);

  CLI::App* metrics = app.add_subcommand("metrics", "Compare two mask images");
  metrics->add_option("a", input, "First PGM mask")->required();
  metrics->add_option("b", input_b, "Second PGM mask")->required();
  add_common(metrics);

  CLI::App* experiment = app.add_subcommand("experiment", "Run a scripted experiment");
  experiment
      ->add_option("name", exp_name,
                   "radius-ratio | angle-diff | flashing-discs | image-average")
      ->required();
  experiment->add_option("--config", config_path, "JSON config file");
  add_common(experiment, false);

  CLI::App* simulate = app.add_subcommand("simulate", "Render model realizations");
  simulate->add_option("model", input, "Model JSON")->required();
  simulate->add_option("--m", m, "Realization count")->required();
  simulate->add_flag("--fields", fields_too, "Also write closed-form ODF CSVs");
  add_common(simulate, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(odf)) return cmd_odf(input, out, spacing, invert);
    if (app.got_subcommand(expect)) {
      return cmd_expect(inputs, out, est_name, m, q_norm, spacing, invert);
    }
    if (app.got_subcommand(metrics)) {
      return cmd_metrics(input, input_b, out, q_norm, spacing, invert);
    }
    if (app.got_subcommand(experiment)) {
      return cmd_experiment(exp_name, config_path, out, seed, q_norm);
    }
    if (app.got_subcommand(simulate)) return cmd_simulate(input, out, m, fields_too);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
