// Command-line frontend: fit, synth, eval, plot.
// Exit codes: 0 success, 2 usage/parse error, 3 internal invariant violation.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "palm/eval.hpp"
#include "palm/io.hpp"
#include "palm/palm.hpp"
#include "palm/svg.hpp"
#include "palm/synthdata.hpp"

namespace {

using palm::Direction;
using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::array<double, 4>> parse_space(const std::string& spec) {
  if (spec == "auto") return std::nullopt;
  std::array<double, 4> box{};
  char trailing = 0;
  if (std::sscanf(spec.c_str(), "%lf,%lf,%lf,%lf%c", &box[0], &box[1], &box[2], &box[3],
                  &trailing) != 4)
    throw UsageError("--space expects 'auto' or 'x0,y0,x1,y1'");
  if (!(box[2] > box[0]) || !(box[3] > box[1])) throw UsageError("--space box is degenerate");
  return box;
}

int cmd_fit(const std::string& input, double epsilon, int k_max, const std::string& direction,
            const std::string& space, const std::string& out) {
  palm::PalmConfig config;
  config.k_max = k_max;
  config.initial_direction = direction == "h" ? Direction::horizontal : Direction::vertical;
  config.sample_space = parse_space(space);

  auto raw = palm::read_points_csv(input);
  if (raw.empty())
    std::cerr << "warning: no data points; fitting the sample space as one region\n";
  palm::GridSpec grid = palm::resolve_grid(config, epsilon, raw);
  palm::Dataset2D data = palm::snap_to_grid(raw, grid);
  palm::FitResult fit = palm::palm_fit(data, config);

  palm::PartitionDoc doc;
  doc.partition = fit.partition;
  doc.densities = fit.densities;
  doc.meta.n = data.n();
  doc.meta.total_bits = fit.total_bits.total_bits();
  doc.meta.k_max = k_max;
  doc.meta.direction = direction == "h" ? "horizontal" : "vertical";
  palm::write_partition_json(out, doc);

  json line;
  line["total_bits"] = fit.total_bits.total_bits();
  line["regions"] = fit.partition.k();
  std::cout << line.dump() << "\n";
  return 0;
}

int cmd_synth(const std::string& family, int64_t n, uint64_t seed, int m, int k1, int k2,
              double p_merge, double correlation, double epsilon, const std::string& out,
              const std::string& truth_path) {
  palm::Dataset2D data;
  palm::GroundTruth truth;
  if (family == "partition") {
    auto grid = palm::GridSpec::from_extent(epsilon, 0.0, 0.0, 1.0, 1.0);
    truth = palm::gen_true_partition(seed, k1, k2, p_merge, grid);
    data = palm::sample_histogram(truth, n, seed + 1);
  } else if (family == "sine") {
    auto grid = palm::GridSpec::from_extent(epsilon, 0.0, 0.0, 1.0, 1.0);
    auto result = palm::gen_sine(m, n, seed, grid);
    data = std::move(result.first);
    truth = std::move(result.second);
  } else if (family == "gaussian") {
    auto grid = palm::GridSpec::from_extent(epsilon, -5.0, -5.0, 10.0, 10.0);
    auto result = palm::gen_gaussian(correlation, n, seed, grid);
    data = std::move(result.first);
    truth = std::move(result.second);
  } else if (family == "quadrant") {
    auto grid = palm::GridSpec::from_extent(epsilon, 0.0, 0.0, 1.0, 1.0);
    auto result = palm::gen_quadrant(seed, n, grid);
    data = std::move(result.first);
    truth = std::move(result.second);
  } else {
    throw UsageError("unknown family '" + family + "'");
  }
  palm::write_points_csv(out, data);
  if (!truth_path.empty()) {
    if (truth.kind == palm::GroundTruth::Kind::partition ||
        truth.kind == palm::GroundTruth::Kind::quadrant)
      palm::recount(truth.partition, data);
    palm::write_truth_json(truth_path, truth, seed);
  }
  return 0;
}

int cmd_eval(const std::string& learned_path, const std::string& truth_path, double pixel,
             const std::string& out) {
  auto started = std::chrono::steady_clock::now();
  palm::PartitionDoc learned = palm::read_partition_json(learned_path);
  palm::GroundTruth truth = palm::read_truth_json(truth_path);
  if (learned.partition.grid != truth.grid)
    throw UsageError("learned and truth files use different grids");

  palm::EvalReport report;
  report.mise = palm::mise_single(truth, learned.partition, learned.densities);
  report.region_count_learned = learned.partition.k();

  auto learned_pixels = palm::boundary_pixels(learned.partition, pixel);
  report.learned_boundary_empty = learned_pixels.pixels.empty();
  palm::PixelSet truth_pixels;
  truth_pixels.pixel_size = pixel;
  switch (truth.kind) {
    case palm::GroundTruth::Kind::partition:
    case palm::GroundTruth::Kind::quadrant:
      truth_pixels = palm::boundary_pixels(truth.partition, pixel);
      report.region_count_true = truth.partition.k();
      break;
    case palm::GroundTruth::Kind::sine:
      truth_pixels = palm::sine_curve_pixels(truth.sine_m, truth.grid, pixel);
      report.region_count_true = 2;
      break;
    case palm::GroundTruth::Kind::gaussian:
      report.has_boundary_losses = false;  // smooth truth, no boundary
      break;
  }
  if (report.has_boundary_losses) {
    report.truth_boundary_empty = truth_pixels.pixels.empty();
    auto losses = palm::boundary_losses(learned_pixels, truth_pixels);
    report.l_learn = losses.l_learn;
    report.l_true = losses.l_true;
    report.l_learn_mean = learned_pixels.pixels.empty()
                              ? 0.0
                              : losses.l_learn / static_cast<double>(learned_pixels.pixels.size());
    report.l_true_mean = truth_pixels.pixels.empty()
                             ? 0.0
                             : losses.l_true / static_cast<double>(truth_pixels.pixels.size());
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  palm::write_eval_report(out, report);
  std::cout << palm::eval_report_to_json(report);
  return 0;
}

int cmd_plot(const std::string& partition_path, const std::string& points_path,
             const std::string& out, const std::string& shade) {
  palm::PartitionDoc doc = palm::read_partition_json(partition_path);
  palm::SvgOptions options;
  options.shade_density = shade == "density";
  std::vector<std::pair<double, double>> points;
  std::string svg;
  if (!points_path.empty()) {
    points = palm::read_points_csv(points_path);
    svg = palm::render_svg(doc.partition, &doc.densities, &points, options);
  } else {
    svg = palm::render_svg(doc.partition, &doc.densities, nullptr, options);
  }
  palm::write_file(out, svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MDL-optimal two-dimensional histograms (PALM)"};
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "Fit a partition to a CSV of points");
  std::string fit_input, fit_out, fit_direction = "v", fit_space = "auto";
  double fit_epsilon = 0.001;
  int fit_kmax = 300;
  fit->add_option("--input", fit_input, "points CSV")->required();
  fit->add_option("--epsilon", fit_epsilon, "data precision");
  fit->add_option("--kmax", fit_kmax, "max bins per partitioning step");
  fit->add_option("--direction", fit_direction, "initial direction: v|h")
      ->check(CLI::IsMember({"v", "h"}));
  fit->add_option("--space", fit_space, "sample space: auto or x0,y0,x1,y1");
  fit->add_option("--out", fit_out, "output partition JSON")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::string synth_family, synth_out, synth_truth;
  int64_t synth_n = 10000;
  uint64_t synth_seed = 1;
  int synth_m = 2, synth_k1 = 5, synth_k2 = 5;
  double synth_pmerge = 0.4, synth_correlation = 0.5, synth_epsilon = 0.001;
  synth->add_option("--family", synth_family, "partition|sine|gaussian|quadrant")->required();
  synth->add_option("--n", synth_n, "sample size");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--m", synth_m, "sine oscillation count");
  synth->add_option("--k1", synth_k1, "columns in the true partition");
  synth->add_option("--k2", synth_k2, "rows per column in the true partition");
  synth->add_option("--pmerge", synth_pmerge, "merge probability");
  synth->add_option("--correlation", synth_correlation, "gaussian correlation");
  synth->add_option("--epsilon", synth_epsilon, "data precision");
  synth->add_option("--out", synth_out, "output points CSV")->required();
  synth->add_option("--truth", synth_truth, "optional ground-truth JSON");

  auto* eval = app.add_subcommand("eval", "Evaluate a partition against a ground truth");
  std::string eval_learned, eval_truth, eval_out;
  double eval_pixel = 0.01;
  eval->add_option("--learned", eval_learned, "learned partition JSON")->required();
  eval->add_option("--truth", eval_truth, "truth JSON")->required();
  eval->add_option("--pixel", eval_pixel, "boundary pixel size");
  eval->add_option("--out", eval_out, "output report JSON")->required();

  auto* plot = app.add_subcommand("plot", "Render a partition as SVG");
  std::string plot_partition, plot_points, plot_out, plot_shade = "none";
  plot->add_option("--partition", plot_partition, "partition JSON")->required();
  plot->add_option("--points", plot_points, "optional points CSV overlay");
  plot->add_option("--out", plot_out, "output SVG")->required();
  plot->add_option("--shade", plot_shade, "none|density")->check(CLI::IsMember({"none", "density"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(fit))
      return cmd_fit(fit_input, fit_epsilon, fit_kmax, fit_direction, fit_space, fit_out);
    if (app.got_subcommand(synth))
      return cmd_synth(synth_family, synth_n, synth_seed, synth_m, synth_k1, synth_k2,
                       synth_pmerge, synth_correlation, synth_epsilon, synth_out, synth_truth);
    if (app.got_subcommand(eval)) return cmd_eval(eval_learned, eval_truth, eval_pixel, eval_out);
    if (app.got_subcommand(plot)) return cmd_plot(plot_partition, plot_points, plot_out, plot_shade);
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
