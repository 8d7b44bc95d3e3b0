#include "bf/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>

#include "bf/artificial_tree.hpp"
#include "bf/eval.hpp"
#include "bf/libsvm.hpp"
#include "bf/rng.hpp"
#include "bf/scaling.hpp"

namespace bf::cli {

namespace {

constexpr std::uint64_t kShuffleStream = 0x73687566;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string k_text(std::size_t k) { return k == kUnboundedChildren ? "inf" : std::to_string(k); }

void permute_rows(io::DenseDataset& data, std::uint64_t seed) {
  std::vector<std::uint32_t> order(data.rows());
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  shuffle(std::span(order), rng);
  io::DenseDataset out;
  out.dim = data.dim;
  out.positions.reserve(data.positions.size());
  for (auto r : order) {
    out.labels.push_back(data.labels[r]);
    const auto begin = data.positions.begin() + static_cast<std::ptrdiff_t>(r * data.dim);
    out.positions.insert(out.positions.end(), begin, begin + static_cast<std::ptrdiff_t>(data.dim));
  }
  data = std::move(out);
}

std::span<const double> row(const io::DenseDataset& data, std::size_t r) {
  return std::span<const double>(data.positions).subspan(r * data.dim, data.dim);
}

}  // namespace

Report run_train_eval(const RunConfig& config) {
  if (config.train_path.empty()) throw Error("train-eval: --train is required");
  if (config.n_trees < 1) throw Error("train-eval: --nt must be >= 1");
  if (config.max_children < 2) throw Error("train-eval: --k must be > 1");

  const auto train_sparse = io::read_libsvm(config.train_path);
  std::optional<io::SparseDataset> test_sparse;
  if (!config.test_path.empty()) test_sparse = io::read_libsvm(config.test_path);
  const std::size_t dim = std::max(train_sparse.max_index, test_sparse ? test_sparse->max_index : 0);

  io::DenseDataset train = io::densify(train_sparse, dim);
  std::optional<io::DenseDataset> test;
  if (test_sparse) test = io::densify(*test_sparse, dim);
  if (config.minmax) {
    if (test) io::minmax_scale(*test, train);
    const io::DenseDataset reference = train;
    io::minmax_scale(train, reference);
  }
  if (config.shuffle) permute_rows(train, derive_seed(config.seed, kShuffleStream));
  if (train.rows() < config.n_trees) {
    throw Error("train-eval: training file has " + std::to_string(train.rows()) + " rows, fewer than n_T = " +
                std::to_string(config.n_trees));
  }

  ForestConfig fc;
  fc.n_trees = config.n_trees;
  fc.max_children = config.max_children;
  fc.seed = config.seed;
  fc.threads = config.threads;
  switch (config.mode) {
    case TaskKind::classification: fc.mode = TaskMode::classification(); break;
    case TaskKind::regression: fc.mode = TaskMode::regression(config.epsilon); break;
    case TaskKind::retrieval: fc.mode = TaskMode::retrieval(); break;
  }

  Report report;
  report.set("mode", task_name(config.mode));
  report.set("train", config.train_path);
  if (test) report.set("test", config.test_path);
  report.set("dim", std::uint64_t{dim});
  report.set("n_train", std::uint64_t{train.rows()});
  if (test) report.set("n_test", std::uint64_t{test->rows()});
  report.set("n_trees", std::uint64_t{config.n_trees});
  report.set("k", k_text(config.max_children));
  if (config.mode == TaskKind::regression) report.set("epsilon", config.epsilon);
  report.set("seed", config.seed);
  report.set_flag("shuffle", config.shuffle);
  report.set_flag("minmax", config.minmax);

  std::vector<double> classes;
  std::optional<ClassifiedSet> train_set, test_set;
  std::size_t label_dim = 1;
  if (config.mode == TaskKind::classification) {
    std::vector<const io::DenseDataset*> sets{&train};
    if (test) sets.push_back(&*test);
    classes = io::class_values(sets);
    train_set = io::to_classified(train, classes);
    if (test) test_set = io::to_classified(*test, classes);
    label_dim = classes.size();
    report.set("n_classes", std::uint64_t{classes.size()});
  }

  const auto train_start = Clock::now();
  BoundaryForest forest(fc, dim, label_dim);
  if (config.mode == TaskKind::classification) {
    forest = train_online(fc, *train_set);
  } else {
    for (std::size_t r = 0; r < train.rows(); ++r) {
      const double target = train.labels[r];
      forest.train(row(train, r), config.mode == TaskKind::retrieval ? row(train, r) : std::span(&target, 1));
    }
  }
  const double train_seconds = seconds_since(train_start);

  std::size_t nodes = 0;
  for (std::size_t i = 0; i < forest.n_trees(); ++i) nodes += forest.tree(i).size();
  report.set("stored_examples", std::uint64_t{forest.store().size()});
  report.set("total_nodes", std::uint64_t{nodes});
  report.set("train_comparisons", forest.training_stats().metric_comparisons);

  if (config.train_error && train_set) {
    report.set("train_error_rate", error_rate(forest, *train_set).percent);
  }

  double test_seconds = 0.0;
  if (test) {
    std::unique_ptr<CsvWriter> csv;
    const auto test_start = Clock::now();
    QueryStats stats;
    if (config.mode == TaskKind::classification) {
      if (!config.out_path.empty()) csv = std::make_unique<CsvWriter>(config.out_path, std::vector<std::string>{"index", "true_class", "predicted_class"});
      std::size_t errors = 0;
      for (std::size_t i = 0; i < test_set->size(); ++i) {
        const std::size_t predicted = forest.classify(test_set->position(i), &stats);
        if (predicted != test_set->classes[i]) ++errors;
        if (csv) csv->row({std::to_string(i), std::to_string(test_set->classes[i]), std::to_string(predicted)});
      }
      report.set("error_rate", 100.0 * static_cast<double>(errors) / static_cast<double>(test_set->size()));
      report.set("errors", std::uint64_t{errors});
    } else if (config.mode == TaskKind::regression) {
      if (!config.out_path.empty()) csv = std::make_unique<CsvWriter>(config.out_path, std::vector<std::string>{"index", "target", "estimate"});
      double sum_sq = 0.0;
      for (std::size_t i = 0; i < test->rows(); ++i) {
        const double estimate = forest.query(row(*test, i), &stats).label.front();
        const double residual = estimate - test->labels[i];
        sum_sq += residual * residual;
        if (csv) csv->row({std::to_string(i), format_real(test->labels[i]), format_real(estimate)});
      }
      report.set("rmse", std::sqrt(sum_sq / static_cast<double>(test->rows())));
    } else {
      if (!config.out_path.empty()) csv = std::make_unique<CsvWriter>(config.out_path, std::vector<std::string>{"index", "returned_id", "distance", "rank", "fraction"});
      std::vector<double> fractions;
      for (std::size_t i = 0; i < test->rows(); ++i) {
        const auto prediction = forest.query(row(*test, i), &stats);
        const RankResult r = rank_of(forest.store(), row(*test, i), *prediction.example);
        fractions.push_back(r.fraction);
        if (csv) {
          csv->row({std::to_string(i), std::to_string(to_index(*prediction.example)), format_real(prediction.distance),
                    std::to_string(r.rank), format_real(r.fraction)});
        }
      }
      report.set("percentile", config.percentile);
      report.set("f", quantile(fractions, config.percentile));
    }
    test_seconds = seconds_since(test_start);
    report.set("test_comparisons", stats.metric_comparisons);
    report.set("mean_test_comparisons_per_tree",
               static_cast<double>(stats.metric_comparisons) / static_cast<double>(test->rows() * forest.n_trees()));
  }
  report.set("wall_train_s", train_seconds);
  report.set("wall_test_s", test_seconds);
  return report;
}

SyntheticSource make_source(const SourceSpec& spec, std::uint64_t seed) {
  if (spec.dim == 0) throw Error("--d must be >= 1");
  if (spec.dist == "hypercube") return SyntheticSource::hypercube(spec.dim, seed);
  if (spec.dist == "gaussian-mixture") return random_mixture(spec.dim, spec.components, seed);
  throw Error("unknown distribution '" + spec.dist + "' (expected hypercube or gaussian-mixture)");
}

TransitionAnalysis analyse_transition(const ScalingCurve& curve, double saturation_n,
                                      const ScalingCurve* long_curve) {
  TransitionAnalysis out;
  out.saturation_n = saturation_n;
  const ScalingCurve& source = long_curve ? *long_curve : curve;
  out.pre = source.segment(0.0, saturation_n);
  out.post = source.segment(kPostSaturationFactor * saturation_n, std::numeric_limits<double>::infinity());
  if (out.pre.size() >= 6) {
    out.pre_selection = fit_and_select(out.pre, FitFamily::power, FitFamily::logarithmic);
    out.pre_alpha = out.pre_selection->a.coefficients[1];
  }
  if (out.post.size() >= 6) out.post_selection = fit_and_select(out.post, FitFamily::logarithmic, FitFamily::power);
  return out;
}

namespace {

void report_selection(Report& report, const std::string& prefix, const FitSelection& s) {
  report.set(prefix + "_" + std::string(family_name(s.a.family)) + "_rms", s.a.rms);
  report.set(prefix + "_" + std::string(family_name(s.b.family)) + "_rms", s.b.rms);
  report.set(prefix + "_rms_ratio", std::max(s.a.rms_ratio, s.b.rms_ratio));
  report.set(prefix + "_winner", s.winner ? std::string(family_name(*s.winner)) : std::string("inconclusive"));
}

void write_curve(const std::string& path, const ScalingCurve& curve) {
  if (path.empty()) return;
  CsvWriter csv(path, {"N", "mean_comparisons"});
  for (const auto& p : curve.points) csv.row({format_real(p.n), format_real(p.mean_comparisons)});
}

}  // namespace

Report run_artificial(const ArtificialBench& bench, ScalingCurve* curve_out) {
  if (bench.n == 0) throw Error("artificial: --n must be >= 1");
  if (bench.seeds == 0) throw Error("artificial: --seeds must be >= 1");
  if (bench.max_children < 2) throw Error("artificial: --k must be > 1");

  ArtificialTreeOptions options;
  options.insertions = bench.n;
  options.max_children = bench.max_children;
  options.probes_per_checkpoint = std::max<std::size_t>(bench.probes, 1);
  options.checkpoints = log_checkpoints(1, bench.n, 10);

  ScalingCurve mean;
  double tail_ratio = 0.0, fanout_ratio = 0.0, saturation = 0.0;
  std::size_t saturated_runs = 0;
  for (std::size_t s = 0; s < bench.seeds; ++s) {
    options.seed = derive_seed(bench.seed, s);
    const auto r = artificial_tree_sim(options);
    if (mean.empty()) {
      mean = r.curve;
    } else {
      for (std::size_t i = 0; i < mean.size(); ++i) mean.points[i].mean_comparisons += r.curve.points[i].mean_comparisons;
    }
    tail_ratio += r.tail_mean_comparisons / std::sqrt(2.0 * r.tail_mean_n);
    fanout_ratio += static_cast<double>(r.root_fanout) / std::sqrt(2.0 * static_cast<double>(bench.n));
    if (r.root_saturated_at) {
      saturation += static_cast<double>(*r.root_saturated_at);
      ++saturated_runs;
    }
  }
  const auto seeds = static_cast<double>(bench.seeds);
  for (auto& p : mean.points) p.mean_comparisons /= seeds;

  Report report;
  report.set("bench", "artificial");
  report.set("n", std::uint64_t{bench.n});
  report.set("k", k_text(bench.max_children));
  report.set("seeds", std::uint64_t{bench.seeds});
  report.set("seed", bench.seed);
  report.set("tail_comparisons_over_sqrt_2n", tail_ratio / seeds);
  report.set("root_fanout_over_sqrt_2n", fanout_ratio / seeds);
  if (saturated_runs > 0) {
    const double sat = saturation / static_cast<double>(saturated_runs);
    report.set("root_saturation_n", sat);
    std::optional<ScalingCurve> long_curve;
    if (bench.horizon > static_cast<double>(bench.n) && bench.max_children != kUnboundedChildren) {
      std::vector<double> checkpoints;
      for (int i = 0;; ++i) {
        const double n = std::round(std::pow(10.0, 1.0 + i / 10.0));
        if (n > bench.horizon * (1.0 + 1e-9)) break;
        checkpoints.push_back(n);
      }
      long_curve = artificial_probe_curve(checkpoints, bench.max_children, bench.probes * bench.seeds,
                                          derive_seed(bench.seed, 0x6c6f6e67));
      report.set("horizon", bench.horizon);
    }
    const auto t = analyse_transition(mean, sat, long_curve ? &*long_curve : nullptr);
    if (t.pre_selection) {
      report.set("pre_saturation_alpha", t.pre_alpha);
      report_selection(report, "pre_saturation", *t.pre_selection);
    }
    if (t.post_selection) report_selection(report, "post_saturation", *t.post_selection);
  } else if (mean.size() >= 6) {
    report_selection(report, "fit", fit_and_select(mean, FitFamily::power, FitFamily::logarithmic));
    report.set("alpha", fit_family(mean, FitFamily::power, mean.size()).coefficients[1]);
  }
  write_curve(bench.out, mean);
  if (curve_out) *curve_out = mean;
  return report;
}

Report run_scaling(const ScalingBench& bench, ScalingCurve* curve_out) {
  if (bench.n < bench.first || bench.first < bench.n_trees) throw Error("scaling: need n_T <= --first <= --n");
  ScalingOptions options;
  options.n_trees = bench.n_trees;
  options.max_children = bench.max_children;
  options.seed = bench.seed;
  options.checkpoints = log_checkpoints(bench.first, bench.n, bench.per_decade);
  options.queries_per_checkpoint = bench.queries;
  options.threads = bench.threads;
  const ScalingCurve curve = measure_scaling(options, make_source(bench.source, derive_seed(bench.seed, 0x64617461)));

  Report report;
  report.set("bench", "scaling");
  report.set("dist", bench.source.dist);
  report.set("d", std::uint64_t{bench.source.dim});
  report.set("n_trees", std::uint64_t{bench.n_trees});
  report.set("k", k_text(bench.max_children));
  report.set("n", std::uint64_t{bench.n});
  report.set("seed", bench.seed);
  const ScalingCurve tail = curve.segment(static_cast<double>(bench.fit_from), std::numeric_limits<double>::infinity());
  report.set("fit_from", std::uint64_t{bench.fit_from});
  if (tail.size() >= 6) {
    const auto selection = fit_and_select(tail, FitFamily::logarithmic, FitFamily::power);
    report_selection(report, "fit", selection);
    report.set("alpha", fit_family(tail, FitFamily::power, tail.size()).coefficients[1]);
  } else {
    report.set("fit_winner", "insufficient-points");
  }
  write_curve(bench.out, curve);
  if (curve_out) *curve_out = curve;
  return report;
}

Report run_dimsweep(const DimSweepBench& bench, std::vector<DimensionPoint>* points_out) {
  if (bench.dims.empty()) throw Error("dimsweep: no dimensions given");
  const auto points = dimension_sweep(bench.dims, bench.n, bench.seed, bench.queries);
  Report report;
  report.set("bench", "dimsweep");
  report.set("n", std::uint64_t{bench.n});
  report.set("seed", bench.seed);
  bool below_half = true, non_decreasing = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    report.set("alpha_d" + std::to_string(points[i].dim), points[i].alpha);
    below_half = below_half && points[i].alpha < 0.5;
    if (i > 0 && points[i].dim > points[i - 1].dim) non_decreasing = non_decreasing && points[i].alpha >= points[i - 1].alpha;
  }
  report.set_flag("all_below_half", below_half);
  report.set_flag("non_decreasing", non_decreasing);
  if (!bench.out.empty()) {
    CsvWriter csv(bench.out, {"D", "alpha"});
    for (const auto& p : points) csv.row({std::to_string(p.dim), format_real(p.alpha)});
  }
  if (points_out) *points_out = points;
  return report;
}

Report run_retrieval_f(const RetrievalFBench& bench, std::vector<CheckpointMeasurement>* out) {
  ScalingOptions options;
  options.n_trees = bench.n_trees;
  options.max_children = bench.max_children;
  options.seed = bench.seed;
  options.checkpoints = bench.checkpoints;
  options.queries_per_checkpoint = bench.queries;
  options.threads = bench.threads;
  options.measure_fraction = true;
  options.percentile = bench.percentile;
  const auto measurements = measure_retrieval(options, make_source(bench.source, derive_seed(bench.seed, 0x64617461)));

  Report report;
  report.set("bench", "retrieval-f");
  report.set("dist", bench.source.dist);
  report.set("d", std::uint64_t{bench.source.dim});
  report.set("n_trees", std::uint64_t{bench.n_trees});
  report.set("k", k_text(bench.max_children));
  report.set("queries", std::uint64_t{bench.queries});
  report.set("percentile", bench.percentile);
  report.set("seed", bench.seed);
  bool decreasing = true;
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    report.set("f_n" + std::to_string(measurements[i].n), measurements[i].f);
    if (i > 0) decreasing = decreasing && measurements[i].f < measurements[i - 1].f;
  }
  report.set_flag("f_strictly_decreasing", decreasing);
  if (!bench.out.empty()) {
    CsvWriter csv(bench.out, {"N", "f", "mean_comparisons"});
    for (const auto& m : measurements) {
      csv.row({std::to_string(m.n), format_real(m.f), format_real(m.mean_comparisons)});
    }
  }
  if (out) *out = measurements;
  return report;
}

}  // namespace bf::cli
