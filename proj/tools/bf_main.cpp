// bf: command-line front end for boundary-forest training, evaluation and
// scaling benchmarks.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bf/parallel.hpp"
#include "bf/run.hpp"

namespace {

std::size_t parse_count(const std::string& text, const char* flag) {
  if (text == "inf" || text == "infinity") return bf::kUnboundedChildren;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(value >= 0.0) || value != std::floor(value) || value > 1e15) {
    throw CLI::ValidationError(flag, "expected a non-negative integer (1e6 notation allowed) or 'inf', got '" + text + "'");
  }
  return static_cast<std::size_t>(value);
}

std::vector<std::size_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_count(item, flag));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bf::TaskKind parse_mode(const std::string& text) {
  if (text == "classification") return bf::TaskKind::classification;
  if (text == "regression") return bf::TaskKind::regression;
  if (text == "retrieval") return bf::TaskKind::retrieval;
  throw CLI::ValidationError("--mode", "expected classification, regression or retrieval");
}

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t value) {
  if (flag->count() > 0) return value;
  if (const char* env = std::getenv("BF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("BF_SEED", std::string("not an unsigned integer: ") + env);
    }
  }
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary forest: online instance-based learning and scaling benchmarks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t threads = bf::default_thread_count();

  // train-eval
  bf::cli::RunConfig run;
  std::string mode = "classification", run_k = "50", run_nt = "50";
  auto* train_eval = app.add_subcommand("train-eval", "Single online pass over --train, then evaluate on --test");
  train_eval->add_option("--mode", mode, "classification | regression | retrieval")->capture_default_str();
  train_eval->add_option("--nt", run_nt, "Number of trees n_T")->capture_default_str();
  train_eval->add_option("--k", run_k, "Maximum children per node (integer > 1 or inf)")->capture_default_str();
  train_eval->add_option("--epsilon", run.epsilon, "Regression add threshold")->capture_default_str();
  auto* run_seed = train_eval->add_option("--seed", seed, "Master seed (falls back to $BF_SEED)");
  train_eval->add_option("--threads", threads, "Worker threads for the per-tree fan-out")->capture_default_str();
  train_eval->add_option("--train", run.train_path, "LIBSVM training file")->required();
  train_eval->add_option("--test", run.test_path, "LIBSVM test file");
  train_eval->add_option("--out", run.out_path, "Per-query CSV output");
  train_eval->add_flag("--shuffle", run.shuffle, "Shuffle the training stream (off: file order)");
  train_eval->add_flag("--minmax", run.minmax, "Per-feature min-max scaling from the training file");
  train_eval->add_flag("--train-error", run.train_error, "Also report error on the training set after the pass");
  train_eval->add_option("--percentile", run.percentile, "Retrieval quantile for f")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Scaling benchmarks writing CSV curves");
  bench->require_subcommand(1);

  std::string dist = "hypercube", d = "100", components = "5", nt = "10", k = "inf", n = "1e5";
  std::string first = "100", queries = "100", per_decade = "10", fit_from = "0", seeds = "1", probes = "200";
  std::string out, dims = "5,20,100", checkpoints = "1000,10000,100000";
  double percentile = 0.99, horizon = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Master seed (falls back to $BF_SEED)");
    cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();
    cmd->add_option("--out", out, "CSV output path");
  };
  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--dist", dist, "hypercube | gaussian-mixture")->capture_default_str();
    cmd->add_option("--d", d, "Dimensionality")->capture_default_str();
    cmd->add_option("--components", components, "Mixture components")->capture_default_str();
  };

  auto* scaling = bench->add_subcommand("scaling", "Query cost per tree against N for a retrieval forest");
  add_common(scaling);
  add_source(scaling);
  scaling->add_option("--nt", nt, "Number of trees")->capture_default_str();
  scaling->add_option("--k", k, "Maximum children (integer > 1 or inf)")->capture_default_str();
  scaling->add_option("--n", n, "Largest N")->capture_default_str();
  scaling->add_option("--first", first, "First checkpoint")->capture_default_str();
  scaling->add_option("--per-decade", per_decade, "Checkpoints per decade")->capture_default_str();
  scaling->add_option("--queries", queries, "Held-out queries per checkpoint")->capture_default_str();
  scaling->add_option("--fit-from", fit_from, "Fit the verdict on N >= this")->capture_default_str();

  auto* artificial = bench->add_subcommand("artificial", "Equidistant artificial tree simulation");
  add_common(artificial);
  artificial->add_option("--n", n, "Insertions")->capture_default_str();
  artificial->add_option("--k", k, "Maximum children (integer > 1 or inf)")->capture_default_str();
  artificial->add_option("--seeds", seeds, "Independent runs averaged")->capture_default_str();
  artificial->add_option("--probes", probes, "Probe walks per checkpoint")->capture_default_str();
  artificial->add_option("--horizon", horizon, "Extend a finite-k curve to this N with the lazy sampler (0 = off)")
      ->capture_default_str();

  auto* dimsweep = bench->add_subcommand("dimsweep", "Power-law exponent of a k=inf tree against D");
  add_common(dimsweep);
  dimsweep->add_option("--dims", dims, "Comma-separated dimensions")->capture_default_str();
  dimsweep->add_option("--n", n, "N per dimension")->capture_default_str();
  dimsweep->add_option("--queries", queries, "Held-out queries per checkpoint")->capture_default_str();

  auto* retrieval_f = bench->add_subcommand("retrieval-f", "Retrieval fraction f against N");
  add_common(retrieval_f);
  add_source(retrieval_f);
  retrieval_f->add_option("--nt", nt, "Number of trees")->capture_default_str();
  retrieval_f->add_option("--k", k, "Maximum children (integer > 1 or inf)")->capture_default_str();
  retrieval_f->add_option("--checkpoints", checkpoints, "Comma-separated N values")->capture_default_str();
  retrieval_f->add_option("--queries", queries, "Held-out queries per checkpoint")->capture_default_str();
  retrieval_f->add_option("--percentile", percentile, "Quantile for f")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (threads == 0) throw CLI::ValidationError("--threads", "must be >= 1");

    bf::cli::Report report;
    if (train_eval->parsed()) {
      run.mode = parse_mode(mode);
      run.n_trees = parse_count(run_nt, "--nt");
      run.max_children = parse_count(run_k, "--k");
      run.seed = resolve_seed(run_seed, seed);
      run.threads = threads;
      report = bf::cli::run_train_eval(run);
    } else {
      const CLI::App* cmd = bench->get_subcommands().front();
      const std::uint64_t bench_seed = resolve_seed(cmd->get_option("--seed"), seed);
      bf::cli::SourceSpec source{dist, parse_count(d, "--d"), parse_count(components, "--components")};
      if (cmd == scaling) {
        bf::cli::ScalingBench b;
        b.source = source;
        b.n_trees = parse_count(nt, "--nt");
        b.max_children = parse_count(k, "--k");
        b.n = parse_count(n, "--n");
        b.first = parse_count(first, "--first");
        b.per_decade = parse_count(per_decade, "--per-decade");
        b.queries = parse_count(queries, "--queries");
        b.fit_from = parse_count(fit_from, "--fit-from");
        b.seed = bench_seed;
        b.threads = threads;
        b.out = out;
        report = bf::cli::run_scaling(b);
      } else if (cmd == artificial) {
        bf::cli::ArtificialBench b;
        b.n = parse_count(n, "--n");
        b.max_children = parse_count(k, "--k");
        b.seeds = parse_count(seeds, "--seeds");
        b.probes = parse_count(probes, "--probes");
        b.horizon = horizon;
        b.seed = bench_seed;
        b.out = out;
        report = bf::cli::run_artificial(b);
      } else if (cmd == dimsweep) {
        bf::cli::DimSweepBench b;
        b.dims = parse_list(dims, "--dims");
        b.n = parse_count(n, "--n");
        b.queries = parse_count(queries, "--queries");
        b.seed = bench_seed;
        b.out = out;
        report = bf::cli::run_dimsweep(b);
      } else {
        bf::cli::RetrievalFBench b;
        b.source = source;
        b.n_trees = parse_count(nt, "--nt");
        b.max_children = parse_count(k, "--k");
        b.checkpoints = parse_list(checkpoints, "--checkpoints");
        b.queries = parse_count(queries, "--queries");
        b.percentile = percentile;
        b.seed = bench_seed;
        b.threads = threads;
        b.out = out;
        report = bf::cli::run_retrieval_f(b);
      }
    }
    report.write(std::cout);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const bf::Error& e) {
    std::cerr << "bf: " << e.what() << '\n';
    return 2;
  }
}
