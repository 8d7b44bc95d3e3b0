#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bf/libsvm.hpp"
#include "bf/report.hpp"
#include "bf/rng.hpp"
#include "bf/run.hpp"

using V = std::vector<double>;
namespace fs = std::filesystem;

namespace {

bf::io::SparseDataset parse(const std::string& text, const std::string& name = "mem") {
  std::istringstream in(text);
  return bf::io::parse_libsvm(in, name);
}

std::string error_of(const std::string& text) {
  try {
    parse(text, "f.svm");
  } catch (const bf::Error& e) {
    return e.what();
  }
  return "";
}

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "bf_unit_tests";
  fs::create_directories(dir);
  return dir / name;
}

// Two well separated blobs written as a LIBSVM file.
void write_blobs(const fs::path& path, std::size_t n, std::uint64_t seed, double scale = 1.0) {
  bf::Rng rng(seed);
  std::ofstream out(path);
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(rng.below(2));
    const double cx = cls == 0 ? 0.2 : 0.8;
    out << (cls == 0 ? "-1" : "+1");
    for (int j = 1; j <= 3; ++j) out << ' ' << j << ':' << scale * (cx + 0.1 * rng.normal());
    out << '\n';
  }
}

}  // namespace

TEST_CASE("libsvm line format") {
  const auto s = parse("3 1:0.5 4:2.0\n");
  const auto d = bf::io::densify(s, 4);
  CHECK(d.dim == 4);
  CHECK(d.positions == V{0.5, 0, 0, 2.0});
  CHECK(d.labels == V{3});
  CHECK(bf::io::densify(s).dim == 4);
}

TEST_CASE("libsvm tolerates blank lines and a leading plus") {
  const auto s = parse("+1 2:1\n\n-1 1:3\n2\n");
  CHECK(s.rows() == 3);
  CHECK(s.labels == V{1, -1, 2});
  const auto d = bf::io::densify(s);
  CHECK(d.positions == V{0, 1, 3, 0, 0, 0});
}

TEST_CASE("libsvm errors carry line numbers") {
  CHECK(error_of("1 1:0.5\n1 2:x\n").find("f.svm:2:") == 0);
  CHECK(error_of("1 3:1 2:1\n").find("f.svm:1:") == 0);
  CHECK(error_of("1 0:1\n").find("f.svm:1:") == 0);
  CHECK(error_of("cat 1:1\n").find("f.svm:1:") == 0);
  CHECK(error_of("1 1:1\n1 1\n").find("f.svm:2:") == 0);
  CHECK(error_of("1 1:1 1:2\n").find("f.svm:1:") == 0);
  CHECK(error_of("1 1:nan\n") != "");
}

TEST_CASE("class values are sorted and mapped densely") {
  const auto a = bf::io::densify(parse("3 1:1\n1 1:2\n3 1:3\n"));
  const auto b = bf::io::densify(parse("7 1:1\n"));
  const auto classes = bf::io::class_values({&a, &b});
  CHECK(classes == V{1, 3, 7});
  const auto set = bf::io::to_classified(a, classes);
  CHECK(set.classes == std::vector<std::size_t>{1, 0, 1});
  CHECK(set.n_classes == 3);
  CHECK(set.indicator(0) == V{0, 1, 0});
  CHECK_THROWS_AS(bf::io::to_classified(b, V{1, 3}), bf::Error);
}

TEST_CASE("libsvm round trip keeps dense vectors") {
  bf::Rng rng(60);
  bf::io::DenseDataset d;
  d.dim = 7;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 7; ++j) d.positions.push_back(rng.below(3) == 0 ? 0.0 : rng.normal() * 1e3);
    d.labels.push_back(static_cast<double>(rng.below(4)));
  }
  std::ostringstream out;
  bf::io::write_libsvm(out, d);
  std::istringstream in(out.str());
  const auto back = bf::io::densify(bf::io::parse_libsvm(in, "rt"), 7);
  CHECK(back.positions == d.positions);
  CHECK(back.labels == d.labels);
}

TEST_CASE("file loading") {
  const auto path = temp_file("load.svm");
  {
    std::ofstream out(path);
    out << "2 1:1 3:1\n5 2:4\n2 1:0.5\n";
  }
  const auto loaded = bf::io::load_libsvm(path.string());
  CHECK(loaded.set.dim == 3);
  CHECK(loaded.set.size() == 3);
  CHECK(loaded.class_values == V{2, 5});
  CHECK(loaded.set.classes == std::vector<std::size_t>{0, 1, 0});
  CHECK_THROWS_AS(bf::io::read_libsvm((path.parent_path() / "missing.svm").string()), bf::Error);
}

TEST_CASE("minmax scaling uses the reference ranges") {
  bf::io::DenseDataset ref{2, {0, 5, 10, 5}, {0, 1}};
  bf::io::DenseDataset data{2, {5, 5, 20, 1}, {0, 1}};
  bf::io::minmax_scale(data, ref);
  CHECK(data.positions == V{0.5, 0, 2.0, 0});
}

TEST_CASE("report formatting") {
  CHECK(bf::cli::format_real(0.1234567) == "0.123457");
  CHECK(bf::cli::format_real(1e6) == "1e+06");
  bf::cli::Report r;
  r.set("a", std::uint64_t{3});
  r.set("wall_s", 1.5);
  r.set("b", 2.0);
  r.set_flag("c", true);
  CHECK(r.get("a") == "3");
  CHECK(r.has("wall_s"));
  CHECK(r.deterministic_text() == "a=3\nb=2\nc=yes\n");
  std::ostringstream out;
  r.write(out);
  CHECK(out.str() == "a=3\nwall_s=1.5\nb=2\nc=yes\n");
}

TEST_CASE("train-eval reports are deterministic and scale invariant") {
  const auto train = temp_file("train.svm"), test = temp_file("test.svm");
  const auto train_big = temp_file("train_big.svm"), test_big = temp_file("test_big.svm");
  write_blobs(train, 400, 1);
  write_blobs(test, 200, 2);
  write_blobs(train_big, 400, 1, 1000.0);
  write_blobs(test_big, 200, 2, 1000.0);

  bf::cli::RunConfig c;
  c.n_trees = 5;
  c.max_children = 5;
  c.seed = 3;
  c.train_path = train.string();
  c.test_path = test.string();
  c.train_error = true;
  const auto a = bf::cli::run_train_eval(c);
  const auto b = bf::cli::run_train_eval(c);
  CHECK(a.deterministic_text() == b.deterministic_text());
  CHECK(a.get("n_train") == "400");
  CHECK(a.get("n_classes") == "2");
  CHECK(std::stod(a.get("error_rate")) < 5.0);

  c.threads = 3;
  CHECK(bf::cli::run_train_eval(c).deterministic_text() == a.deterministic_text());

  c.threads = 1;
  c.train_path = train_big.string();
  c.test_path = test_big.string();
  const auto big = bf::cli::run_train_eval(c);
  for (const char* key : {"error_rate", "errors", "stored_examples", "total_nodes", "train_comparisons"}) {
    CHECK(big.get(key) == a.get(key));
  }

  c.n_trees = 1000;
  CHECK_THROWS_AS(bf::cli::run_train_eval(c), bf::Error);
}

TEST_CASE("train-eval in regression and retrieval modes") {
  const auto train = temp_file("reg.svm");
  {
    bf::Rng rng(61);
    std::ofstream out(train);
    for (int i = 0; i < 300; ++i) {
      const double x = rng.uniform(), y = rng.uniform();
      out << 2 * x + y << " 1:" << x << " 2:" << y << '\n';
    }
  }
  bf::cli::RunConfig c;
  c.mode = bf::TaskKind::regression;
  c.epsilon = 0.05;
  c.n_trees = 5;
  c.train_path = train.string();
  c.test_path = train.string();
  const auto reg = bf::cli::run_train_eval(c);
  CHECK(std::stod(reg.get("rmse")) < 0.2);

  c.mode = bf::TaskKind::retrieval;
  c.out_path = temp_file("ret.csv").string();
  const auto ret = bf::cli::run_train_eval(c);
  // Training points are stored, so answers on them rank near the top.
  CHECK(std::stod(ret.get("f")) < 0.05);
  std::ifstream csv(c.out_path);
  std::string header;
  std::getline(csv, header);
  CHECK(!header.empty());
}
