#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>

#include "cosmix/io.hpp"
#include "cosmix/mixture.hpp"
#include "cosmix/testkit.hpp"
#include "cosmix/textprep.hpp"

using namespace cosmix;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cosmix-io-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("corpus jsonl round trip") {
  TempDir tmp;
  Corpus c;
  Document d0{0, "first document text", std::string("1970-1979"), std::string("AoS")};
  Document d1{1, "second, with unicode: naive", std::nullopt, std::nullopt};
  c.docs = {d0, d1};
  io::write_corpus_jsonl(c, tmp.path / "corpus.jsonl");
  Corpus back = io::read_corpus_jsonl(tmp.path / "corpus.jsonl");
  REQUIRE(back.docs.size() == 2);
  CHECK(back.docs[0].text == d0.text);
  CHECK(back.docs[0].epoch == d0.epoch);
  CHECK(back.docs[0].journal == d0.journal);
  CHECK_FALSE(back.docs[1].epoch.has_value());
}

TEST_CASE("matrix file round trip is exact and byte-stable") {
  TempDir tmp;
  auto data = testkit::generate(testkit::single_epoch_scenario(3, 20, 30, 15, 0.6), 3);
  DocTermMatrix idf = apply_idf(data.epochs[0].raw);

  io::write_matrix(idf, tmp.path / "m.dtm");
  DocTermMatrix back = io::read_matrix(tmp.path / "m.dtm");
  CHECK(back.weighting == idf.weighting);
  CHECK(back.vocab.terms == idf.vocab.terms);
  CHECK(back.row_start == idf.row_start);
  CHECK(back.cols == idf.cols);
  REQUIRE(back.vals.size() == idf.vals.size());
  CHECK(std::memcmp(back.vals.data(), idf.vals.data(), idf.vals.size() * sizeof(double)) == 0);

  io::write_matrix(back, tmp.path / "m2.dtm");
  CHECK(io::read_file(tmp.path / "m.dtm") == io::read_file(tmp.path / "m2.dtm"));
}

TEST_CASE("matrix reader rejects malformed headers") {
  TempDir tmp;
  io::write_file(tmp.path / "bad.dtm", "not-a-dtm 1\n");
  CHECK_THROWS_AS(io::read_matrix(tmp.path / "bad.dtm"), data_error);
  io::write_file(tmp.path / "trunc.dtm", "cosmix-dtm 1\nn 2\np 1\nweighting raw_count\nnnz 5\nterm aa\n0 0 1\n");
  CHECK_THROWS_AS(io::read_matrix(tmp.path / "trunc.dtm"), data_error);
  io::write_file(tmp.path / "dup.dtm",
                 "cosmix-dtm 1\nn 1\np 2\nweighting raw_count\nnnz 2\nterm aa\nterm bb\n"
                 "0 1 1\n0 0 1\n");
  CHECK_THROWS_AS(io::read_matrix(tmp.path / "dup.dtm"), data_error);
  io::write_file(tmp.path / "vocab.dtm",
                 "cosmix-dtm 1\nn 1\np 2\nweighting raw_count\nnnz 0\nterm bb\nterm aa\n");
  CHECK_THROWS_AS(io::read_matrix(tmp.path / "vocab.dtm"), data_error);
}

TEST_CASE("model round trip bit-reproduces posteriors") {
  TempDir tmp;
  auto data = testkit::generate(testkit::single_epoch_scenario(3, 25, 30, 15, 0.6), 9);
  DocTermMatrix idf = apply_idf(data.epochs[0].raw);
  EmOptions opt;
  opt.fixed_lambda = 22.5;
  opt.seed = 4;
  EmFit fit = fit_em(idf, 3, {0.05}, {}, opt);

  io::write_model(fit.model, tmp.path / "model.json");
  MixtureModel back = io::read_model(tmp.path / "model.json");
  CHECK(back.k == fit.model.k);
  CHECK(back.lambda == fit.model.lambda);
  CHECK(back.vocab_fingerprint == fit.model.vocab_fingerprint);
  CHECK(back.meta.seed == fit.model.meta.seed);

  EStepOut before = e_step(fit.model, idf);
  EStepOut after = e_step(back, idf);
  REQUIRE(before.posteriors.size() == after.posteriors.size());
  CHECK(std::memcmp(before.posteriors.data(), after.posteriors.data(),
                    before.posteriors.size() * sizeof(double)) == 0);
  CHECK(before.partial_loglik == after.partial_loglik);
}

TEST_CASE("format_double survives a parse round trip") {
  for (double v : {1.0 / 3.0, 2.0 * std::log(10.0), 1e-300, 12345.6789, 29.444389791664403}) {
    std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
}
