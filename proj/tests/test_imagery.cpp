#include <doctest.h>

#include <fstream>
#include <set>
#include <vector>

#include "fcmstop/errors.hpp"
#include "fcmstop/imagery.hpp"
#include "fcmstop/synthetic.hpp"
#include "support/oracles.hpp"

using namespace fcmstop;

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("png pixels are scaled to the unit range") {
  oracle::TempDir dir("png");
  const std::vector<std::uint8_t> rgb{255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255};
  write_rgb_png(rgb, 2, 2, dir / "a.png");
  const auto rec = load_image_features(dir / "a.png");
  CHECK(rec.id == "a");
  CHECK(rec.width == 2);
  CHECK(rec.height == 2);
  REQUIRE(rec.features.n_points() == 4);
  REQUIRE(rec.features.n_dims() == 3);
  const std::vector<double> expected{1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1};
  CHECK(rec.features.values().data() == expected);
  CHECK(rec.content_digest == sha256_hex(oracle::read_file(dir / "a.png")));
}

TEST_CASE("ppm input") {
  oracle::TempDir dir("ppm");
  write_rgb_ppm(std::vector<std::uint8_t>{0, 0, 0}, 1, 1, dir / "b.ppm");
  const auto rec = load_image_features(dir / "b.ppm");
  CHECK(rec.features.n_points() == 1);
  CHECK(rec.features(0, 0) == 0.0);
  write_text(dir / "c.ppm", "P6\n# comment\n2 1\n255\n\x01\x02\x03\x04\x05\x06");
  const auto c = load_image_features(dir / "c.ppm");
  CHECK(c.width == 2);
  CHECK(c.features(1, 2) == doctest::Approx(6.0 / 255.0));
  write_text(dir / "bad.ppm", "P3\n1 1\n255\n0 0 0\n");
  CHECK_THROWS_AS(load_image_features(dir / "bad.ppm"), IngestionError);
}

TEST_CASE("unreadable or unsupported images name the path") {
  oracle::TempDir dir("badimg");
  write_text(dir / "x.png", "not a png");
  try {
    load_image_features(dir / "x.png");
    FAIL("expected an ingestion error");
  } catch (const IngestionError& e) {
    CHECK(std::string(e.what()).find("x.png") != std::string::npos);
  }
  write_text(dir / "y.gif", "GIF89a");
  CHECK_THROWS_AS(load_image_features(dir / "y.gif"), IngestionError);
  CHECK_THROWS_AS(load_image_features(dir / "missing.png"), IngestionError);
}

TEST_CASE("feature csv parsing") {
  oracle::TempDir dir("csv");
  write_text(dir / "a.csv", "0,0\n1,1\n");
  const auto a = load_feature_csv(dir / "a.csv");
  CHECK(a.n_points() == 2);
  CHECK(a.n_dims() == 2);
  CHECK(a(1, 1) == 1.0);

  write_text(dir / "h.csv", "r,g\r\n0.5,0.25\r\n");
  const auto h = load_feature_csv(dir / "h.csv", true);
  CHECK(h.n_points() == 1);
  CHECK(h(0, 1) == 0.25);
  CHECK_THROWS_AS(load_feature_csv(dir / "h.csv", false), ParseError);

  write_text(dir / "empty.csv", "");
  CHECK_THROWS_AS(load_feature_csv(dir / "empty.csv"), ParseError);

  write_text(dir / "ragged.csv", "1,2\n3,4\n5\n");
  try {
    load_feature_csv(dir / "ragged.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  write_text(dir / "word.csv", "1,2\n3,x\n");
  try {
    load_feature_csv(dir / "word.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("feature csv round trip is exact") {
  oracle::TempDir dir("csvrt");
  const FeatureMatrix f(3, 2, {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 7.0, 0.30000000000000004});
  write_feature_csv(f, dir / "f.csv");
  CHECK(load_feature_csv(dir / "f.csv").values() == f.values());
  const auto rec = load_feature_record(dir / "f.csv");
  CHECK(rec.id == "f");
  CHECK(rec.width == 3);
  CHECK(rec.height == 1);
}

TEST_CASE("label images") {
  oracle::TempDir dir("labels");
  const LabelMap zeros{3, 2, Labels(6, 0), 6};
  write_label_image(zeros, dir / "z.png");
  const auto z = load_image_features(dir / "z.png");
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(z.features(i, 0) == palette_color(0).r / 255.0);
    CHECK(z.features(i, 1) == palette_color(0).g / 255.0);
  }

  const LabelMap row{6, 1, Labels{0, 1, 2, 3, 4, 5}, 6};
  write_label_image(row, dir / "r.png");
  const auto back = read_label_image(dir / "r.png", 6);
  CHECK(back.labels == row.labels);
  std::set<std::tuple<int, int, int>> colors;
  for (std::size_t k = 0; k < 6; ++k) colors.insert({palette_color(k).r, palette_color(k).g, palette_color(k).b});
  CHECK(colors.size() == 6);

  CHECK_THROWS_AS(write_label_image({2, 1, Labels{0, 6}, 6}, dir / "bad.png"), OutputError);
  CHECK_THROWS_AS(write_label_image({2, 2, Labels{0, 1}, 6}, dir / "bad.png"), OutputError);
}

TEST_CASE("cluster labels keep pixel positions") {
  oracle::TempDir dir("pos");
  synthetic::SceneSpec spec;
  spec.width = 12;
  spec.height = 7;
  spec.n_regions = 3;
  spec.noise_sigma = 0.0;
  const auto scene = synthetic::make_scene(spec, 5);
  write_rgb_png(scene.rgb, scene.width, scene.height, dir / "s.png");
  const auto rec = load_image_features(dir / "s.png");
  write_label_image({rec.width, rec.height, scene.truth, 3}, dir / "t.png");
  const auto map = read_label_image(dir / "t.png", 3);
  CHECK(map.width == 12);
  CHECK(map.height == 7);
  CHECK(map.labels == scene.truth);
}

TEST_CASE("input listing, corpus loading and fingerprints") {
  oracle::TempDir dir("corpus");
  write_rgb_png(std::vector<std::uint8_t>(12, 9), 2, 2, dir / "b.png");
  write_text(dir / "a.csv", "1,2\n3,4\n");
  write_text(dir / "notes.txt", "ignored");
  const auto paths = list_inputs(dir.path());
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].filename() == "a.csv");
  const auto corpus = load_corpus(paths);
  CHECK(corpus[1].id == "b");

  const std::string fp = corpus_fingerprint(corpus);
  CHECK(fp.rfind("sha256:", 0) == 0);
  const std::vector<ImageRecord> reversed{corpus[1], corpus[0]};
  CHECK(corpus_fingerprint(reversed) == fp);
  CHECK(sha256_hex(std::string("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK_THROWS_AS(list_inputs(dir / "nope"), IngestionError);
}

TEST_CASE("trace csv") {
  oracle::TempDir dir("trace");
  ClusterTrace t;
  t.objectives = {2.0, 1.0};
  t.labels = {{0, 1}, {1, 1}};
  t.iter_times = {0.5, 0.25};
  write_trace_csv(t, dir / "t.csv", dir / "l.csv");
  CHECK(oracle::read_file(dir / "t.csv") == "iter,objective,elapsed_seconds\n1,2,0.5\n2,1,0.25\n");
  CHECK(oracle::read_file(dir / "l.csv") == "0,1\n1,1\n");
}

TEST_CASE("synthetic scenes are seeded") {
  synthetic::SceneSpec spec;
  const auto a = synthetic::make_scene(spec, 3);
  const auto b = synthetic::make_scene(spec, 3);
  CHECK(a.rgb == b.rgb);
  CHECK(a.truth == b.truth);
  CHECK(a.rgb.size() == 64 * 64 * 3);
  std::set<Label> regions(a.truth.begin(), a.truth.end());
  CHECK(regions.size() == 6);
  CHECK_FALSE(synthetic::make_scene(spec, 4).rgb == a.rgb);
}
