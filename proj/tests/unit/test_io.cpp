#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "rsflicker/codec.hpp"
#include "rsflicker/detector.hpp"
#include "rsflicker/image.hpp"
#include "rsflicker/manifest.hpp"
#include "rsflicker/synth.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rsflicker-io-test";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

rsf::Image random_image(std::size_t rows, std::size_t cols, std::size_t ch, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0, 1);
  rsf::Image img(rows, cols, ch);
  for (double& v : img.data()) v = u(gen);
  return img;
}

rsf::CodecError::Kind load_error(const fs::path& p) {
  try {
    rsf::load_image(p);
  } catch (const rsf::CodecError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << p;
  return rsf::CodecError::Kind::Io;
}

}  // namespace

TEST(Image, Invariants) {
  EXPECT_THROW(rsf::Image(0, 4), std::invalid_argument);
  EXPECT_THROW(rsf::Image(4, 4, 2), std::invalid_argument);
  rsf::Image img(2, 2);
  img.at(1, 1) = -0.1;
  EXPECT_THROW(img.validate(), std::invalid_argument);
  img.at(1, 1) = std::nan("");
  EXPECT_THROW(img.validate(), std::invalid_argument);
}

TEST(Image, LuminanceAndProfile) {
  rsf::Image rgb(2, 2, 3);
  rgb.at(0, 0, 0) = 1.0;
  rgb.at(0, 1, 1) = 1.0;
  rgb.at(1, 0, 2) = 1.0;
  rgb.at(1, 1, 0) = rgb.at(1, 1, 1) = rgb.at(1, 1, 2) = 1.0;
  EXPECT_NEAR(rsf::luminance(rgb, 0, 0), 0.2126, 1e-12);
  EXPECT_NEAR(rsf::luminance(rgb, 0, 1), 0.7152, 1e-12);
  EXPECT_NEAR(rsf::luminance(rgb, 1, 0), 0.0722, 1e-12);
  EXPECT_NEAR(rsf::luminance(rgb, 1, 1), 1.0, 1e-12);
  const auto prof = rsf::row_luminance_profile(rgb);
  EXPECT_NEAR(prof[0], (0.2126 + 0.7152) / 2, 1e-12);
  EXPECT_NEAR(prof[1], (0.0722 + 1.0) / 2, 1e-12);
  EXPECT_NEAR(rsf::mean_luminance(rgb), (0.2126 + 0.7152 + 0.0722 + 1.0) / 4, 1e-12);
}

TEST(Image, ResizeAreaPreservesMean) {
  const auto img = random_image(48, 60, 1, 9);
  for (auto [r, c] : {std::pair<std::size_t, std::size_t>{24, 30}, {36, 45}, {17, 23}, {96, 120}}) {
    const auto small = rsf::resize_area(img, r, c);
    EXPECT_EQ(small.rows(), r);
    EXPECT_NEAR(rsf::mean_luminance(small), rsf::mean_luminance(img), 1e-9);
  }
  rsf::Image flat(30, 30, 3, 0.4);
  const auto shrunk = rsf::resize_area(flat, 7, 11);
  for (double v : shrunk.data()) EXPECT_NEAR(v, 0.4, 1e-12);
}

TEST(Image, ContentHash) {
  const auto a = random_image(8, 8, 1, 1);
  auto b = a;
  EXPECT_EQ(rsf::content_hash(a), rsf::content_hash(b));
  EXPECT_EQ(rsf::content_hash(a).size(), 64u);
  b.at(3, 3) += 1e-12;
  EXPECT_NE(rsf::content_hash(a), rsf::content_hash(b));
  EXPECT_NE(rsf::content_hash(rsf::Image(2, 8)), rsf::content_hash(rsf::Image(8, 2)));
}

TEST(Codec, P5Example) {
  std::string bytes = "P5 4 4 255\n";
  for (int k = 0; k < 16; ++k) bytes += static_cast<char>(k * 17);
  const auto path = scratch("ex.pgm");
  write_bytes(path, bytes);
  const auto img = rsf::load_image(path);
  EXPECT_EQ(img.rows(), 4u);
  EXPECT_EQ(img.cols(), 4u);
  EXPECT_EQ(img.channels(), 1u);
  for (int k = 0; k < 16; ++k) EXPECT_EQ(img.data()[k], k * 17 / 255.0);
}

TEST(Codec, HeaderCommentsAndMaxval) {
  const std::string bytes = std::string("P5\n# made by hand\n2 1\n# max\n15\n") + '\x0f' + '\x05';
  const auto img = rsf::decode_pnm({reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()});
  EXPECT_EQ(img.at(0, 0), 1.0);
  EXPECT_EQ(img.at(0, 1), 5 / 15.0);
}

TEST(Codec, RoundTripQuantizationBound) {
  for (const char* name : {"rt.pgm", "rt.ppm"}) {
    const auto img = random_image(37, 53, std::string(name).ends_with("ppm") ? 3 : 1, 11);
    const auto path = scratch(name);
    rsf::save_image(img, path);
    const auto back = rsf::load_image(path);
    ASSERT_TRUE(back.same_shape(img));
    double worst = 0;
    for (std::size_t k = 0; k < img.size(); ++k) worst = std::max(worst, std::abs(back.data()[k] - img.data()[k]));
    EXPECT_LE(worst, 1.0 / 510 + 1e-15) << name;
  }
}

TEST(Codec, QuantizedRoundTripIsExact) {
  auto img = random_image(16, 16, 3, 12);
  for (double& v : img.data()) v = rsf::quantize8(v) / 255.0;
  const auto path = scratch("exact.ppm");
  rsf::save_image(img, path);
  EXPECT_EQ(rsf::load_image(path), img);

  auto srgb = random_image(16, 16, 1, 13);
  for (double& v : srgb.data()) v = rsf::srgb_to_linear(rsf::quantize8(v) / 255.0);
  const auto png = scratch("exact.png");
  rsf::save_image(srgb, png);
  const auto back = rsf::load_image(png);
  for (std::size_t k = 0; k < srgb.size(); ++k) EXPECT_NEAR(back.data()[k], srgb.data()[k], 1e-12);
}

TEST(Codec, SaveClampsAndRoundsHalfUp) {
  EXPECT_EQ(rsf::quantize8(-1.0), 0);
  EXPECT_EQ(rsf::quantize8(7.0), 255);
  EXPECT_EQ(rsf::quantize8(0.5 / 255.0), 1);
  EXPECT_EQ(rsf::quantize8(0.49 / 255.0), 0);
  rsf::Image img(1, 3);
  img.at(0, 0) = 2.5;
  img.at(0, 1) = 0.0;
  img.at(0, 2) = 1.5 / 255.0;
  const auto bytes = rsf::encode_pnm(img);
  const auto back = rsf::decode_pnm(bytes);
  EXPECT_EQ(back.at(0, 0), 1.0);
  EXPECT_EQ(back.at(0, 1), 0.0);
  EXPECT_EQ(back.at(0, 2), 2 / 255.0);
}

TEST(Codec, InterlacedPngRejected) {
  EXPECT_EQ(load_error(fs::path(RSF_FIXTURE_DIR) / "interlaced.png"), rsf::CodecError::Kind::UnsupportedFormat);
}

TEST(Codec, TruncatedAndMalformed) {
  auto path = scratch("short.pgm");
  write_bytes(path, std::string("P5 4 4 255\n") + std::string(10, '\x01'));
  EXPECT_EQ(load_error(path), rsf::CodecError::Kind::Truncated);
  path = scratch("hdr.pgm");
  write_bytes(path, "P5 4 ");
  EXPECT_EQ(load_error(path), rsf::CodecError::Kind::Truncated);
  path = scratch("p2.pgm");
  write_bytes(path, "P2 1 1 255\n7\n");
  EXPECT_EQ(load_error(path), rsf::CodecError::Kind::UnsupportedFormat);
  path = scratch("wide.pgm");
  write_bytes(path, "P5 1 1 65535\n\x01\x02");
  EXPECT_EQ(load_error(path), rsf::CodecError::Kind::UnsupportedFormat);
  path = scratch("png.png");
  auto img = random_image(8, 8, 1, 3);
  rsf::save_image(img, path);
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  write_bytes(path, bytes.substr(0, bytes.size() / 2));
  EXPECT_EQ(load_error(path), rsf::CodecError::Kind::Truncated);
  EXPECT_EQ(load_error(scratch("does-not-exist.pgm")), rsf::CodecError::Kind::Io);
}

TEST(Codec, DimensionOverflow) {
  auto path = scratch("huge.pgm");
  write_bytes(path, "P5 2000000 2 255\n");
  EXPECT_EQ(load_error(path), rsf::CodecError::Kind::DimensionOverflow);
  path = scratch("huge2.pgm");
  write_bytes(path, "P5 99999999999 2 255\n");
  EXPECT_EQ(load_error(path), rsf::CodecError::Kind::DimensionOverflow);
  path = scratch("zero.pgm");
  write_bytes(path, "P5 0 2 255\n");
  EXPECT_NE(load_error(path), rsf::CodecError::Kind::Io);
}

TEST(Codec, SrgbTransferInverse) {
  for (int k = 0; k <= 1000; ++k) {
    const double v = k / 1000.0;
    EXPECT_NEAR(rsf::linear_to_srgb(rsf::srgb_to_linear(v)), v, 1e-12);
  }
}

TEST(Synth, Deterministic) {
  const auto a = rsf::synth_face(5, 120, 160);
  const auto b = rsf::synth_face(5, 120, 160);
  EXPECT_EQ(rsf::encode_pnm(a), rsf::encode_pnm(b));
  EXPECT_EQ(a, b);
  EXPECT_NO_THROW(a.validate());
}

TEST(Synth, SeedsDiffer) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto a = rsf::stub_profile_embed(rsf::synth_face(s, 240, 320), 16);
    const auto b = rsf::stub_profile_embed(rsf::synth_face(s + 1, 240, 320), 16);
    EXPECT_GT(rsf::feature_distance(a, b), 0.0);
  }
}

TEST(Synth, ValidForManySeeds) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto img = rsf::synth_face(s, 64 + s, 80 + 2 * s);
    EXPECT_NO_THROW(img.validate());
    for (double v : img.data()) EXPECT_LE(v, 1.0);
  }
}

TEST(Synth, FeatureBandDarkerThanFace) {
  const auto band = rsf::synth_feature_band(960);
  EXPECT_EQ(band.begin, 384u);
  EXPECT_EQ(band.end, 576u);
  EXPECT_THROW(rsf::synth_face(0, 63, 100), std::invalid_argument);
  EXPECT_THROW(rsf::synth_face(0, 100, 10), std::invalid_argument);
}

TEST(Synth, GoldenHash) {
  const auto img = rsf::synth_face(0, 960, 1280);
  EXPECT_EQ(rsf::content_hash(rsf::decode_pnm(rsf::encode_pnm(img))), RSF_SYNTH_GOLDEN);
}

TEST(Manifest, RoundTripAndRelativePaths) {
  const fs::path dir = scratch("manifest-dir");
  fs::create_directories(dir);
  rsf::Manifest m;
  m.entries.push_back({"a.pgm", "s1", std::nullopt, "18cm", "0"});
  m.entries.push_back({"b.pgm", "s1", rsf::PulseParams::make(1000, 0.5), "18cm", "45"});
  const auto path = dir / "m.json";
  rsf::save_manifest(m, path);
  const auto back = rsf::load_manifest(path);
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[0].path, dir / "a.pgm");
  EXPECT_FALSE(back.entries[0].condition.has_value());
  ASSERT_TRUE(back.entries[1].condition.has_value());
  EXPECT_EQ(*back.entries[1].condition, rsf::PulseParams::make(1000, 0.5));
  EXPECT_EQ(back.entries[1].tilt, "45");

  nlohmann::json j;
  rsf::to_json(j, m);
  EXPECT_EQ(j.at("entries").at(0).at("condition"), "normal");
}

TEST(Manifest, Validation) {
  rsf::Manifest m;
  m.entries.push_back({"a.pgm", "s1", std::nullopt, "", ""});
  m.entries.push_back({"a.pgm", "s2", std::nullopt, "", ""});
  EXPECT_THROW(m.validate(), std::invalid_argument);
  const auto bad = nlohmann::json::parse(R"({"entries":[{"path":"x.pgm","subject":"s","condition":"dim"}]})");
  EXPECT_THROW(rsf::manifest_from_json(bad), std::invalid_argument);
  const auto bad_pulse =
      nlohmann::json::parse(R"({"entries":[{"path":"x.pgm","subject":"s","condition":{"period_us":-1,"duty":0.5}}]})");
  EXPECT_THROW(rsf::manifest_from_json(bad_pulse), std::exception);
  const auto path = scratch("broken.json");
  write_bytes(path, "{not json");
  EXPECT_THROW(rsf::load_manifest(path), std::invalid_argument);
  EXPECT_THROW(rsf::load_manifest(scratch("absent.json")), std::runtime_error);
}
