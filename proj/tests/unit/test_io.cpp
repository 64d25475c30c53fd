#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "trajbound/error.hpp"
#include "trajbound/io.hpp"

using namespace trajbound;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "trajbound_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::uint64_t read_u64(const std::vector<std::uint8_t>& b, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
  return v;
}

template <class E>
void expect_rejected(const std::vector<std::uint8_t>& bytes, const std::string& fragment) {
  try {
    decode_log(bytes);
    FAIL("accepted corrupted log: " << fragment);
  } catch (const E& e) {
    CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    CHECK(e.exit_code() == ExitCode::format);
  }
}

}  // namespace

TEST_CASE("header layout is little-endian and fixed") {
  const auto bytes = encode_log(SeriesMatrix(2, 3), LogDtype::f64);
  CHECK(bytes.size() == 24 + 48);
  CHECK(std::memcmp(bytes.data(), "TRJL", 4) == 0);
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 1);
  CHECK(bytes[6] == 0);
  CHECK(bytes[7] == 0);
  CHECK(read_u64(bytes, 8) == 2);
  CHECK(read_u64(bytes, 16) == 3);

  SeriesMatrix one(1, 1, {1.0});
  const auto b = encode_log(one);
  // 1.0 = 0x3FF0000000000000, least significant byte first.
  CHECK(read_u64(b, 24) == 0x3FF0000000000000ull);
  const auto f = encode_log(one, LogDtype::f32);
  CHECK(f.size() == 28);
  CHECK(f[5] == 0);
  CHECK(f[24] == 0x00);
  CHECK(f[27] == 0x3F);
  CHECK(f[26] == 0x80);
}

TEST_CASE("binary round trip is bit exact") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = 1 + rng() % 20, c = 1 + rng() % 20;
    SeriesMatrix m(r, c);
    for (auto& v : m.data()) {
      do {
        const std::uint64_t bits = rng();
        std::memcpy(&v, &bits, sizeof v);
      } while (!std::isfinite(v));
    }
    const auto back = decode_log(encode_log(m));
    CHECK(std::memcmp(back.data().data(), m.data().data(), m.data().size() * sizeof(double)) == 0);
    CHECK(back.rows() == r);
  }
  const auto path = scratch("m.trjl");
  SeriesMatrix m(3, 2, {1e-300, -0.0, 3.5, 7.25, -1e300, 0.1});
  write_log(m, path);
  CHECK(fs::file_size(path) == 24 + 48);
  CHECK(read_log(path) == m);

  CHECK_THROWS_AS(write_log(m, path, LogDtype::f32), FormatError);
  m.data()[0] = 1e-30;
  m.data()[4] = -1e30;
  write_log(m, path, LogDtype::f32);
  const auto q = read_log(path);
  for (std::size_t i = 0; i < 6; ++i) {
    const float f = static_cast<float>(m.data()[i]);
    CHECK(q.data()[i] == static_cast<double>(f));
  }
}

TEST_CASE("corrupted logs are rejected with the offending field") {
  SeriesMatrix m(2, 2, {1, 2, 3, 4});
  const auto good = encode_log(m);
  expect_rejected<FormatError>({good.begin(), good.begin() + 10}, "header short");
  auto bad = good;
  bad[0] = 'X';
  expect_rejected<FormatError>(bad, "bad magic");
  bad = good;
  bad[4] = 2;
  expect_rejected<FormatError>(bad, "unsupported version");
  bad = good;
  bad[5] = 7;
  expect_rejected<FormatError>(bad, "bad dtype");
  bad = good;
  bad[6] = 1;
  expect_rejected<FormatError>(bad, "reserved");
  expect_rejected<FormatError>({good.begin(), good.end() - 3}, "payload short");
  bad = good;
  bad[8] = 3;
  expect_rejected<FormatError>(bad, "payload short");
  bad = good;
  for (int i = 8; i < 24; ++i) bad[static_cast<std::size_t>(i)] = 0xFF;
  expect_rejected<FormatError>(bad, "overflows");
  bad = good;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(bad.data() + 24, &nan, 8);
  expect_rejected<FormatError>(bad, "non-finite");
  bad = good;
  bad.push_back(0);
  CHECK_THROWS_AS(decode_log(bad), FormatError);
  CHECK_THROWS_AS(read_log(scratch("does_not_exist.trjl")), FormatError);
}

TEST_CASE("csv logs") {
  const auto path = scratch("m.csv");
  SeriesMatrix m(2, 3, {0.1, -2.5, 1e-17, 3, 4, 5});
  write_log(m, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "c0,c1,c2");
  CHECK(read_log(path) == m);
}

TEST_CASE("weight archives") {
  std::vector<WeightMatrix> layers{{0, SeriesMatrix(2, 3, {1, 2, 3, 4, 5, 6.5})}, {1, SeriesMatrix(1, 2, {-1, 0.25})}};
  for (const char* name : {"w.txt", "w.trjl"}) {
    const auto path = scratch(name);
    write_weights(layers, path);
    const auto back = read_weights(path);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(back[i].layer_index == i);
      CHECK(back[i].values == layers[i].values);
    }
  }
  std::ifstream in(scratch("w.txt"));
  std::string first;
  std::getline(in, first);
  CHECK(first == "layer 0 2 3");
}

TEST_CASE("key values and number formatting") {
  const KeyValues kv{{"a", "1"}, {"b.c", "hello world"}};
  const auto path = scratch("kv.txt");
  write_key_values(kv, path);
  CHECK(read_key_values(path) == kv);
  CHECK(format_key_values(kv) == "a=1\nb.c=hello world\n");
  REQUIRE(find_value(kv, "b.c") != nullptr);
  CHECK(*find_value(kv, "b.c") == "hello world");
  CHECK(find_value(kv, "z") == nullptr);
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 123456789.0, 0.0}) CHECK(parse_double(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
  CHECK_THROWS_AS(parse_double("abc"), FormatError);
  CHECK_THROWS_AS(parse_double("1.5x"), FormatError);
}
