#include <gtest/gtest.h>

#include <filesystem>

#include "qcc/io.hpp"
#include "support.hpp"

using namespace qcc;
using namespace qcc::testing;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qcc_test_" + name);
}

}  // namespace

TEST(MatrixJson, EntryFormat) {
  CMatrix m(1, 2);
  m(0, 0) = cplx(1.5, -2.0);
  m(0, 1) = cplx(0.0, 0.25);
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j.dump(), "[[[1.5,-2.0],[0.0,0.25]]]");
  EXPECT_EQ(matrix_from_json(j), m);
}

TEST(MatrixJson, RejectsMalformed) {
  EXPECT_THROW(matrix_from_json(Json::parse("[[1,2]]")), InputError);
  EXPECT_THROW(matrix_from_json(Json::parse("[[[1,0]],[[1,0],[0,0]]]")), InputError);
  EXPECT_THROW(matrix_from_json(Json::parse("{}")), InputError);
}

TEST(ChannelJson, BitExactRoundTrip) {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto ch = zoo::random_cptp(rng(), draw_int(rng, 1, 3), draw_int(rng, 1, 3));
    const auto path = temp_file("channel.json");
    write_json_file(path, channel_to_json(ch));
    const auto back = load_channel(path);
    EXPECT_EQ(back.name, ch.name);
    ASSERT_EQ(back.kraus.size(), ch.kraus.size());
    for (std::size_t k = 0; k < ch.kraus.size(); ++k) EXPECT_EQ(back.kraus[k], ch.kraus[k]);
    std::filesystem::remove(path);
  }
}

TEST(ChannelJson, PovmFileLoadsAsMeasurement) {
  const auto qc = zoo::random_povm(3, 2, 3);
  const auto path = temp_file("povm.json");
  write_json_file(path, qc_to_json(qc));
  const auto ch = load_channel(path);
  EXPECT_EQ(ch.dim_out, 3);
  const auto back = qc_from_json(read_json_file(path));
  for (int x = 0; x < 3; ++x) EXPECT_EQ(back.povm[x], qc.povm[x]);
  std::filesystem::remove(path);
}

TEST(ChannelJson, RejectsInvalidChannels) {
  Json j = channel_to_json(zoo::identity(2));
  j["kraus"].push_back(j["kraus"][0]);
  EXPECT_THROW(channel_from_json(j), InputError);
  Json missing = channel_to_json(zoo::identity(2));
  missing.erase("dim_out");
  EXPECT_THROW(channel_from_json(missing), InputError);
  EXPECT_THROW(load_channel(temp_file("does_not_exist.json")), InputError);
}

TEST(StateFile, Validation) {
  const auto path = temp_file("state.json");
  write_json_file(path, matrix_to_json(identity(2) / 2.0));
  EXPECT_EQ(load_state(path), CMatrix(identity(2) / 2.0));
  write_json_file(path, matrix_to_json(identity(2)));
  EXPECT_THROW(load_state(path), InputError);
  std::filesystem::remove(path);
}
