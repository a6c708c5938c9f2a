#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sqpt/errors.hpp"
#include "sqpt/json_io.hpp"

namespace sqpt {
namespace {

using nlohmann::json;

TEST(JsonIo, ChannelRoundTrip) {
  const auto ch = random_cptp(3, 2, 3);
  const auto back = channel_from_json(channel_to_json(ch));
  ASSERT_EQ(back.dim(), 3u);
  ASSERT_EQ(back.kraus().size(), 2u);
  for (std::size_t m = 0; m < 2; ++m) EXPECT_EQ(max_abs_diff(back.kraus()[m], ch.kraus()[m]), 0.0);
}

TEST(JsonIo, ChannelLiteral) {
  const auto doc = json::parse(R"({"dim": 2, "kraus": [[[[0,0],[1,0]],[[1,0],[0,0]]]]})");
  const auto ch = channel_from_json(doc);
  EXPECT_TRUE(ch.is_trace_preserving());
  EXPECT_EQ(ch.kraus()[0](0, 1), Complex(1.0));
}

TEST(JsonIo, ChannelRejectsBadShapes) {
  // 2x3 operator
  EXPECT_THROW(channel_from_json(json::parse(R"({"dim": 2, "kraus": [[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]]]]})")),
               ParseError);
  // 3 rows for dim 2
  EXPECT_THROW(
      channel_from_json(json::parse(R"({"dim": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]],[[0,0],[0,0]]]]})")),
      ParseError);
  EXPECT_THROW(channel_from_json(json::parse(R"({"dim": 2, "kraus": []})")), ParseError);
  EXPECT_THROW(channel_from_json(json::parse(R"({"kraus": []})")), ParseError);
  EXPECT_THROW(channel_from_json(json::parse(R"({"dim": 2, "kraus": [[[[1],[0,0]],[[0,0],[1,0]]]]})")),
               ParseError);
}

TEST(JsonIo, LoadChannelFile) {
  const auto path = std::filesystem::temp_directory_path() / "sqpt_json_io_channel.json";
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  EXPECT_THROW(load_channel(path), ParseError);
  {
    std::ofstream f(path);
    f << channel_to_json(preset_channel("identity", {}, 2)).dump();
  }
  EXPECT_EQ(load_channel(path).dim(), 2u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_channel(path), ParseError);
}

TEST(JsonIo, ChiRoundTripKeepsBasis) {
  ChiMatrix chi = chi_oracle(random_cptp(4, 2, 2));
  auto back = chi_from_json(chi_to_json(chi));
  EXPECT_EQ(back.basis, ChiBasis::choi);
  EXPECT_EQ(max_abs_diff(back.entries, chi.entries), 0.0);
  chi.basis = ChiBasis::pauli;
  const auto doc = chi_to_json(chi);
  EXPECT_EQ(doc.at("convention"), kPauliConvention);
  EXPECT_EQ(chi_from_json(doc).basis, ChiBasis::pauli);
}

TEST(JsonIo, ChiRejectsBadDocuments) {
  EXPECT_THROW(chi_from_json(json::parse(R"({"dim": 2, "entries": [[1,0]]})")), ParseError);
  EXPECT_THROW(chi_from_json(json::parse(R"({"dim": 1, "convention": "bogus", "entries": [[1,0]]})")),
               ParseError);
}

} // namespace
} // namespace sqpt
