#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "expect_error.hpp"
#include "fixtures.hpp"
#include "pvseg/config.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/stage_io.hpp"

namespace pvseg {
namespace {

using testing::Rng;
using testing::TempDir;

TEST(NumFmt, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.5), "2.5");
  EXPECT_EQ(format_double(-3.0), "-3");
  Rng rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
}

TEST(NumFmt, ParseRejectsGarbage) {
  EXPECT_EQ(parse_double(" 1.5 "), 1.5);
  EXPECT_EQ(parse_double("+2"), 2.0);
  EXPECT_FALSE(parse_double(""));
  EXPECT_FALSE(parse_double("1.5x"));
  EXPECT_FALSE(parse_double("abc"));
  EXPECT_EQ(parse_int("42"), 42);
  EXPECT_FALSE(parse_int("4.2"));
  EXPECT_EQ(trim("  a b \n"), "a b");
}

TEST(Csv, QuoteAndSplitRoundTrip) {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quotes\"", "", "x"};
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_quote(fields[i]);
  EXPECT_EQ(csv_split(line), fields);
  EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
}

TEST(StageFiles, SegmentsRoundTrip) {
  TempDir dir;
  std::vector<Boundary> b{{1.25, 3.5}, {7.0, 0.125}};
  const auto segs = segments_from_boundaries(b, 10.0, MediaKind::video);
  write_segments_csv(dir / "s.csv", segs);
  EXPECT_EQ(testing::read_text(dir / "s.csv"), "kind,t_start,t_end,score\nvideo,0,1.25,0\nvideo,1.25,7,3.5\nvideo,7,10,0.125\n");
  EXPECT_EQ(read_segments_csv(dir / "s.csv"), segs);
}

TEST(StageFiles, BoundariesRoundTrip) {
  TempDir dir;
  const std::vector<Boundary> b{{10.125, 26.5}};
  write_boundaries_csv(dir / "b.csv", MediaKind::audio, b);
  EXPECT_EQ(testing::read_text(dir / "b.csv"), "kind,t,score\naudio,10.125,26.5\n");
  EXPECT_EQ(read_boundaries_csv(dir / "b.csv"), b);
}

TEST(StageFiles, ActivityRoundTrip) {
  TempDir dir;
  const ActivityGraph g{MediaKind::video, 1 / 29.97, {0.0, 0.3, 1.7, 2.0}};
  write_activity_csv(dir / "a.csv", g);
  const auto back = read_activity_csv(dir / "a.csv");
  EXPECT_EQ(back.kind, g.kind);
  EXPECT_EQ(back.values, g.values);
  EXPECT_NEAR(back.bin_duration_s, g.bin_duration_s, 1e-15);
}

TEST(StageFiles, HitsRoundTrip) {
  TempDir dir;
  const std::vector<PhraseHit> hits{{"design constraints", PhraseKind::theme, 1.0, 2.0, 0.75, 0, 0},
                                    {"cost, \"risk\"", PhraseKind::topic, 3.0, 4.5, 1.0, 0, 0}};
  write_hits_csv(dir / "h.csv", hits);
  const auto back = read_hits_csv(dir / "h.csv");
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].phrase, hits[i].phrase);
    EXPECT_EQ(back[i].kind, hits[i].kind);
    EXPECT_EQ(back[i].t_start, hits[i].t_start);
    EXPECT_EQ(back[i].t_end, hits[i].t_end);
    EXPECT_EQ(back[i].score, hits[i].score);
  }
}

TEST(StageFiles, KeyframesAndClusters) {
  TempDir dir;
  const std::vector<KeyframeRef> k{{0, 0.0}, {250, 10.0}};
  write_keyframes_csv(dir / "k.csv", k);
  EXPECT_EQ(testing::read_text(dir / "k.csv"), "frame_index,t\n0,0\n250,10\n");
  EXPECT_EQ(read_keyframes_csv(dir / "k.csv"), k);
  testing::write_text(dir / "c.csv", "cluster_id,t_start,t_end\n0,0,5\n1,5,9\n0,9,12\n");
  EXPECT_EQ(read_cluster_csv(dir / "c.csv"), (std::vector<std::pair<double, int>>{{0, 0}, {5, 1}, {9, 0}}));
}

TEST(StageFiles, MalformedRows) {
  TempDir dir;
  testing::write_text(dir / "s.csv", "kind,t_start,t_end,score\naudio,0,1\n");
  EXPECT_PVSEG_ERROR(read_segments_csv(dir / "s.csv"), Errc::malformed_line);
  testing::write_text(dir / "s.csv", "kind,t_start,t_end,score\nsmell,0,1,0\n");
  EXPECT_PVSEG_ERROR(read_segments_csv(dir / "s.csv"), Errc::malformed_line);
  EXPECT_PVSEG_ERROR(read_segments_csv(dir / "missing.csv"), Errc::io_failure);
}

TEST(Config, ResolvedTextListsEveryKeyInOrder) {
  const auto text = resolved_config_text(RunConfig{});
  std::vector<std::string> keys;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl - pos);
    keys.push_back(line.substr(0, line.find('=')));
    pos = nl + 1;
  }
  EXPECT_EQ(keys, config_keys());
  EXPECT_NE(text.find("set_length=auto\n"), std::string::npos);
  EXPECT_NE(text.find("frames_per_pixel=28\n"), std::string::npos);
}

TEST(Config, ResolvedTextReappliesToSameConfig) {
  RunConfig cfg;
  apply_setting(cfg, "audio", "/tmp/a.wav");
  apply_setting(cfg, "bic_lambda", "1.25");
  apply_setting(cfg, "set_length", "300");
  apply_setting(cfg, "color_space", "gray");
  apply_setting(cfg, "hist_bins", "64");
  apply_setting(cfg, "transcript_duration_s", "120");
  apply_setting(cfg, "dump_features", "yes");
  const auto text = resolved_config_text(cfg);
  RunConfig again;
  apply_config_text(again, text);
  EXPECT_EQ(resolved_config_text(again), text);
  EXPECT_EQ(again.bic.lambda, 1.25);
  EXPECT_EQ(again.framing.set_length, 300u);
  EXPECT_EQ(again.color_space, ColorSpace::gray);
  EXPECT_TRUE(again.dump_features);
  EXPECT_EQ(again.transcript_duration_s, 120.0);
}

TEST(Config, FileSyntax) {
  RunConfig cfg;
  apply_config_text(cfg, "# comment\n\n bic_lambda = 2 # trailing\nframes_per_pixel=14\n");
  EXPECT_EQ(cfg.bic.lambda, 2.0);
  EXPECT_EQ(cfg.timeline.frames_per_pixel, 14.0);
  EXPECT_PVSEG_ERROR(apply_config_text(cfg, "no equals sign\n"), Errc::malformed_line);
  EXPECT_PVSEG_ERROR(apply_config_text(cfg, "nonsense = 1\n"), Errc::invalid_argument);
  EXPECT_PVSEG_ERROR(apply_setting(cfg, "bic_lambda", "fast"), Errc::invalid_argument);
  EXPECT_PVSEG_ERROR(apply_setting(cfg, "threads", "-2"), Errc::invalid_argument);
}

}  // namespace
}  // namespace pvseg
