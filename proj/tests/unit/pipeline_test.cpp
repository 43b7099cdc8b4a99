#include <gtest/gtest.h>

#include <filesystem>
#include <memory>

#include "expect_error.hpp"
#include "fixtures.hpp"
#include "pvseg/pipeline.hpp"
#include "pvseg/stage_io.hpp"

namespace pvseg {
namespace {

namespace fs = std::filesystem;
using testing::Rng;
using testing::TempDir;

// Two voices, 8 s each; 16 s of video at 25 fps cut at 8 s.
class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    inputs_ = std::make_unique<TempDir>("pvseg-pipe-in");
    Rng rng(5);
    write_wav(*inputs_ / "talk.wav",
              testing::concat({testing::voiced_clip(rng, 16000, 110, 8.0), testing::voiced_clip(rng, 16000, 260, 8.0)}));
    testing::write_frame_dir(*inputs_ / "frames", testing::cut_sequence(rng, 25.0, 16.0, 8.0));
    testing::write_text(*inputs_ / "words.csv",
                        "word,t_start,t_end\nwe,1,1.4\ncover,1.4,1.8\ndesign,1.8,2.2\nconstraints,2.2,2.8\n"
                        "then,9,9.3\nthe,9.3,9.5\ndemo,9.5,10\nand,10,10.2\nbudget,10.2,10.8\n");
    testing::write_text(*inputs_ / "slides.txt", "Budget\n");
  }
  static void TearDownTestSuite() { inputs_.reset(); }

  RunConfig config(const fs::path& out) const {
    RunConfig cfg;
    cfg.audio = *inputs_ / "talk.wav";
    cfg.frames = *inputs_ / "frames";
    cfg.transcript = *inputs_ / "words.csv";
    cfg.slides = *inputs_ / "slides.txt";
    cfg.output_dir = out;
    cfg.timeline.frames_per_pixel = 1;
    return cfg;
  }

  static std::unique_ptr<TempDir> inputs_;
};

std::unique_ptr<TempDir> PipelineTest::inputs_;

TEST_F(PipelineTest, SegmentAudioFindsTheVoiceChange) {
  TempDir out;
  RunConfig cfg = config(out.path());
  cfg.dump_features = true;
  StageLog log;
  run_segment_audio(cfg, log);
  const auto b = read_boundaries_csv(out / outputs::kAudioBoundaries);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].t, 8.0, 0.5);
  EXPECT_EQ(read_segments_csv(out / outputs::kAudioSegments).size(), 2u);
  EXPECT_TRUE(fs::exists(out / outputs::kFeatures));
  EXPECT_TRUE(fs::exists(out / outputs::kConfigEcho));
  EXPECT_EQ(log.size(), 1u);
}

TEST_F(PipelineTest, SegmentVideoWritesKeyframes) {
  TempDir out;
  StageLog log;
  run_segment_video(config(out.path()), log);
  const auto b = read_boundaries_csv(out / outputs::kVideoBoundaries);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].t, 8.0, 2 / 25.0);
  const auto kf = read_keyframes_csv(out / outputs::kKeyframes);
  ASSERT_EQ(kf.size(), 2u);
  for (const auto& k : kf) EXPECT_TRUE(fs::exists(out / "keyframes" / keyframe_file_name(k.frame_index)));
  EXPECT_TRUE(fs::exists(out / outputs::kHistogramCache));
}

TEST_F(PipelineTest, VideoFromCacheMatchesVideoFromFrames) {
  TempDir a, b;
  StageLog log;
  run_segment_video(config(a.path()), log);
  RunConfig cached = config(b.path());
  cached.frames.reset();
  cached.histograms = a / outputs::kHistogramCache;
  run_segment_video(cached, log);
  EXPECT_EQ(testing::read_text(a / outputs::kVideoBoundaries), testing::read_text(b / outputs::kVideoBoundaries));
  EXPECT_EQ(testing::read_text(a / outputs::kVideoActivity), testing::read_text(b / outputs::kVideoActivity));
}

TEST_F(PipelineTest, IndexTextFindsThemesAndTopics) {
  TempDir out;
  StageLog log;
  run_index_text(config(out.path()), log);
  const auto hits = read_hits_csv(out / outputs::kPhraseHits);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].phrase, "design constraints");
  EXPECT_EQ(hits[0].t_start, 1.8);
  EXPECT_EQ(hits[0].t_end, 2.8);
  EXPECT_EQ(hits[1].phrase, "demo");
  EXPECT_EQ(hits[2].phrase, "budget");
  EXPECT_EQ(hits[2].kind, PhraseKind::topic);
}

TEST_F(PipelineTest, MissingInputsAreReported) {
  TempDir out;
  StageLog log;
  RunConfig cfg = config(out.path());
  EXPECT_PVSEG_ERROR(run_cluster(cfg, log), Errc::missing_dependency);
  EXPECT_PVSEG_ERROR(run_build_timeline(cfg, log), Errc::missing_dependency);
  EXPECT_PVSEG_ERROR(run_render(cfg, log), Errc::missing_dependency);

  RunConfig none;
  none.output_dir = out.path();
  EXPECT_PVSEG_ERROR(run_analyze(none, log), Errc::invalid_argument);
  EXPECT_PVSEG_ERROR(run_segment_audio(none, log), Errc::invalid_argument);

  cfg.audio = *inputs_ / "absent.wav";
  EXPECT_PVSEG_ERROR(run_segment_audio(cfg, log), Errc::io_failure);
}

TEST_F(PipelineTest, AnalyzeFillsEveryRow) {
  TempDir out;
  StageLog log;
  run_analyze(config(out.path()), log);
  const auto doc = import_doc(out / outputs::kTimeline);
  EXPECT_EQ(doc.video_id, "talk");
  EXPECT_EQ(doc.video.segments.size(), 2u);
  EXPECT_EQ(doc.audio.segments.size(), 2u);
  EXPECT_TRUE(doc.video.activity);
  EXPECT_TRUE(doc.audio.activity);
  EXPECT_EQ(doc.theme_phrases.size(), 2u);
  EXPECT_EQ(doc.topic_phrases.size(), 1u);
  EXPECT_EQ(doc.thumbnails.size(), 2u);
  EXPECT_EQ(doc.fps, 25.0);
  for (const auto& s : doc.audio.segments) EXPECT_TRUE(s.cluster_id);
  EXPECT_EQ(testing::read_text(out / outputs::kSvg), render_svg(doc));
}

TEST_F(PipelineTest, AudioOnlyLeavesVideoRowsEmpty) {
  TempDir out;
  RunConfig cfg = config(out.path());
  cfg.frames.reset();
  StageLog log;
  run_analyze(cfg, log);
  const auto doc = import_doc(out / outputs::kTimeline);
  EXPECT_TRUE(doc.video.empty());
  EXPECT_TRUE(doc.thumbnails.empty());
  EXPECT_EQ(doc.audio.segments.size(), 2u);
  EXPECT_EQ(doc.fps, cfg.timeline_fps);
  EXPECT_FALSE(doc.theme_phrases.empty());
}

TEST_F(PipelineTest, AnalyzeIsDeterministicAcrossRunsAndThreads) {
  TempDir a, b;
  StageLog log;
  run_analyze(config(a.path()), log);
  RunConfig four = config(b.path());
  four.threads = 4;
  run_analyze(four, log);
  for (const char* name : {outputs::kAudioBoundaries, outputs::kAudioSegments, outputs::kAudioActivity,
                           outputs::kVideoBoundaries, outputs::kVideoSegments, outputs::kVideoActivity,
                           outputs::kKeyframes, outputs::kPhraseHits, outputs::kClusters, outputs::kTimeline,
                           outputs::kSvg})
    EXPECT_EQ(testing::read_text(a / name), testing::read_text(b / name)) << name;

  const auto first = testing::read_text(a / outputs::kTimeline);
  run_analyze(config(a.path()), log);
  EXPECT_EQ(testing::read_text(a / outputs::kTimeline), first);
}

TEST_F(PipelineTest, ConfigEchoMatchesResolvedText) {
  TempDir out;
  RunConfig cfg = config(out.path());
  StageLog log;
  run_index_text(cfg, log);
  EXPECT_EQ(testing::read_text(out / outputs::kConfigEcho), resolved_config_text(cfg));
}

}  // namespace
}  // namespace pvseg
