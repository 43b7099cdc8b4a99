#include <gtest/gtest.h>

#include <fstream>

#include "expect_error.hpp"
#include "fixtures.hpp"
#include "pvseg/text_index.hpp"

namespace pvseg {
namespace {

using testing::Rng;

std::vector<TimedToken> tokens_of(const std::string& text) { return parse_transcript(text); }

std::vector<std::pair<std::string, std::size_t>> exact_oracle(const std::vector<TimedToken>& tokens,
                                                              const PhraseList& list) {
  std::vector<std::pair<std::string, std::size_t>> hits;
  for (const auto& phrase : list.phrases) {
    const auto words = phrase_words(phrase);
    for (std::size_t i = 0; i + words.size() <= tokens.size();) {
      bool same = true;
      for (std::size_t k = 0; k < words.size() && same; ++k) same = tokens[i + k].word == words[k];
      if (same) {
        hits.emplace_back(phrase, i);
        i += words.size();
      } else {
        ++i;
      }
    }
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return hits;
}

TEST(Transcript, SingleCsvRow) {
  const auto t = parse_transcript("design,1.0,1.4\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0], (TimedToken{"design", 1.0, 1.4}));
}

TEST(Transcript, HeaderPunctuationAndCase) {
  const auto t = parse_transcript("word,t_start,t_end\nDesign,0,0.5\n\"Constraints.\",0.5,1.1\n");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[1].word, "constraints");
}

TEST(Transcript, OutOfOrderRows) {
  EXPECT_PVSEG_ERROR(parse_transcript("a,2,3\nb,1,2\n"), Errc::non_monotonic_timestamps);
}

TEST(Transcript, MalformedRows) {
  EXPECT_PVSEG_ERROR(parse_transcript("a,1,2\nb,x,3\n"), Errc::malformed_line);
  EXPECT_PVSEG_ERROR(parse_transcript("a,1,2\nb,3\n"), Errc::malformed_line);
  EXPECT_PVSEG_ERROR(parse_transcript("a,2,1\n"), Errc::malformed_line);
}

TEST(Transcript, EmptyFile) {
  testing::TempDir dir;
  testing::write_text(dir / "t.txt", "");
  EXPECT_TRUE(load_transcript(dir / "t.txt").empty());
  EXPECT_TRUE(parse_transcript("\n  \n").empty());
}

TEST(Transcript, PlainTextSpreadsUniformly) {
  const auto fixed = parse_transcript("Hello, world! Design constraints.");
  ASSERT_EQ(fixed.size(), 4u);
  EXPECT_EQ(fixed[2].word, "design");
  EXPECT_DOUBLE_EQ(fixed[3].t_start, 3 * kDefaultSecondsPerWord);
  EXPECT_DOUBLE_EQ(fixed[3].t_end, 4 * kDefaultSecondsPerWord);

  const auto spread = parse_transcript("one two three four five", 10.0);
  ASSERT_EQ(spread.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(spread[i].t_start, 2.0 * i);
    EXPECT_DOUBLE_EQ(spread[i].t_end, 2.0 * (i + 1));
  }
}

TEST(Levenshtein, MatchesRecursiveOracle) {
  Rng rng(1);
  std::uniform_int_distribution<int> len(0, 9), ch(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::string a(len(rng), 'a'), b(len(rng), 'a');
    for (auto& c : a) c = static_cast<char>('a' + ch(rng));
    for (auto& c : b) c = static_cast<char>('a' + ch(rng));
    EXPECT_EQ(levenshtein(a, b), testing::edit_distance_oracle(a, b)) << a << " / " << b;
    EXPECT_EQ(levenshtein(a, b), levenshtein(b, a));
  }
}

TEST(Levenshtein, Similarity) {
  EXPECT_EQ(word_similarity("", ""), 1.0);
  EXPECT_EQ(word_similarity("abc", ""), 0.0);
  EXPECT_DOUBLE_EQ(word_similarity("desing", "design"), 1.0 - 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(word_similarity("constrants", "constraints"), 1.0 - 1.0 / 11.0);
}

TEST(NormalizeWord, StripsAndLowercases) {
  EXPECT_EQ(normalize_word("Hello,"), "hello");
  EXPECT_EQ(normalize_word("C++20!"), "c20");
  EXPECT_EQ(normalize_word("--"), "");
  EXPECT_EQ(phrase_words("  Design   Constraints "), (std::vector<std::string>{"design", "constraints"}));
}

TEST(FilterPhrases, ExactThemeHit) {
  const auto hits = filter_phrases(tokens_of("we review the design constraints today"), default_theme_phrases());
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].phrase, "design constraints");
  EXPECT_EQ(hits[0].kind, PhraseKind::theme);
  EXPECT_EQ(hits[0].score, 1.0);
  EXPECT_EQ(hits[0].first_token, 3u);
  EXPECT_EQ(hits[0].token_count, 2u);
  EXPECT_DOUBLE_EQ(hits[0].t_start, 3 * kDefaultSecondsPerWord);
  EXPECT_DOUBLE_EQ(hits[0].t_end, 5 * kDefaultSecondsPerWord);
}

TEST(FilterPhrases, MisspelledPhraseScoresByEditDistance) {
  const auto hits = filter_phrases(tokens_of("desing constrants"), default_theme_phrases());
  ASSERT_EQ(hits.size(), 1u);
  // lev(desing, design) = 2, lev(constrants, constraints) = 1.
  EXPECT_DOUBLE_EQ(hits[0].score, ((1.0 - 2.0 / 6.0) + (1.0 - 1.0 / 11.0)) / 2.0);
  EXPECT_NEAR(hits[0].score, 0.787878787878788, 1e-12);
}

TEST(FilterPhrases, AbsentPhrase) {
  EXPECT_TRUE(filter_phrases(tokens_of("nothing relevant is said here"), default_theme_phrases()).empty());
}

TEST(FilterPhrases, EveryWordMustReachHalf) {
  PhraseList list{PhraseKind::topic, {"alpha beta"}};
  // Mean 0.625 passes, but "bzzz" is below 0.5 against "beta".
  EXPECT_TRUE(filter_phrases(tokens_of("alpha bzzz"), list, 0.5).empty());
  EXPECT_EQ(filter_phrases(tokens_of("alpha betx"), list, 0.5).size(), 1u);
}

TEST(FilterPhrases, OverlapKeepsBestThenEarliest) {
  PhraseList list{PhraseKind::topic, {"aaaa aaaa"}};
  const auto best = filter_phrases(tokens_of("aaab aaaa aaaa"), list);
  ASSERT_EQ(best.size(), 1u);
  EXPECT_EQ(best[0].first_token, 1u);
  EXPECT_EQ(best[0].score, 1.0);

  const auto tie = filter_phrases(tokens_of("aaaa aaaa aaaa"), list);
  ASSERT_EQ(tie.size(), 1u);
  EXPECT_EQ(tie[0].first_token, 0u);
}

TEST(FilterPhrases, ThresholdOutOfRange) {
  const auto t = tokens_of("demo");
  EXPECT_PVSEG_ERROR(filter_phrases(t, default_theme_phrases(), 0.0), Errc::invalid_argument);
  EXPECT_PVSEG_ERROR(filter_phrases(t, default_theme_phrases(), 1.01), Errc::invalid_argument);
}

TEST(FilterPhrases, ScoresAreSelfConsistent) {
  Rng rng(2);
  const std::vector<std::string> vocab{"design", "desing", "constraints", "constrant", "demo", "deno", "task",
                                       "tasks", "the", "schedule", "shedule", "background", "backgrond"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    for (int i = 0; i < 40; ++i) text += vocab[pick(rng)] + " ";
    const auto tokens = tokens_of(text);
    for (const auto& hit : filter_phrases(tokens, default_theme_phrases(), 0.6)) {
      const auto words = phrase_words(hit.phrase);
      double total = 0;
      for (std::size_t k = 0; k < words.size(); ++k) {
        const auto& w = tokens[hit.first_token + k].word;
        const double sim = 1.0 - double(testing::edit_distance_oracle(w, words[k])) / std::max(w.size(), words[k].size());
        EXPECT_GE(sim, 0.5);
        total += sim;
      }
      EXPECT_NEAR(hit.score, total / words.size(), 1e-12);
      EXPECT_GE(hit.score, 0.6);
      EXPECT_EQ(hit.t_start, tokens[hit.first_token].t_start);
      EXPECT_EQ(hit.t_end, tokens[hit.first_token + hit.token_count - 1].t_end);
    }
  }
}

TEST(FilterPhrases, ThresholdOneEqualsExactMatching) {
  Rng rng(3);
  const std::vector<std::string> vocab{"design", "constraints", "demo", "tasks", "alternative", "solutions",
                                       "desing", "the", "a"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  PhraseList list = default_theme_phrases();
  list.phrases.push_back("demo demo");
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    for (int i = 0; i < 30; ++i) text += vocab[pick(rng)] + " ";
    const auto tokens = tokens_of(text);
    const auto hits = filter_phrases(tokens, list, 1.0);
    std::vector<std::pair<std::string, std::size_t>> got;
    for (const auto& h : hits) got.emplace_back(h.phrase, h.first_token);
    auto want = exact_oracle(tokens, list);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
  }
}

TEST(FilterPhrases, SortedByStartTime) {
  const auto hits = filter_phrases(tokens_of("demo background schedule demo tasks"), default_theme_phrases());
  ASSERT_EQ(hits.size(), 5u);
  for (std::size_t i = 1; i < hits.size(); ++i) EXPECT_LE(hits[i - 1].t_start, hits[i].t_start);
}

TEST(SlidePhrases, LinesBecomePhrases) {
  testing::TempDir dir;
  testing::write_text(dir / "s.txt", "Project Goals\n\n  Risk   Analysis \nproject goals\nTimeline\n");
  const auto list = load_slide_phrases(dir / "s.txt");
  EXPECT_EQ(list.kind, PhraseKind::topic);
  EXPECT_EQ(list.phrases, (std::vector<std::string>{"project goals", "risk analysis", "timeline"}));
}

TEST(SlidePhrases, BlankFileGivesNoTopicHits) {
  testing::TempDir dir;
  testing::write_text(dir / "s.txt", "\n   \n\n");
  const auto list = load_slide_phrases(dir / "s.txt");
  EXPECT_TRUE(list.phrases.empty());
  EXPECT_TRUE(filter_phrases(tokens_of("anything at all"), list).empty());
}

TEST(ThemePhrases, ShippedFileMatchesBuiltIn) {
  const auto file = load_phrase_list(std::filesystem::path(PVSEG_DATA_DIR) / "theme_phrases.txt", PhraseKind::theme);
  EXPECT_EQ(file.phrases, default_theme_phrases().phrases);
  EXPECT_EQ(file.phrases.size(), 9u);
}

}  // namespace
}  // namespace pvseg
