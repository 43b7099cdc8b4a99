#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pvseg {

struct TimedToken {
  std::string word;
  double t_start = 0.0;
  double t_end = 0.0;

  bool operator==(const TimedToken&) const = default;
};

enum class PhraseKind { theme, topic };

std::string_view to_string(PhraseKind kind) noexcept;
std::optional<PhraseKind> parse_phrase_kind(std::string_view text) noexcept;

struct PhraseList {
  PhraseKind kind = PhraseKind::theme;
  std::vector<std::string> phrases;
};

struct PhraseHit {
  std::string phrase;
  PhraseKind kind = PhraseKind::theme;
  double t_start = 0.0;
  double t_end = 0.0;
  double score = 0.0;
  std::size_t first_token = 0;
  std::size_t token_count = 0;

  bool operator==(const PhraseHit&) const = default;
};

/// Lowercase and drop everything that is not a letter or digit.
std::string normalize_word(std::string_view raw);
std::vector<std::string> phrase_words(std::string_view phrase);

std::size_t levenshtein(std::string_view a, std::string_view b);
/// 1 - levenshtein(a, b) / max(|a|, |b|); two empty words are identical.
double word_similarity(std::string_view a, std::string_view b);

/// Seconds given to each word of an untimed transcript when no duration is known.
inline constexpr double kDefaultSecondsPerWord = 0.4;

/// Reads `word,t_start,t_end` rows (an optional header row is skipped). A file
/// whose first content line is not such a row is treated as plain text and
/// its words are spread uniformly over `plain_text_duration_s`, or
/// kDefaultSecondsPerWord per word when that is not given.
///
/// Throws Error{malformed_line} for bad CSV rows and
/// Error{non_monotonic_timestamps} when t_start decreases.
std::vector<TimedToken> load_transcript(const std::filesystem::path& path,
                                        std::optional<double> plain_text_duration_s = std::nullopt);
std::vector<TimedToken> parse_transcript(std::string_view text,
                                         std::optional<double> plain_text_duration_s = std::nullopt);

/// One phrase per non-blank line, lowercased, whitespace collapsed, duplicates
/// dropped (first occurrence kept).
PhraseList parse_phrase_lines(std::string_view text, PhraseKind kind);
PhraseList load_phrase_list(const std::filesystem::path& path, PhraseKind kind);
PhraseList load_slide_phrases(const std::filesystem::path& path);

/// The built-in course theme phrases, also shipped as data/theme_phrases.txt.
PhraseList default_theme_phrases();

inline constexpr double kDefaultMatchThreshold = 0.75;
inline constexpr double kMinWordSimilarity = 0.5;

/// Fuzzy phrase spotting. A window of len(phrase) consecutive tokens is a hit
/// when every word similarity is >= 0.5 and their mean is >= threshold.
/// Overlapping hits of the same phrase keep the best score (earliest on ties).
/// Result is ordered by (t_start, list position).
std::vector<PhraseHit> filter_phrases(std::span<const TimedToken> tokens, const PhraseList& list,
                                      double threshold = kDefaultMatchThreshold);

}  // namespace pvseg
