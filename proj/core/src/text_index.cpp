#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "pvseg/error.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/text_index.hpp"

namespace pvseg {
namespace {

std::string slurp_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(start, end - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

struct CsvRow {
  std::string_view word;
  std::optional<double> t_start;
  std::optional<double> t_end;
  bool three_fields = false;
};

CsvRow split_row(std::string_view line) {
  CsvRow row;
  const auto c1 = line.find(',');
  if (c1 == std::string_view::npos) return row;
  const auto c2 = line.find(',', c1 + 1);
  if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) return row;
  row.three_fields = true;
  row.word = trim(line.substr(0, c1));
  row.t_start = parse_double(line.substr(c1 + 1, c2 - c1 - 1));
  row.t_end = parse_double(line.substr(c2 + 1));
  return row;
}

bool is_header(const CsvRow& row) { return row.three_fields && row.word == "word" && !row.t_start; }

}  // namespace

std::string_view to_string(PhraseKind kind) noexcept {
  return kind == PhraseKind::theme ? "theme" : "topic";
}

std::optional<PhraseKind> parse_phrase_kind(std::string_view text) noexcept {
  if (text == "theme") return PhraseKind::theme;
  if (text == "topic") return PhraseKind::topic;
  return std::nullopt;
}

std::string normalize_word(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<std::string> phrase_words(std::string_view phrase) {
  std::vector<std::string> words;
  std::istringstream in{std::string(phrase)};
  std::string raw;
  while (in >> raw) {
    auto w = normalize_word(raw);
    if (!w.empty()) words.push_back(std::move(w));
  }
  return words;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[b.size()];
}

double word_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

std::vector<TimedToken> parse_transcript(std::string_view text, std::optional<double> plain_text_duration_s) {
  const auto lines = split_lines(text);
  const auto first = std::find_if(lines.begin(), lines.end(),
                                  [](std::string_view l) { return !trim(l).empty(); });
  if (first == lines.end()) return {};

  const CsvRow probe = split_row(*first);
  const bool csv = probe.three_fields && (is_header(probe) || (probe.t_start && probe.t_end));

  std::vector<TimedToken> tokens;
  if (csv) {
    double last_start = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto line = trim(lines[i]);
      if (line.empty()) continue;
      const CsvRow row = split_row(line);
      if (is_header(row) && tokens.empty()) continue;
      const std::string where = "transcript line " + std::to_string(i + 1);
      if (!row.three_fields || !row.t_start || !row.t_end)
        throw Error(Errc::malformed_line, where + ": expected word,t_start,t_end");
      if (!(*row.t_end > *row.t_start) || *row.t_start < 0)
        throw Error(Errc::malformed_line, where + ": needs 0 <= t_start < t_end");
      if (*row.t_start < last_start)
        throw Error(Errc::non_monotonic_timestamps, where + ": t_start goes backwards");
      last_start = *row.t_start;
      auto word = normalize_word(row.word);
      if (word.empty()) continue;
      tokens.push_back({std::move(word), *row.t_start, *row.t_end});
    }
    return tokens;
  }

  std::vector<std::string> words = phrase_words(text);
  if (words.empty()) return tokens;
  double per_word = kDefaultSecondsPerWord;
  if (plain_text_duration_s) {
    if (!(*plain_text_duration_s > 0))
      throw Error(Errc::invalid_argument, "plain-text transcript duration must be positive");
    per_word = *plain_text_duration_s / static_cast<double>(words.size());
  }
  tokens.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i)
    tokens.push_back({std::move(words[i]), per_word * static_cast<double>(i),
                      per_word * static_cast<double>(i + 1)});
  return tokens;
}

std::vector<TimedToken> load_transcript(const std::filesystem::path& path,
                                        std::optional<double> plain_text_duration_s) {
  return parse_transcript(slurp_text(path), plain_text_duration_s);
}

PhraseList parse_phrase_lines(std::string_view text, PhraseKind kind) {
  PhraseList list;
  list.kind = kind;
  std::unordered_set<std::string> seen;
  for (auto line : split_lines(text)) {
    std::string phrase;
    std::istringstream in{std::string(line)};
    std::string word;
    while (in >> word) {
      if (!phrase.empty()) phrase.push_back(' ');
      phrase += word;
    }
    std::transform(phrase.begin(), phrase.end(), phrase.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (phrase.empty() || !seen.insert(phrase).second) continue;
    list.phrases.push_back(std::move(phrase));
  }
  return list;
}

PhraseList load_phrase_list(const std::filesystem::path& path, PhraseKind kind) {
  return parse_phrase_lines(slurp_text(path), kind);
}

PhraseList load_slide_phrases(const std::filesystem::path& path) {
  return load_phrase_list(path, PhraseKind::topic);
}

PhraseList default_theme_phrases() {
  return parse_phrase_lines(
      "background\nschedule\ndesign constraints\nlimitations\ntasks\nalternative solutions\n"
      "implementation\ndemo\nfunctional requirements\n",
      PhraseKind::theme);
}

std::vector<PhraseHit> filter_phrases(std::span<const TimedToken> tokens, const PhraseList& list,
                                      double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw Error(Errc::invalid_argument, "match threshold must be in (0, 1]");

  std::vector<PhraseHit> out;
  for (const auto& phrase : list.phrases) {
    const auto words = phrase_words(phrase);
    if (words.empty() || words.size() > tokens.size()) continue;

    std::vector<PhraseHit> candidates;
    for (std::size_t start = 0; start + words.size() <= tokens.size(); ++start) {
      double total = 0.0;
      bool ok = true;
      for (std::size_t k = 0; k < words.size() && ok; ++k) {
        const double sim = word_similarity(tokens[start + k].word, words[k]);
        ok = sim >= kMinWordSimilarity;
        total += sim;
      }
      if (!ok) continue;
      const double score = total / static_cast<double>(words.size());
      if (score < threshold) continue;
      candidates.push_back({phrase, list.kind, tokens[start].t_start,
                            tokens[start + words.size() - 1].t_end, score, start, words.size()});
    }

    // Best-first selection among overlapping windows of this phrase.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const PhraseHit& a, const PhraseHit& b) { return a.score > b.score; });
    std::vector<PhraseHit> kept;
    for (auto& c : candidates) {
      const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const PhraseHit& k) {
        return c.first_token < k.first_token + k.token_count && k.first_token < c.first_token + c.token_count;
      });
      if (!overlaps) kept.push_back(std::move(c));
    }
    std::sort(kept.begin(), kept.end(),
              [](const PhraseHit& a, const PhraseHit& b) { return a.first_token < b.first_token; });
    out.insert(out.end(), std::make_move_iterator(kept.begin()), std::make_move_iterator(kept.end()));
  }

  // Stable so equal start times keep list order.
  std::stable_sort(out.begin(), out.end(),
                   [](const PhraseHit& a, const PhraseHit& b) { return a.t_start < b.t_start; });
  return out;
}

}  // namespace pvseg
