#include <fstream>
#include <functional>

#include "pvseg/error.hpp"
#include "pvseg/numfmt.hpp"
#include "pvseg/stage_io.hpp"

namespace pvseg {
namespace fs = std::filesystem;
namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  return out;
}

// Calls `row` with the fields of every data line after the header.
void for_each_row(const fs::path& path, std::size_t columns,
                  const std::function<void(const std::vector<std::string>&, const std::string&)>& row) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 || trim(line).empty()) continue;
    auto fields = csv_split(line);
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    if (fields.size() != columns)
      throw Error(Errc::malformed_line, where + " expects " + std::to_string(columns) + " columns");
    row(fields, where);
  }
}

double num(const std::string& s, const std::string& where) {
  const auto v = parse_double(s);
  if (!v) throw Error(Errc::malformed_line, where + ": bad number '" + s + "'");
  return *v;
}

MediaKind kind_of(const std::string& s, const std::string& where) {
  const auto k = parse_media_kind(s);
  if (!k) throw Error(Errc::malformed_line, where + ": bad kind '" + s + "'");
  return *k;
}

}  // namespace

std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  return fields;
}

void write_segments_csv(const fs::path& path, std::span<const Segment> segments) {
  auto out = open_out(path);
  out << "kind,t_start,t_end,score\n";
  for (const auto& s : segments)
    out << to_string(s.kind) << ',' << format_double(s.t_start) << ',' << format_double(s.t_end) << ','
        << format_double(s.score) << '\n';
}

std::vector<Segment> read_segments_csv(const fs::path& path) {
  std::vector<Segment> out;
  for_each_row(path, 4, [&](const auto& f, const auto& where) {
    out.push_back(Segment{kind_of(f[0], where), num(f[1], where), num(f[2], where), num(f[3], where),
                          std::nullopt, std::nullopt});
  });
  return out;
}

void write_boundaries_csv(const fs::path& path, MediaKind kind, std::span<const Boundary> boundaries) {
  auto out = open_out(path);
  out << "kind,t,score\n";
  for (const auto& b : boundaries)
    out << to_string(kind) << ',' << format_double(b.t) << ',' << format_double(b.score) << '\n';
}

std::vector<Boundary> read_boundaries_csv(const fs::path& path) {
  std::vector<Boundary> out;
  for_each_row(path, 3, [&](const auto& f, const auto& where) {
    kind_of(f[0], where);
    out.push_back({num(f[1], where), num(f[2], where)});
  });
  return out;
}

void write_activity_csv(const fs::path& path, const ActivityGraph& graph) {
  auto out = open_out(path);
  out << "kind,t_start,t_end,value\n";
  for (std::size_t i = 0; i < graph.values.size(); ++i)
    out << to_string(graph.kind) << ',' << format_double(static_cast<double>(i) * graph.bin_duration_s) << ','
        << format_double(static_cast<double>(i + 1) * graph.bin_duration_s) << ','
        << format_double(graph.values[i]) << '\n';
}

ActivityGraph read_activity_csv(const fs::path& path) {
  ActivityGraph g;
  bool first = true;
  for_each_row(path, 4, [&](const auto& f, const auto& where) {
    const MediaKind kind = kind_of(f[0], where);
    if (first) {
      g.kind = kind;
      g.bin_duration_s = num(f[2], where) - num(f[1], where);
      first = false;
    }
    g.values.push_back(num(f[3], where));
  });
  return g;
}

void write_hits_csv(const fs::path& path, std::span<const PhraseHit> hits) {
  auto out = open_out(path);
  out << "kind,phrase,t_start,t_end,score\n";
  for (const auto& h : hits)
    out << to_string(h.kind) << ',' << csv_quote(h.phrase) << ',' << format_double(h.t_start) << ','
        << format_double(h.t_end) << ',' << format_double(h.score) << '\n';
}

std::vector<PhraseHit> read_hits_csv(const fs::path& path) {
  std::vector<PhraseHit> out;
  for_each_row(path, 5, [&](const auto& f, const auto& where) {
    const auto kind = parse_phrase_kind(f[0]);
    if (!kind) throw Error(Errc::malformed_line, where + ": bad phrase kind '" + f[0] + "'");
    PhraseHit h;
    h.kind = *kind;
    h.phrase = f[1];
    h.t_start = num(f[2], where);
    h.t_end = num(f[3], where);
    h.score = num(f[4], where);
    out.push_back(std::move(h));
  });
  return out;
}

void write_keyframes_csv(const fs::path& path, std::span<const KeyframeRef> keyframes) {
  auto out = open_out(path);
  out << "frame_index,t\n";
  for (const auto& k : keyframes) out << k.frame_index << ',' << format_double(k.t) << '\n';
}

std::vector<KeyframeRef> read_keyframes_csv(const fs::path& path) {
  std::vector<KeyframeRef> out;
  for_each_row(path, 2, [&](const auto& f, const auto& where) {
    const auto idx = parse_int(f[0]);
    if (!idx || *idx < 0) throw Error(Errc::malformed_line, where + ": bad frame index");
    out.push_back({static_cast<std::size_t>(*idx), num(f[1], where)});
  });
  return out;
}

std::vector<std::pair<double, int>> read_cluster_csv(const fs::path& path) {
  std::vector<std::pair<double, int>> out;
  for_each_row(path, 3, [&](const auto& f, const auto& where) {
    const auto id = parse_int(f[0]);
    if (!id) throw Error(Errc::malformed_line, where + ": bad cluster id");
    out.emplace_back(num(f[1], where), static_cast<int>(*id));
  });
  return out;
}

}  // namespace pvseg
