#pragma once

// CSV files exchanged between pipeline stages. Every writer emits a header
// row; every reader accepts exactly what the matching writer produces.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pvseg/segment.hpp"
#include "pvseg/text_index.hpp"

namespace pvseg {

// kind,t_start,t_end,score
void write_segments_csv(const std::filesystem::path& path, std::span<const Segment> segments);
std::vector<Segment> read_segments_csv(const std::filesystem::path& path);

// kind,t,score
void write_boundaries_csv(const std::filesystem::path& path, MediaKind kind,
                          std::span<const Boundary> boundaries);
std::vector<Boundary> read_boundaries_csv(const std::filesystem::path& path);

// kind,t_start,t_end,value  (one row per bin)
void write_activity_csv(const std::filesystem::path& path, const ActivityGraph& graph);
ActivityGraph read_activity_csv(const std::filesystem::path& path);

// kind,phrase,t_start,t_end,score
void write_hits_csv(const std::filesystem::path& path, std::span<const PhraseHit> hits);
std::vector<PhraseHit> read_hits_csv(const std::filesystem::path& path);

// frame_index,t
void write_keyframes_csv(const std::filesystem::path& path, std::span<const KeyframeRef> keyframes);
std::vector<KeyframeRef> read_keyframes_csv(const std::filesystem::path& path);

// cluster_id,t_start,t_end  -> (t_start, cluster_id) pairs
std::vector<std::pair<double, int>> read_cluster_csv(const std::filesystem::path& path);

std::string csv_quote(std::string_view field);
/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> csv_split(std::string_view line);

}  // namespace pvseg
