#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace pvseg::cli {

struct VideoEntry {
  std::string id;
  std::string timeline;  // path of timeline.json relative to the served root

  bool operator==(const VideoEntry&) const = default;
};

/// The served root itself and each immediate subdirectory holding a
/// timeline.json, sorted by relative path.
std::vector<VideoEntry> list_videos(const std::filesystem::path& root);

/// `{"videos":[{"id":..,"timeline":..},..]}`
std::string video_index_json(const std::filesystem::path& root);

/// Read-only routes: GET /api/videos plus static files under `root`.
void configure_server(httplib::Server& server, const std::filesystem::path& root);

}  // namespace pvseg::cli
