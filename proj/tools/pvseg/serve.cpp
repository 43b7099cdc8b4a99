#include "serve.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "httplib.h"
#include "pvseg/error.hpp"
#include "pvseg/pipeline.hpp"
#include "pvseg/timeline.hpp"

namespace pvseg::cli {
namespace fs = std::filesystem;

std::vector<VideoEntry> list_videos(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(Errc::io_failure, "not a directory: " + root.string());

  std::vector<fs::path> dirs{root};
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) dirs.push_back(e.path());

  std::vector<VideoEntry> videos;
  for (const auto& dir : dirs) {
    const fs::path doc = dir / outputs::kTimeline;
    if (!fs::is_regular_file(doc)) continue;
    std::string id;
    try {
      id = import_doc(doc).video_id;
    } catch (const Error&) {
      continue;
    }
    if (id.empty()) id = dir == root ? root.filename().string() : dir.filename().string();
    videos.push_back({id, fs::relative(doc, root).generic_string()});
  }
  std::sort(videos.begin(), videos.end(),
            [](const VideoEntry& a, const VideoEntry& b) { return a.timeline < b.timeline; });
  return videos;
}

std::string video_index_json(const fs::path& root) {
  auto list = nlohmann::json::array();
  for (const auto& v : list_videos(root)) list.push_back({{"id", v.id}, {"timeline", v.timeline}});
  return nlohmann::json{{"videos", list}}.dump();
}

void configure_server(httplib::Server& server, const fs::path& root) {
  server.Get("/api/videos", [root](const httplib::Request&, httplib::Response& res) {
    try {
      res.set_content(video_index_json(root), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
    }
  });
  server.set_file_extension_and_mimetype_mapping("ppm", "image/x-portable-pixmap");
  server.set_file_extension_and_mimetype_mapping("pgm", "image/x-portable-graymap");
  server.set_file_extension_and_mimetype_mapping("csv", "text/csv");
  server.set_file_extension_and_mimetype_mapping("resolved", "text/plain");
  if (!server.set_mount_point("/", root.string()))
    throw Error(Errc::io_failure, "cannot serve " + root.string());
}

}  // namespace pvseg::cli
