#include "cli.hpp"

#include <algorithm>
#include <csignal>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "pvseg/config.hpp"
#include "pvseg/error.hpp"
#include "pvseg/pipeline.hpp"
#include "serve.hpp"

namespace pvseg::cli {
namespace {

using StageFn = void (*)(const RunConfig&, StageLog&);

struct Command {
  const char* name;
  const char* help;
  StageFn fn;
};

void timeline_stage(const RunConfig& cfg, StageLog& log) { run_build_timeline(cfg, log); }

constexpr Command kCommands[] = {
    {"analyze", "Run every stage the inputs allow and write the timeline", run_analyze},
    {"segment-audio", "Speaker-change segmentation of a WAV file", run_segment_audio},
    {"segment-video", "Shot segmentation from frames or a histogram cache", run_segment_video},
    {"index-text", "Match theme and topic phrases against a transcript", run_index_text},
    {"cluster", "Group audio segments by speaker", run_cluster},
    {"timeline", "Assemble timeline.json from existing stage outputs", timeline_stage},
    {"render", "Render a timeline document to SVG", run_render},
};

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

struct SettingFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  bool dump_features = false;
  CLI::Option* dump_flag = nullptr;
};

void add_setting_flags(CLI::App& sub, SettingFlags& flags) {
  sub.add_option("--config", flags.config_file, "key = value settings file")->check(CLI::ExistingFile);
  std::map<std::string, std::string> defaults;
  std::istringstream echo(resolved_config_text(RunConfig{}));
  for (std::string line; std::getline(echo, line);) {
    const auto eq = line.find('=');
    defaults[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const auto& key : config_keys()) {
    if (key == "dump_features") {
      flags.dump_flag = sub.add_flag("--dump-features", flags.dump_features, "Also write features.csv");
      continue;
    }
    const auto& d = defaults[key];
    auto* opt = sub.add_option(dashed(key), flags.values[key], d.empty() ? key : key + " (default " + d + ")")
                    ->type_name("VALUE");
    flags.options.emplace_back(key, opt);
  }
}

RunConfig resolve(const SettingFlags& flags) {
  RunConfig cfg;
  if (!flags.config_file.empty()) apply_config_file(cfg, flags.config_file);
  for (const auto& [key, opt] : flags.options)
    if (opt->count() > 0) apply_setting(cfg, key, flags.values.at(key));
  if (flags.dump_flag && flags.dump_flag->count() > 0) cfg.dump_features = flags.dump_features;
  return cfg;
}

httplib::Server* g_server = nullptr;

extern "C" void stop_server(int) {
  if (g_server) g_server->stop();
}

int serve(const std::filesystem::path& root, const std::string& host, int port, std::ostream& out) {
  httplib::Server server;
  configure_server(server, root);
  if (!server.bind_to_port(host, port)) throw Error(Errc::io_failure, "cannot bind " + host + ":" + std::to_string(port));
  out << "serving " << root.string() << " at http://" << host << ":" << port << "/" << std::endl;
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  server.listen_after_bind();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lecture video segmentation and timeline builder", "pvseg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pvseg 0.1.0");

  std::vector<std::pair<const Command*, CLI::App*>> stage_apps;
  std::map<const CLI::App*, SettingFlags> flags;
  for (const auto& cmd : kCommands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    add_setting_flags(*sub, flags[sub]);
    stage_apps.emplace_back(&cmd, sub);
  }

  std::string root = ".";
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_app = app.add_subcommand("serve", "Read-only HTTP server over an output directory");
  serve_app->add_option("--root", root, "Directory to serve")->check(CLI::ExistingDirectory);
  serve_app->add_option("--host", host, "Bind address");
  serve_app->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::string stage = "serve";
  try {
    if (serve_app->parsed()) return serve(root, host, port, out);
    for (const auto& [cmd, sub] : stage_apps) {
      if (!sub->parsed()) continue;
      stage = cmd->name;
      const RunConfig cfg = resolve(flags.at(sub));
      StageLog log;
      cmd->fn(cfg, log);
      for (const auto& line : log) out << line << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "pvseg " << stage << ": " << e.what() << '\n';
    if (e.code() == Errc::invalid_argument) {
      err << "run 'pvseg " << stage << " --help' for usage\n";
      return kExitUsage;
    }
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "pvseg " << stage << ": " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace pvseg::cli
