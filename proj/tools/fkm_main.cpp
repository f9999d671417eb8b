// fkm command-line tool. All functionality is reached through the
// shared library's C API (fkm/fkm.h); this file only handles argument
// parsing, config overrides and artifact I/O.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "fkm/fkm.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  long long seed = -1;
  long long samples = -1;
  std::string format;
  bool quiet = false;
};

int fail(const Options& opt, fkm_status status, const std::string& message) {
  if (!opt.quiet) std::fprintf(stderr, "fkm: error: %s\n", message.c_str());
  if (opt.format == "json") {
    nlohmann::json err = {{"error",
                           {{"status", static_cast<int>(status)},
                            {"statusName", fkm_status_name(status)},
                            {"message", message}}}};
    std::printf("%s\n", err.dump(2).c_str());
  }
  return static_cast<int>(status);
}

std::string loadConfig(const Options& opt, bool& ok, std::string& err) {
  ok = true;
  nlohmann::json doc = nlohmann::json::object();
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in) {
      ok = false;
      err = "cannot open config file '" + opt.config + "'";
      return "";
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      doc = nlohmann::json::parse(ss.str());
    } catch (const std::exception& e) {
      ok = false;
      err = std::string("config is not valid JSON: ") + e.what();
      return "";
    }
  }
  if (opt.seed >= 0) doc["seed"] = opt.seed;
  if (opt.samples >= 0) doc["samples"] = opt.samples;
  return doc.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler almost-Kahler mechanics toolkit"};
  app.require_subcommand(1);

  Options opt;
  std::map<std::string, fkm_command> commands = {
      {"validate", FKM_CMD_VALIDATE}, {"derive", FKM_CMD_DERIVE},
      {"simulate", FKM_CMD_SIMULATE}, {"verify", FKM_CMD_VERIFY},
      {"einstein", FKM_CMD_EINSTEIN},
  };
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> descriptions = {
      {"validate", "check the Finsler conditions of the configured metric"},
      {"derive", "dump g, N, lifts, complex structure and theta at a point"},
      {"simulate", "integrate the Euler-Lagrange or Hamilton flow"},
      {"verify", "run the structural-identity verification suite"},
      {"einstein", "sweep the Kahler-Einstein corollary identities"},
  };
  for (auto& [name, cmd] : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", opt.config, "JSON configuration file");
    sub->add_option("--out", opt.out, "write the artifact to this path");
    sub->add_option("--seed", opt.seed, "override the sampling seed");
    sub->add_option("--samples", opt.samples, "override per-check sample counts");
    sub->add_option("--format", opt.format, "artifact format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--quiet", opt.quiet, "suppress the status line");
    subs[name] = sub;
  }

  CLI11_PARSE(app, argc, argv);

  fkm_command command = FKM_CMD_VERIFY;
  for (auto& [name, sub] : subs)
    if (sub->parsed()) command = commands.at(name);

  bool ok = true;
  std::string err;
  std::string configJson = loadConfig(opt, ok, err);
  if (!ok) return fail(opt, FKM_CONFIG_ERROR, err);

  fkm_session* session = nullptr;
  fkm_status status = fkm_session_create(configJson.c_str(), &session);
  if (status != FKM_OK) return fail(opt, status, fkm_last_error());

  fkm_format format = opt.format == "csv"    ? FKM_FORMAT_CSV
                      : opt.format == "json" ? FKM_FORMAT_JSON
                                             : FKM_FORMAT_DEFAULT;
  char* artifact = nullptr;
  status = fkm_session_run(session, command, format, &artifact);
  std::string message = fkm_session_message(session);

  int rc = static_cast<int>(status);
  if (artifact) {
    if (!opt.out.empty()) {
      std::ofstream outFile(opt.out, std::ios::binary);
      if (!outFile) {
        fkm_string_free(artifact);
        fkm_session_destroy(session);
        return fail(opt, FKM_CONFIG_ERROR,
                    "cannot write output file '" + opt.out + "'");
      }
      outFile << artifact;
    } else {
      std::fputs(artifact, stdout);
    }
    fkm_string_free(artifact);
  }

  if (status == FKM_OK || status == FKM_CHECK_FAILED) {
    if (!opt.quiet) std::fprintf(stderr, "fkm: %s\n", message.c_str());
  } else {
    fkm_session_destroy(session);
    return fail(opt, status, message);
  }
  fkm_session_destroy(session);
  return rc;
}
