// fcdl: build, export and serve FC/DL graphs.
//
//   fcdl build --text req.txt --dl-base leaves.json [--delta D] [--tau T] [--k K]
//              [--granularity sentence|paragraph] [--format json|graphml|dot] [--out PATH]
//   fcdl export graph.json --format dot [--out PATH]
//   fcdl serve --dl-base leaves.json [--port 8080] [--host 127.0.0.1]
//
// Exit codes: 0 success, 1 data error, 2 usage error. Errors go to stderr as
// "fcdl: <ErrorKind>: <message>".

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "fcdl/dlbase.hpp"
#include "fcdl/error.hpp"
#include "fcdl/export.hpp"
#include "fcdl/fcgraph.hpp"
#include "fcdl/service.hpp"
#include "fcdl/session_store.hpp"

namespace {

using namespace fcdl;

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  out.close();
  if (!out) throw Error(ErrorKind::kIoError, "cannot write '" + path + "'");
}

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-concept / data-leaf graph builder"};
  app.require_subcommand(1);

  const std::vector<std::string> formats = {"json", "graphml", "dot"};
  GraphParams params;
  std::string text_path, base_path, out_path, format = "json", granularity = "sentence";

  auto* build = app.add_subcommand("build", "Run both phases and write the graph");
  build->add_option("--text", text_path, "Requirement text (UTF-8)")->required();
  build->add_option("--dl-base", base_path, "DL base, .json or .csv")->required();
  build->add_option("--delta", params.delta, "Attachment distance threshold")->check(CLI::Range(0.0, 1.0));
  build->add_option("--tau", params.tau, "Clustering stop threshold")->check(CLI::Range(0.0, 1.0));
  build->add_option("--k", params.k, "Abstract size")->check(CLI::PositiveNumber);
  build->add_option("--granularity", granularity)->check(CLI::IsMember({"sentence", "paragraph"}));
  build->add_option("--format", format)->check(CLI::IsMember(formats));
  build->add_option("--out", out_path, "Output path, stdout when omitted");

  std::string graph_path;
  auto* exp = app.add_subcommand("export", "Re-serialize a stored graph.json");
  exp->add_option("graph", graph_path, "Canonical graph JSON")->required();
  exp->add_option("--format", format)->check(CLI::IsMember(formats));
  exp->add_option("--out", out_path);

  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--dl-base", base_path, "DL base, .json or .csv")->required();
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", host);
  serve->add_option("--delta", params.delta)->check(CLI::Range(0.0, 1.0));
  serve->add_option("--tau", params.tau)->check(CLI::Range(0.0, 1.0));
  serve->add_option("--k", params.k)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fcdl: UsageError: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*build) {
      Workspace ws(read_file(text_path), load_dl_base_file(base_path), parse_granularity(granularity));
      write_output(out_path, export_graph(build_graph(ws, params), parse_export_format(format)));
    } else if (*exp) {
      const FcdlGraph g = graph_from_json(read_file(graph_path));
      write_output(out_path, export_graph(g, parse_export_format(format)));
    } else if (*serve) {
      const char* env = std::getenv("FCDL_DATA_DIR");
      SessionStore store(env != nullptr && *env != '\0' ? env : "./fcdl-data");
      Service service(load_dl_base_file(base_path), store, params);
      const int bound = service.bind(host, port);
      std::cout << "fcdl: listening on " << host << ":" << bound << " (data dir " << store.dir().string() << ")"
                << std::endl;
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      service.listen();
      g_service = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << "fcdl: " << kind_name(e.kind()) << ": " << e.what() << "\n";
    return kDataError;
  }
  return 0;
}
