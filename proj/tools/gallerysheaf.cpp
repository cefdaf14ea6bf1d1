// Command-line front-end; flags override values from --config.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gallerysheaf/cli.hpp"

using namespace gallerysheaf;

int main(int argc, char** argv) {
  CLI::App app{"Equivariant cohomology of Bott-Samelson varieties via galleries and moment graphs"};
  std::string config_file, type, word, cmd, out, graph, scope;
  int rank = 0, max_degree = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_file, "key=value job file");
  auto* o_type = app.add_option("--type", type, "Cartan type letter (A, B, C, D, G, F)");
  auto* o_rank = app.add_option("--rank", rank, "rank of the root system");
  auto* o_word = app.add_option("--word", word, "comma-separated 1-based simple reflections");
  auto* o_cmd = app.add_option("--cmd", cmd, "command")->check(CLI::IsMember(cli_commands()));
  auto* o_deg = app.add_option("--max-degree", max_degree, "degree bound override");
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized checks");
  auto* o_out = app.add_option("--out", out, "write the report to FILE");
  auto* o_graph = app.add_option("--graph", graph, "write the Bruhat graph with stalk ranks as DOT (sheaf, purity)");
  auto* o_scope = app.add_option("--scope", scope, "selftest scope: full or quick");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  JobConfig c;
  try {
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      if (!f) throw ConfigError("config: cannot read '" + config_file + "'");
      std::stringstream text;
      text << f.rdbuf();
      c = parse_config(text.str(), c);
    }
    if (*o_type) c.type = type;
    if (*o_rank) c.rank = rank;
    if (*o_word) c.word = word;
    if (*o_cmd) c.command = cmd;
    if (*o_deg) c.max_degree = max_degree;
    if (*o_seed) c.seed = seed;
    if (*o_out) c.out = out;
    if (*o_graph) c.graph = graph;
    if (*o_scope) c.scope = scope;
    if (c.command.empty()) throw ConfigError("no command given (--cmd)");
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (c.out.empty()) return run(c, std::cout, std::cerr);
  std::ostringstream report;
  const int status = run(c, report, std::cerr);
  std::ofstream f(c.out);
  if (!f) {
    std::cerr << "configuration error: cannot write '" << c.out << "'\n";
    return kExitConfig;
  }
  f << report.str();
  return status;
}
