// Command-line front end.  Links only against the C API.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "strattower.h"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(ST_ERR_PARSE);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratified cocycle tower toolkit"};
  app.require_subcommand(1);

  int64_t precision = 40, max_depth = 32, window = 4, terms = 3, depth = 8, p = 0;
  app.add_option("--p", p, "prime hint; inputs carry their own p");
  app.add_option("--precision", precision, "working precision over the discs");
  app.add_option("--max-depth", max_depth, "stabilization bound for digit recursions");
  app.add_option("--window", window, "oracle exponent window");
  app.add_option("--terms", terms, "oracle per-entry term bound");
  app.add_option("--depth", depth, "default construction depth");

  struct Cmd {
    const char* name;
    const char* help;
    size_t inputs;
    bool ring = false, side = false;
  };
  const Cmd cmds[] = {
      {"classify", "class of a rank-1 tower in Z_p/Z", 1},
      {"normalize", "support-normalize a twisted class", 1},
      {"decide", "decide triviality of a twisted class over --ring", 1, true},
      {"lift", "lift a triangular disc0 tower to gm", 1},
      {"glue", "glue disc0/discinf data into a gm object", 2},
      {"restrict", "restrict a gm tower to --ring", 1, true},
      {"verify", "check a gauge witness between two towers", 3},
      {"is-special", "regular-singular/split test at --side rsi|rs0", 1, false, true},
      {"oracle", "exhaustive bounded gauge search between two gm towers", 2},
  };

  std::string picked, ring, side;
  std::vector<std::string> paths;
  for (auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("inputs", paths,
                    "input JSON files ('-' for stdin); defaults to stdin when omitted")
        ->expected(0, (int)c.inputs);
    if (c.ring) sub->add_option("--ring", ring, "gm|disc0|discinf");
    if (c.side) sub->add_option("--side", side, "rsi|rs0");
    sub->callback([&picked, name = std::string(c.name)] { picked = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? ST_ERR_USAGE : 0;
  }

  size_t want = 1;
  for (auto& c : cmds)
    if (picked == c.name) want = c.inputs;
  while (paths.size() < want) paths.push_back("-");

  std::vector<std::string> texts;
  std::vector<const char*> ptrs;
  for (auto& p : paths) texts.push_back(read_input(p));
  for (auto& t : texts) ptrs.push_back(t.c_str());

  st_context* ctx = st_context_new();
  st_set_precision(ctx, precision);
  st_set_max_depth(ctx, max_depth);
  st_set_window(ctx, window);
  st_set_terms(ctx, terms);
  st_set_depth(ctx, depth);

  char* out = nullptr;
  int rc = st_command(ctx, picked.c_str(), ptrs.data(), (int64_t)ptrs.size(),
                      ring.empty() ? nullptr : ring.c_str(), side.empty() ? nullptr : side.c_str(),
                      &out);
  if (rc == ST_OK) {
    std::cout << out << "\n";
    st_string_free(out);
  } else {
    std::cerr << "error: " << st_last_error(ctx) << "\n";
  }
  st_context_free(ctx);
  return rc;
}
