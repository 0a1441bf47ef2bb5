#include "strattower.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "strat/io.hpp"

struct st_context {
  strat::RunConfig cfg;
  std::string last_error;
};

namespace {

int guard(st_context* ctx, const std::function<void()>& body) {
  if (!ctx) return ST_ERR_USAGE;
  try {
    body();
    ctx->last_error.clear();
    return ST_OK;
  } catch (const strat::Error& e) {
    ctx->last_error = e.what();
    return (int)e.code();
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return ST_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

st_context* st_context_new(void) { return new (std::nothrow) st_context(); }

void st_context_free(st_context* ctx) { delete ctx; }

int st_set_precision(st_context* ctx, int64_t v) {
  return guard(ctx, [&] {
    if (v < 1) strat::fail(strat::Errc::usage, "precision must be >= 1");
    ctx->cfg.precision = v;
  });
}

int st_set_max_depth(st_context* ctx, int64_t v) {
  return guard(ctx, [&] {
    if (v < 1) strat::fail(strat::Errc::usage, "max depth must be >= 1");
    ctx->cfg.max_depth = v;
  });
}

int st_set_window(st_context* ctx, int64_t v) {
  return guard(ctx, [&] {
    if (v < 0) strat::fail(strat::Errc::usage, "window must be >= 0");
    ctx->cfg.window = v;
  });
}

int st_set_terms(st_context* ctx, int64_t v) {
  return guard(ctx, [&] {
    if (v < 0) strat::fail(strat::Errc::usage, "terms must be >= 0");
    ctx->cfg.terms = v;
  });
}

int st_set_depth(st_context* ctx, int64_t v) {
  return guard(ctx, [&] {
    if (v < 0) strat::fail(strat::Errc::usage, "depth must be >= 0");
    ctx->cfg.depth = v;
  });
}

int st_command(st_context* ctx, const char* command, const char* const* inputs_json, int64_t n,
               const char* ring, const char* side, char** output_json) {
  return guard(ctx, [&] {
    if (!command || !output_json || (n > 0 && !inputs_json))
      strat::fail(strat::Errc::usage, "null argument");
    std::vector<strat::json> inputs;
    for (int64_t i = 0; i < n; ++i) {
      if (!inputs_json[i]) strat::fail(strat::Errc::usage, "null input");
      inputs.push_back(strat::parse_json_text(inputs_json[i]));
    }
    strat::json out = strat::run_command(command, inputs, ctx->cfg, ring ? ring : "", side ? side : "");
    std::string text = out.dump();
    char* buf = (char*)std::malloc(text.size() + 1);
    if (!buf) strat::fail(strat::Errc::internal, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *output_json = buf;
  });
}

const char* st_last_error(const st_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

void st_string_free(char* s) { std::free(s); }

}  // extern "C"
