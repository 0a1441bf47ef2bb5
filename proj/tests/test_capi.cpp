#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "strattower.h"

namespace {
const char* kRank1Tower = R"({
  "p": 3, "ring": "gm", "group": "D", "rank": 1, "depth": 1,
  "twist": [{"num": 1, "den": 2}],
  "matrices": [[[[[1, 1]]]]]
})";

const char* kClass = R"({
  "p": 3, "twist": {"num": 0, "den": 1},
  "prefix": [[[3, 1]]],
  "tail": {"kind": "zero"}
})";

int run1(st_context* ctx, const char* cmd, const char* input, const char* ring, const char* side,
         std::string* out) {
  const char* inputs[] = {input};
  char* s = nullptr;
  int rc = st_command(ctx, cmd, inputs, 1, ring, side, &s);
  if (rc == ST_OK && out && s) *out = s;
  st_string_free(s);
  return rc;
}
}  // namespace

TEST_CASE("context lifecycle and classify") {
  st_context* ctx = st_context_new();
  REQUIRE(ctx != nullptr);
  CHECK(std::string(st_last_error(ctx)).empty());
  std::string out;
  CHECK(run1(ctx, "classify", kRank1Tower, nullptr, nullptr, &out) == ST_OK);
  CHECK(out.find("alpha") != std::string::npos);
  st_context_free(ctx);
}

TEST_CASE("error codes and st_last_error") {
  st_context* ctx = st_context_new();
  // malformed JSON -> parse
  CHECK(run1(ctx, "classify", "{", nullptr, nullptr, nullptr) == ST_ERR_PARSE);
  CHECK(std::string(st_last_error(ctx)).find("JSON") != std::string::npos);
  // unknown command -> usage
  CHECK(run1(ctx, "transmogrify", kRank1Tower, nullptr, nullptr, nullptr) == ST_ERR_USAGE);
  // decide without ring -> usage
  CHECK(run1(ctx, "decide", kClass, nullptr, nullptr, nullptr) == ST_ERR_USAGE);
  // invalid tower (p not prime) -> validation
  CHECK(run1(ctx, "classify",
             R"({"p": 4, "ring": "gm", "group": "D", "rank": 1, "depth": 0,
                 "twist": [{"num": 0, "den": 1}], "matrices": []})",
             nullptr, nullptr, nullptr) == ST_ERR_VALIDATE);
  // a later successful call clears the error
  CHECK(run1(ctx, "classify", kRank1Tower, nullptr, nullptr, nullptr) == ST_OK);
  CHECK(std::string(st_last_error(ctx)).empty());
  st_context_free(ctx);
}

TEST_CASE("configuration setters feed the commands") {
  st_context* ctx = st_context_new();
  CHECK(st_set_precision(ctx, 12) == ST_OK);
  CHECK(st_set_precision(ctx, 0) == ST_ERR_USAGE);
  std::string out;
  CHECK(run1(ctx, "restrict", kRank1Tower, "disc0", nullptr, &out) == ST_OK);
  CHECK(out.find("\"precision\":12") != std::string::npos);
  // max_depth 1 starves normalization of the class with a migrating term
  CHECK(st_set_max_depth(ctx, 1) == ST_OK);
  CHECK(run1(ctx, "normalize", kClass, nullptr, nullptr, nullptr) == ST_ERR_DEPTH);
  CHECK(st_set_max_depth(ctx, 32) == ST_OK);
  CHECK(run1(ctx, "normalize", kClass, nullptr, nullptr, &out) == ST_OK);
  CHECK(out.find("normalized") != std::string::npos);
  st_context_free(ctx);
}

TEST_CASE("multi-input commands through the boundary") {
  st_context* ctx = st_context_new();
  st_set_precision(ctx, 40);
  std::string restricted, verified;
  REQUIRE(run1(ctx, "restrict", kRank1Tower, "disc0", nullptr, &restricted) == ST_OK);
  // verify the identity witness between the restriction and itself
  std::string idw = R"({"p": 3, "ring": "disc0", "group": "D", "rank": 1,
                        "precision": 40, "matrices": []})";
  const char* in3[] = {restricted.c_str(), restricted.c_str(), idw.c_str()};
  char* s = nullptr;
  REQUIRE(st_command(ctx, "verify", in3, 3, nullptr, nullptr, &s) == ST_OK);
  verified = s;
  st_string_free(s);
  CHECK(verified.find("\"verified\":true") != std::string::npos);
  // oracle on two equal towers finds a witness
  const char* in2[] = {kRank1Tower, kRank1Tower};
  s = nullptr;
  REQUIRE(st_command(ctx, "oracle", in2, 2, nullptr, nullptr, &s) == ST_OK);
  std::string oracle = s;
  st_string_free(s);
  CHECK(oracle.find("\"equivalent\":true") != std::string::npos);
  // wrong input count -> usage
  CHECK(st_command(ctx, "verify", in2, 2, nullptr, nullptr, &s) == ST_ERR_USAGE);
  st_context_free(ctx);
}
