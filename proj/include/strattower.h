/* C API for the stratified-tower library.
 *
 * All objects cross the boundary as JSON strings (the same schemas the CLI
 * consumes).  Every function returns a status code; on failure the error
 * message is retained on the context and readable via st_last_error.
 */
#ifndef STRATTOWER_H
#define STRATTOWER_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ST_OK 0
#define ST_ERR_USAGE 1
#define ST_ERR_PARSE 2
#define ST_ERR_DEPTH 3
#define ST_ERR_VALIDATE 4
#define ST_ERR_INTERNAL 5

typedef struct st_context st_context;

/* Create a context with default configuration (max_depth 32, precision 40,
 * oracle window 4 with 3 terms, construction depth 8).  Never fails. */
st_context* st_context_new(void);
void st_context_free(st_context* ctx);

int st_set_precision(st_context* ctx, int64_t precision);
int st_set_max_depth(st_context* ctx, int64_t max_depth);
int st_set_window(st_context* ctx, int64_t window);
int st_set_terms(st_context* ctx, int64_t terms);
int st_set_depth(st_context* ctx, int64_t depth);

/* Run a command (classify, normalize, decide, lift, glue, restrict, verify,
 * is-special, oracle) on n JSON inputs.  `ring` and `side` carry the values
 * of the corresponding CLI flags and may be NULL.  On ST_OK, *output_json
 * receives a malloc'd JSON report; release it with st_string_free. */
int st_command(st_context* ctx, const char* command, const char* const* inputs_json, int64_t n,
               const char* ring, const char* side, char** output_json);

/* Message of the last failed call on this context ("" if none). */
const char* st_last_error(const st_context* ctx);

void st_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
