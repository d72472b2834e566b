#ifndef ULTREXT_H
#define ULTREXT_H

/* C interface to the ultrafilter-extension workbench. The core is C++; this
 * header is the stable boundary for tools and bindings. Sessions are opaque
 * handles; every returned string is owned by the caller and released with
 * ux_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ux_session ux_session;

typedef enum ux_status {
    UX_OK = 0,
    UX_ERR_PARSE = 1,           /* syntax error; see ux_last_error{,_line,_column} */
    UX_ERR_EVAL = 2,            /* evaluation rejected the input */
    UX_ERR_INVALID_ARGUMENT = 3 /* bad handle, suite name, or config */
} ux_status;

/* config_json keys, all optional:
 *   "json"      bool   render records as JSON lines (default text key=value)
 *   "timings"   bool   append time_ms to records (off keeps output byte-stable)
 *   "parallel"  bool   evaluate queries concurrently after the definitions
 *   "fail_fast" bool   stop a script at the first failure
 *   "seed"      int    generator seed (0: use ULTREXT_SEED or a default)
 *   "universe"  [str]  start on the finite backend with these element labels
 * Pass NULL for defaults. Returns NULL only on invalid config. */
ux_session* ux_session_new(const char* config_json);
void ux_session_free(ux_session* session);

/* Runs a whole script. *records_out receives newline-separated rendered
 * records; *n_failures_out (optional) the count of failed asserts and
 * evaluation errors. */
ux_status ux_run_script(ux_session* session, const char* text, char** records_out,
                        int* n_failures_out);

/* Parses and evaluates statements interactively (REPL step). */
ux_status ux_eval(ux_session* session, const char* text, char** records_out);

/* Name -> kind listing of the session environment. */
char* ux_environment(ux_session* session);

const char* ux_last_error(const ux_session* session);
int ux_last_error_line(const ux_session* session);
int ux_last_error_column(const ux_session* session);

/* Differential check suites (ultrext check <suite>). */
int ux_suite_count(void);
const char* ux_suite_name(int index);
ux_status ux_check_suite(const char* suite, int trials, unsigned long long seed, int as_json,
                         char** report_out, int* n_failures_out);

void ux_string_free(char* text);
const char* ux_version(void);

#ifdef __cplusplus
}
#endif

#endif /* ULTREXT_H */
