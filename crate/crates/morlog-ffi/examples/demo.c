/* Minimal consumer of the morlog C API.
 *
 * Build from the repository root after `cargo build -p morlog-ffi`:
 *
 *   cc crates/morlog-ffi/examples/demo.c -Icrates/morlog-ffi/include \
 *      target/debug/libmorlog_ffi.a -lpthread -ldl -lm -o demo
 */
#include <stdio.h>
#include "morlog.h"

static int fail(const char *what) {
    fprintf(stderr, "demo: %s failed: %s\n", what, morlog_last_error_message());
    return 1;
}

int main(void) {
    if (morlog_abi_version() != 1)
        return 1;

    MorlogReport *rep = NULL;
    MorlogStatus st = morlog_run_json(
        "{\"command\": \"gauss\", \"prime\": 3, \"rank\": 2}", &rep);
    if (st != MORLOG_STATUS_OK)
        return fail("gauss");
    if (morlog_report_pass(rep) != 1)
        return fail("gauss checks");
    for (size_t i = 0; i < morlog_report_num_checks(rep); i++) {
        printf("%s %s: %s\n",
               morlog_report_check_pass(rep, i) == 1 ? "[pass]" : "[FAIL]",
               morlog_report_check_anchor(rep, i),
               morlog_report_check_detail(rep, i));
    }
    morlog_report_free(rep);

    /* error path: unknown command */
    st = morlog_run_json("{\"command\": \"frobnicate\"}", &rep);
    if (st != MORLOG_STATUS_USAGE || rep != NULL)
        return 1;
    printf("rejected: %s (%s)\n", morlog_last_error_message(),
           morlog_status_name(st));

    /* one acceptance criterion through the direct entry point */
    st = morlog_selftest(1, &rep);
    if (st != MORLOG_STATUS_OK)
        return fail("selftest");
    int ok = morlog_report_pass(rep) == 1;
    printf("criterion 1: %s\n", ok ? "pass" : "FAIL");
    morlog_report_free(rep);
    return ok ? 0 : 1;
}
