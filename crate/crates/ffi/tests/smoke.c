#include <stdio.h>
#include <string.h>

#include "retwords.h"

#define CHECK(cond)                                             \
    do {                                                        \
        if (!(cond)) {                                          \
            char msg[256];                                      \
            rmw_last_error(msg, sizeof msg);                    \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__,       \
                    __LINE__, #cond, msg);                      \
            return 1;                                           \
        }                                                       \
    } while (0)

int main(void) {
    RmwSource *src = NULL;
    char buf[32];
    size_t written = 0, count = 0;
    int holds = -1;

    CHECK(rmw_abi_version() == RMW_ABI_VERSION);
    CHECK(rmw_source_builtin("r4_example", &src) == RMW_STATUS_OK);
    CHECK(rmw_source_prefix(src, 5, buf, sizeof buf, &written) == RMW_STATUS_OK);
    CHECK(written == 5 && strcmp(buf, "13231") == 0);
    CHECK(rmw_return_count(src, "23", &count) == RMW_STATUS_OK && count == 4);
    CHECK(rmw_return_count(src, "11", &count) == RMW_STATUS_NOT_A_FACTOR);
    CHECK(rmw_check_rm(src, 4, 8, RMW_METHOD_BISPECIAL, &holds) == RMW_STATUS_OK && holds == 1);
    rmw_source_free(src);

    const uint32_t t[] = {1, 0, 1};
    double beta = 0, residual = 1;
    int parry = 0, rm = 0;
    CHECK(rmw_beta_dominant_root(t, 3, &beta, &residual) == RMW_STATUS_OK);
    CHECK(beta > 1.4655 && beta < 1.4656);
    CHECK(rmw_beta_conditions(t, 3, &parry, &rm) == RMW_STATUS_OK && parry && rm);

    CHECK(rmw_source_builtin("nope", &src) == RMW_STATUS_INVALID_ARGUMENT);
    CHECK(rmw_last_error(NULL, 0) > 0);
    puts("ok");
    return 0;
}
