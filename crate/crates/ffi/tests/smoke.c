#include <stdio.h>
#include <stdlib.h>
#include "domtwist.h"

#define CHECK(call)                                                          \
    do {                                                                     \
        int32_t rc = (call);                                                 \
        if (rc != DT_OK) {                                                   \
            fprintf(stderr, "%s: %d %s\n", #call, rc, dt_last_error_message()); \
            return 1;                                                        \
        }                                                                    \
    } while (0)

int main(void) {
    DtRegion *r = NULL;
    DtTilingList *all = NULL;
    DtTiling *t0 = NULL, *t1 = NULL;
    DtCurves *c = NULL;
    int64_t tw = 0, num = 0, den = 0;

    CHECK(dt_region_builtin("box-3-3-2", &r));
    CHECK(dt_enumerate(r, &all));
    printf("tilings %zu\n", dt_tiling_list_len(all));

    CHECK(dt_tiling_builtin("hex", "t0", &t0));
    CHECK(dt_tiling_builtin("hex", "t1", &t1));
    CHECK(dt_twist(t1, t0, NULL, &tw));
    printf("twist %lld\n", (long long)tw);
    CHECK(dt_curves_build(t1, NULL, 1, 6, 5, "transported", &c));
    CHECK(dt_curves_helicity(c, &num, &den));
    printf("helicity %lld/%lld\n", (long long)num, (long long)den);

    if (dt_region_builtin("box-9", &r) != DT_ERR_REGION) return 2;
    printf("error %s\n", dt_last_error_message());

    dt_curves_free(c);
    dt_tiling_free(t0);
    dt_tiling_free(t1);
    dt_tiling_list_free(all);
    dt_region_free(r);
    return 0;
}
