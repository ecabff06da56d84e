/* Certify and verify a pair in Z8 through the C ABI. */
#include <stdio.h>
#include <string.h>

#include "kneser.h"

#define CHECK(call)                                                      \
    do {                                                                 \
        KnStatus st_ = (call);                                           \
        if (st_ != KN_STATUS_OK) {                                       \
            fprintf(stderr, "%s: %d %s\n", #call, (int)st_,              \
                    kn_last_error_message());                            \
            return 1;                                                    \
        }                                                                \
    } while (0)

int main(void) {
    KnGroup *g = NULL;
    KnSet *a = NULL, *b = NULL;
    KnBoundReport report;
    char *json = NULL, *reason = NULL;
    bool accepted = false;

    CHECK(kn_group_parse("Z8", &g));
    CHECK(kn_set_parse(g, "{0,1,4}", &a));
    CHECK(kn_set_parse(g, "{0,4,5}", &b));
    CHECK(kn_kneser_bound(a, b, &report));
    CHECK(kn_certify(a, b, &json));
    CHECK(kn_verify(a, b, json, &accepted, &reason));
    printf("lhs=%zu rhs=%zu k=%zu %s\n", report.lhs, report.rhs, report.k_order,
           accepted ? "accept" : reason);

    kn_set_free(a);
    if (kn_set_parse(g, "{0,9}", &a) != KN_STATUS_PARSE) {
        return 1;
    }
    printf("error: %s\n", kn_last_error_message());

    kn_string_free(json);
    kn_string_free(reason);
    kn_set_free(b);
    kn_group_free(g);
    return accepted ? 0 : 1;
}
