#include <stdio.h>
#include <string.h>

#include "fmb.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    FmbStructure *s = NULL;
    CHECK(fmb_structure_new("M16", 2, 1, &s) == FMB_STATUS_OK);

    size_t order = 0;
    CHECK(fmb_structure_order(s, &order) == FMB_STATUS_OK && order == 16);

    FmbCertificate *c = NULL;
    CHECK(fmb_certify(s, 2, FMB_RULES_INDEPENDENCE, &c) == FMB_STATUS_OK);
    FmbVerdict v;
    uint64_t examined = 0;
    CHECK(fmb_certificate_verdict(c, &v) == FMB_STATUS_OK && v == FMB_VERDICT_OBSTRUCTED);
    CHECK(fmb_certificate_matrices_examined(c, &examined) == FMB_STATUS_OK && examined == 6);
    fmb_certificate_free(c);
    fmb_structure_free(s);

    FmbStructure *bad = NULL;
    CHECK(fmb_structure_new("G99", 2, 1, &bad) == FMB_STATUS_UNKNOWN_GROUP);
    CHECK(bad == NULL);
    CHECK(fmb_last_error_code() == FMB_STATUS_UNKNOWN_GROUP);
    CHECK(strstr(fmb_last_error_message(), "G99") != NULL);

    printf("ok\n");
    return 0;
}
