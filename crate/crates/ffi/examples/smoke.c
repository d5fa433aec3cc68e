#include <stdio.h>
#include "entrywise.h"

int main(void) {
    double c[2] = {1.0, 1.0};
    double k = 0.0;
    if (ew_threshold_constant(c, 2, 2, 1.0, &k) != EW_STATUS_OK) {
        fprintf(stderr, "%s\n", ew_last_error());
        return 1;
    }
    printf("entrywise %s: C = %g\n", ew_version(), k);

    ew_matrix *a = NULL;
    double re[4] = {1.0, 2.0, 2.0, 1.0};
    ew_matrix_new(2, re, NULL, &a);
    size_t labels[2], blocks;
    ew_status s = ew_stratify(a, EW_GROUP_TRIVIAL, 1e-9, labels, &blocks);
    printf("stratify: status %d (%s)\n", (int)s, ew_last_error());
    ew_matrix_free(a);
    return 0;
}
