/* Expands t/(t^2+1) over F_3 and prints its convergents. */
#include <stdio.h>

#include "farey_laurent.h"

static int check(FlStatus s, const char *what) {
    if (s != FL_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)s, fl_last_error());
        return 1;
    }
    return 0;
}

int main(void) {
    FlField *f = NULL;
    FlElement *x = NULL;
    FlCf *cf = NULL;
    if (check(fl_field_new(3, NULL, 0, &f), "field")) return 1;
    if (check(fl_element_rational(f, "t/(t^2+1)", &x), "parse")) return 1;
    if (check(fl_cf_expand(x, 20, &cf), "expand")) return 1;

    for (size_t k = 1; k <= fl_cf_len(cf); k++) {
        char *a = NULL, *p = NULL, *q = NULL;
        if (check(fl_cf_partial_quotient(cf, k, &a), "quotient")) return 1;
        if (check(fl_cf_convergent(cf, k, &p, &q), "convergent")) return 1;
        printf("A_%zu = %s  P/Q = (%s)/(%s)\n", k, a, p, q);
        fl_string_free(a);
        fl_string_free(p);
        fl_string_free(q);
    }
    printf("terminated: %s\n", fl_cf_terminated(cf) ? "yes" : "no");

    FlStatus bad = fl_field_new(6, NULL, 0, &f);
    printf("q = 6: status %d, %s\n", (int)bad, fl_last_error());

    fl_cf_free(cf);
    fl_element_free(x);
    fl_field_free(f);
    return 0;
}
