#include <stdio.h>
#include <string.h>
#include "hlfq.h"

#define CHECK(x) do { if (!(x)) { fprintf(stderr, "failed: %s (%s)\n", #x, hlfq_last_error()); return 1; } } while (0)

int main(void) {
    HlfqField *f = NULL;
    CHECK(hlfq_field_parse("5", &f) == HLFQ_STATUS_OK);
    CHECK(hlfq_field_order(f) == 5);

    HlfqPoly *a0 = NULL, *a1 = NULL;
    CHECK(hlfq_poly_parse(f, "0", &a0) == HLFQ_STATUS_OK);
    CHECK(hlfq_poly_parse(f, "1", &a1) == HLFQ_STATUS_OK);
    const HlfqPoly *offs[2] = {a0, a1};

    HlfqTuple *t = NULL;
    CHECK(hlfq_tuple_new(f, 2, offs, 2, false, &t) == HLFQ_STATUS_OK);
    HlfqCount c;
    CHECK(hlfq_pi_exact(t, 0, 1, 1000000, &c) == HLFQ_STATUS_OK);
    CHECK(c.is_exact == 1 && c.exact_count == 5);

    HlfqCrReport cr;
    CHECK(hlfq_cr_count(t, 1000000, &cr) == HLFQ_STATUS_OK);
    CHECK(cr.admissible == 5 && cr.space == 5);

    char *s = NULL;
    HlfqPoly *g = NULL;
    CHECK(hlfq_poly_parse(f, "t^2 - 1", &g) == HLFQ_STATUS_OK);
    CHECK(hlfq_poly_format(g, &s) == HLFQ_STATUS_OK);
    CHECK(strcmp(s, "t^2+4") == 0);
    hlfq_string_free(s);

    HlfqPoly *bad = NULL;
    CHECK(hlfq_poly_parse(f, "t^^2", &bad) == HLFQ_STATUS_PARSE);
    CHECK(strstr(hlfq_last_error(), "exponent") != NULL);

    hlfq_poly_free(g);
    hlfq_tuple_free(t);
    hlfq_poly_free(a0);
    hlfq_poly_free(a1);
    hlfq_field_free(f);
    printf("ok\n");
    return 0;
}
