#include <stdio.h>
#include <string.h>
#include "nilalg.h"

#define CHECK(cond)                                               \
    do {                                                          \
        if (!(cond)) {                                            \
            fprintf(stderr, "failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                             \
        }                                                         \
    } while (0)

int main(void) {
    NilalgTower *t = NULL;
    const char *spec = "{\"f\": [\"2\"], \"g\": [\"1\"], \"slots\": [{\"words\": [\"xxxx\"]}]}";
    CHECK(nilalg_tower_build(spec, 2, 5, &t) == NILALG_STATUS_OK);
    uint32_t k = 0;
    CHECK(nilalg_tower_max_level(t, &k) == NILALG_STATUS_OK && k == 5);
    bool nil = false;
    CHECK(nilalg_nil_check(t, "x", 8, &nil) == NILALG_STATUS_OK && nil);
    CHECK(nilalg_nil_check(t, "x", 1, &nil) == NILALG_STATUS_OK && !nil);
    size_t d = 0;
    CHECK(nilalg_quotient_dim(t, 1, &d) == NILALG_STATUS_OK && d == 2);
    char *csv = NULL;
    CHECK(nilalg_hilbert_csv(t, 2, 2, "log2", &csv) == NILALG_STATUS_OK);
    CHECK(strncmp(csv, "n,exact_dim", 11) == 0);
    nilalg_string_free(csv);
    CHECK(nilalg_nil_check(t, "x + xy", 2, &nil) == NILALG_STATUS_PARSE);
    CHECK(nilalg_last_error() != NULL);
    nilalg_tower_free(t);
    printf("ok %s\n", nilalg_version());
    return 0;
}
