#include <stdio.h>
#include <string.h>
#include "m0n.h"

int main(void) {
    M0nRepTable *t = NULL;
    if (m0n_rep_table_new(6, 4, &t) != M0N_STATUS_OK) return 1;
    uint32_t parts[] = {4, 1};
    int64_t m = -1;
    if (m0n_rep_table_mult(t, M0N_SERIES_P, parts, 2, 1, &m) != M0N_STATUS_OK) return 2;
    printf("mult=%lld\n", (long long)m);
    char *json = NULL;
    if (m0n_rep_table_json(t, M0N_SERIES_Q, 9, &json) != M0N_STATUS_OUT_OF_RANGE) return 3;
    printf("error=%s\n", m0n_last_error_message());
    m0n_rep_table_free(t);

    M0nInvSeries *s = NULL;
    if (m0n_inv_series_new(7, 5, &s) != M0N_STATUS_OK) return 4;
    char *c = NULL;
    if (m0n_inv_series_coeff(s, M0N_SERIES_P, 7, 2, &c) != M0N_STATUS_OK) return 5;
    printf("p72=%s\n", c);
    m0n_string_free(c);
    m0n_inv_series_free(s);
    printf("version=%s\n", m0n_version());
    return 0;
}
