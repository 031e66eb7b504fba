#include <stdio.h>

#include "canvar.h"

int main(void) {
    CanvarChart *chart = NULL;
    if (canvar_chart_open_varied("berger_s3", "E", -2.0, &chart) != CANVAR_STATUS_OK) {
        fprintf(stderr, "%s\n", canvar_last_error());
        return 1;
    }
    double p[3] = {0.5, 0.2, -0.4};
    double scalar = 0.0;
    CanvarStatus st = canvar_curvature(chart, p, 3, CANVAR_MODE_FORWARD_EXACT, &scalar, NULL, NULL, NULL);
    canvar_chart_free(chart);
    if (st != CANVAR_STATUS_OK) {
        fprintf(stderr, "%s\n", canvar_last_error());
        return 1;
    }
    printf("canvar %s scalar %f\n", canvar_version(), scalar);

    if (canvar_chart_open("nowhere", &chart) != CANVAR_STATUS_UNKNOWN_MANIFOLD) {
        return 1;
    }
    return 0;
}
