#include <stdio.h>
#include "gcsim.h"

int main(void) {
    GcsimBlocking b;
    if (gcsim_oracle_blocking(10, 2, 6.0, 2.0, 1.0, &b) != GCSIM_STATUS_OK) {
        char msg[256];
        gcsim_last_error(msg, sizeof msg);
        fprintf(stderr, "oracle: %s\n", msg);
        return 1;
    }
    printf("P_new %.6f\nP_handoff %.6f\n", b.new_call, b.handoff);
    return 0;
}
