/* Build: cargo build --release -p cve-ffi
 *        cc -Icrates/ffi/include crates/ffi/examples/smoke.c \
 *           target/release/libcve_ffi.a -lpthread -ldl -lm -o smoke */
#include <stdio.h>
#include "cve_ffi.h"

int main(void) {
    CveCircuit *c = NULL;
    double e = 0.0, lambda = 0.0, oracle = 0.0;
    size_t cutoff = 0;
    bool sep = true;

    if (cve_circuit_new(0.7853981633974483, 0.0, -1.0, 0.0, 1.0, 0.0, &c) != CVE_STATUS_OK) {
        fprintf(stderr, "%s\n", cve_last_error());
        return 1;
    }
    cve_circuit_entropy(c, &e);
    cve_circuit_lambda(c, &lambda);
    cve_circuit_is_separable(c, &sep);
    cve_circuit_oracle_entropy(c, &oracle, &cutoff);
    printf("entropy %.12f lambda %.12f separable %d oracle %.12f cutoff %zu\n",
           e, lambda, sep, oracle, cutoff);
    cve_circuit_free(c);

    double spectrum[3];
    size_t len = 0;
    cve_fock_spectrum(1, 1, 0.7853981633974483, spectrum, 3, &len);
    printf("fock spectrum %zu: %.3f %.3f %.3f\n", len, spectrum[0], spectrum[1], spectrum[2]);

    CveStatus s = cve_circuit_new(0.0, 0.0, 9.0, 0.0, 0.0, 0.0, &c);
    printf("status %d: %s\n", (int)s, cve_last_error());
    return 0;
}
