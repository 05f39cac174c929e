/* Compiled as C: the public header must stay valid C11 and the handles must
 * be usable from C. */
#include "idmps/idmps.h"

#include <stdlib.h>

int idmps_c_smoke(void) {
  idmps_state* s = NULL;
  idmps_state* r = NULL;
  double f = 0.0;
  int ok = 0;
  if (idmps_state_build("su2_1", "0", 4, 1.0, 0, &s) != IDMPS_OK) return 0;
  if (idmps_state_reference("hs", 4, &r) == IDMPS_OK && idmps_state_fidelity(s, r, &f) == IDMPS_OK) {
    ok = idmps_state_sites(s) == 4 && idmps_state_local_dim(s) == 2 && f > 0.0 && f <= 1.0 + 1e-12;
  }
  idmps_state_free(r);
  idmps_state_free(s);
  return ok;
}

int idmps_c_error_path(void) {
  idmps_state* s = NULL;
  idmps_status st = idmps_state_build("su2_1", "0", 3, 1.0, 0, &s);
  return st == IDMPS_ERR_INPUT && s == NULL && idmps_last_error()[0] != '\0';
}
