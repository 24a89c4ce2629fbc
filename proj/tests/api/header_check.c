/* The public header must compile as plain C. */
#include "edgerecon/edgerecon.h"

int c_header_default_iters(void) {
  er_recon_options o;
  er_recon_options_init(&o);
  return o.max_iters;
}
