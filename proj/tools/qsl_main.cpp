#include <stdio.h>

#include "qsl/qsl_c.h"

int main(int argc, char** argv) {
  char* output = NULL;
  int exit_code = 2;
  qsl_status st = qsl_run(argc - 1, (const char* const*)(argv + 1), &output, &exit_code);
  if (st != QSL_OK) {
    fprintf(stderr, "qsl: %s\n", qsl_last_error());
    return 2;
  }
  fputs(output, stdout);
  qsl_string_free(output);
  return exit_code;
}
