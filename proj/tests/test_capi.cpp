// Exercises the shared-library surface exactly as an external client would:
// opaque handles, status codes, JSON strings.
#include <assert.h>
#include <stdio.h>
#include <string.h>

#include "qsl/qsl_c.h"

static int failures = 0;

#define REQUIRE(cond)                                                       \
  do {                                                                      \
    if (!(cond)) {                                                          \
      fprintf(stderr, "[FAIL] %s:%d: %s\n", __FILE__, __LINE__, #cond);     \
      ++failures;                                                           \
    }                                                                       \
  } while (0)

static void test_chain(void) {
  qsl_quantale* q = NULL;
  REQUIRE(qsl_quantale_chain(3, &q) == QSL_OK);
  REQUIRE(qsl_quantale_size(q) == 4);
  REQUIRE(qsl_quantale_top(q) == 0);
  REQUIRE(qsl_quantale_bottom(q) == 3);
  REQUIRE(qsl_quantale_unit(q) == 0);
  REQUIRE(qsl_quantale_leq(q, 2, 1) == 1);
  REQUIRE(qsl_quantale_leq(q, 1, 2) == 0);
  REQUIRE(qsl_quantale_mult(q, 1, 2) == 3);
  REQUIRE(qsl_quantale_join(q, 1, 2) == 1);
  REQUIRE(qsl_quantale_meet(q, 1, 2) == 2);
  REQUIRE(qsl_quantale_element(q, "top") == 0);
  REQUIRE(qsl_quantale_element(q, "nope") == -1);

  int out = -1;
  REQUIRE(qsl_approx_minus(q, 1, &out) == QSL_OK && out == 3);
  REQUIRE(qsl_approx_plus(q, 1, &out) == QSL_OK && out == 0);
  REQUIRE(qsl_residual(q, 1, 2) == 1);

  int k = 0, v = -1;
  REQUIRE(qsl_power_stabilization(q, 1, &k, &v) == QSL_OK);
  REQUIRE(k == 3 && v == 3);

  char* json = NULL;
  REQUIRE(qsl_quantale_profile_json(q, &json) == QSL_OK);
  REQUIRE(strstr(json, "\"geometric\":true") != NULL);
  REQUIRE(strstr(json, "\"coherent\":false") != NULL);
  qsl_string_free(json);

  char* label = NULL;
  REQUIRE(qsl_quantale_label(q, 3, &label) == QSL_OK);
  REQUIRE(strcmp(label, "3") == 0);
  qsl_string_free(label);
  REQUIRE(qsl_quantale_label(q, 9, &label) == QSL_ERR_BAD_ARG);

  qsl_quantale_free(q);
}

static void test_tables_and_errors(void) {
  /* 2-chain as raw tables */
  unsigned char leq[4] = {1, 1, 0, 1};
  int mult[4] = {0, 0, 0, 1};
  qsl_quantale* q = NULL;
  REQUIRE(qsl_quantale_from_tables(2, leq, mult, &q) == QSL_OK);
  REQUIRE(qsl_quantale_size(q) == 2);
  qsl_quantale_free(q);

  /* broken multiplication is refused with a law status */
  int bad_mult[4] = {1, 0, 0, 1};
  qsl_quantale* nope = NULL;
  qsl_status st = qsl_quantale_from_tables(2, leq, bad_mult, &nope);
  REQUIRE(st == QSL_ERR_LAW);
  REQUIRE(strlen(qsl_last_error()) > 0);

  REQUIRE(qsl_quantale_parse("qsl v1\n[quantale]\ngenerator = chain 2\n", &q) == QSL_OK);
  REQUIRE(qsl_quantale_size(q) == 3);
  qsl_quantale_free(q);
  REQUIRE(qsl_quantale_parse("garbage", &q) == QSL_ERR_PARSE);
}

static void test_presheaves(void) {
  qsl_quantale* q = NULL;
  REQUIRE(qsl_quantale_chain(3, &q) == QSL_OK);

  qsl_presheaf* one = NULL;
  REQUIRE(qsl_presheaf_terminal(q, &one) == QSL_OK);
  for (int u = 0; u < 4; ++u) REQUIRE(qsl_presheaf_stalk(one, u) == 1);

  qsl_presheaf* om = NULL;
  REQUIRE(qsl_presheaf_omega(q, 0, &om) == QSL_OK);
  REQUIRE(qsl_presheaf_stalk(om, 0) == 4);
  REQUIRE(qsl_presheaf_stalk(om, 1) == 1);
  REQUIRE(qsl_presheaf_restrict(om, 0, 1, 2) == 0);

  char* json = NULL;
  REQUIRE(qsl_sheaf_check_json(om, 0, &json) == QSL_OK);
  REQUIRE(strstr(json, "\"sheaf\":true") != NULL);
  qsl_string_free(json);

  /* plus truth presheaf exists structurally but fails the sheaf condition */
  qsl_presheaf* op = NULL;
  REQUIRE(qsl_presheaf_omega(q, 1, &op) == QSL_OK);
  REQUIRE(qsl_sheaf_check_json(op, 0, &json) == QSL_OK);
  REQUIRE(strstr(json, "\"sheaf\":false") != NULL);
  qsl_string_free(json);

  /* and is refused outright on a non-unital base */
  qsl_quantale* iv = NULL;
  REQUIRE(qsl_quantale_parse(
              "qsl v1\n[quantale]\ngenerator = interval(divisor 12, (0), (2))\n", &iv) ==
          QSL_OK);
  qsl_presheaf* refused = NULL;
  REQUIRE(qsl_presheaf_omega(iv, 1, &refused) == QSL_ERR_PRECONDITION);

  qsl_presheaf_free(one);
  qsl_presheaf_free(om);
  qsl_presheaf_free(op);
  qsl_quantale_free(q);
  qsl_quantale_free(iv);
}

static void test_run(void) {
  const char* argv[] = {"fuzz", "--size", "2", "--seek", "locale", "--format", "machine"};
  char* output = NULL;
  int code = -1;
  REQUIRE(qsl_run(7, argv, &output, &code) == QSL_OK);
  REQUIRE(code == 0);
  REQUIRE(strstr(output, "\"found\": true") != NULL);
  qsl_string_free(output);

  const char* bad[] = {"unknown-subcommand"};
  REQUIRE(qsl_run(1, bad, &output, &code) == QSL_OK);
  REQUIRE(code == 2);
  qsl_string_free(output);
}

int main(void) {
  test_chain();
  test_tables_and_errors();
  test_presheaves();
  test_run();
  if (failures) {
    fprintf(stderr, "%d C API checks failed\n", failures);
    return 1;
  }
  printf("C API surface: all checks passed\n");
  return 0;
}
