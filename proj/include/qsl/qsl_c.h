/* C interface to the finite quantale / sheaf workbench.
 *
 * Handles are opaque; every constructor returns QSL_OK and writes a handle,
 * or returns an error status and leaves *out untouched. Rich results travel
 * as JSON strings that the caller releases with qsl_string_free. The last
 * failing call's message is kept per thread in qsl_last_error().
 */
#ifndef QSL_C_H
#define QSL_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qsl_quantale qsl_quantale;
typedef struct qsl_presheaf qsl_presheaf;

typedef enum {
  QSL_OK = 0,
  QSL_ERR_LAW = 1,          /* a checked algebraic law failed */
  QSL_ERR_PARSE = 2,        /* syntax, references, usage */
  QSL_ERR_CAP = 3,          /* enumeration cap or search budget */
  QSL_ERR_PRECONDITION = 4, /* operation undefined for this input */
  QSL_ERR_BAD_ARG = 5,
} qsl_status;

const char* qsl_last_error(void);
void qsl_string_free(char* s);

/* ---- quantales ---- */

qsl_status qsl_quantale_chain(int k, qsl_quantale** out);
qsl_status qsl_quantale_divisor(long long n, qsl_quantale** out);
qsl_status qsl_quantale_powerset(int m, qsl_quantale** out);
/* leq: n*n row-major 0/1; mult: n*n row-major element indices */
qsl_status qsl_quantale_from_tables(int n, const unsigned char* leq, const int* mult,
                                    qsl_quantale** out);
/* text of a qsl v1 document; the first [quantale] section is built */
qsl_status qsl_quantale_parse(const char* text, qsl_quantale** out);
void qsl_quantale_free(qsl_quantale* q);

int qsl_quantale_size(const qsl_quantale* q);
int qsl_quantale_leq(const qsl_quantale* q, int a, int b);
int qsl_quantale_mult(const qsl_quantale* q, int a, int b);
int qsl_quantale_join(const qsl_quantale* q, int a, int b);
int qsl_quantale_meet(const qsl_quantale* q, int a, int b);
int qsl_quantale_bottom(const qsl_quantale* q);
int qsl_quantale_top(const qsl_quantale* q);
int qsl_quantale_unit(const qsl_quantale* q); /* -1 when no unit exists */
/* resolves a label, the keywords top/bottom/unit, or an index; -1 unknown */
int qsl_quantale_element(const qsl_quantale* q, const char* token);
qsl_status qsl_quantale_label(const qsl_quantale* q, int a, char** out);
qsl_status qsl_quantale_profile_json(const qsl_quantale* q, char** json_out);

qsl_status qsl_approx_minus(const qsl_quantale* q, int x, int* out);
qsl_status qsl_approx_plus(const qsl_quantale* q, int x, int* out);
int qsl_residual(const qsl_quantale* q, int a, int b);
qsl_status qsl_power_stabilization(const qsl_quantale* q, int x, int* index_out,
                                   int* value_out);

/* ---- presheaves ---- */

qsl_status qsl_presheaf_terminal(const qsl_quantale* q, qsl_presheaf** out);
qsl_status qsl_presheaf_representable(const qsl_quantale* q, int v, qsl_presheaf** out);
/* variant: 0 = minus, 1 = plus */
qsl_status qsl_presheaf_omega(const qsl_quantale* q, int variant, qsl_presheaf** out);
void qsl_presheaf_free(qsl_presheaf* f);

int qsl_presheaf_stalk(const qsl_presheaf* f, int u);
int qsl_presheaf_restrict(const qsl_presheaf* f, int u, int v, int s);
qsl_status qsl_sheaf_check_json(const qsl_presheaf* f, long long cover_cap, char** json_out);

/* ---- whole-run entry point (used by the CLI) ---- */

/* argv excludes the program name. Writes the rendered report and the CLI
 * exit code (0 verdicts positive, 1 law failed, 2 usage/parse, 3 capped). */
qsl_status qsl_run(int argc, const char* const* argv, char** output, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* QSL_C_H */
