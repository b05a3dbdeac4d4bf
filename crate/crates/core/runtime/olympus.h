/* Olympus abstract machine.
 *
 * Generated units are sequences of the mnemonics defined here. Objects are
 * addressed by frame slot (ADDRL/ADDRF); operations are typed by mnemonic
 * suffix, so nothing in this header inspects a runtime type tag.
 *
 * Build settings: OLYMPUS_HEAP_BYTES, OLYMPUS_INT64, OLYMPUS_REAL32,
 * OLYMPUS_BOUNDS, OLYMPUS_STACK_SLOTS. Generated unit and support unit must
 * be compiled with the same values.
 */
#ifndef OLYMPUS_H
#define OLYMPUS_H

#include <math.h>
#include <stddef.h>
#include <stdint.h>
#include <string.h>

#ifndef OLYMPUS_HEAP_BYTES
#define OLYMPUS_HEAP_BYTES 8388608
#endif
#ifndef OLYMPUS_INT64
#define OLYMPUS_INT64 0
#endif
#ifndef OLYMPUS_REAL32
#define OLYMPUS_REAL32 0
#endif
#ifndef OLYMPUS_BOUNDS
#define OLYMPUS_BOUNDS 1
#endif
/* Small heaps get the micro-core profile for every other table too. */
#if OLYMPUS_HEAP_BYTES <= 65536
#define OLY_MICRO 1
#else
#define OLY_MICRO 0
#endif
#ifndef OLYMPUS_STACK_SLOTS
#define OLYMPUS_STACK_SLOTS (OLY_MICRO ? 1024 : 262144)
#endif
#ifndef OLYMPUS_TEMP_SLOTS
#define OLYMPUS_TEMP_SLOTS (OLY_MICRO ? 128 : 65536)
#endif
#ifndef OLYMPUS_MAX_FRAMES
#define OLYMPUS_MAX_FRAMES (OLY_MICRO ? 128 : 10000)
#endif
#define OLYMPUS_MAX_DEPTH 64

#if OLYMPUS_INT64
typedef int64_t oly_int;
#define OLY_INT_MIN INT64_MIN
#else
typedef int32_t oly_int;
#define OLY_INT_MIN INT32_MIN
#endif
#if OLYMPUS_REAL32
typedef float oly_real;
#else
typedef double oly_real;
#endif
typedef uint32_t oly_handle;

typedef union {
    oly_int i;
    oly_real r;
    oly_handle h;
} oly_slot;

/* Vector elements are stored at their natural width. Each element type is
   wrapped in its own struct so element stores are known not to touch frame
   slots or the handle table. */
typedef struct {
    oly_int v;
} oly_eint;
typedef struct {
    oly_real v;
} oly_ereal;
typedef struct {
    oly_handle v;
} oly_ehnd;

typedef struct {
    oly_slot (*fn)(void);
    int depth;
} oly_function;

/* Heap object header; payload follows, 8-byte aligned. */
typedef struct {
    uint32_t size;
    uint16_t kind;
    uint16_t mark;
    uint32_t len;
    oly_handle handle;
} oly_obj;

enum { OLY_K_STR = 1, OLY_K_CPLX, OLY_K_VECI, OLY_K_VECR, OLY_K_VECH, OLY_K_LAM };

static inline size_t oly_esize(int kind)
{
    return kind == OLY_K_VECI ? sizeof(oly_eint) : kind == OLY_K_VECR ? sizeof(oly_ereal) : sizeof(oly_ehnd);
}

/* Provided by the generated unit. */
extern const oly_function oly_functions[];
extern const int oly_function_count;
oly_slot olympus_main(void);

/* Machine state. */
extern unsigned char oly_heap_mem[];
extern oly_slot oly_stack[];
extern oly_slot *oly_display[];
extern oly_slot oly_tmp[];
/* A pointer, not an index: its stores cannot alias slot contents. */
extern oly_slot *oly_tmp_top;
extern int oly_call_depth;

void oly_trap(const char *fmt, ...) __attribute__((noreturn, format(printf, 1, 2)));

/* Handle table grows down from the top of the heap array. Entries are
   wrapped so element stores are known not to modify them. */
typedef struct {
    uint32_t off;
} oly_hent;

static inline oly_obj *oly_deref(oly_handle h)
{
    const oly_hent *table = (const oly_hent *)(oly_heap_mem + OLYMPUS_HEAP_BYTES);
    return (oly_obj *)(oly_heap_mem + table[-(long)h].off);
}

static inline void *oly_payload(oly_handle h)
{
    return (unsigned char *)oly_deref(h) + sizeof(oly_obj);
}

static inline oly_int oly_len(oly_handle h)
{
    return h ? (oly_int)oly_deref(h)->len : 0;
}

static inline void *oly_velem(oly_handle h, oly_int i, size_t esize)
{
#if OLYMPUS_BOUNDS
    oly_int n = oly_len(h);
    if (i < 0 || i >= n)
        oly_trap("index out of range (%lld, len %lld)", (long long)i, (long long)n);
#endif
    return (unsigned char *)oly_payload(h) + (size_t)i * esize;
}
#define OLY_EI(h, k) ((oly_eint *)oly_velem((h), (k), sizeof(oly_eint)))
#define OLY_ER(h, k) ((oly_ereal *)oly_velem((h), (k), sizeof(oly_ereal)))
#define OLY_EH(h, k) ((oly_ehnd *)oly_velem((h), (k), sizeof(oly_ehnd)))

static inline oly_handle oly_root(oly_handle h)
{
    if (oly_tmp_top >= oly_tmp + OLYMPUS_TEMP_SLOTS)
        oly_trap("temporary stack overflow");
    (oly_tmp_top++)->h = h;
    return h;
}

static inline oly_slot *oly_tmpa(oly_handle h)
{
    oly_root(h);
    return oly_tmp_top - 1;
}

/* Support unit. */
oly_slot *oly_frame_push(int size, const char *map);
void oly_frame_pop(oly_slot *fp, oly_slot *tmp_base);
oly_slot oly_apply(oly_handle lam, const oly_slot *args, int n);
oly_handle oly_mklambda(int fn);
oly_handle oly_alloc(int kind, uint32_t len, size_t payload);
long oly_heap_compact(void);
void oly_heap_stats(long *live_bytes, long *free_bytes, long *collections);

oly_handle oly_slit(const char *s, size_t n);
oly_handle oly_cat(oly_handle a, oly_handle b);
oly_handle oly_reps(oly_handle s, oly_int n);
oly_int oly_eqs(oly_handle a, oly_handle b);
oly_int oly_cmps(oly_handle a, oly_handle b);
oly_handle oly_idxs(oly_handle s, oly_int i);
oly_handle oly_mkvec(int kind, const oly_slot *items, int n);
oly_handle oly_vcat(oly_handle a, oly_handle b);
oly_handle oly_vrep(oly_handle v, oly_int n);

oly_handle oly_mkc(oly_real re, oly_real im);
oly_real oly_cpart(oly_handle c, int imag);
void oly_cset(oly_slot *at, int imag, oly_real v);
oly_handle oly_cadd(oly_handle a, oly_handle b);
oly_handle oly_csub(oly_handle a, oly_handle b);
oly_handle oly_cmul(oly_handle a, oly_handle b);
oly_handle oly_cdiv(oly_handle a, oly_handle b);
oly_handle oly_cneg(oly_handle a);
oly_int oly_ceq(oly_handle a, oly_handle b);

oly_real oly_divr(oly_real a, oly_real b);
oly_int oly_modi(oly_int a, oly_int b);
oly_real oly_modr(oly_real a, oly_real b);
oly_int oly_powi(oly_int a, oly_int b);
oly_real oly_powr(oly_real a, oly_real b);
oly_int oly_int_r(oly_real v);
oly_int oly_int_s(oly_handle s);
oly_real oly_real_s(oly_handle s);
oly_handle oly_str_i(oly_int v);
oly_handle oly_str_r(oly_real v);
oly_handle oly_str_b(oly_int v);
oly_handle oly_str_c(oly_handle c);
oly_int oly_absi(oly_int v);
oly_real oly_absc(oly_handle c);
oly_handle oly_input(void);

void oly_put_i(oly_int v);
void oly_put_r(oly_real v);
void oly_put_b(oly_int v);
void oly_put_s(oly_handle s);
void oly_put_c(oly_handle c);
void oly_put_v(oly_handle v, const char *desc);
void oly_put_sp(void);
void oly_put_nl(void);

/* ---- mnemonics ---- */

#define OLY_END_STMT (oly_tmp_top = oly_tb)

#define FRAME(size, map)                                   \
    oly_slot *const oly_fp = oly_frame_push((size), (map)); \
    oly_slot *const oly_tb = oly_tmp_top;                     \
    const int oly_d = oly_call_depth;                      \
    (void)oly_fp;                                          \
    (void)oly_tb;                                          \
    (void)oly_d

#define ADDRL(o) (&oly_fp[(o)])
#define ADDRF(l, o) (&oly_display[oly_d - (l)][(o)])
#define TMPA(h) oly_tmpa(h)
#define ID(a) ((oly_int)((a) - oly_stack))

#define OLY_DECL(o) do { memset(&oly_fp[(o)], 0, sizeof(oly_slot)); OLY_END_STMT; } while (0)
#define DECLI(o) OLY_DECL(o)
#define DECLR(o) OLY_DECL(o)
#define DECLB(o) OLY_DECL(o)
#define DECLS(o) OLY_DECL(o)
#define DECLC(o) OLY_DECL(o)
#define DECLV(o) OLY_DECL(o)
#define DECLL(o) OLY_DECL(o)

#define LDI(a) ((a)->i)
#define LDR(a) ((a)->r)
#define LDS(a) oly_root((a)->h)
#define LDC(a) oly_root((a)->h)
#define LDV(a) oly_root((a)->h)
#define LDL(a) oly_root((a)->h)

#define OLY_ST(field, T, a, v) do { oly_slot *p_ = (a); T v_ = (v); p_->field = v_; OLY_END_STMT; } while (0)
#define STI(a, v) OLY_ST(i, oly_int, a, v)
#define STR(a, v) OLY_ST(r, oly_real, a, v)
#define STS(a, v) OLY_ST(h, oly_handle, a, v)
#define STC(a, v) OLY_ST(h, oly_handle, a, v)
#define STV(a, v) OLY_ST(h, oly_handle, a, v)
#define STL(a, v) OLY_ST(h, oly_handle, a, v)

#define LDCR(a) oly_cpart((a)->h, 0)
#define LDCI(a) oly_cpart((a)->h, 1)
#define STCR(a, v) do { oly_slot *p_ = (a); oly_real v_ = (v); oly_cset(p_, 0, v_); OLY_END_STMT; } while (0)
#define STCI(a, v) do { oly_slot *p_ = (a); oly_real v_ = (v); oly_cset(p_, 1, v_); OLY_END_STMT; } while (0)

#define LDAI(a, k) (OLY_EI((a)->h, (k))->v)
#define LDAR(a, k) (OLY_ER((a)->h, (k))->v)
#define LDAS(a, k) oly_root(OLY_EH((a)->h, (k))->v)
#define LDAC(a, k) oly_root(OLY_EH((a)->h, (k))->v)
#define LDAV(a, k) oly_root(OLY_EH((a)->h, (k))->v)

#define OLY_STA(E, T, a, k, val)                               \
    do {                                                           \
        oly_slot *p_ = (a);                                        \
        oly_int k_ = (k);                                          \
        T v_ = (val);                                              \
        E(p_->h, k_)->v = v_;                                      \
        OLY_END_STMT;                                              \
    } while (0)
#define STAI(a, k, x) OLY_STA(OLY_EI, oly_int, a, k, x)
#define STAR(a, k, x) OLY_STA(OLY_ER, oly_real, a, k, x)
#define STAS(a, k, x) OLY_STA(OLY_EH, oly_handle, a, k, x)
#define STAC(a, k, x) OLY_STA(OLY_EH, oly_handle, a, k, x)
#define STAV(a, k, x) OLY_STA(OLY_EH, oly_handle, a, k, x)

/* Every opener starts two blocks so one END closes any construct. */
#define FOR(v, s, e, st)                                     \
    {                                                        \
        oly_int v = (s);                                     \
        const oly_int v##_step = (st);                       \
        if (v##_step == 0)                                   \
            oly_trap("range() step must not be zero");       \
        for (; v##_step > 0 ? v < (e) : v > (e); v += v##_step) {
#define WHILE(c) { while (OLY_END_STMT, (c)) {
#define IF(c) { if (c) {
#define ELSE } else {
#define END }}
#define EVAL(x) do { (void)(x); OLY_END_STMT; } while (0)

#define MKLAMBDA(fn) oly_mklambda(fn)
#define ARGS(...) (const oly_slot[]){__VA_ARGS__}, (int)(sizeof((oly_slot[]){__VA_ARGS__}) / sizeof(oly_slot))
#define NOARGS (const oly_slot *)0, 0
#define ARG_I(x) {.i = (x)}
#define ARG_R(x) {.r = (x)}
#define ARG_S(x) {.h = (x)}
#define ARG_C(x) {.h = (x)}
#define ARG_V(x) {.h = (x)}
#define ARG_L(x) {.h = (x)}
#define APPLY_I(f, args) (oly_apply((f), args).i)
#define APPLY_R(f, args) (oly_apply((f), args).r)
#define APPLY_S(f, args) (oly_apply((f), args).h)
#define APPLY_C(f, args) (oly_apply((f), args).h)
#define APPLY_V(f, args) (oly_apply((f), args).h)
#define APPLY_N(f, args) ((void)oly_apply((f), args))

/* The return value leaves the frame before it is retracted; a handle result
 * is re-rooted in the caller's temporaries. */
#define RET_I(v) do { oly_slot r_; r_.i = (v); oly_frame_pop(oly_fp, oly_tb); return r_; } while (0)
#define RET_R(v) do { oly_slot r_; r_.r = (v); oly_frame_pop(oly_fp, oly_tb); return r_; } while (0)
#define OLY_RET_H(v) do { oly_slot r_; r_.h = (v); oly_frame_pop(oly_fp, oly_tb); oly_root(r_.h); return r_; } while (0)
#define RET_S(v) OLY_RET_H(v)
#define RET_C(v) OLY_RET_H(v)
#define RET_V(v) OLY_RET_H(v)
#define RET_N do { oly_slot r_; r_.i = 0; oly_frame_pop(oly_fp, oly_tb); return r_; } while (0)

#define TRUE ((oly_int)1)
#define FALSE ((oly_int)0)
#define OLY_INF ((oly_real)INFINITY)
#define OLY_NAN ((oly_real)NAN)
#define SLIT(s, n) oly_slit((s), (n))
#define MKC(re, im) oly_mkc((re), (im))
#define MKVEC_I(args) oly_mkvec(OLY_K_VECI, args)
#define MKVEC_R(args) oly_mkvec(OLY_K_VECR, args)
#define MKVEC_S(args) oly_mkvec(OLY_K_VECH, args)
#define MKVEC_C(args) oly_mkvec(OLY_K_VECH, args)
#define MKVEC_V(args) oly_mkvec(OLY_K_VECH, args)

#define DIVR(a, b) oly_divr((a), (b))
#define MODI(a, b) oly_modi((a), (b))
#define MODR(a, b) oly_modr((a), (b))
#define POWI(a, b) oly_powi((a), (b))
#define POWR(a, b) oly_powr((a), (b))
#define CADD(a, b) oly_cadd((a), (b))
#define CSUB(a, b) oly_csub((a), (b))
#define CMUL(a, b) oly_cmul((a), (b))
#define CDIV(a, b) oly_cdiv((a), (b))
#define CNEG(a) oly_cneg(a)
#define CEQ(a, b) oly_ceq((a), (b))

#define CAT(a, b) oly_cat((a), (b))
#define REPS(s, n) oly_reps((s), (n))
#define EQS(a, b) oly_eqs((a), (b))
#define CMPS(a, b) oly_cmps((a), (b))
#define IDXS(s, i) oly_idxs((s), (i))
#define LENS(s) oly_len(s)
#define LEN(v) oly_len(v)
#define VCAT(a, b) oly_vcat((a), (b))
#define VREP(v, n) oly_vrep((v), (n))

#define INT_R(v) oly_int_r(v)
#define INT_S(s) oly_int_s(s)
#define REAL_I(v) ((oly_real)(v))
#define REAL_S(s) oly_real_s(s)
#define STR_I(v) oly_str_i(v)
#define STR_R(v) oly_str_r(v)
#define STR_B(v) oly_str_b(v)
#define STR_C(c) oly_str_c(c)
#define ABSI(v) oly_absi(v)
#define ABSR(v) ((oly_real)fabs(v))
#define ABSC(c) oly_absc(c)
#define INPUT() oly_input()

#define PUT_I(v) do { oly_put_i(v); OLY_END_STMT; } while (0)
#define PUT_R(v) do { oly_put_r(v); OLY_END_STMT; } while (0)
#define PUT_B(v) do { oly_put_b(v); OLY_END_STMT; } while (0)
#define PUT_S(v) do { oly_put_s(v); OLY_END_STMT; } while (0)
#define PUT_C(v) do { oly_put_c(v); OLY_END_STMT; } while (0)
#define PUT_V(v, d) do { oly_put_v((v), (d)); OLY_END_STMT; } while (0)
#define PUT_SP() oly_put_sp()
#define PRINT_I(v) do { oly_put_i(v); oly_put_nl(); OLY_END_STMT; } while (0)
#define PRINT_R(v) do { oly_put_r(v); oly_put_nl(); OLY_END_STMT; } while (0)
#define PRINT_B(v) do { oly_put_b(v); oly_put_nl(); OLY_END_STMT; } while (0)
#define PRINT_S(v) do { oly_put_s(v); oly_put_nl(); OLY_END_STMT; } while (0)
#define PRINT_C(v) do { oly_put_c(v); oly_put_nl(); OLY_END_STMT; } while (0)
#define PRINT_V(v, d) do { oly_put_v((v), (d)); oly_put_nl(); OLY_END_STMT; } while (0)
#define PRINT_NL() oly_put_nl()

#endif
