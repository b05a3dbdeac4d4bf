/* Olympus support unit: frames, display, compacting heap, runtime helpers
 * and the process entry point. */
#include "olympus.h"

#include <ctype.h>
#include <errno.h>
#include <stdarg.h>
#include <stdio.h>
#include <stdlib.h>
#include <strings.h>

#define OLY_HDR ((uint32_t)sizeof(oly_obj))
#define OLY_FREE_BIT 0x80000000u

unsigned char oly_heap_mem[OLYMPUS_HEAP_BYTES] __attribute__((aligned(8)));
oly_slot oly_stack[OLYMPUS_STACK_SLOTS];
oly_slot *oly_display[OLYMPUS_MAX_DEPTH];
oly_slot oly_tmp[OLYMPUS_TEMP_SLOTS];
oly_slot *oly_tmp_top = oly_tmp;
int oly_call_depth;

/* Frame records: base slot index and slot map ('h' = handle). */
static uint32_t oly_frame_base[OLYMPUS_MAX_FRAMES];
static const char *oly_frame_map[OLYMPUS_MAX_FRAMES];
static int oly_frames;
static uint32_t oly_sp;

static const oly_slot *oly_args;
static int oly_nargs;

/* Heap: objects bump upward from 0, handle entries grow down from the top. */
static uint32_t oly_bump;
static uint32_t oly_handles;   /* table entries in use, live or free */
static uint32_t oly_free_head; /* free handle list, 0 = empty */
static long oly_collections;

void oly_trap(const char *fmt, ...)
{
    va_list ap;
    fflush(stdout);
    fputs("trap: ", stderr);
    va_start(ap, fmt);
    vfprintf(stderr, fmt, ap);
    va_end(ap);
    fputc('\n', stderr);
    exit(2);
}

static oly_hent *oly_table(void)
{
    return (oly_hent *)(oly_heap_mem + OLYMPUS_HEAP_BYTES);
}

/* ---- frames ---- */

oly_slot *oly_frame_push(int size, const char *map)
{
    if (oly_frames >= OLYMPUS_MAX_FRAMES || oly_sp + (uint32_t)size > OLYMPUS_STACK_SLOTS)
        oly_trap("stack overflow");
    if (oly_call_depth >= OLYMPUS_MAX_DEPTH)
        oly_trap("nesting too deep");
    oly_slot *fp = &oly_stack[oly_sp];
    memset(fp, 0, sizeof(oly_slot) * (size_t)size);
    for (int k = 0; k < oly_nargs; k++)
        fp[k] = oly_args[k];
    oly_nargs = 0;
    oly_frame_base[oly_frames] = oly_sp;
    oly_frame_map[oly_frames] = map;
    oly_frames++;
    oly_sp += (uint32_t)size;
    oly_display[oly_call_depth] = fp;
    return fp;
}

void oly_frame_pop(oly_slot *fp, oly_slot *tmp_base)
{
    oly_frames--;
    oly_sp = (uint32_t)(fp - oly_stack);
    oly_tmp_top = tmp_base;
}

/* ---- heap ---- */

static void oly_mark(oly_handle h)
{
    while (h) {
        oly_obj *o = oly_deref(h);
        if (o->mark)
            return;
        o->mark = 1;
        if (o->kind != OLY_K_VECH || o->len == 0)
            return;
        oly_ehnd *items = (oly_ehnd *)((unsigned char *)o + OLY_HDR);
        for (uint32_t k = 0; k + 1 < o->len; k++)
            oly_mark(items[k].v);
        h = items[o->len - 1].v;
    }
}

long oly_heap_compact(void)
{
    oly_hent *table = oly_table();
    for (int f = 0; f < oly_frames; f++) {
        const char *map = oly_frame_map[f];
        oly_slot *base = &oly_stack[oly_frame_base[f]];
        for (int k = 0; map[k]; k++)
            if (map[k] == 'h')
                oly_mark(base[k].h);
    }
    for (oly_slot *t = oly_tmp; t < oly_tmp_top; t++)
        oly_mark(t->h);

    /* Slide live objects down; the handle table absorbs every move, so no
     * root needs rewriting. */
    uint32_t src = 0, dst = 0;
    while (src < oly_bump) {
        oly_obj *o = (oly_obj *)(oly_heap_mem + src);
        uint32_t size = o->size;
        if (o->mark) {
            o->mark = 0;
            table[-(long)o->handle].off = dst;
            if (dst != src)
                memmove(oly_heap_mem + dst, o, size);
            dst += size;
        } else {
            table[-(long)o->handle].off = OLY_FREE_BIT | oly_free_head;
            oly_free_head = o->handle;
        }
        src += size;
    }
    long freed = (long)(oly_bump - dst);
    oly_bump = dst;
    oly_collections++;
    return freed;
}

void oly_heap_stats(long *live_bytes, long *free_bytes, long *collections)
{
    if (live_bytes)
        *live_bytes = (long)oly_bump;
    if (free_bytes)
        *free_bytes = (long)OLYMPUS_HEAP_BYTES - (long)oly_bump - 4L * (long)oly_handles;
    if (collections)
        *collections = oly_collections;
}

static int oly_fits(uint32_t size)
{
    uint64_t table_bytes = 4ull * (oly_handles + (oly_free_head ? 0 : 1));
    return (uint64_t)oly_bump + size + table_bytes <= (uint64_t)OLYMPUS_HEAP_BYTES;
}

oly_handle oly_alloc(int kind, uint32_t len, size_t payload)
{
    uint64_t want = ((uint64_t)OLY_HDR + payload + 7u) & ~(uint64_t)7u;
    if (want > OLYMPUS_HEAP_BYTES)
        oly_trap("heap exhausted (request of %llu bytes)", (unsigned long long)want);
    uint32_t size = (uint32_t)want;
    if (!oly_fits(size)) {
        oly_heap_compact();
        if (!oly_fits(size))
            oly_trap("heap exhausted (%u bytes requested)", size);
    }
    oly_hent *table = oly_table();
    oly_handle h;
    if (oly_free_head) {
        h = oly_free_head;
        oly_free_head = table[-(long)h].off & ~OLY_FREE_BIT;
    } else {
        h = ++oly_handles;
    }
    oly_obj *o = (oly_obj *)(oly_heap_mem + oly_bump);
    memset(o, 0, size);
    o->size = size;
    o->kind = (uint16_t)kind;
    o->len = len;
    o->handle = h;
    table[-(long)h].off = oly_bump;
    oly_bump += size;
    return oly_root(h);
}

/* ---- closures and calls ---- */

typedef struct {
    int32_t fn;
    int32_t depth;
    oly_slot *env[];
} oly_lambda;

oly_handle oly_mklambda(int fn)
{
    int depth = oly_functions[fn].depth;
    oly_handle h = oly_alloc(OLY_K_LAM, 0, sizeof(oly_lambda) + sizeof(oly_slot *) * (size_t)depth);
    oly_lambda *l = oly_payload(h);
    l->fn = fn;
    l->depth = depth;
    for (int k = 0; k < depth; k++)
        l->env[k] = oly_display[k];
    return h;
}

oly_slot oly_apply(oly_handle lam, const oly_slot *args, int n)
{
    if (!lam)
        oly_trap("call of an unbound function");
    oly_lambda *l = oly_payload(lam);
    int fn = l->fn, depth = l->depth;
    if (depth >= OLYMPUS_MAX_DEPTH)
        oly_trap("nesting too deep");
    oly_slot *saved[depth + 1];
    memcpy(saved, oly_display, sizeof(oly_slot *) * (size_t)(depth + 1));
    memcpy(oly_display, l->env, sizeof(oly_slot *) * (size_t)depth);
    int caller_depth = oly_call_depth;
    oly_args = args;
    oly_nargs = n;
    oly_call_depth = depth;
    oly_slot r = oly_functions[fn].fn();
    oly_call_depth = caller_depth;
    memcpy(oly_display, saved, sizeof(oly_slot *) * (size_t)(depth + 1));
    return r;
}

/* ---- strings ---- */

static const char *oly_chars(oly_handle s)
{
    return s ? (const char *)oly_payload(s) : "";
}

oly_handle oly_slit(const char *s, size_t n)
{
    if (n == 0)
        return 0;
    oly_handle h = oly_alloc(OLY_K_STR, (uint32_t)n, n);
    memcpy(oly_payload(h), s, n);
    return h;
}

oly_handle oly_cat(oly_handle a, oly_handle b)
{
    oly_int na = oly_len(a), nb = oly_len(b);
    if (na + nb == 0)
        return 0;
    oly_handle h = oly_alloc(OLY_K_STR, (uint32_t)(na + nb), (size_t)(na + nb));
    char *p = oly_payload(h);
    memcpy(p, oly_chars(a), (size_t)na);
    memcpy(p + na, oly_chars(b), (size_t)nb);
    return h;
}

oly_handle oly_reps(oly_handle s, oly_int n)
{
    oly_int len = oly_len(s);
    if (n <= 0 || len == 0)
        return 0;
    if ((uint64_t)len * (uint64_t)n > OLYMPUS_HEAP_BYTES)
        oly_trap("heap exhausted (string of %lld bytes)", (long long)len * (long long)n);
    oly_handle h = oly_alloc(OLY_K_STR, (uint32_t)(len * n), (size_t)(len * n));
    char *p = oly_payload(h);
    const char *src = oly_chars(s);
    for (oly_int k = 0; k < n; k++)
        memcpy(p + k * len, src, (size_t)len);
    return h;
}

oly_int oly_cmps(oly_handle a, oly_handle b)
{
    oly_int na = oly_len(a), nb = oly_len(b);
    int c = memcmp(oly_chars(a), oly_chars(b), (size_t)(na < nb ? na : nb));
    if (c)
        return c < 0 ? -1 : 1;
    return na < nb ? -1 : na > nb;
}

oly_int oly_eqs(oly_handle a, oly_handle b)
{
    return oly_cmps(a, b) == 0;
}

oly_handle oly_idxs(oly_handle s, oly_int i)
{
    oly_int n = oly_len(s);
    if (i < 0 || i >= n)
        oly_trap("index out of range (%lld, len %lld)", (long long)i, (long long)n);
    char c = oly_chars(s)[i];
    return oly_slit(&c, 1);
}

/* ---- vectors ---- */

oly_handle oly_mkvec(int kind, const oly_slot *items, int n)
{
    oly_handle h = oly_alloc(kind, (uint32_t)n, oly_esize(kind) * (size_t)n);
    for (int k = 0; k < n; k++) {
        if (kind == OLY_K_VECI)
            ((oly_eint *)oly_payload(h))[k].v = items[k].i;
        else if (kind == OLY_K_VECR)
            ((oly_ereal *)oly_payload(h))[k].v = items[k].r;
        else
            ((oly_ehnd *)oly_payload(h))[k].v = items[k].h;
    }
    return h;
}

oly_handle oly_vcat(oly_handle a, oly_handle b)
{
    oly_int na = oly_len(a), nb = oly_len(b);
    if (na + nb == 0)
        return 0;
    int kind = oly_deref(na ? a : b)->kind;
    size_t es = oly_esize(kind);
    oly_handle h = oly_alloc(kind, (uint32_t)(na + nb), es * (size_t)(na + nb));
    unsigned char *p = oly_payload(h);
    if (na)
        memcpy(p, oly_payload(a), es * (size_t)na);
    if (nb)
        memcpy(p + es * (size_t)na, oly_payload(b), es * (size_t)nb);
    return h;
}

oly_handle oly_vrep(oly_handle v, oly_int n)
{
    oly_int len = oly_len(v);
    if (n <= 0 || len == 0)
        return 0;
    int kind = oly_deref(v)->kind;
    size_t es = oly_esize(kind);
    if ((uint64_t)len * (uint64_t)n * es > OLYMPUS_HEAP_BYTES)
        oly_trap("heap exhausted (vector of %lld elements)", (long long)len * (long long)n);
    oly_handle h = oly_alloc(kind, (uint32_t)(len * n), es * (size_t)(len * n));
    unsigned char *p = oly_payload(h);
    const unsigned char *src = oly_payload(v);
    for (oly_int k = 0; k < n; k++)
        memcpy(p + es * (size_t)(k * len), src, es * (size_t)len);
    return h;
}

/* ---- complex ---- */

typedef struct {
    oly_real re, im;
} oly_cplx;

static oly_cplx oly_cget(oly_handle c)
{
    oly_cplx z = {0, 0};
    if (c)
        z = *(oly_cplx *)oly_payload(c);
    return z;
}

oly_handle oly_mkc(oly_real re, oly_real im)
{
    oly_handle h = oly_alloc(OLY_K_CPLX, 2, sizeof(oly_cplx));
    oly_cplx *z = oly_payload(h);
    z->re = re;
    z->im = im;
    return h;
}

oly_real oly_cpart(oly_handle c, int imag)
{
    oly_cplx z = oly_cget(c);
    return imag ? z.im : z.re;
}

/* Storing a part into an unset slot creates the value in place. */
void oly_cset(oly_slot *at, int imag, oly_real v)
{
    if (!at->h) {
        oly_handle h = oly_mkc(0, 0);
        at->h = h;
    }
    oly_cplx *z = oly_payload(at->h);
    if (imag)
        z->im = v;
    else
        z->re = v;
}

oly_handle oly_cadd(oly_handle a, oly_handle b)
{
    oly_cplx x = oly_cget(a), y = oly_cget(b);
    return oly_mkc(x.re + y.re, x.im + y.im);
}

oly_handle oly_csub(oly_handle a, oly_handle b)
{
    oly_cplx x = oly_cget(a), y = oly_cget(b);
    return oly_mkc(x.re - y.re, x.im - y.im);
}

oly_handle oly_cmul(oly_handle a, oly_handle b)
{
    oly_cplx x = oly_cget(a), y = oly_cget(b);
    oly_real re = x.re * y.re - x.im * y.im;
    oly_real im = x.re * y.im + x.im * y.re;
    return oly_mkc(re, im);
}

oly_handle oly_cdiv(oly_handle a, oly_handle b)
{
    oly_cplx x = oly_cget(a), y = oly_cget(b);
    oly_real abr = y.re < 0 ? -y.re : y.re;
    oly_real abi = y.im < 0 ? -y.im : y.im;
    oly_real re, im;
    if (abr >= abi) {
        if (abr == 0)
            oly_trap("complex division by zero");
        oly_real ratio = y.im / y.re;
        oly_real denom = y.re + y.im * ratio;
        re = (x.re + x.im * ratio) / denom;
        im = (x.im - x.re * ratio) / denom;
    } else if (abi >= abr) {
        oly_real ratio = y.re / y.im;
        oly_real denom = y.re * ratio + y.im;
        re = (x.re * ratio + x.im) / denom;
        im = (x.im * ratio - x.re) / denom;
    } else {
        re = im = OLY_NAN;
    }
    return oly_mkc(re, im);
}

oly_handle oly_cneg(oly_handle a)
{
    oly_cplx x = oly_cget(a);
    return oly_mkc(-x.re, -x.im);
}

oly_int oly_ceq(oly_handle a, oly_handle b)
{
    oly_cplx x = oly_cget(a), y = oly_cget(b);
    return x.re == y.re && x.im == y.im;
}

oly_real oly_absc(oly_handle c)
{
    oly_cplx z = oly_cget(c);
#if OLYMPUS_REAL32
    return hypotf(z.re, z.im);
#else
    return hypot(z.re, z.im);
#endif
}

/* ---- numbers ---- */

oly_real oly_divr(oly_real a, oly_real b)
{
    if (b == 0)
        oly_trap("division by zero");
    return a / b;
}

oly_int oly_modi(oly_int a, oly_int b)
{
    if (b == 0)
        oly_trap("integer modulo by zero");
    if (b == -1)
        return 0;
    oly_int r = a % b;
    if (r != 0 && ((r < 0) != (b < 0)))
        r += b;
    return r;
}

oly_real oly_modr(oly_real a, oly_real b)
{
    if (b == 0)
        oly_trap("float modulo by zero");
#if OLYMPUS_REAL32
    oly_real r = fmodf(a, b);
#else
    oly_real r = fmod(a, b);
#endif
    if (r == 0)
        return b < 0 ? -(oly_real)0 : (oly_real)0;
    if ((r < 0) != (b < 0))
        r += b;
    return r;
}

oly_int oly_powi(oly_int a, oly_int b)
{
    if (b < 0) {
        if (a == 0)
            oly_trap("zero to a negative power");
        if (a == 1)
            return 1;
        if (a == -1)
            return (b % 2 == 0) ? 1 : -1;
        return 0;
    }
#if OLYMPUS_INT64
    typedef uint64_t oly_uint;
#else
    typedef uint32_t oly_uint;
#endif
    oly_uint r = 1, base = (oly_uint)a;
    uint64_t e = (uint64_t)b;
    while (e) {
        if (e & 1)
            r *= base;
        base *= base;
        e >>= 1;
    }
    return (oly_int)r;
}

oly_real oly_powr(oly_real a, oly_real b)
{
    if (a == 0 && b < 0)
        oly_trap("zero to a negative power");
    if (a < 0 && isfinite(b) && fabs(b) < 9.0e15 && b != (oly_real)(int64_t)b)
        oly_trap("negative number to a fractional power");
#if OLYMPUS_REAL32
    return powf(a, b);
#else
    return pow(a, b);
#endif
}

oly_int oly_int_r(oly_real v)
{
    if (!isfinite(v))
        oly_trap("cannot convert %s to int", isnan(v) ? "nan" : "infinity");
    double t = trunc((double)v);
#if OLYMPUS_INT64
    if (t < -9223372036854775808.0 || t >= 9223372036854775808.0)
#else
    if (t < -2147483648.0 || t >= 2147483648.0)
#endif
        oly_trap("int() argument out of range");
    return (oly_int)t;
}

/* Copy of a string's bytes with surrounding whitespace removed. */
static char *oly_strip(oly_handle s, char *buf, size_t cap)
{
    oly_int n = oly_len(s);
    const char *p = oly_chars(s);
    while (n > 0 && isspace((unsigned char)*p)) {
        p++;
        n--;
    }
    while (n > 0 && isspace((unsigned char)p[n - 1]))
        n--;
    if ((size_t)n >= cap)
        oly_trap("numeric literal too long");
    memcpy(buf, p, (size_t)n);
    buf[n] = 0;
    return buf;
}

oly_int oly_int_s(oly_handle s)
{
    char buf[128];
    const char *p = oly_strip(s, buf, sizeof buf);
    const char *q = p;
    int neg = 0;
    if (*q == '+' || *q == '-')
        neg = *q++ == '-';
    if (!isdigit((unsigned char)*q))
        oly_trap("invalid literal for int(): '%s'", p);
    uint64_t v = 0;
    for (; *q; q++) {
        if (!isdigit((unsigned char)*q))
            oly_trap("invalid literal for int(): '%s'", p);
        uint64_t d = (uint64_t)(*q - '0');
        if (v > (UINT64_MAX - d) / 10)
            oly_trap("int() literal too large: '%s'", p);
        v = v * 10 + d;
    }
    if (v > (uint64_t)INT64_MAX + (uint64_t)neg)
        oly_trap("int() literal too large: '%s'", p);
    uint64_t bits = neg ? (uint64_t)0 - v : v;
    return (oly_int)(int64_t)bits;
}

oly_real oly_real_s(oly_handle s)
{
    char buf[128];
    const char *p = oly_strip(s, buf, sizeof buf);
    const char *q = (*p == '+' || *p == '-') ? p + 1 : p;
    if (*p == 0 || (q[0] == '0' && (q[1] == 'x' || q[1] == 'X')) || !strncasecmp(q, "nan(", 4))
        oly_trap("could not convert string to float: '%s'", p);
    char *end;
    errno = 0;
#if OLYMPUS_REAL32
    oly_real v = strtof(p, &end);
#else
    oly_real v = strtod(p, &end);
#endif
    if (*end)
        oly_trap("could not convert string to float: '%s'", p);
    return v;
}

oly_int oly_absi(oly_int v)
{
    return v < 0 ? (oly_int)(0 - (uint64_t)v) : v;
}

/* ---- formatting ---- */

/* Shortest round-trip digits, laid out like Python's repr. */
static void oly_fmt_real(char *out, oly_real v)
{
    if (isnan(v)) {
        strcpy(out, "nan");
        return;
    }
    if (isinf(v)) {
        strcpy(out, v > 0 ? "inf" : "-inf");
        return;
    }
    char sci[64];
#if OLYMPUS_REAL32
    for (int p = 1; p <= 9; p++) {
        snprintf(sci, sizeof sci, "%.*e", p - 1, (double)v);
        if (strtof(sci, NULL) == v)
            break;
    }
#else
    for (int p = 1; p <= 17; p++) {
        snprintf(sci, sizeof sci, "%.*e", p - 1, v);
        if (strtod(sci, NULL) == v)
            break;
    }
#endif
    char *e = strchr(sci, 'e');
    int exp = atoi(e + 1);
    *e = 0;
    const char *m = sci;
    int neg = *m == '-';
    if (neg)
        m++;
    char digits[32];
    int nd = 0;
    for (; *m; m++)
        if (*m != '.')
            digits[nd++] = *m;
    while (nd > 1 && digits[nd - 1] == '0')
        nd--;
    digits[nd] = 0;
    char *o = out;
    if (neg)
        *o++ = '-';
    if (exp >= -4 && exp < 16) {
        if (exp < 0) {
            *o++ = '0';
            *o++ = '.';
            for (int k = 0; k < -exp - 1; k++)
                *o++ = '0';
            for (int k = 0; k < nd; k++)
                *o++ = digits[k];
        } else {
            int int_len = exp + 1;
            for (int k = 0; k < int_len; k++)
                *o++ = k < nd ? digits[k] : '0';
            *o++ = '.';
            if (nd <= int_len)
                *o++ = '0';
            for (int k = int_len; k < nd; k++)
                *o++ = digits[k];
        }
        *o = 0;
    } else {
        *o++ = digits[0];
        if (nd > 1) {
            *o++ = '.';
            for (int k = 1; k < nd; k++)
                *o++ = digits[k];
        }
        sprintf(o, "e%c%02d", exp < 0 ? '-' : '+', exp < 0 ? -exp : exp);
    }
}

static void oly_fmt_part(char *out, oly_real v)
{
    oly_fmt_real(out, v);
    size_t n = strlen(out);
    if (n > 2 && !strcmp(out + n - 2, ".0"))
        out[n - 2] = 0;
}

static void oly_fmt_complex(char *out, oly_handle c)
{
    oly_cplx z = oly_cget(c);
    char re[40], im[40];
    oly_fmt_part(im, z.im);
    if (z.re == 0 && !signbit(z.re)) {
        sprintf(out, "%sj", im);
        return;
    }
    oly_fmt_part(re, z.re);
    const char *sign = (signbit(z.im) && !isnan(z.im)) ? "" : "+";
    sprintf(out, "(%s%s%sj)", re, sign, im);
}

static oly_handle oly_cstr(const char *s)
{
    return oly_slit(s, strlen(s));
}

oly_handle oly_str_i(oly_int v)
{
    char buf[32];
    sprintf(buf, "%lld", (long long)v);
    return oly_cstr(buf);
}

oly_handle oly_str_r(oly_real v)
{
    char buf[40];
    oly_fmt_real(buf, v);
    return oly_cstr(buf);
}

oly_handle oly_str_b(oly_int v)
{
    return oly_cstr(v ? "True" : "False");
}

oly_handle oly_str_c(oly_handle c)
{
    char buf[96];
    oly_fmt_complex(buf, c);
    return oly_cstr(buf);
}

/* ---- input and output ---- */

oly_handle oly_input(void)
{
    fflush(stdout);
    size_t cap = 64, n = 0;
    char *buf = malloc(cap);
    int ch;
    while ((ch = getchar()) != EOF && ch != '\n') {
        if (n + 1 >= cap)
            buf = realloc(buf, cap *= 2);
        buf[n++] = (char)ch;
    }
    if (n > 0 && buf[n - 1] == '\r')
        n--;
    oly_handle h = oly_slit(buf, n);
    free(buf);
    return h;
}

void oly_put_i(oly_int v)
{
    printf("%lld", (long long)v);
}

void oly_put_r(oly_real v)
{
    char buf[40];
    oly_fmt_real(buf, v);
    fputs(buf, stdout);
}

void oly_put_b(oly_int v)
{
    fputs(v ? "True" : "False", stdout);
}

void oly_put_s(oly_handle s)
{
    fwrite(oly_chars(s), 1, (size_t)oly_len(s), stdout);
}

void oly_put_c(oly_handle c)
{
    char buf[96];
    oly_fmt_complex(buf, c);
    fputs(buf, stdout);
}

static void oly_put_repr(oly_handle s)
{
    oly_int n = oly_len(s);
    const unsigned char *p = (const unsigned char *)oly_chars(s);
    char quote = (memchr(p, '\'', (size_t)n) && !memchr(p, '"', (size_t)n)) ? '"' : '\'';
    putchar(quote);
    for (oly_int k = 0; k < n; k++) {
        unsigned char b = p[k];
        if (b == '\\')
            fputs("\\\\", stdout);
        else if (b == '\n')
            fputs("\\n", stdout);
        else if (b == '\r')
            fputs("\\r", stdout);
        else if (b == '\t')
            fputs("\\t", stdout);
        else if (b == (unsigned char)quote)
            printf("\\%c", quote);
        else if (b >= 0x20 && b <= 0x7e)
            putchar(b);
        else
            printf("\\x%02x", b);
    }
    putchar(quote);
}

/* Element formatting follows the compile-time descriptor, one letter per
 * nesting level. */
static void oly_put_elem(oly_handle v, oly_int k, const char *desc)
{
    switch (desc[0]) {
    case 'i': oly_put_i(OLY_EI(v, k)->v); break;
    case 'b': oly_put_b(OLY_EI(v, k)->v); break;
    case 'r': oly_put_r(OLY_ER(v, k)->v); break;
    case 's': oly_put_repr(OLY_EH(v, k)->v); break;
    case 'c': oly_put_c(OLY_EH(v, k)->v); break;
    case 'v': oly_put_v(OLY_EH(v, k)->v, desc); break;
    default: fputs("<function>", stdout); break;
    }
}

void oly_put_v(oly_handle v, const char *desc)
{
    putchar('[');
    oly_int n = oly_len(v);
    for (oly_int k = 0; k < n; k++) {
        if (k)
            fputs(", ", stdout);
        oly_put_elem(v, k, desc + 1);
    }
    putchar(']');
}

void oly_put_sp(void)
{
    putchar(' ');
}

void oly_put_nl(void)
{
    putchar('\n');
}

int main(void)
{
    oly_call_depth = 0;
    olympus_main();
    fflush(stdout);
    return 0;
}
