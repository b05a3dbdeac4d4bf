/* Olympus abstract machine unit generated by vpyc */
#ifndef OLYMPUS_INT64
#define OLYMPUS_INT64 0
#endif
#ifndef OLYMPUS_REAL32
#define OLYMPUS_REAL32 0
#endif
#ifndef OLYMPUS_HEAP_BYTES
#define OLYMPUS_HEAP_BYTES 8388608
#endif
#include "olympus.h"

static oly_slot oly_fn_1(void);
static oly_slot oly_fn_2(void);
const oly_function oly_functions[] = {
{olympus_main, 0},
{oly_fn_1, 1},
{oly_fn_2, 2},
};
const int oly_function_count = 3;
const long oly_heap_bytes = OLYMPUS_HEAP_BYTES;

static oly_slot oly_fn_1(void) {
FRAME(4,"iihh");
DECLI(0);
STI(ADDRL(0),1);
DECLI(1);
STI(ADDRL(1),2);
DECLC(2);
STC(ADDRL(2),CADD(MKC(1.0,0.0),MKC(0.0,2.0)));
DECLL(3);
STL(ADDRL(3),MKLAMBDA(2));
EVAL(APPLY_N(LDL(ADDRL(3)),NOARGS));
PRINT_C(LDC(ADDRL(2)));
RET_N;
}

static oly_slot oly_fn_2(void) {
FRAME(0,"");
STCR(ADDRF(1,2),4.3);
RET_N;
}

oly_slot olympus_main(void) {
FRAME(1,"h");
DECLL(0);
STL(ADDRL(0),MKLAMBDA(1));
EVAL(APPLY_N(LDL(ADDRL(0)),NOARGS));
RET_N;
}
