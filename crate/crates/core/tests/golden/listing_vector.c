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

const oly_function oly_functions[] = {
{olympus_main, 0},
};
const int oly_function_count = 1;
const long oly_heap_bytes = OLYMPUS_HEAP_BYTES;

oly_slot olympus_main(void) {
FRAME(2,"ih");
DECLI(0);
STI(ADDRL(0),3);
DECLV(1);
STV(ADDRL(1),VREP(MKVEC_I(ARGS(ARG_I(0))),5));
STAI(ADDRL(1),LDI(ADDRL(0)),42);
PRINT_V(LDV(ADDRL(1)),"vi");
RET_N;
}
