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
FRAME(8,"iiiihiii");
DECLI(0);
STI(ADDRL(0),10);
DECLI(1);
STI(ADDRL(1),0);
DECLI(2);
STI(ADDRL(2),8190);
DECLI(3);
STI(ADDRL(3),0);
DECLV(4);
STV(ADDRL(4),VREP(MKVEC_I(ARGS(ARG_I(FALSE))),LDI(ADDRL(2))));
DECLI(5);
STI(ADDRL(5),0);
DECLI(6);
STI(ADDRL(6),0);
DECLI(7);
STI(ADDRL(7),0);
FOR($iter_r$,0,LDI(ADDRL(0)),1)
STI(ADDRL(1),0);
FOR($iter_i$,0,LDI(ADDRL(2)),1)
STAI(ADDRL(4),$iter_i$,TRUE);
END
FOR($iter_i$,0,LDI(ADDRL(2)),1)
IF(LDAI(ADDRL(4),$iter_i$))
STI(ADDRL(3),(($iter_i$+$iter_i$)+3));
IF((LDI(ADDRL(3))>LDI(ADDRL(7))))
STI(ADDRL(7),LDI(ADDRL(3)));
END
STI(ADDRL(5),($iter_i$+LDI(ADDRL(3))));
WHILE((LDI(ADDRL(5))<LDI(ADDRL(2))))
STAI(ADDRL(4),LDI(ADDRL(5)),FALSE);
STI(ADDRL(5),(LDI(ADDRL(5))+LDI(ADDRL(3))));
END
STI(ADDRL(1),(LDI(ADDRL(1))+1));
END
END
STI(ADDRL(6),(LDI(ADDRL(6))+LDI(ADDRL(1))));
END
PUT_I(LDI(ADDRL(1)));
PUT_SP();
PUT_I(LDI(ADDRL(6)));
PUT_SP();
PRINT_I(LDI(ADDRL(7)));
RET_N;
}
