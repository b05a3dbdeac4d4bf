/* Byte Sieve in plain C; prints what the vPython variants print. */
#include <stdio.h>

#ifndef SIZE
#define SIZE 8190
#endif
#ifndef REPS
#define REPS 10
#endif

static char flags[SIZE];

int main(void)
{
    int count = 0, total = 0, largest = 0;
    for (int r = 0; r < REPS; r++) {
        count = 0;
        for (int i = 0; i < SIZE; i++)
            flags[i] = 1;
        for (int i = 0; i < SIZE; i++) {
            if (flags[i]) {
                int prime = i + i + 3;
                if (prime > largest)
                    largest = prime;
                for (int k = i + prime; k < SIZE; k += prime)
                    flags[k] = 0;
                count++;
            }
        }
        total += count;
    }
    printf("%d %d %d\n", count, total, largest);
    return 0;
}
