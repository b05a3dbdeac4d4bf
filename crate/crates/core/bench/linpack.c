/* LINPACK-style solve in plain C, operation for operation the same as the
   vPython port so both print identical lines. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#ifndef N
#define N 50
#endif

static double *a[N];
static double b[N], x[N];
static int ipvt[N];

static double matgen(int n)
{
    int init = 1325;
    double norma = 0.0;
    for (int j = 0; j < n; j++)
        for (int i = 0; i < n; i++) {
            init = 3125 * init % 65536;
            a[j][i] = (init - 32768.0) / 16384.0;
            if (a[j][i] > norma)
                norma = a[j][i];
        }
    for (int i = 0; i < n; i++)
        b[i] = 0.0;
    for (int j = 0; j < n; j++)
        for (int i = 0; i < n; i++)
            b[i] = b[i] + a[j][i];
    return norma;
}

static int dgefa(int n)
{
    int info = -1;
    for (int k = 0; k < n - 1; k++) {
        double *colk = a[k];
        int l = k;
        double dmax = fabs(colk[k]);
        for (int i = k + 1; i < n; i++)
            if (fabs(colk[i]) > dmax) {
                dmax = fabs(colk[i]);
                l = i;
            }
        ipvt[k] = l;
        if (colk[l] != 0.0) {
            double t;
            if (l != k) {
                t = colk[l];
                colk[l] = colk[k];
                colk[k] = t;
            }
            t = -1.0 / colk[k];
            for (int i = k + 1; i < n; i++)
                colk[i] = t * colk[i];
            for (int j = k + 1; j < n; j++) {
                double *colj = a[j];
                t = colj[l];
                if (l != k) {
                    colj[l] = colj[k];
                    colj[k] = t;
                }
                for (int i = k + 1; i < n; i++)
                    colj[i] = colj[i] + t * colk[i];
            }
        } else {
            info = k;
        }
    }
    ipvt[n - 1] = n - 1;
    if (a[n - 1][n - 1] == 0.0)
        info = n - 1;
    return info;
}

static void dgesl(int n)
{
    for (int k = 0; k < n - 1; k++) {
        int l = ipvt[k];
        double t = b[l];
        if (l != k) {
            b[l] = b[k];
            b[k] = t;
        }
        for (int i = k + 1; i < n; i++)
            b[i] = b[i] + t * a[k][i];
    }
    for (int kb = 0; kb < n; kb++) {
        int k = n - 1 - kb;
        b[k] = b[k] / a[k][k];
        double t = -b[k];
        for (int i = 0; i < k; i++)
            b[i] = b[i] + t * a[k][i];
    }
}

int main(void)
{
    int n = N;
    for (int j = 0; j < n; j++)
        if (!(a[j] = calloc((size_t)n, sizeof(double))))
            return 1;
    double norma = matgen(n);
    int info = dgefa(n);
    dgesl(n);
    for (int i = 0; i < n; i++)
        x[i] = b[i];
    norma = matgen(n);
    for (int i = 0; i < n; i++)
        b[i] = -b[i];
    for (int j = 0; j < n; j++)
        for (int i = 0; i < n; i++)
            b[i] = b[i] + a[j][i] * x[j];
    double resid = 0.0, normx = 0.0;
    for (int i = 0; i < n; i++) {
        if (fabs(b[i]) > resid)
            resid = fabs(b[i]);
        if (fabs(x[i]) > normx)
            normx = fabs(x[i]);
    }
    volatile double eps = 1.0;
    while (1.0 + eps / 2.0 > 1.0)
        eps = eps / 2.0;
    double residn = resid / (n * norma * normx * eps);
    printf("%d %d %d %s\n", n, info, (int)(residn * 1000.0), residn < 10.0 ? "True" : "False");
    return 0;
}
