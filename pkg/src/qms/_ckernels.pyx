# cython: boundscheck=False, wraparound=False
"""Compiled integer kernels.

Same algorithms and data layout as ``_pykernels`` but on 128-bit machine
integers with every multiply/add checked for overflow. When a result would
not fit, the functions return ``None`` (or -1 for ``rank``) and the caller
reruns the computation with Python integers, so answers are always exact.
"""
from cpython.mem cimport PyMem_Malloc, PyMem_Free

cdef extern from *:
    """
    typedef __int128 qms_int;

    #define QMS_MUL(a, b, r) if (__builtin_mul_overflow((a), (b), &(r))) return 1;
    #define QMS_ADD(a, b, r) if (__builtin_add_overflow((a), (b), &(r))) return 1;
    #define QMS_SUB(a, b, r) if (__builtin_sub_overflow((a), (b), &(r))) return 1;

    static int qms_qmul(const qms_int *s, const qms_int *y, qms_int *o) {
        qms_int p00, p11, p22, p33, p01, p10, p23, p32;
        qms_int p02, p13, p20, p31, p03, p12, p21, p30, t;
        QMS_MUL(s[0], y[0], p00) QMS_MUL(s[1], y[1], p11)
        QMS_MUL(s[2], y[2], p22) QMS_MUL(s[3], y[3], p33)
        QMS_MUL(s[0], y[1], p01) QMS_MUL(s[1], y[0], p10)
        QMS_MUL(s[2], y[3], p23) QMS_MUL(s[3], y[2], p32)
        QMS_MUL(s[0], y[2], p02) QMS_MUL(s[1], y[3], p13)
        QMS_MUL(s[2], y[0], p20) QMS_MUL(s[3], y[1], p31)
        QMS_MUL(s[0], y[3], p03) QMS_MUL(s[1], y[2], p12)
        QMS_MUL(s[2], y[1], p21) QMS_MUL(s[3], y[0], p30)
        QMS_SUB(p00, p11, t) QMS_SUB(t, p22, t) QMS_SUB(t, p33, o[0])
        QMS_ADD(p01, p10, t) QMS_ADD(t, p23, t) QMS_SUB(t, p32, o[1])
        QMS_SUB(p02, p13, t) QMS_ADD(t, p20, t) QMS_ADD(t, p31, o[2])
        QMS_ADD(p03, p12, t) QMS_SUB(t, p21, t) QMS_ADD(t, p30, o[3])
        return 0;
    }

    static qms_int qms_abs(qms_int x) { return x < 0 ? -x : x; }

    static qms_int qms_gcd(qms_int a, qms_int b) {
        a = qms_abs(a); b = qms_abs(b);
        while (b) { qms_int t = a % b; a = b; b = t; }
        return a;
    }

    static int qms_nonzero(const qms_int *q) { return q[0] || q[1] || q[2] || q[3]; }

    /* Values whose magnitude would break qms_abs are treated as overflow. */
    static const qms_int QMS_LIMIT = (((qms_int)1) << 126);

    static int qms_content_reduce(qms_int *row, Py_ssize_t len) {
        qms_int g = 0;
        Py_ssize_t t;
        for (t = 0; t < len; t++) {
            if (row[t] >= QMS_LIMIT || row[t] <= -QMS_LIMIT) return 1;
            if (row[t]) { g = qms_gcd(g, row[t]); if (g == 1) return 0; }
        }
        if (g > 1) for (t = 0; t < len; t++) row[t] /= g;
        return 0;
    }

    /* Fraction-free elimination; see _pykernels for the row operation.
       Returns 1 on overflow. Pivot columns go to pivots[0..*rank). */
    static int qms_eliminate(qms_int *a, int m, int n, int npiv, int full,
                             int *pivots, int *rank) {
        int r = 0, c, i, piv, l;
        Py_ssize_t rowlen = 4 * (Py_ssize_t)n;
        qms_int norm, g, N, s[4], cp[4], sy[4], tmp;
        for (i = 0; i < m; i++)
            if (qms_content_reduce(a + i * rowlen, rowlen)) return 1;
        for (c = 0; c < npiv && r < m; c++) {
            piv = -1;
            for (i = r; i < m; i++)
                if (qms_nonzero(a + i * rowlen + 4 * c)) { piv = i; break; }
            if (piv < 0) continue;
            if (piv != r) {
                qms_int *x = a + piv * rowlen, *y = a + r * rowlen;
                for (l = 0; l < rowlen; l++) { tmp = x[l]; x[l] = y[l]; y[l] = tmp; }
            }
            qms_int *prow = a + r * rowlen;
            qms_int *p = prow + 4 * c;
            QMS_MUL(p[0], p[0], norm)
            for (l = 1; l < 4; l++) { QMS_MUL(p[l], p[l], tmp) QMS_ADD(norm, tmp, norm) }
            cp[0] = p[0]; cp[1] = -p[1]; cp[2] = -p[2]; cp[3] = -p[3];
            for (i = full ? 0 : r + 1; i < m; i++) {
                if (i == r) continue;
                qms_int *row = a + i * rowlen;
                qms_int *q = row + 4 * c;
                if (!qms_nonzero(q)) continue;
                if (qms_qmul(q, cp, s)) return 1;
                g = qms_gcd(norm, s[0]);
                g = qms_gcd(g, s[1]); g = qms_gcd(g, s[2]); g = qms_gcd(g, s[3]);
                N = norm / g;
                s[0] /= g; s[1] /= g; s[2] /= g; s[3] /= g;
                for (l = full ? 0 : c; l < n; l++) {
                    qms_int *x = row + 4 * l;
                    const qms_int *y = prow + 4 * l;
                    if (qms_nonzero(y)) {
                        if (qms_qmul(s, y, sy)) return 1;
                        QMS_MUL(N, x[0], tmp) QMS_SUB(tmp, sy[0], x[0])
                        QMS_MUL(N, x[1], tmp) QMS_SUB(tmp, sy[1], x[1])
                        QMS_MUL(N, x[2], tmp) QMS_SUB(tmp, sy[2], x[2])
                        QMS_MUL(N, x[3], tmp) QMS_SUB(tmp, sy[3], x[3])
                    } else if (N != 1 && qms_nonzero(x)) {
                        QMS_MUL(N, x[0], x[0]) QMS_MUL(N, x[1], x[1])
                        QMS_MUL(N, x[2], x[2]) QMS_MUL(N, x[3], x[3])
                    }
                }
                if (qms_content_reduce(row, rowlen)) return 1;
            }
            pivots[r] = c;
            r++;
        }
        *rank = r;
        return 0;
    }

    static int qms_matmul(const qms_int *a, const qms_int *b, qms_int *o,
                          int m, int k, int n) {
        int i, j, l;
        qms_int prod[4];
        for (i = 0; i < 4 * m * n; i++) o[i] = 0;
        for (i = 0; i < m; i++)
            for (l = 0; l < k; l++) {
                const qms_int *x = a + 4 * ((Py_ssize_t)i * k + l);
                if (!qms_nonzero(x)) continue;
                for (j = 0; j < n; j++) {
                    const qms_int *y = b + 4 * ((Py_ssize_t)l * n + j);
                    if (!qms_nonzero(y)) continue;
                    qms_int *z = o + 4 * ((Py_ssize_t)i * n + j);
                    if (qms_qmul(x, y, prod)) return 1;
                    QMS_ADD(z[0], prod[0], z[0]) QMS_ADD(z[1], prod[1], z[1])
                    QMS_ADD(z[2], prod[2], z[2]) QMS_ADD(z[3], prod[3], z[3])
                }
            }
        return 0;
    }

    static long long qms_hi(qms_int v) { return (long long)(v >> 64); }
    static unsigned long long qms_lo(qms_int v) { return (unsigned long long)v; }
    """
    ctypedef long long qms_int
    int qms_eliminate(qms_int *a, int m, int n, int npiv, int full, int *pivots, int *rank)
    int qms_matmul(const qms_int *a, const qms_int *b, qms_int *o, int m, int k, int n)
    long long qms_hi(qms_int v)
    unsigned long long qms_lo(qms_int v)


cdef qms_int* _load(list values) except? NULL:
    """Copy Python ints into a fresh buffer; NULL if any value exceeds 64 bits."""
    cdef Py_ssize_t count = len(values), t
    cdef qms_int *buf = <qms_int *> PyMem_Malloc((count if count else 1) * sizeof(qms_int))
    if buf == NULL:
        raise MemoryError()
    try:
        for t in range(count):
            buf[t] = <long long> values[t]
    except OverflowError:
        PyMem_Free(buf)
        return NULL
    return buf


cdef list _dump(qms_int *buf, Py_ssize_t count):
    cdef Py_ssize_t t
    cdef list out = [0] * count
    cdef object two64 = 1 << 64
    for t in range(count):
        out[t] = <object> qms_hi(buf[t]) * two64 + <object> qms_lo(buf[t])
    return out


def rank(list a, int m, int n):
    """Rank of an integer quaternion matrix, or -1 if 128 bits do not suffice."""
    if m == 0 or n == 0:
        return 0
    cdef qms_int *buf = _load(a)
    if buf == NULL:
        return -1
    cdef int *pivots = <int *> PyMem_Malloc(n * sizeof(int))
    cdef int r = 0, status
    try:
        status = qms_eliminate(buf, m, n, n, 0, pivots, &r)
    finally:
        PyMem_Free(buf)
        PyMem_Free(pivots)
    return -1 if status else r


def rref(list a, int m, int n, int npiv):
    """Gauss-Jordan as in ``_pykernels.rref``; None on overflow."""
    cdef qms_int *buf = _load(a)
    if buf == NULL:
        return None
    cdef int *pivots = <int *> PyMem_Malloc((npiv if npiv else 1) * sizeof(int))
    cdef int r = 0, status, t
    try:
        status = qms_eliminate(buf, m, n, npiv, 1, pivots, &r)
        if status:
            return None
        return _dump(buf, 4 * <Py_ssize_t> m * n), [pivots[t] for t in range(r)]
    finally:
        PyMem_Free(buf)
        PyMem_Free(pivots)


def matmul(list a, list b, int m, int k, int n):
    """Integer quaternion product; None on overflow."""
    cdef qms_int *x = _load(a)
    if x == NULL:
        return None
    cdef qms_int *y = _load(b)
    if y == NULL:
        PyMem_Free(x)
        return None
    cdef Py_ssize_t count = 4 * <Py_ssize_t> m * n
    cdef qms_int *z = <qms_int *> PyMem_Malloc((count if count else 1) * sizeof(qms_int))
    try:
        if qms_matmul(x, y, z, m, k, n):
            return None
        return _dump(z, count)
    finally:
        PyMem_Free(x)
        PyMem_Free(y)
        PyMem_Free(z)
