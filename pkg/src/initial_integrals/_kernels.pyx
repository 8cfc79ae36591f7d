# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Machine-integer versions of the kernels in ``_kernels_py``.

Inputs are converted to int64 on the fly; products are accumulated in a
128-bit register with overflow detection.  Whenever an input does not fit
in int64 or an accumulator overflows, the call is delegated to the
pure-Python kernel, so results are always exact.
"""

from libc.math cimport pow, sqrt, fabs

from initial_integrals import _kernels_py as _py

IMPLEMENTATION = "cython"


cdef extern from *:
    """
    typedef struct { __int128 v; } acc128;
    static inline void acc_init(acc128 *a) { a->v = 0; }
    static inline int acc_addmul(acc128 *a, long long x, long long y) {
        __int128 p = (__int128)x * (__int128)y;
        return __builtin_add_overflow(a->v, p, &a->v);
    }
    static inline int acc_fits64(acc128 *a) {
        return a->v >= (__int128)(-0x7fffffffffffffffLL - 1) && a->v <= (__int128)0x7fffffffffffffffLL;
    }
    static inline long long acc_get64(acc128 *a) { return (long long)a->v; }
    static inline long long acc_hi(acc128 *a) { return (long long)(a->v >> 64); }
    static inline unsigned long long acc_lo(acc128 *a) { return (unsigned long long)a->v; }
    static inline int add_ovf(long long x, long long y, long long *r) {
        return __builtin_add_overflow(x, y, r);
    }
    static inline int mul_ovf(long long x, long long y, long long *r) {
        return __builtin_mul_overflow(x, y, r);
    }
    """
    ctypedef struct acc128:
        pass
    void acc_init(acc128 *a)
    int acc_addmul(acc128 *a, long long x, long long y)
    int acc_fits64(acc128 *a)
    long long acc_get64(acc128 *a)
    long long acc_hi(acc128 *a)
    unsigned long long acc_lo(acc128 *a)
    int add_ovf(long long x, long long y, long long *r)
    int mul_ovf(long long x, long long y, long long *r)


cdef object _acc_to_py(acc128 *acc):
    if acc_fits64(acc):
        return acc_get64(acc)
    return (<object>acc_hi(acc) << 64) + <object>acc_lo(acc)


def dot(a, b):
    cdef tuple ta = tuple(a)
    cdef tuple tb = tuple(b)
    cdef Py_ssize_t i, n = len(ta)
    cdef acc128 acc
    if len(tb) != n:
        return _py.dot(ta, tb)
    acc_init(&acc)
    try:
        for i in range(n):
            if acc_addmul(&acc, <long long>ta[i], <long long>tb[i]):
                return _py.dot(ta, tb)
    except OverflowError:
        return _py.dot(ta, tb)
    return _acc_to_py(&acc)


def prefix_sums(a):
    cdef tuple ta = tuple(a)
    cdef Py_ssize_t i, n = len(ta)
    cdef long long total = 0
    cdef list out = [0] * (n + 1)
    try:
        for i in range(n):
            if add_ovf(total, <long long>ta[i], &total):
                return _py.prefix_sums(ta)
            out[i + 1] = total
    except OverflowError:
        return _py.prefix_sums(ta)
    return tuple(out)


def pairs_equal(a):
    cdef tuple ta = tuple(a)
    cdef Py_ssize_t i, n = len(ta)
    try:
        for i in range(0, n - 1, 2):
            if <long long>ta[i] != <long long>ta[i + 1]:
                return False
    except OverflowError:
        return _py.pairs_equal(ta)
    return True


def max_abs(a):
    cdef tuple ta = tuple(a)
    cdef Py_ssize_t i, n = len(ta)
    cdef long long x, m = 0
    try:
        for i in range(n):
            x = <long long>ta[i]
            if x < 0:
                if x == -0x7fffffffffffffff - 1:
                    return _py.max_abs(ta)
                x = -x
            if x > m:
                m = x
    except OverflowError:
        return _py.max_abs(ta)
    return m


def sum_abs(a):
    cdef tuple ta = tuple(a)
    cdef Py_ssize_t i, n = len(ta)
    cdef acc128 acc
    cdef long long x
    acc_init(&acc)
    try:
        for i in range(n):
            x = <long long>ta[i]
            if acc_addmul(&acc, x, -1 if x < 0 else 1):
                return _py.sum_abs(ta)
    except OverflowError:
        return _py.sum_abs(ta)
    return _acc_to_py(&acc)


cdef inline void _neumaier(double x, double *s, double *c):
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def power_sum(a, double p):
    cdef tuple ta = tuple(a)
    cdef Py_ssize_t i, n = len(ta)
    cdef long long m
    cdef double dm, s = 0.0, c = 0.0, x
    mo = max_abs(ta)
    if mo > 0x7fffffffffffffff:
        return _py.power_sum(ta, p)
    m = mo
    if m == 0:
        return 0, 0.0
    dm = <double>m
    for i in range(n):
        x = fabs(<double><long long>ta[i]) / dm
        _neumaier(pow(x, p), &s, &c)
    return m, s + c


def power_sum_complex(re, im, double p):
    cdef tuple tr = tuple(re)
    cdef tuple ti = tuple(im)
    cdef Py_ssize_t i, n = len(tr)
    cdef double x, y, m = 0.0, s = 0.0, c = 0.0
    cdef list mods = [0.0] * n
    try:
        for i in range(n):
            x = <double><long long>tr[i]
            y = <double><long long>ti[i]
            x = sqrt(x * x + y * y)
            mods[i] = x
            if x > m:
                m = x
    except OverflowError:
        return _py.power_sum_complex(tr, ti, p)
    if m == 0.0:
        return 0.0, 0.0
    for i in range(n):
        _neumaier(pow(<double>mods[i] / m, p), &s, &c)
    return m, s + c


def lincomb(terms, Py_ssize_t n):
    cdef long long[::1] buf
    cdef long long cc, x, prod
    cdef Py_ssize_t i
    cdef tuple tv
    import array
    terms = list(terms)
    arr = array.array("q", bytes(8 * n))
    buf = arr
    try:
        for c, v in terms:
            cc = <long long>c
            if cc == 0:
                continue
            tv = tuple(v)
            for i in range(n):
                x = <long long>tv[i]
                if mul_ovf(cc, x, &prod) or add_ovf(buf[i], prod, &buf[i]):
                    return _py.lincomb(terms, n)
    except OverflowError:
        return _py.lincomb(terms, n)
    return tuple(arr.tolist()) if n else ()


repeat_each = _py.repeat_each
