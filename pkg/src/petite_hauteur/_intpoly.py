"""Dense integer polynomial arithmetic on coefficient tuples (ascending order).

Nothing here knows about heights or roots; it is the exact substrate shared by
the root finder, Graeffe iteration and division polynomials.  Large products go
through Kronecker substitution so that a single big-integer multiplication
(GMP) replaces the quadratic schoolbook loop.
"""

from math import gcd

import gmpy2
import numpy as np

_SCHOOLBOOK_CUTOFF = 24


def trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(c):
    return len(c) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return trim(out)


def sub(a, b):
    return add(a, tuple(-v for v in b))


def scale(a, k):
    if k == 0:
        return ()
    return tuple(k * v for v in a)


def _schoolbook(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return out


def _pack(coeffs, nbytes):
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in coeffs), "little")


def _unpack(value, nbytes, count):
    raw = int(value).to_bytes(nbytes * count, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(count)]


def mul(a, b):
    if not a or not b:
        return ()
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
        return trim(_schoolbook(a, b))
    bound = max(abs(v) for v in a) * max(abs(v) for v in b) * min(len(a), len(b))
    nbytes = bound.bit_length() // 8 + 1
    ap = [v if v > 0 else 0 for v in a]
    an = [-v if v < 0 else 0 for v in a]
    bp = [v if v > 0 else 0 for v in b]
    bn = [-v if v < 0 else 0 for v in b]
    Ap, An = gmpy2.mpz(_pack(ap, nbytes)), gmpy2.mpz(_pack(an, nbytes))
    Bp, Bn = gmpy2.mpz(_pack(bp, nbytes)), gmpy2.mpz(_pack(bn, nbytes))
    count = len(a) + len(b) - 1
    pos = _unpack(Ap * Bp + An * Bn, nbytes, count)
    neg = _unpack(Ap * Bn + An * Bp, nbytes, count)
    return trim(u - v for u, v in zip(pos, neg))


def power(a, n):
    result = (1,)
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def derivative(a):
    return trim(i * a[i] for i in range(1, len(a)))


def evaluate(a, x):
    acc = 0
    for v in reversed(a):
        acc = acc * x + v
    return acc


def content(a):
    g = 0
    for v in a:
        g = gcd(g, v)
        if g == 1:
            break
    return g


def primitive(a):
    """Divide out the content and make the leading coefficient positive."""
    a = trim(a)
    if not a:
        return ()
    g = content(a)
    if a[-1] < 0:
        g = -g
    return tuple(v // g for v in a)


def negate_variable(a):
    """Coefficients of a(-x)."""
    return tuple(-v if i % 2 else v for i, v in enumerate(a))


def reciprocal(a):
    """Coefficients of x^deg a(1/x)."""
    return trim(reversed(a))


def exact_quotient(a, b):
    """a / b over the rationals, assuming the division is exact in Z[x] up to content.

    Returns the primitive quotient; raises ArithmeticError if b does not divide a.
    """
    a = list(trim(a))
    b = trim(b)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        raise ArithmeticError("divisor degree exceeds dividend degree")
    # scale the dividend so every step divides exactly
    scale_ = lead ** (len(a) - 1 - db + 1)
    a = [v * scale_ for v in a]
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c, r = divmod(a[k + db], lead)
        if r:
            raise ArithmeticError("non-exact division")
        q[k] = c
        if c:
            for j in range(db + 1):
                a[k + j] -= c * b[j]
    if any(a):
        raise ArithmeticError("polynomial does not divide")
    return primitive(q)


def pseudo_remainder(a, b):
    a = list(trim(a))
    b = trim(b)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        a = [lead * v for v in a]
        for j in range(db + 1):
            a[shift + j] -= c * b[j]
        a = list(trim(a))
    return tuple(a)


def gcd_poly(a, b):
    """Primitive gcd over Q[x] via the primitive remainder sequence."""
    a, b = primitive(a), primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = pseudo_remainder(a, b)
        a, b = b, primitive(r)
    return primitive(a)


# ---------------------------------------------------------------------------
# arithmetic over F_p with numpy int64 vectors (ascending order)


def mod_p(a, p):
    return np.array([v % p for v in a], dtype=np.int64)


def _trim_np(v):
    nz = np.flatnonzero(v)
    if nz.size == 0:
        return v[:0]
    return v[: nz[-1] + 1]


def polymod_p(a, m, p):
    """Remainder of a modulo the monic-up-to-unit polynomial m over F_p."""
    a = _trim_np(a % p).copy()
    dm = len(m) - 1
    inv = pow(int(m[-1]), -1, p)
    while len(a) - 1 >= dm and len(a):
        c = (int(a[-1]) * inv) % p
        shift = len(a) - 1 - dm
        a[shift:] = (a[shift:] - c * m) % p
        a = _trim_np(a)
    return a


def gcd_p(a, b, p):
    a = _trim_np(a % p)
    b = _trim_np(b % p)
    while len(b):
        a, b = b, polymod_p(a, b, p)
    if len(a):
        a = (a * pow(int(a[-1]), -1, p)) % p
    return a


def divexact_p(a, b, p):
    a = _trim_np(a % p).copy()
    db = len(b) - 1
    inv = pow(int(b[-1]), -1, p)
    q = np.zeros(len(a) - db, dtype=np.int64)
    while len(a) - 1 >= db and len(a):
        c = (int(a[-1]) * inv) % p
        shift = len(a) - 1 - db
        q[shift] = c
        a[shift:] = (a[shift:] - c * b) % p
        a = _trim_np(a)
    return _trim_np(q)


def mulmod_p(a, b, m, p):
    return polymod_p(np.convolve(a, b) % p, m, p)


def derivative_p(a, p):
    return _trim_np((a[1:] * np.arange(1, len(a), dtype=np.int64)) % p)


def _reduce_rows(Q, g, p):
    d = len(g) - 1
    out = np.zeros((d, d), dtype=np.int64)
    for j in range(d):
        r = polymod_p(Q[j], g, p)
        out[j, : len(r)] = r
    return out


def distinct_degree_factorization(f, p):
    """Degrees of the irreducible factors of a squarefree f over F_p.

    Frobenius is linear over F_p, so h -> h^p mod g is a single matrix product
    with the matrix of x^(p j) mod g.
    """
    g = _trim_np(f % p)
    degrees = []

    def frobenius_matrix(mod):
        d = len(mod) - 1
        rows = np.zeros((d, d), dtype=np.int64)
        cur = np.array([1], dtype=np.int64)
        shift = np.zeros(p, dtype=np.int64)
        for j in range(d):
            rows[j, : len(cur)] = cur
            cur = polymod_p(np.concatenate([shift, cur]), mod, p)
        return rows

    Q = frobenius_matrix(g)
    h = np.zeros(len(g) - 1, dtype=np.int64)
    if len(h) > 1:
        h[1] = 1
    else:
        h = polymod_p(np.array([0, 1], dtype=np.int64), g, p)
    i = 0
    while len(g) - 1 >= 2 * (i + 1):
        i += 1
        d = len(g) - 1
        hv = np.zeros(d, dtype=np.int64)
        hv[: len(h)] = h
        h = _trim_np((hv @ Q) % p)
        diff = h.copy() if len(h) >= 2 else np.concatenate([h, np.zeros(2 - len(h), dtype=np.int64)])
        diff[1] = (diff[1] - 1) % p
        common = gcd_p(g, diff, p)
        k = len(common) - 1
        if k > 0:
            degrees.extend([i] * (k // i))
            g = divexact_p(g, common, p)
            if len(g) - 1 == 0:
                break
            Q = _reduce_rows(Q, g, p)
            h = polymod_p(h, g, p)
    if len(g) - 1 > 0:
        degrees.append(len(g) - 1)
    return sorted(degrees)


def bareiss_determinant(rows):
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def form_resultant(a, b, da, db):
    """Resultant of binary forms of formal degrees da, db (ascending coefficients in x)."""
    a = list(a) + [0] * (da + 1 - len(a))
    b = list(b) + [0] * (db + 1 - len(b))
    size = da + db
    rows = []
    for i in range(db):
        row = [0] * size
        for j, v in enumerate(reversed(a)):
            row[i + j] = v
        rows.append(row)
    for i in range(da):
        row = [0] * size
        for j, v in enumerate(reversed(b)):
            row[i + j] = v
        rows.append(row)
    return bareiss_determinant(rows)
