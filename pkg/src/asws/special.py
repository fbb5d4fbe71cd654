"""Double-precision special functions used by the hypothesis tests.

Log-gamma, error function, and the regularized incomplete beta integral
are translations of the corresponding routines from the Cephes Math
Library (Stephen L. Moshier). The inverse normal CDF uses Acklam's
rational approximation polished with Halley steps against our own erfc,
which brings it to full double precision.

Everything here is a pure scalar function of Python floats.
"""

import math

MACHEP = 1.11022302462515654042e-16  # 2**-53
MAXLOG = 7.09782712893383996843e2  # log(2**1024)
MINLOG = -7.08396418532264106224e2  # log(2**-1022)
MAXGAM = 171.624376956302725
MAXLGM = 2.556348e305

LOGPI = 1.14472988584940017414
LS2PI = 0.91893853320467274178  # log(sqrt(2*pi))
SQRTH = 7.07106781186547524401e-1  # sqrt(2)/2
SQRT_2PI = 2.50662827463100050242

_big = 4.503599627370496e15
_biginv = 2.22044604925031308085e-16


def polevl(x, coef):
    """Evaluate polynomial with coefficients in Cephes order (highest first)."""
    result = 0.0
    for c in coef:
        result = result * x + c
    return result


# --- log gamma (Cephes lgam) -------------------------------------------

_LGAM_A = [
    8.11614167470508450300e-4,
    -5.95061904284301438324e-4,
    7.93650340457716943945e-4,
    -2.77777777730099687205e-3,
    8.33333333333331927722e-2,
]
_LGAM_B = [
    -1.37825152569120859100e3,
    -3.88016315134637840924e4,
    -3.31612992738871184744e5,
    -1.16237097492762307383e6,
    -1.72173700820839662146e6,
    -8.53555664245765465627e5,
]
_LGAM_C = [
    1.0,
    -3.51815701436523470549e2,
    -1.70642106651881159223e4,
    -2.20528590553854454839e5,
    -1.13933444367982507207e6,
    -2.53252307177582951285e6,
    -2.01889141433532773231e6,
]


def lgam(x):
    """Natural log of |gamma(x)|."""
    if x < -34.0:
        q = -x
        w = lgam(q)
        p = math.floor(q)
        if p == q:
            raise OverflowError("lgam: pole at non-positive integer")
        z = q - p
        if z > 0.5:
            p += 1.0
            z = p - q
        z = q * math.sin(math.pi * z)
        if z == 0.0:
            raise OverflowError("lgam: pole at non-positive integer")
        return LOGPI - math.log(z) - w

    if x < 13.0:
        z = 1.0
        p = 0.0
        u = x
        while u >= 3.0:
            p -= 1.0
            u = x + p
            z *= u
        while u < 2.0:
            if u == 0.0:
                raise OverflowError("lgam: pole at non-positive integer")
            z /= u
            p += 1.0
            u = x + p
        if z < 0.0:
            z = -z
        if u == 2.0:
            return math.log(z)
        p -= 2.0
        x = x + p
        p = x * polevl(x, _LGAM_B) / polevl(x, _LGAM_C)
        return math.log(z) + p

    if x > MAXLGM:
        raise OverflowError("lgam: argument too large")
    q = (x - 0.5) * math.log(x) - x + LS2PI
    if x > 1.0e8:
        return q
    p = 1.0 / (x * x)
    if x >= 1000.0:
        q += (
            (7.9365079365079365079365e-4 * p - 2.7777777777777777777778e-3) * p
            + 0.0833333333333333333333
        ) / x
    else:
        q += polevl(p, _LGAM_A) / x
    return q


# --- error function (Cephes erf/erfc) ----------------------------------

_ERF_T = [
    9.60497373987051638749e0,
    9.00260197203842689217e1,
    2.23200534594684319226e3,
    7.00332514112805075473e3,
    5.55923013010394962768e4,
]
_ERF_U = [
    1.0,
    3.35617141647503099647e1,
    5.21357949780152679795e2,
    4.59432382970980127987e3,
    2.26290000613890934246e4,
    4.92673942608635921086e4,
]
_ERFC_P = [
    2.46196981473530512524e-10,
    5.64189564831068821977e-1,
    7.46321056442269912687e0,
    4.86371970985681366614e1,
    1.96520832956077098242e2,
    5.26445194995477358631e2,
    9.34528527171957607540e2,
    1.02755188689515710272e3,
    5.57535335369399327526e2,
]
_ERFC_Q = [
    1.0,
    1.32281951154744992508e1,
    8.67072140885989742329e1,
    3.54937778887819891062e2,
    9.75708501743205489753e2,
    1.82390916687909736289e3,
    2.24633760818710981792e3,
    1.65666309194161350182e3,
    5.57535340817727675546e2,
]
_ERFC_R = [
    5.64189583547755073984e-1,
    1.27536670759978104416e0,
    5.01905042251180477414e0,
    6.16021097993053585195e0,
    7.40974269950448939160e0,
    2.97886665372100240670e0,
]
_ERFC_S = [
    1.0,
    2.26052863220117276590e0,
    9.39603524938001434673e0,
    1.20489539808096656605e1,
    1.70814450747565897222e1,
    9.60896809063285878198e0,
    3.36907645100081516050e0,
]


def erf(x):
    """Error function."""
    if abs(x) > 1.0:
        return 1.0 - erfc(x)
    z = x * x
    return x * polevl(z, _ERF_T) / polevl(z, _ERF_U)


def erfc(a):
    """Complemented error function, accurate in the far tail."""
    x = abs(a)
    if x < 1.0:
        return 1.0 - erf(a)
    z = -a * a
    if z < MINLOG:
        return 2.0 if a < 0.0 else 0.0
    z = math.exp(z)
    if x < 8.0:
        p = polevl(x, _ERFC_P)
        q = polevl(x, _ERFC_Q)
    else:
        p = polevl(x, _ERFC_R)
        q = polevl(x, _ERFC_S)
    y = (z * p) / q
    if a < 0.0:
        y = 2.0 - y
    if y == 0.0:
        return 2.0 if a < 0.0 else 0.0
    return y


def ndtr(x):
    """Standard normal CDF."""
    y = x * SQRTH
    z = abs(y)
    if z < SQRTH:
        return 0.5 + 0.5 * erf(y)
    p = 0.5 * erfc(z)
    if y > 0.0:
        p = 1.0 - p
    return p


# --- inverse normal CDF (Acklam + Halley polish) ------------------------

_NDTRI_A = [
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
]
_NDTRI_B = [
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
]
_NDTRI_C = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
]
_NDTRI_D = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
]


def ndtri(p):
    """Inverse of the standard normal CDF."""
    if not 0.0 < p < 1.0:
        raise ValueError("ndtri: argument must lie in (0, 1)")
    if p > 0.5:
        # work on the lower tail where ndtr keeps full relative precision
        return -ndtri(1.0 - p)
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        x = polevl(q, _NDTRI_C) / (polevl(q, _NDTRI_D) * q + 1.0)
    else:
        q = p - 0.5
        r = q * q
        x = q * polevl(r, _NDTRI_A) / (polevl(r, _NDTRI_B) * r + 1.0)
    # two Halley steps against ndtr pin the result to double precision
    for _ in range(2):
        e = ndtr(x) - p
        u = e * SQRT_2PI * math.exp(0.5 * x * x)
        x -= u / (1.0 + 0.5 * x * u)
    return x


# --- regularized incomplete beta (Cephes incbet) -------------------------


def incbet(a, b, x):
    """Regularized incomplete beta integral I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("incbet: a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0

    flag = 0
    if b * x <= 1.0 and x <= 0.95:
        return _incbet_result(_pseries(a, b, x), flag)

    w = 1.0 - x
    if x > a / (a + b):
        flag = 1
        a, b = b, a
        xc, x = x, w
    else:
        xc = w

    if flag == 1 and b * x <= 1.0 and x <= 0.95:
        return _incbet_result(_pseries(a, b, x), flag)

    # choose the continued fraction that converges faster here
    y = x * (a + b - 2.0) - (a - 1.0)
    if y < 0.0:
        w = _incbet_cf1(a, b, x)
    else:
        w = _incbet_cf2(a, b, x) / xc

    y = a * math.log(x) + b * math.log(xc) + lgam(a + b) - lgam(a) - lgam(b)
    y += math.log(w / a)
    t = 0.0 if y < MINLOG else math.exp(y)
    return _incbet_result(t, flag)


def _incbet_result(t, flag):
    if flag == 1:
        t = 1.0 - MACHEP if t <= MACHEP else 1.0 - t
    return t


def _pseries(a, b, x):
    ai = 1.0 / a
    u = (1.0 - b) * x
    v = u / (a + 1.0)
    t1 = v
    t = u
    n = 2.0
    s = 0.0
    z = MACHEP * ai
    while abs(v) > z:
        u = (n - b) * x / n
        t *= u
        v = t / (a + n)
        s += v
        n += 1.0
    s += t1
    s += ai

    u = a * math.log(x)
    t = lgam(a + b) - lgam(a) - lgam(b) + u + math.log(s)
    return 0.0 if t < MINLOG else math.exp(t)


def _incbet_cf1(a, b, x):
    k1 = a
    k2 = a + b
    k3 = a
    k4 = a + 1.0
    k5 = 1.0
    k6 = b - 1.0
    k7 = k4
    k8 = a + 2.0

    pkm2 = 0.0
    qkm2 = 1.0
    pkm1 = 1.0
    qkm1 = 1.0
    ans = 1.0
    r = 1.0
    thresh = 3.0 * MACHEP

    for _ in range(300):
        xk = -(x * k1 * k2) / (k3 * k4)
        pk = pkm1 + pkm2 * xk
        qk = qkm1 + qkm2 * xk
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk

        xk = (x * k5 * k6) / (k7 * k8)
        pk = pkm1 + pkm2 * xk
        qk = qkm1 + qkm2 * xk
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk

        if qk != 0.0:
            r = pk / qk
        if r != 0.0:
            t = abs((ans - r) / r)
            ans = r
        else:
            t = 1.0
        if t < thresh:
            break

        k1 += 1.0
        k2 += 1.0
        k3 += 2.0
        k4 += 2.0
        k5 += 1.0
        k6 -= 1.0
        k7 += 2.0
        k8 += 2.0

        if abs(qk) + abs(pk) > _big:
            pkm2 *= _biginv
            pkm1 *= _biginv
            qkm2 *= _biginv
            qkm1 *= _biginv
        if abs(qk) < _biginv or abs(pk) < _biginv:
            pkm2 *= _big
            pkm1 *= _big
            qkm2 *= _big
            qkm1 *= _big
    return ans


def _incbet_cf2(a, b, x):
    k1 = a
    k2 = b - 1.0
    k3 = a
    k4 = a + 1.0
    k5 = 1.0
    k6 = a + b
    k7 = a + 1.0
    k8 = a + 2.0

    pkm2 = 0.0
    qkm2 = 1.0
    pkm1 = 1.0
    qkm1 = 1.0
    z = x / (1.0 - x)
    ans = 1.0
    r = 1.0
    thresh = 3.0 * MACHEP

    for _ in range(300):
        xk = -(z * k1 * k2) / (k3 * k4)
        pk = pkm1 + pkm2 * xk
        qk = qkm1 + qkm2 * xk
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk

        xk = (z * k5 * k6) / (k7 * k8)
        pk = pkm1 + pkm2 * xk
        qk = qkm1 + qkm2 * xk
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk

        if qk != 0.0:
            r = pk / qk
        if r != 0.0:
            t = abs((ans - r) / r)
            ans = r
        else:
            t = 1.0
        if t < thresh:
            break

        k1 += 1.0
        k2 -= 1.0
        k3 += 2.0
        k4 += 2.0
        k5 += 1.0
        k6 += 1.0
        k7 += 2.0
        k8 += 2.0

        if abs(qk) + abs(pk) > _big:
            pkm2 *= _biginv
            pkm1 *= _biginv
            qkm2 *= _biginv
            qkm1 *= _biginv
        if abs(qk) < _biginv or abs(pk) < _biginv:
            pkm2 *= _big
            pkm1 *= _big
            qkm2 *= _big
            qkm1 *= _big
    return ans
