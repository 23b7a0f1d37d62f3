"""Independent oracles for the spheroid values frozen in the test-suite.

Run directly to reprint the values::

    python tests/oracles/spheroid_oracles.py

* integrals are evaluated in the original variable ``x`` with mpmath's
  tanh-sinh rule, which tolerates the ``1/sqrt(1 - x)`` endpoint
  behaviour; no substitution is shared with the library;
* second-order expansions of both deficits in ``h = r - 1`` come from
  sympy series of the closed forms.
"""
import mpmath
import sympy as sp

mpmath.mp.dps = 40


def willmore_by_x_quadrature(r):
    r = mpmath.mpf(r)

    def integrand(x):
        f1 = -x / mpmath.sqrt(1 - x * x)
        f2 = -1 / (1 - x * x) ** mpmath.mpf(1.5)
        q = mpmath.sqrt(1 + r * r * f1 * f1)
        return x * q * r * r * (f2 / q**3 + f1 / (x * q)) ** 2

    # 1/4 * 4 pi * integral
    return mpmath.pi * mpmath.quad(integrand, [0, 1])


def area_by_x_quadrature(r):
    r = mpmath.mpf(r)
    return 4 * mpmath.pi * mpmath.quad(lambda x: x * mpmath.sqrt(1 + r * r * x * x / (1 - x * x)), [0, 1])


def series_coefficients():
    """Leading coefficients of W - 4pi and I - I0 in powers of h = r - 1."""
    h = sp.symbols("h", positive=True)
    r = 1 + h
    s = sp.sqrt(r**2 - 1)
    asn = sp.asin(s / r)
    w = sp.pi * ((7 * r**2 + 2) / (3 * r**2) + r**2 / s * asn)
    i0 = (6 * sp.sqrt(sp.pi)) ** sp.Rational(2, 3)
    iso = i0 / 2 * (r ** sp.Rational(-2, 3) + r ** sp.Rational(4, 3) / s * asn)
    ws = sp.series(w - 4 * sp.pi, h, 0, 3).removeO()
    iss = sp.series(iso - i0, h, 0, 3).removeO()
    return {
        "willmore_h1": sp.simplify(ws.coeff(h, 1)),
        "willmore_h2": sp.simplify(ws.coeff(h, 2) / (4 * sp.pi)),
        "iso_h1": sp.simplify(iss.coeff(h, 1)),
        "iso_h2": sp.simplify(iss.coeff(h, 2) / i0),
        "limit": sp.simplify(sp.limit((w - 4 * sp.pi) / (iso - i0), h, 0)),
    }


if __name__ == "__main__":
    for r in (2, 1.001, 1.1, 1.5, 3, 5, 0.5):
        print(f"W({r}) = {mpmath.nstr(willmore_by_x_quadrature(r), 20)}")
    print(f"area(2) = {mpmath.nstr(area_by_x_quadrature(2), 20)}")
    v2 = 4 * mpmath.pi * 2 / 3
    iso2 = area_by_x_quadrature(2) / v2 ** (mpmath.mpf(2) / 3)
    print(f"I(2) = {mpmath.nstr(iso2, 20)}")
    i0 = (6 * mpmath.sqrt(mpmath.pi)) ** (mpmath.mpf(2) / 3)
    print(f"deficit ratio(2) = {mpmath.nstr((willmore_by_x_quadrature(2) - 4 * mpmath.pi) / (iso2 - i0), 20)}")
    coeffs = series_coefficients()
    for k, v in coeffs.items():
        print(k, v, sp.N(v, 20))
