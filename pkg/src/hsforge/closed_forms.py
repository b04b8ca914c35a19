"""Hand-expanded formulas for small decompositions and commutator integrals.

These are independent of the peeling machinery: each one is a fixed
polynomial in the input components, used as a second route in tests and in
the worked demos.
"""

from __future__ import annotations

from .algebra import LinOp, op_bracket
from .hs import HSDeriv, hs_inverse


def box22_factors(D: HSDeriv) -> dict[tuple[int, ...], list[LinOp]]:
    """Factors of D over ``box((2, 2))`` keyed by ray, as component lists ``[E_1, ...]``."""
    d = lambda a, b: D.coeff((a, b))
    d01, d02, d10, d11, d12, d20, d21, d22 = (d(0, 1), d(0, 2), d(1, 0), d(1, 1), d(1, 2),
                                              d(2, 0), d(2, 1), d(2, 2))
    e2_1 = d12 - d01 @ d11 - d02 @ d10 + d01 @ d01 @ d10
    e3_1 = d11 - d01 @ d10
    e3_2 = (d22 - d01 @ d21 - d02 @ d20 - d12 @ d10 + d01 @ d01 @ d20 + d01 @ d11 @ d10
            + d02 @ d10 @ d10 - d01 @ d01 @ d10 @ d10)
    e4_1 = d21 - d01 @ d20 - d11 @ d10 + d01 @ d10 @ d10
    return {
        (0, 1): [d01, d02],
        (1, 2): [e2_1],
        (1, 1): [e3_1, e3_2],
        (2, 1): [e4_1],
        (1, 0): [d10, d20],
    }


def star_components(D: HSDeriv) -> list[LinOp]:
    """``[D*_1, D*_2]`` of a uni-variate D of length ≥ 2 by the explicit formulas."""
    d1, d2 = D.coeff((1,)), D.coeff((2,))
    return [-d1, d1 @ d1 - d2]


def intro_g22(D: HSDeriv, E: HSDeriv) -> LinOp:
    """Second component of the length-2 integral of ``[D_1, E_1]``, fully expanded."""
    d1, d2, e1, e2 = D.coeff((1,)), D.coeff((2,)), E.coeff((1,)), E.coeff((2,))
    return (d2 @ e2 - d2 @ e1 @ e1 - d1 @ e2 @ d1 + d1 @ e1 @ d1 @ e1 + e2 @ d1 @ d1
            - e2 @ d2 - e1 @ d1 @ d1 @ e1 + e1 @ d2 @ e1)


def _conv(left: list[LinOp], mid: LinOp, right: list[LinOp], total: int) -> LinOp:
    """``sum_{i+j=total} left[i] @ mid @ right[j]``."""
    acc = mid.scale(0)
    for i in range(total + 1):
        j = total - i
        if i < len(left) and j < len(right):
            acc = acc + left[i] @ mid @ right[j]
    return acc


class BracketForms:
    """Components of ``F = (D ⊠ E)(D* ⊠ E*)`` and the integral components built from them."""

    def __init__(self, D: HSDeriv, E: HSDeriv):
        self.D, self.E = D.sequence(), E.sequence()
        self.Ds, self.Es = hs_inverse(D).sequence(), hs_inverse(E).sequence()
        self.m = D.length

    def F(self, a: int, b: int) -> LinOp:
        """Direct sum ``sum D_i E_r D*_j E*_k`` over ``i+j = a``, ``r+k = b``."""
        D, E, Ds, Es = self.D, self.E, self.Ds, self.Es
        acc = D[0].scale(0)
        for i in range(a + 1):
            for r in range(b + 1):
                if i < len(D) and r < len(E) and a - i < len(Ds) and b - r < len(Es):
                    acc = acc + D[i] @ E[r] @ Ds[a - i] @ Es[b - r]
        return acc

    def F_r1(self, r: int) -> LinOp:
        return _conv(self.D, self.E[1], self.Ds, r)

    def F_1r(self, r: int) -> LinOp:
        return _conv(self.E, self.Ds[1], self.Es, r)

    def F_1r_printed(self, r: int) -> LinOp:
        """Variant with the rightmost factor unstarred. It never equals ``F(1, r)``; kept as a negative check."""
        return _conv(self.E, self.Ds[1], self.E, r)

    def F23(self) -> LinOp:
        return _conv(self.E, self.Ds[2], self.Es, 3) + self.D[1] @ _conv(self.E, self.Ds[1], self.Es, 3)

    def F32(self) -> LinOp:
        return _conv(self.D, self.E[2], self.Ds, 3) + _conv(self.D, self.E[1], self.Ds, 3) @ self.Es[1]

    def F44(self) -> LinOp:
        acc = self.D[0].scale(0)
        for r in range(1, 5):
            acc = acc + _conv(self.D, self.E[r], self.Ds, 4) @ self.Es[4 - r]
        return acc

    def H2(self) -> LinOp:
        D, E, Ds, Es = self.D, self.E, self.Ds, self.Es
        return (D[2] @ E[2] + D[1] @ E[2] @ Ds[1] + E[2] @ Ds[2]
                + (D[2] @ E[1] + D[1] @ E[1] @ Ds[1] + E[1] @ Ds[2]) @ Es[1])

    def H3(self) -> LinOp:
        return self.F(3, 3) - self.F(1, 2) @ self.F(2, 1)

    def H3_expanded(self) -> LinOp:
        D, E, Ds, Es = self.D, self.E, self.Ds, self.Es
        return (_conv(E, Ds[3], Es, 3) + D[2] @ _conv(E, Ds[1], Es, 3) + D[1] @ _conv(E, Ds[2], Es, 3)
                - _conv(E, Ds[1], Es, 2) @ _conv(D, E[1], Ds, 2))

    def H4(self) -> LinOp:
        F = self.F
        br = op_bracket(self.D[1], self.E[1])
        return (F(4, 4) - F(1, 3) @ F(3, 1) - F(1, 2) @ F(3, 2) - F(2, 3) @ F(2, 1)
                + F(1, 2) @ br @ F(2, 1))
