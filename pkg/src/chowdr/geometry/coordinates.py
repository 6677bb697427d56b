"""Numerical ring models of powers of an elliptic curve.

For an elliptic curve ``E`` without complex multiplication, divisor classes
on ``E^n`` up to numerical equivalence are the symmetric integer ``n x n``
matrices: the pullback of the point class along a homomorphism ``v: E^n -> E``
is ``v v^T``.  Top intersection numbers are mixed discriminants,

    D_1 . ... . D_n = coefficient of t_1...t_n in det(sum_i t_i H_i),

so ``D^n = n! det H``.  From these numbers the divisor-generated subring is
rebuilt up to numerical equivalence, and a homomorphism ``E^m -> E^n`` given
by an integer matrix ``M`` acts by ``H -> M^T H M`` on divisors.  The
pushforward is the adjoint of the pullback for the intersection pairing.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import factorial, prod

import sympy

from ..errors import ValidationError
from ..ring import GradedClass, RingModel, make_ring, mul
from .morphism import Morphism, from_tables

POINT = "pt"


def _as_matrix(m, n, what):
    rows = tuple(tuple(int(x) for x in row) for row in m)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValidationError(f"{what}: expected a {n}x{n} matrix")
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
        raise ValidationError(f"{what}: matrix is not symmetric")
    return rows


def outer(v):
    """Divisor class ``v v^T``: pullback of the point along ``x -> v.x``."""
    return tuple(tuple(a * b for b in v) for a in v)


def point_pullback(n, i):
    """Class of ``{x_i = const}`` on ``E^n``."""
    return outer([1 if j == i else 0 for j in range(n)])


def diagonal(n, i, j):
    """Class of ``{x_i = x_j}`` on ``E^n``."""
    v = [0] * n
    v[i], v[j] = 1, -1
    return outer(v)


def poincare_form(n, i, j):
    """Poincaré class on the factors ``i, j`` (``E`` identified with its dual)."""
    return tuple(
        tuple(-1 if {a, b} == {i, j} else 0 for b in range(n)) for a in range(n)
    )


def _det(cols):
    n = len(cols)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for a in range(n):
            for b in range(a + 1, n):
                if seen[a] > seen[b]:
                    sign = -sign
        term = sign
        for c in range(n):
            term *= cols[c][perm[c]]
            if not term:
                break
        total += term
    return total


def mixed_discriminant(mats):
    """Coefficient of ``t_1...t_n`` in ``det(sum t_i H_i)``."""
    n = len(mats)
    if n == 0:
        return 1
    mult = prod(factorial(c) for c in Counter(mats).values())
    total = 0
    for arrangement in set(permutations(mats)):
        cols = [[arrangement[c][r][c] for r in range(n)] for c in range(n)]
        total += _det(cols)
    return total * mult


class Coordinates:
    """Attachment of a ring model to ``E^n``.

    ``forms`` gives the symmetric matrix of every codimension-1 basis symbol;
    ``monomials`` writes every basis symbol as ``scale * product`` of
    codimension-1 symbols.
    """

    def __init__(self, ring, n, forms, monomials):
        self.ring = ring
        self.n = n
        self.forms = {s: _as_matrix(m, n, f"{ring.name}.{s}") for s, m in forms.items()}
        self.monomials = dict(monomials)
        for s in ring.basis[1] if ring.dimension >= 1 else ():
            self.monomials.setdefault(s, (1, (s,)))
        self.monomials.setdefault(ring.symbol((0, 0)), (1, ()))
        missing = [s for k in ring.keys() for s in [ring.symbol(k)] if s not in self.monomials]
        if missing:
            raise ValidationError(f"ring {ring.name!r}: no divisor monomial for {missing}")
        if ring.dimension >= 1 and set(self.forms) != set(ring.basis[1]):
            raise ValidationError(f"ring {ring.name!r}: forms must cover exactly the codimension-1 basis")
        self._gens = list(ring.basis[1]) if ring.dimension >= 1 else []
        idx = [(i, j) for i in range(n) for j in range(i, n)]
        self._sym_rows = idx
        self._solver = None
        if self._gens:
            a = sympy.Matrix([[self.forms[g][i][j] for g in self._gens] for i, j in idx])
            if a.rank() != len(self._gens):
                raise ValidationError(f"ring {ring.name!r}: divisor forms are linearly dependent")
            self._solver = a

    def divisor(self, matrix) -> GradedClass:
        """The class of the divisor with symmetric matrix ``matrix``."""
        m = _as_matrix(matrix, self.n, f"divisor on {self.ring.name}")
        if not any(any(r) for r in m):
            return self.ring.zero()
        if self._solver is None:
            raise ValidationError(f"ring {self.ring.name!r} has no divisor classes")
        b = sympy.Matrix([m[i][j] for i, j in self._sym_rows])
        aug = self._solver.row_join(b)
        if aug.rank() != self._solver.rank():
            raise ValidationError(f"divisor {m} is not in the span of the forms of {self.ring.name!r}")
        sol, params = self._solver.gauss_jordan_solve(b)
        coeffs = {g: Fraction(int(v.p), int(v.q)) for g, v in zip(self._gens, sol)}
        return self.ring.element(coeffs)

    def monomial_class(self, symbol) -> GradedClass:
        return self.ring.basis_class(symbol)


def coordinates(ring: RingModel) -> Coordinates:
    try:
        return ring.meta["coords"]
    except KeyError:
        raise ValidationError(f"ring {ring.name!r} carries no elliptic-power coordinates") from None


def attach_coordinates(ring, n, forms, monomials=None) -> RingModel:
    ring.meta["coords"] = Coordinates(ring, n, forms, monomials or {})
    return ring


def _sym(c):
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def _to_fraction(v):
    v = sympy.Rational(v)
    return Fraction(int(v.p), int(v.q))


def elliptic_power(name, n, generators, point_name=POINT) -> RingModel:
    """Divisor-generated numerical ring of ``E^n``.

    ``generators`` maps symbols to symmetric integer matrices; they must be
    linearly independent.  Basis in codimension ``1 < k < n`` is a maximal
    numerically independent set of generator monomials (greedy, in sorted
    order); the top class is renamed ``point_name`` and normalised to degree 1.
    """
    gens = sorted(generators)
    forms = {g: _as_matrix(generators[g], n, f"{name}.{g}") for g in gens}
    if n == 0:
        ring = make_ring(name, 0, {0: ["one"]}, (), "one")
        return attach_coordinates(ring, 0, {})
    if n == 1:
        if len(gens) != 1:
            raise ValidationError(f"{name}: E^1 has exactly one divisor class")
        g = gens[0]
        if forms[g] != ((1,),):
            raise ValidationError(f"{name}: the generator of E^1 must be the point class [[1]]")
        ring = make_ring(name, 1, {0: ["one"], 1: [g]}, (), g)
        return attach_coordinates(ring, 1, forms)

    top_cache = {}

    def top(mono):
        key = tuple(sorted(mono))
        if key not in top_cache:
            top_cache[key] = mixed_discriminant(tuple(forms[gens[i]] for i in key))
        return top_cache[key]

    monos = {k: list(combinations_with_replacement(range(len(gens)), k)) for k in range(n + 1)}
    chosen = {0: [()], 1: [(i,) for i in range(len(gens))]}
    # expression of every monomial of degree k in the chosen basis (by position)
    express = {0: {(): {0: 1}}}

    def pairing_rows(k, rows):
        return sympy.Matrix([[top(m + c) for c in monos[n - k]] for m in rows])

    for k in range(1, n):
        rows = monos[k]
        p = pairing_rows(k, rows)
        if k == 1:
            if p.rank() != len(gens):
                raise ValidationError(f"{name}: generators are numerically dependent")
            pivots_rows = list(range(len(gens)))
        else:
            _, pivots_rows = p.T.rref()
            pivots_rows = list(pivots_rows)
            chosen[k] = [rows[i] for i in pivots_rows]
        b = p.extract(pivots_rows, list(range(p.cols)))
        _, pivot_cols = b.rref()
        inv = b.extract(list(range(b.rows)), list(pivot_cols)).inv()
        exp_k = {}
        for i, m in enumerate(rows):
            v = p.extract([i], list(pivot_cols))
            c = v * inv
            exp_k[m] = {j: _to_fraction(c[0, j]) for j in range(c.cols) if c[0, j] != 0}
        express[k] = exp_k

    base = next((m for m in monos[n] if top(m) != 0), None)
    if base is None:
        raise ValidationError(f"{name}: all top intersection numbers vanish")
    express[n] = {m: ({0: Fraction(top(m))} if top(m) else {}) for m in monos[n]}

    def sym(k, pos):
        if k == 0:
            return "one"
        if k == n:
            return point_name
        return "__".join(gens[i] for i in chosen[k][pos])

    basis = {k: [sym(k, j) for j in range(len(chosen[k]))] for k in range(n)}
    basis[n] = [point_name]
    chosen[n] = [base]

    products = []
    for k1 in range(1, n):
        for k2 in range(k1, n - k1 + 1):
            for j1, m1 in enumerate(chosen[k1]):
                for j2, m2 in enumerate(chosen[k2]):
                    if k1 == k2 and j2 < j1:
                        continue
                    m = tuple(sorted(m1 + m2))
                    val = {sym(k1 + k2, j): c for j, c in express[k1 + k2][m].items()}
                    if val:
                        products.append((sym(k1, j1), sym(k2, j2), val))

    ring = make_ring(name, n, basis, products, point_name)
    monomials = {}
    for k in range(2, n):
        for j, m in enumerate(chosen[k]):
            monomials[sym(k, j)] = (1, tuple(gens[i] for i in m))
    monomials[point_name] = (Fraction(1, top(base)), tuple(gens[i] for i in base))
    return attach_coordinates(ring, n, forms, monomials)


def _transform(form, m):
    """``M^T H M`` for ``M`` given as a list of rows (target x source)."""
    rows, cols = len(m), len(m[0]) if m else 0
    return tuple(
        tuple(
            sum(m[a][i] * form[a][b] * m[b][j] for a in range(rows) for b in range(rows))
            for j in range(cols)
        )
        for i in range(cols)
    )


def linear_map(name, source: RingModel, target: RingModel, matrix, validate=True) -> Morphism:
    """Morphism induced by the homomorphism ``x -> M x`` from ``E^m`` to ``E^n``.

    ``matrix`` has ``n`` rows and ``m`` columns (``m`` = rank of the source).
    Translations do not change numerical classes, so this also models
    sections such as ``s -> (a, s)``.
    """
    cs, ct = coordinates(source), coordinates(target)
    m = [list(map(int, row)) for row in matrix]
    if len(m) != ct.n or any(len(r) != cs.n for r in m):
        raise ValidationError(f"morphism {name!r}: matrix must be {ct.n}x{cs.n}")
    if cs.n == 0:
        m = [[] for _ in range(ct.n)]

    gen_pull = {}
    for g, form in ct.forms.items():
        gen_pull[g] = cs.divisor(_transform(form, m)) if cs.n else source.zero()
    pull = {}
    for k in target.keys():
        s = target.symbol(k)
        scale, factors = ct.monomials[s]
        img = source.unit
        for g in factors:
            img = mul(img, gen_pull[g])
        pull[k] = {kk: c * scale for kk, c in img._c.items()}

    rel = source.dimension - target.dimension
    push = {}
    for k in source.keys():
        kt = k[0] - rel
        if not 0 <= kt <= target.dimension:
            push[k] = {}
            continue
        tb = target.keys(kt)
        dual = target.keys(target.dimension - kt)
        if not tb:
            push[k] = {}
            continue
        b = GradedClass(source, {k: 1})
        rhs = []
        for a in dual:
            fa = GradedClass(source, pull[a])
            rhs.append(_sym(_integral(mul(b, fa))))
        gram = sympy.Matrix(
            [[_sym(_integral(mul(GradedClass(target, {t: 1}), GradedClass(target, {a: 1})))) for a in dual]
             for t in tb]
        )
        # c . gram = rhs
        sol = sympy.Matrix([rhs]) * gram.inv()
        push[k] = {t: _to_fraction(sol[0, j]) for j, t in enumerate(tb) if sol[0, j] != 0}
    return from_tables(name, source, target, rel, pull, push, validate=validate)


def _integral(x: GradedClass):
    r = x.ring
    return x._c.get(r.key(r.point_class), 0)
