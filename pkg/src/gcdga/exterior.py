"""Sparse exterior algebra over Q(i).

A :class:`Multivector` is a finite sum of monomials ``c * b_{i1} ^ ... ^ b_{ik}``
stored as ``{(i1, ..., ik): c}`` with strictly increasing index tuples and
nonzero coefficients. The Koszul sign of any reordering is absorbed into
the coefficient, so two multivectors are equal iff their term maps are.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .scalars import ONE, ZERO, GaussianRational, ScalarLike

Index = tuple[int, ...]


class DimensionError(ValueError):
    pass


class PairingError(ValueError):
    pass


MIXED = "mixed"


def sort_with_sign(indices: Sequence[int]) -> tuple[int, Index]:
    """Sort ``indices``; return ``(sign, sorted)`` or ``(0, ())`` on a repeat."""
    idx = list(indices)
    sign = 1
    # insertion sort: every adjacent swap flips the sign
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and idx[j - 1] == idx[j]:
            return 0, ()
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, ()
    return sign, tuple(idx)


class Multivector:
    __slots__ = ("ambient_dim", "terms")

    def __init__(self, ambient_dim: int, terms: Mapping[Iterable[int], ScalarLike] | None = None):
        object.__setattr__(self, "ambient_dim", int(ambient_dim))
        clean: dict[Index, GaussianRational] = {}
        for key, value in (terms or {}).items():
            c = GaussianRational.coerce(value)
            if c.is_zero():
                continue
            sign, idx = sort_with_sign(tuple(key))
            if sign == 0:
                continue
            if idx and (idx[0] < 0 or idx[-1] >= ambient_dim):
                raise DimensionError(f"index tuple {key} outside ambient dimension {ambient_dim}")
            new = clean.get(idx, ZERO) + (c if sign > 0 else -c)
            if new.is_zero():
                clean.pop(idx, None)
            else:
                clean[idx] = new
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Multivector":
        return cls(n)

    @classmethod
    def scalar(cls, n: int, c: ScalarLike = 1) -> "Multivector":
        return cls(n, {(): c})

    @classmethod
    def generator(cls, n: int, i: int, c: ScalarLike = 1) -> "Multivector":
        return cls(n, {(i,): c})

    @classmethod
    def monomial(cls, n: int, indices: Iterable[int], c: ScalarLike = 1) -> "Multivector":
        return cls(n, {tuple(indices): c})

    @classmethod
    def from_vector(cls, coeffs: Sequence[ScalarLike]) -> "Multivector":
        return cls(len(coeffs), {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def _raw(cls, n: int, terms: dict[Index, GaussianRational]) -> "Multivector":
        # trusted constructor: caller guarantees canonical form
        mv = cls.__new__(cls)
        object.__setattr__(mv, "ambient_dim", n)
        object.__setattr__(mv, "terms", terms)
        return mv

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """The common degree of all terms, ``None`` for zero, ``MIXED`` otherwise."""
        degrees = {len(k) for k in self.terms}
        if not degrees:
            return None
        if len(degrees) == 1:
            return degrees.pop()
        return MIXED

    def homogeneous_parts(self) -> dict[int, "Multivector"]:
        parts: dict[int, dict[Index, GaussianRational]] = {}
        for k, c in self.terms.items():
            parts.setdefault(len(k), {})[k] = c
        return {d: Multivector._raw(self.ambient_dim, t) for d, t in sorted(parts.items())}

    def part(self, degree: int) -> "Multivector":
        return Multivector._raw(
            self.ambient_dim, {k: c for k, c in self.terms.items() if len(k) == degree}
        )

    def coefficient(self, indices: Iterable[int]) -> GaussianRational:
        sign, idx = sort_with_sign(tuple(indices))
        if sign == 0:
            return ZERO
        c = self.terms.get(idx, ZERO)
        return c if sign > 0 else -c

    def vector(self) -> list[GaussianRational]:
        """Coefficients of a degree-1 (or zero) element as a dense list."""
        out = [ZERO] * self.ambient_dim
        for k, c in self.terms.items():
            if len(k) != 1:
                raise DimensionError("vector() needs a degree-1 element")
            out[k[0]] = c
        return out

    def filter(self, keep: Callable[[Index], bool]) -> "Multivector":
        return Multivector._raw(self.ambient_dim, {k: c for k, c in self.terms.items() if keep(k)})

    def conjugate(self) -> "Multivector":
        return Multivector._raw(self.ambient_dim, {k: c.conjugate() for k, c in self.terms.items()})

    def reindex(self, mapping: Sequence[int], ambient_dim: int | None = None) -> "Multivector":
        """Relabel generator ``i`` as ``mapping[i]`` (signs recomputed)."""
        n = self.ambient_dim if ambient_dim is None else ambient_dim
        return Multivector(n, {tuple(mapping[i] for i in k): c for k, c in self.terms.items()})

    # linear structure -----------------------------------------------------
    def _check(self, other: "Multivector"):
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.ambient_dim != self.ambient_dim:
            raise DimensionError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            new = terms.get(k, ZERO) + c
            if new.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = new
        return Multivector._raw(self.ambient_dim, terms)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return Multivector._raw(self.ambient_dim, {k: -c for k, c in self.terms.items()})

    def scale(self, c: ScalarLike) -> "Multivector":
        c = GaussianRational.coerce(c)
        if c.is_zero():
            return Multivector(self.ambient_dim)
        return Multivector._raw(self.ambient_dim, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, Multivector):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other: "Multivector") -> "Multivector":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.ambient_dim, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Multivector({self.ambient_dim}, {self.format()})"

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for k in sorted(self.terms, key=lambda t: (len(t), t)):
            c = self.terms[k]
            if not k:
                pieces.append(f"({c})")
                continue
            label = "^".join(names[i] if names else f"b{i}" for i in k)
            if c == ONE:
                pieces.append(label)
            elif c == -ONE:
                pieces.append(f"-{label}")
            else:
                pieces.append(f"({c})*{label}")
        return " + ".join(pieces).replace("+ -", "- ")

    # serialization --------------------------------------------------------
    def to_json(self) -> list:
        return [[list(k), c.to_wire()] for k, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))]

    @classmethod
    def from_json(cls, ambient_dim: int, data: list) -> "Multivector":
        terms: dict[Index, GaussianRational] = {}
        for entry in data:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise ValueError(f"malformed multivector term {entry!r}")
            idx, coeff = entry
            c = GaussianRational.coerce(coeff)
            key = tuple(int(i) for i in idx)
            sign, canon = sort_with_sign(key)
            if sign == 0:
                continue
            terms[canon] = terms.get(canon, ZERO) + (c if sign > 0 else -c)
        return cls(ambient_dim, terms)


def wedge(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    out: dict[Index, GaussianRational] = {}
    for ka, ca in a.terms.items():
        sa = set(ka)
        for kb, cb in b.terms.items():
            if sa.intersection(kb):
                continue
            sign, idx = sort_with_sign(ka + kb)
            c = ca * cb
            if sign < 0:
                c = -c
            new = out.get(idx, ZERO) + c
            if new.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = new
    return Multivector._raw(a.ambient_dim, out)


def wedge_all(factors: Iterable[Multivector], n: int) -> Multivector:
    result = Multivector.scalar(n)
    for f in factors:
        result = wedge(result, f)
    return result


def linear_combination(n: int, items: Iterable[tuple[ScalarLike, Multivector]]) -> Multivector:
    out: dict[Index, GaussianRational] = {}
    for c, mv in items:
        c = GaussianRational.coerce(c)
        if c.is_zero():
            continue
        for k, v in mv.terms.items():
            new = out.get(k, ZERO) + c * v
            if new.is_zero():
                out.pop(k, None)
            else:
                out[k] = new
    return Multivector._raw(n, out)


def _pairing(pairing, i: int, j: int) -> GaussianRational:
    if pairing is None:
        return ONE if i == j else ZERO
    return pairing[i][j]


def contract(form: Multivector, target: Multivector, pairing=None) -> Multivector:
    """Interior product of ``form`` into ``target``.

    ``pairing[i][j]`` is the value of the i-th basis element of the first
    argument's space on the j-th basis element of the target's space
    (identity when omitted: mutually dual bases). On degree one,
    ``contract(a, x ^ y) = a(x) y - a(y) x``; a monomial ``a1 ^ ... ^ ak``
    contracts as ``i_{ak} ... i_{a1}`` (first factor applied first).
    """
    if pairing is None and form.ambient_dim != target.ambient_dim:
        raise PairingError("implicit dual pairing needs equal dimensions")
    if pairing is not None:
        if len(pairing) != form.ambient_dim or any(len(r) != target.ambient_dim for r in pairing):
            raise PairingError("pairing table shape does not match the two spaces")
    n = target.ambient_dim
    result = Multivector(n)
    for kf, cf in form.terms.items():
        piece = target.scale(cf)
        for i in kf:
            piece = _contract_one(i, piece, pairing)
            if piece.is_zero():
                break
        result = result + piece
    return result


def _contract_one(i: int, target: Multivector, pairing) -> Multivector:
    out: dict[Index, GaussianRational] = {}
    for k, c in target.terms.items():
        for pos, j in enumerate(k):
            p = _pairing(pairing, i, j)
            if p.is_zero():
                continue
            rest = k[:pos] + k[pos + 1:]
            v = c * p
            if pos % 2:
                v = -v
            new = out.get(rest, ZERO) + v
            if new.is_zero():
                out.pop(rest, None)
            else:
                out[rest] = new
    return Multivector._raw(target.ambient_dim, out)


def monomial_basis(n: int, k: int) -> list[Index]:
    return list(combinations(range(n), k))


def evaluate_form(form: Multivector, vectors: Sequence[Sequence[ScalarLike]]) -> GaussianRational:
    """Evaluate a k-form on k vectors (determinant convention, no 1/k!)."""
    k = len(vectors)
    total = ZERO
    for idx, c in form.terms.items():
        if len(idx) != k:
            continue
        total = total + c * _det([[GaussianRational.coerce(vectors[col][row]) for col in range(k)] for row in idx])
    return total


def _det(m: list[list[GaussianRational]]) -> GaussianRational:
    n = len(m)
    if n == 0:
        return ONE
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = ZERO
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def form_from_bilinear(n: int, b: Callable[[int, int], ScalarLike]) -> Multivector:
    """The 2-form with values ``b(i, j)`` on basis pairs ``i < j``."""
    return Multivector(n, {(i, j): b(i, j) for i, j in combinations(range(n), 2)})


def extend_derivation(mv: Multivector, images: Sequence[Multivector], odd: bool) -> Multivector:
    """Apply the derivation of wedge fixed by ``images[i]`` on generator ``i``.

    ``odd`` selects the sign rule: an odd derivation picks up ``(-1)^p`` when
    it passes ``p`` degree-one factors, an even one does not. Scalars map to 0.
    """
    n = mv.ambient_dim
    out: dict[Index, GaussianRational] = {}
    for k, c in mv.terms.items():
        for pos, g in enumerate(k):
            img = images[g]
            if img.is_zero():
                continue
            left, right = k[:pos], k[pos + 1:]
            sl = set(left) | set(right)
            coeff = -c if (odd and pos % 2) else c
            for ki, ci in img.terms.items():
                if sl.intersection(ki):
                    continue
                sign, idx = sort_with_sign(left + ki + right)
                v = coeff * ci
                if sign < 0:
                    v = -v
                new = out.get(idx, ZERO) + v
                if new.is_zero():
                    out.pop(idx, None)
                else:
                    out[idx] = new
    return Multivector._raw(n, out)


def extend_homomorphism(mv: Multivector, images: Sequence[Multivector]) -> Multivector:
    """Apply the wedge-multiplicative extension of ``g_i -> images[i]``; 1 -> 1."""
    n = images[0].ambient_dim if images else mv.ambient_dim
    result = Multivector(n)
    for k, c in mv.terms.items():
        piece = Multivector.scalar(n, c)
        for g in k:
            piece = wedge(piece, images[g])
            if piece.is_zero():
                break
        result = result + piece
    return result


def parse_monomial(key: str, names: Sequence[str]) -> tuple[int, ...]:
    """Split ``"zbar^1^z_1"`` into basis positions, matching the longest name at each step.

    Names may themselves contain ``^``.
    """
    if not key:
        return ()
    order = sorted(range(len(names)), key=lambda i: -len(names[i]))
    out = []
    pos = 0
    while True:
        for i in order:
            nm = names[i]
            end = pos + len(nm)
            if key.startswith(nm, pos) and (end == len(key) or key[end] == "^"):
                out.append(i)
                pos = end
                break
        else:
            raise KeyError(f"cannot parse {key[pos:]!r} in {key!r}")
        if pos == len(key):
            return tuple(out)
        pos += 1
