"""Core domain types: instances, coefficient sets, verdicts, serialization.

Everything in this package is exact.  Integers are Python ints of unbounded
size, every non-integer quantity is a `fractions.Fraction`, and no
correctness decision is made in floating point.  Timing measurements are the
only floats anywhere, and they never feed back into a result.

The shared exact helpers (vector arithmetic, small dense rational linear
algebra, integer roots) live here because every other module needs them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

__all__ = [
    "ParseError",
    "BudgetExceeded",
    "dot",
    "l2_sq",
    "linf",
    "gcd_vector",
    "mat_det",
    "mat_solve",
    "mat_inverse",
    "is_positive_definite",
    "iroot",
    "ceil_root",
    "floor_sqrt_frac",
    "ceil_sqrt_frac",
    "Interval",
    "Punctured",
    "Box",
    "Ellipsoid",
    "CoefficientSet",
    "coefficient_alphabet",
    "Instance",
    "Verdict",
    "SOLVED",
    "NO_SOLUTION",
    "GUARD_ABORT",
    "verify_solution",
    "parse_instance",
    "serialize_instance",
    "parse_verdict",
    "serialize_verdict",
]


class ParseError(ValueError):
    """Raised when an instance or verdict document is malformed."""


class BudgetExceeded(RuntimeError):
    """A solver or enumerator refused to exceed its work budget.

    ``partial`` is the amount of work finished before aborting, so callers
    can report progress.  Nothing is ever truncated silently: hitting the
    budget always raises.
    """

    def __init__(self, message: str, partial: int = 0):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# exact vector helpers
# ---------------------------------------------------------------------------

def dot(u: Sequence, v: Sequence):
    """Inner product of two equal-length sequences, exact."""
    if len(u) != len(v):
        raise ValueError("dimension mismatch: %d vs %d" % (len(u), len(v)))
    return sum(a * b for a, b in zip(u, v))


def l2_sq(v: Sequence):
    """Squared Euclidean norm."""
    return sum(a * a for a in v)


def linf(v: Sequence):
    """Sup norm; 0 for the empty vector."""
    return max((abs(a) for a in v), default=0)


def gcd_vector(x: Sequence[int]) -> int:
    """gcd of the absolute values of the entries of a nonzero vector."""
    if not x or all(a == 0 for a in x):
        raise ValueError("zero vector")
    return math.gcd(*(abs(int(a)) for a in x))


# ---------------------------------------------------------------------------
# small dense rational linear algebra
#
# These run at desk scale (a dozen rows, say).  Plain fraction Gaussian
# elimination is fine there and trivially exact.
# ---------------------------------------------------------------------------

def _frac_rows(rows) -> list:
    return [[Fraction(a) for a in row] for row in rows]


def mat_det(rows) -> Fraction:
    """Determinant of a square rational matrix."""
    a = _frac_rows(rows)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            f = a[r][col] * inv
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def mat_solve(rows, rhs) -> tuple:
    """Solve A t = rhs for square rational A; raises on a singular system."""
    a = _frac_rows(rows)
    n = len(a)
    b = [Fraction(v) for v in rhs]
    if len(b) != n or any(len(r) != n for r in a):
        raise ValueError("dimension mismatch")
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        inv = 1 / a[col][col]
        for r in range(n):
            if r == col or a[r][col] == 0:
                continue
            f = a[r][col] * inv
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            b[r] -= f * b[col]
    return tuple(b[i] / a[i][i] for i in range(n))


def mat_inverse(rows) -> tuple:
    """Inverse of a square rational matrix as a tuple of tuples."""
    n = len(rows)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        cols.append(mat_solve(rows, e))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def is_positive_definite(rows) -> bool:
    """Sylvester test for a symmetric rational matrix, via exact LDL pivots."""
    a = _frac_rows(rows)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    for k in range(n):
        if a[k][k] <= 0:
            return False
        inv = 1 / a[k][k]
        for r in range(k + 1, n):
            if a[r][k] == 0:
                continue
            f = a[r][k] * inv
            for c in range(k, n):
                a[r][c] -= f * a[k][c]
    return True


# ---------------------------------------------------------------------------
# exact integer roots
# ---------------------------------------------------------------------------

def iroot(m: int, n: int) -> int:
    """floor(m ** (1/n)) for m >= 0, n >= 1, by pure integer Newton steps."""
    if n < 1:
        raise ValueError("root order must be positive")
    if m < 0:
        raise ValueError("negative radicand")
    if m < 2 or n == 1:
        return m
    x = 1 << ((m.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x ** n > m:
        x -= 1
    while (x + 1) ** n <= m:
        x += 1
    return x


def ceil_root(m: int, n: int) -> int:
    """Smallest integer k with k**n >= m."""
    r = iroot(m, n)
    return r if r ** n == m else r + 1


def floor_sqrt_frac(q: Fraction) -> int:
    """floor(sqrt(q)) for a nonnegative rational q.

    Uses sqrt(p/s) = sqrt(p*s)/s, so a single integer square root suffices.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    return math.isqrt(q.numerator * q.denominator) // q.denominator


def ceil_sqrt_frac(q: Fraction) -> int:
    """Smallest integer k >= 0 with k*k >= q."""
    q = Fraction(q)
    f = floor_sqrt_frac(q)
    return f if Fraction(f * f) >= q else f + 1


# ---------------------------------------------------------------------------
# coefficient sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """All integers in [lo, hi], applied per coordinate."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval requires lo <= hi")

    def contains_scalar(self, c: int) -> bool:
        return self.lo <= c <= self.hi

    def contains(self, c: Sequence[int]) -> bool:
        return all(self.lo <= v <= self.hi for v in c)


@dataclass(frozen=True)
class Punctured:
    """Integers c with 1 <= |c| <= d, applied per coordinate."""

    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("puncture radius must be positive")

    def contains_scalar(self, c: int) -> bool:
        return 1 <= abs(c) <= self.d

    def contains(self, c: Sequence[int]) -> bool:
        return all(1 <= abs(v) <= self.d for v in c)


@dataclass(frozen=True)
class Box:
    """Integer vectors with sup norm at most d."""

    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("box radius must be positive")

    def contains(self, c: Sequence[int]) -> bool:
        return linf(c) <= self.d

    def bounding_box_radius(self) -> int:
        return self.d


@dataclass(frozen=True)
class Ellipsoid:
    """Integer vectors c with c A c^T <= 1, A positive definite rational."""

    a: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.a)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("ellipsoid form must be a nonempty square matrix")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("ellipsoid form must be symmetric")
        if not is_positive_definite(rows):
            raise ValueError("ellipsoid form must be positive definite")
        object.__setattr__(self, "a", rows)

    @property
    def dim(self) -> int:
        return len(self.a)

    def quad_form(self, v: Sequence) -> Fraction:
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        total = Fraction(0)
        for i, row in enumerate(self.a):
            total += v[i] * dot(row, v)
        return total

    def contains(self, c: Sequence[int]) -> bool:
        return self.quad_form(c) <= 1

    def axis_extents_sq(self) -> tuple:
        """Squared coordinate extents of the body: the diagonal of A^-1."""
        inv = mat_inverse(self.a)
        return tuple(inv[i][i] for i in range(self.dim))

    def bounding_box_radius(self) -> int:
        """Minimal integer d with the body inside [-d, d]^n."""
        return max(ceil_sqrt_frac(e) for e in self.axis_extents_sq())


CoefficientSet = Union[Interval, Punctured, Box, Ellipsoid]


def coefficient_alphabet(cs: CoefficientSet) -> Optional[tuple]:
    """Per-coordinate candidate values in ascending order, or None if the
    set constrains coordinates jointly (ellipsoid)."""
    if isinstance(cs, Interval):
        return tuple(range(cs.lo, cs.hi + 1))
    if isinstance(cs, Punctured):
        return tuple(range(-cs.d, 0)) + tuple(range(1, cs.d + 1))
    if isinstance(cs, Box):
        return tuple(range(-cs.d, cs.d + 1))
    if isinstance(cs, Ellipsoid):
        return None
    raise TypeError(f"unknown coefficient set {cs!r}")


# ---------------------------------------------------------------------------
# instances and verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """A solve instance: weights x, a coefficient set, a target, and an
    optional magnitude bound used by the average-case routine."""

    x: tuple
    coeffs: CoefficientSet
    tau: int = 0
    m_bound: Optional[int] = None

    def __post_init__(self):
        xs = tuple(int(v) for v in self.x)
        if not xs:
            raise ValueError("empty x")
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "tau", int(self.tau))
        if isinstance(self.coeffs, Ellipsoid) and self.coeffs.dim != len(xs):
            raise ValueError("ellipsoid dimension does not match x")
        if self.m_bound is not None:
            mb = int(self.m_bound)
            if mb < 1:
                raise ValueError("m_bound must be positive")
            object.__setattr__(self, "m_bound", mb)

    @property
    def n(self) -> int:
        return len(self.x)


SOLVED = "solved"
NO_SOLUTION = "no_solution"
GUARD_ABORT = "guard_abort"

_STATUSES = (SOLVED, NO_SOLUTION, GUARD_ABORT)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a solve: a status, a witness iff solved, and a reason."""

    status: str
    witness: Optional[tuple] = None
    reason: str = ""

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if (self.status == SOLVED) != (self.witness is not None):
            raise ValueError("witness must be present exactly when solved")
        if self.witness is not None:
            object.__setattr__(self, "witness", tuple(int(v) for v in self.witness))

    @classmethod
    def solved(cls, c: Sequence[int], reason: str = "") -> "Verdict":
        return cls(SOLVED, tuple(c), reason)

    @classmethod
    def no_solution(cls, reason: str = "") -> "Verdict":
        return cls(NO_SOLUTION, None, reason)

    @classmethod
    def guard_abort(cls, reason: str = "") -> "Verdict":
        return cls(GUARD_ABORT, None, reason)

    @property
    def is_solved(self) -> bool:
        return self.status == SOLVED


def verify_solution(inst: Instance, c: Sequence[int], mode: str = "balancing") -> bool:
    """Exact check that c solves the instance under the given mode.

    balancing: c.x == 0 and c != 0.  gss: c.x == tau, the zero vector is
    admitted when it lies in the coefficient set and tau == 0.  Membership
    in the coefficient set is always required.
    """
    if mode not in ("balancing", "gss"):
        raise ValueError(f"unknown mode {mode!r}")
    c = tuple(int(v) for v in c)
    if len(c) != inst.n:
        raise ValueError("witness length does not match x")
    target = 0 if mode == "balancing" else inst.tau
    if dot(c, inst.x) != target:
        return False
    if mode == "balancing" and all(v == 0 for v in c):
        return False
    return inst.coeffs.contains(c)


# ---------------------------------------------------------------------------
# JSON codecs
#
# Large integers travel as decimal strings so documents survive parsers that
# silently lose precision on big numbers.  Rational matrix entries are "p/q"
# strings.  Serialization is canonical: sorted keys, no whitespace.
# ---------------------------------------------------------------------------

def _parse_int(value, field: str) -> int:
    if isinstance(value, bool):
        raise ParseError(f"{field}: expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise ParseError(f"{field}: not a decimal integer: {value!r}") from None
    raise ParseError(f"{field}: expected an integer, got {type(value).__name__}")


def _parse_coeffs(doc, n: int) -> CoefficientSet:
    if not isinstance(doc, dict):
        raise ParseError("coeffs: expected an object")
    kind = doc.get("kind")
    try:
        if kind == "interval":
            lo = _parse_int(doc["lo"], "coeffs.lo")
            hi = _parse_int(doc["hi"], "coeffs.hi")
            return Interval(lo, hi)
        if kind == "punctured":
            return Punctured(_parse_int(doc["d"], "coeffs.d"))
        if kind == "box":
            return Box(_parse_int(doc["d"], "coeffs.d"))
        if kind == "ellipsoid":
            raw = doc["a"]
            if not isinstance(raw, list) or not raw:
                raise ParseError("coeffs.a: expected a nonempty matrix")
            rows = []
            for i, row in enumerate(raw):
                if not isinstance(row, list):
                    raise ParseError(f"coeffs.a[{i}]: expected a row")
                parsed = []
                for j, entry in enumerate(row):
                    try:
                        parsed.append(Fraction(entry))
                    except (ValueError, ZeroDivisionError, TypeError):
                        raise ParseError(
                            f"coeffs.a[{i}][{j}]: not a rational: {entry!r}"
                        ) from None
                rows.append(tuple(parsed))
            if len(rows) != n:
                raise ParseError("coeffs.a: dimension does not match x")
            return Ellipsoid(tuple(rows))
    except KeyError as e:
        raise ParseError(f"coeffs: missing field {e.args[0]!r}") from None
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"coeffs: {e}") from None
    raise ParseError(f"coeffs.kind: unknown kind {kind!r}")


def parse_instance(text) -> Instance:
    """Parse an instance document; errors name the offending field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level: expected an object")
    raw_x = doc.get("x")
    if not isinstance(raw_x, list):
        raise ParseError("x: expected a list")
    if not raw_x:
        raise ParseError("x: empty")
    x = tuple(_parse_int(v, f"x[{i}]") for i, v in enumerate(raw_x))
    if "coeffs" not in doc:
        raise ParseError("coeffs: missing")
    coeffs = _parse_coeffs(doc["coeffs"], len(x))
    tau = _parse_int(doc.get("tau", 0), "tau")
    m_bound = None
    if doc.get("m_bound") is not None:
        m_bound = _parse_int(doc["m_bound"], "m_bound")
        if m_bound < 1:
            raise ParseError("m_bound: must be positive")
    try:
        return Instance(x, coeffs, tau, m_bound)
    except ValueError as e:
        raise ParseError(str(e)) from None


def _coeffs_doc(cs: CoefficientSet) -> dict:
    if isinstance(cs, Interval):
        return {"kind": "interval", "lo": cs.lo, "hi": cs.hi}
    if isinstance(cs, Punctured):
        return {"kind": "punctured", "d": cs.d}
    if isinstance(cs, Box):
        return {"kind": "box", "d": cs.d}
    if isinstance(cs, Ellipsoid):
        return {
            "kind": "ellipsoid",
            "a": [[str(v) for v in row] for row in cs.a],
        }
    raise TypeError(f"unknown coefficient set {cs!r}")


def serialize_instance(inst: Instance) -> str:
    doc = {
        "x": [str(v) for v in inst.x],
        "coeffs": _coeffs_doc(inst.coeffs),
        "tau": str(inst.tau),
    }
    if inst.m_bound is not None:
        doc["m_bound"] = str(inst.m_bound)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def serialize_verdict(v: Verdict) -> str:
    doc = {"status": v.status, "reason": v.reason}
    if v.witness is not None:
        doc["c"] = [str(a) for a in v.witness]
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def parse_verdict(text) -> Verdict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level: expected an object")
    status = doc.get("status")
    if status not in _STATUSES:
        raise ParseError(f"status: unknown status {status!r}")
    witness = None
    if "c" in doc and doc["c"] is not None:
        raw = doc["c"]
        if not isinstance(raw, list):
            raise ParseError("c: expected a list")
        witness = tuple(_parse_int(v, f"c[{i}]") for i, v in enumerate(raw))
    reason = doc.get("reason", "")
    if not isinstance(reason, str):
        raise ParseError("reason: expected a string")
    try:
        return Verdict(status, witness, reason)
    except ValueError as e:
        raise ParseError(str(e)) from None
