"""Free graded-commutative algebras with exact coefficients.

Sign ledger
-----------
Every sign in the engine derives from a single rule: transposing two
adjacent homogeneous factors a, b multiplies the coefficient by
``KOSZUL_BASE ** (|a| * |b|)``.  All other signs (word normalization,
tensor factor swaps, moving an operator past an element, derivation
prefix signs) are computed from this rule and nowhere else.  Over
characteristic 2 every sign collapses to +1 automatically.

Monomials are kept in a normal form: factors sorted by (degree, id).
Over characteristic other than 2 an odd-degree generator squares to
zero, so normal-form monomials carry odd generators with multiplicity
at most 1; over characteristic 2 the algebra is fully polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .fields import FieldSpec, Scalar

KOSZUL_BASE = -1


def sign_exponent(k: int) -> int:
    """KOSZUL_BASE**k as a plain integer (+1 or -1)."""
    return 1 if k % 2 == 0 else KOSZUL_BASE


@dataclass(frozen=True)
class Generator:
    """A free algebra generator with a fixed non-negative degree."""

    id: str
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError(f"generator {self.id!r} has negative degree {self.degree}")

    @property
    def sort_key(self) -> Tuple[int, str]:
        return (self.degree, self.id)

    def __str__(self) -> str:
        return self.id


@dataclass(frozen=True)
class Monomial:
    """Normal-form monomial: factors sorted by (degree, id), multiplicities >= 1."""

    factors: Tuple[Tuple[Generator, int], ...]

    @staticmethod
    def unit() -> "Monomial":
        return Monomial(())

    @staticmethod
    def from_sorted_word(word: Sequence[Generator]) -> "Monomial":
        """Group an already-sorted word into a monomial (no sign bookkeeping)."""
        factors: List[Tuple[Generator, int]] = []
        for g in word:
            if factors and factors[-1][0] == g:
                factors[-1] = (g, factors[-1][1] + 1)
            else:
                factors.append((g, 1))
        return Monomial(tuple(factors))

    @property
    def degree(self) -> int:
        return sum(g.degree * m for g, m in self.factors)

    @property
    def wordlength(self) -> int:
        return sum(m for _, m in self.factors)

    @property
    def is_unit(self) -> bool:
        return not self.factors

    def word(self) -> Tuple[Generator, ...]:
        out: List[Generator] = []
        for g, m in self.factors:
            out.extend([g] * m)
        return tuple(out)

    def remove_one(self, gen: Generator) -> "Monomial":
        """Drop one copy of gen (which must occur)."""
        factors = []
        removed = False
        for g, m in self.factors:
            if not removed and g == gen:
                removed = True
                if m > 1:
                    factors.append((g, m - 1))
            else:
                factors.append((g, m))
        if not removed:
            raise KeyError(f"{gen.id} does not divide {self}")
        return Monomial(tuple(factors))

    def order_key(self) -> Tuple:
        return (self.degree, self.wordlength, tuple((g.degree, g.id, m) for g, m in self.factors))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for g, m in self.factors:
            parts.append(g.id if m == 1 else f"{g.id}^{m}")
        return "*".join(parts)


def sort_word(word: Sequence[Generator]) -> Tuple[List[Generator], int]:
    """Stable-sort a word by (degree, id), returning the Koszul sign exponent.

    Insertion sort; every adjacent transposition of letters a, b
    contributes |a|*|b| to the exponent.
    """
    letters = list(word)
    exp = 0
    for i in range(1, len(letters)):
        j = i
        while j > 0 and letters[j].sort_key < letters[j - 1].sort_key:
            exp += letters[j].degree * letters[j - 1].degree
            letters[j - 1], letters[j] = letters[j], letters[j - 1]
            j -= 1
    return letters, exp


class Element:
    """Finite linear combination of normal-form monomials over an exact field.

    Immutable by convention; all operations return new elements and zero
    coefficients are never stored.
    """

    __slots__ = ("field", "_terms")

    def __init__(self, field: FieldSpec, terms: Optional[Dict[Monomial, Scalar]] = None):
        self.field = field
        clean: Dict[Monomial, Scalar] = {}
        for mono, coeff in (terms or {}).items():
            c = field.coerce(coeff)
            if not field.is_zero(c):
                clean[mono] = c
        self._terms = clean

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(field: FieldSpec) -> "Element":
        return Element(field)

    @staticmethod
    def unit(field: FieldSpec, coeff=1) -> "Element":
        return Element(field, {Monomial.unit(): coeff})

    @staticmethod
    def from_monomial(field: FieldSpec, mono: Monomial, coeff=1) -> "Element":
        return Element(field, {mono: coeff})

    @staticmethod
    def from_generator(field: FieldSpec, gen: Generator, coeff=1) -> "Element":
        return Element(field, {Monomial(((gen, 1),)): coeff})

    # -- queries ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> List[Tuple[Monomial, Scalar]]:
        return sorted(self._terms.items(), key=lambda t: t[0].order_key())

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.terms()]

    def coefficient(self, mono: Monomial) -> Scalar:
        return self._terms.get(mono, self.field.zero())

    def homogeneous_degree(self):
        """Degree if all terms agree, None for zero, 'mixed' otherwise."""
        degrees = {m.degree for m in self._terms}
        if not degrees:
            return None
        if len(degrees) > 1:
            return "mixed"
        return degrees.pop()

    def max_degree(self) -> int:
        return max((m.degree for m in self._terms), default=0)

    # -- arithmetic --------------------------------------------------------

    def _require_same_field(self, other: "Element") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "Element") -> "Element":
        self._require_same_field(other)
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            out[mono] = self.field.add(out.get(mono, self.field.zero()), coeff)
        return Element(self.field, out)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.field, {m: self.field.neg(c) for m, c in self._terms.items()})

    def scale(self, coeff) -> "Element":
        c = self.field.coerce(coeff)
        if self.field.is_zero(c):
            return Element.zero(self.field)
        return Element(self.field, {m: self.field.mul(cc, c) for m, cc in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            self._require_same_field(other)
            out = Element.zero(self.field)
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    prod = normalize_word(self.field, m1.word() + m2.word(),
                                          self.field.mul(c1, c2))
                    out = out + prod
            return out
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Element) and self.field == other.field
                and self._terms == other._terms)

    __hash__ = None  # type: ignore[assignment]

    # -- rendering -----------------------------------------------------------

    def __str__(self) -> str:
        return render_element(self)

    def __repr__(self) -> str:
        return f"<Element {self} over {self.field}>"


def render_element(element: Element) -> str:
    """Canonical, re-parseable string form: '2*a*b - 1/2*b^2', '0', '1'."""
    if element.is_zero:
        return "0"
    field = element.field
    parts: List[str] = []
    for mono, coeff in element.terms():
        negative = field.kind == "rational" and coeff < 0
        mag = -coeff if negative else coeff
        if mono.is_unit:
            body = field.render(mag)
        elif mag == field.one():
            body = str(mono)
        else:
            body = f"{field.render(mag)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


def element_to_pairs(element: Element) -> List[Tuple[str, str]]:
    """Element as a sorted list of (monomial string, coefficient string)."""
    return [(str(m), element.field.render(c)) for m, c in element.terms()]


def normalize_word(field: FieldSpec, word: Sequence[Generator], coeff=1) -> Element:
    """Sign-normalize a word of generators into an Element.

    Sorting contributes the Koszul sign; over characteristic other than 2
    a repeated odd-degree letter kills the monomial.
    """
    letters, exp = sort_word(word)
    if field.characteristic != 2:
        for a, b in zip(letters, letters[1:]):
            if a == b and a.degree % 2 == 1:
                return Element.zero(field)
    c = field.mul(field.coerce(coeff), field.sign(exp))
    return Element(field, {Monomial.from_sorted_word(letters): c})


# -- truncation -------------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    """Hard degree window: bases, tabulations and windowed products live in
    total degree <= max_degree."""

    max_degree: int

    def __post_init__(self) -> None:
        if self.max_degree < 0:
            raise ValueError("truncation degree must be >= 0")

    def admits(self, mono: Monomial) -> bool:
        return mono.degree <= self.max_degree


class OutOfWindowError(Exception):
    """A computed term exceeds the truncation window (never silently dropped)."""

    def __init__(self, mono: Monomial, limit: int):
        self.monomial = mono
        self.limit = limit
        super().__init__(f"term {mono} has degree {mono.degree} > truncation {limit}")


def check_window(element: Element, window: Optional[Truncation]) -> Element:
    if window is not None:
        for mono in element.monomials():
            if not window.admits(mono):
                raise OutOfWindowError(mono, window.max_degree)
    return element


def product(a: Element, b: Element, window: Optional[Truncation] = None) -> Element:
    """Graded-commutative product; raises OutOfWindowError past the window."""
    return check_window(a * b, window)


# -- basis enumeration --------------------------------------------------------


def _exponent_vectors(gens: Sequence[Generator], field: FieldSpec,
                      budget: int) -> Iterator[Tuple[int, ...]]:
    if not gens:
        yield ()
        return
    g, rest = gens[0], gens[1:]
    cap = 1 if (g.degree % 2 == 1 and field.characteristic != 2) else budget // g.degree
    for e in range(cap + 1):
        used = e * g.degree
        if used > budget:
            break
        for tail in _exponent_vectors(rest, field, budget - used):
            yield (e,) + tail


def monomial_basis(field: FieldSpec, generators: Sequence[Generator],
                   max_degree: int) -> List[Monomial]:
    """All normal-form monomials of total degree <= max_degree, sorted."""
    gens = sorted(generators, key=lambda g: g.sort_key)
    for g in gens:
        if g.degree == 0:
            raise ValueError(
                f"generator {g.id!r} has degree 0: the degree window is not finite")
    out = []
    for exps in _exponent_vectors(gens, field, max_degree):
        factors = tuple((g, e) for g, e in zip(gens, exps) if e > 0)
        out.append(Monomial(factors))
    out.sort(key=Monomial.order_key)
    return out


def basis_by_degree(field: FieldSpec, generators: Sequence[Generator],
                    max_degree: int) -> Dict[int, List[Monomial]]:
    table: Dict[int, List[Monomial]] = {d: [] for d in range(max_degree + 1)}
    for mono in monomial_basis(field, generators, max_degree):
        table[mono.degree].append(mono)
    return table


# -- graded linear maps -------------------------------------------------------


class UndefinedValueError(Exception):
    """A linear extension hit a basis monomial with no tabulated value."""

    def __init__(self, mono: Monomial):
        self.monomial = mono
        super().__init__(f"operator undefined on {mono}")


class GradedMap:
    """Linear map tabulated on basis monomials, of a fixed degree.

    Values may come from an explicit table, from a closed-form rule, or be
    missing; partial operators keep explicit gaps and never guess.  A degree
    of None marks an inhomogeneous map (e.g. a sum of maps of different
    degrees), for which no per-value degree validation is possible.
    """

    def __init__(self, field: FieldSpec, degree: Optional[int],
                 values: Optional[Dict[Monomial, Element]] = None,
                 rule: Optional[Callable[[Monomial], Optional[Element]]] = None,
                 undefined: Iterable[Monomial] = (),
                 name: str = ""):
        self.field = field
        self.degree = degree
        self.name = name
        self._rule = rule
        self._undefined = set(undefined)
        self._values: Dict[Monomial, Element] = {}
        for mono, val in (values or {}).items():
            self._check_degree(mono, val)
            self._values[mono] = val

    def _check_degree(self, mono: Monomial, val: Element) -> None:
        if self.degree is None or val.is_zero:
            return
        d = val.homogeneous_degree()
        if d != mono.degree + self.degree:
            raise ValueError(
                f"value of degree {d} on {mono}: expected {mono.degree + self.degree}")

    @staticmethod
    def zero(field: FieldSpec, degree: Optional[int] = 0, name: str = "0") -> "GradedMap":
        return GradedMap(field, degree, rule=lambda m: Element.zero(field), name=name)

    def value(self, mono: Monomial) -> Optional[Element]:
        """Value on a basis monomial, or None when undefined."""
        if mono in self._undefined:
            return None
        if mono in self._values:
            return self._values[mono]
        if self._rule is not None:
            val = self._rule(mono)
            if val is None:
                self._undefined.add(mono)
                return None
            self._check_degree(mono, val)
            self._values[mono] = val
            return val
        return None

    def defined_on(self, mono: Monomial) -> bool:
        return self.value(mono) is not None

    def apply(self, element: Element) -> Element:
        """Linear extension; raises UndefinedValueError at the first gap."""
        out = Element.zero(self.field)
        for mono, coeff in element.terms():
            val = self.value(mono)
            if val is None:
                raise UndefinedValueError(mono)
            out = out + val.scale(coeff)
        return out

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if self.field != other.field:
            raise ValueError("field mismatch")
        degree = self.degree if self.degree == other.degree else None

        def rule(mono: Monomial) -> Optional[Element]:
            a = self.value(mono)
            b = other.value(mono)
            if a is None or b is None:
                return None
            return a + b

        return GradedMap(self.field, degree, rule=rule,
                         name=f"{self.name}+{other.name}".strip("+"))


def derivation_from_generator_values(field: FieldSpec,
                                     values: Dict[str, Element],
                                     degree: Optional[int],
                                     name: str = "derivation") -> GradedMap:
    """Leibniz extension of generator values: on a word x_1...x_k the i-th
    summand carries the sign of moving a degree-`degree` operator past
    x_1...x_{i-1}.  Generators absent from `values` map to zero."""

    def rule(mono: Monomial) -> Element:
        out = Element.zero(field)
        word = mono.word()
        prefix_degree = 0
        for i, g in enumerate(word):
            image = values.get(g.id)
            if image is not None and not image.is_zero:
                head = Element.from_monomial(field, Monomial.from_sorted_word(word[:i]))
                tail = Element.from_monomial(field, Monomial.from_sorted_word(word[i + 1:]))
                sgn = field.sign((degree or 0) * prefix_degree)
                out = out + (head * image * tail).scale(sgn)
            prefix_degree += g.degree
        return out

    return GradedMap(field, degree, rule=rule, name=name)
