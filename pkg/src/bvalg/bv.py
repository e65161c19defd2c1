"""Brackets of degree n-1, free BV operators, and the axiom verifiers.

A structure couples a free graded-commutative algebra on the generators of
a Lie presentation (shift n) with

  * the bracket, extended from generator pairs by the Poisson relation
    {a, bc} = {a,b}c + (-1)^((|a|+n-1)|b|) b{a,c}  (first slot by shifted
    antisymmetry), and

  * an operator of degree n-1: either the free one, the sum of the
    derivation extending the negated Lie differential and the wordlength-
    lowering bracket contraction, or user-supplied values extended by the
    deviation recursion  bv(ab) = (-1)^|a|{a,b} + bv(a)b + (-1)^|a| a bv(b).

User tables may be partial: undefined entries are explicit and verifiers
report them as skipped coverage rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .algebra import (Element, Generator, GradedMap, Monomial, Truncation,
                      UndefinedValueError, monomial_basis, normalize_word,
                      sign_exponent)
from .fields import FieldSpec
from .lie import LiePresentation
from .report import CheckAccumulator, Report, merge_reports

FREE = "free"
USER = "user"


@dataclass(frozen=True)
class Undefined:
    """Marker for a value blocked by a missing table entry."""

    blocking: str


@dataclass(frozen=True)
class OutOfWindow:
    """Marker for a tabulated value whose degree exceeds the window."""

    degree: int
    limit: int


class InconsistentExtensionError(Exception):
    """Two peeling orders of the deviation recursion disagree."""

    def __init__(self, mono: Monomial, values: Dict[str, str]):
        self.monomial = mono
        self.values = values
        super().__init__(f"inconsistent bv extension on {mono}: {values}")


MaybeElement = Union[Element, Undefined]


class BVStructure:
    """Algebra + bracket + (possibly partial) degree-(n-1) operator."""

    def __init__(self,
                 presentation: LiePresentation,
                 truncation: int,
                 bv_values: Optional[Dict[Union[str, Monomial], Element]] = None,
                 partial_brackets: Optional[Dict[Tuple[str, str], Element]] = None,
                 brackets_total: bool = True,
                 has_bv: bool = True,
                 metadata: Optional[Dict] = None):
        self.presentation = presentation
        self.field = presentation.field
        self.shift = presentation.shift
        self.generators = list(presentation.generators)
        self.truncation = truncation
        self.brackets_total = brackets_total
        self.has_bv = has_bv
        self.metadata = dict(metadata or {})
        self._partial_brackets: Dict[Tuple[str, str], Element] = {}
        if partial_brackets is not None:
            for (x, y), value in partial_brackets.items():
                gx, gy = presentation.gen(x), presentation.gen(y)
                key, flip = presentation._canonical_pair(gx, gy)
                self._partial_brackets[key] = (
                    value.scale(presentation._flip_sign(gx, gy)) if flip else value)
        self._bv_values: Optional[Dict[Monomial, Element]] = None
        if bv_values is not None:
            self._bv_values = {}
            for key, value in bv_values.items():
                mono = (Monomial(((presentation.gen(key), 1),))
                        if isinstance(key, str) else key)
                self._bv_values[mono] = value
        self._bracket_cache: Dict[Tuple[Monomial, Monomial], MaybeElement] = {}
        self._bv_cache: Dict[Monomial, MaybeElement] = {}

    @property
    def provenance(self) -> str:
        return FREE if self._bv_values is None else USER

    @property
    def window(self) -> Truncation:
        return Truncation(self.truncation)

    def zero(self) -> Element:
        return Element.zero(self.field)

    def basis(self, max_degree: Optional[int] = None) -> List[Monomial]:
        return monomial_basis(self.field, self.generators,
                              self.truncation if max_degree is None else max_degree)

    # -- bracket ----------------------------------------------------------

    def bracket_pair(self, x: Generator, y: Generator) -> MaybeElement:
        if self.brackets_total:
            return self.presentation.bracket(x.id, y.id)
        key, flip = self.presentation._canonical_pair(x, y)
        value = self._partial_brackets.get(key)
        if value is None:
            return Undefined(f"bracket [{key[0]},{key[1]}]")
        return value.scale(self.presentation._flip_sign(x, y)) if flip else value

    def bracket_defined(self, x: Generator, y: Generator) -> bool:
        return not isinstance(self.bracket_pair(x, y), Undefined)

    # -- operator values ----------------------------------------------------

    def stored_bv(self, mono: Monomial) -> Optional[Element]:
        if self._bv_values is None:
            return None
        return self._bv_values.get(mono)

    def bv_monomial(self, mono: Monomial) -> MaybeElement:
        """Exact operator value on a basis monomial (no window flagging)."""
        if not self.has_bv:
            return Undefined("no bv operator")
        cached = self._bv_cache.get(mono)
        if cached is not None:
            return cached
        if self.provenance == FREE:
            value: MaybeElement = _free_bv_monomial(self, mono)
        else:
            value = _user_bv_monomial(self, mono)
        self._bv_cache[mono] = value
        return value

    def bv_status(self, mono: Monomial):
        """('ok', Element) | ('undefined', reason) | ('out-of-window', marker).

        Stored user table entries are window artifacts: a stored value whose
        degree exceeds the truncation is flagged, never silently used in
        reports.  Closed-form values are exact and never flagged.
        """
        stored = self.stored_bv(mono)
        if stored is not None and stored.max_degree() > self.truncation:
            return ("out-of-window", OutOfWindow(stored.max_degree(), self.truncation))
        value = self.bv_monomial(mono)
        if isinstance(value, Undefined):
            return ("undefined", value.blocking)
        return ("ok", value)

    def bv_element(self, element: Element) -> MaybeElement:
        out = self.zero()
        for mono, coeff in element.terms():
            value = self.bv_monomial(mono)
            if isinstance(value, Undefined):
                return value
            out = out + value.scale(coeff)
        return out

    def defined_bv_generator_values(self) -> List[Tuple[Generator, Element]]:
        out = []
        for g in sorted(self.generators, key=lambda g: g.sort_key):
            mono = Monomial(((g, 1),))
            status, value = self.bv_status(mono)
            if status == "ok":
                out.append((g, value))
        return out


def free_bv_structure(presentation: LiePresentation, truncation: int,
                      has_bv: bool = True,
                      metadata: Optional[Dict] = None) -> BVStructure:
    return BVStructure(presentation, truncation, has_bv=has_bv, metadata=metadata)


def user_bv_structure(presentation: LiePresentation, truncation: int,
                      bv_values: Dict[Union[str, Monomial], Element],
                      partial_brackets: Optional[Dict[Tuple[str, str], Element]] = None,
                      brackets_total: bool = True,
                      metadata: Optional[Dict] = None) -> BVStructure:
    return BVStructure(presentation, truncation, bv_values=bv_values,
                       partial_brackets=partial_brackets,
                       brackets_total=brackets_total, metadata=metadata)


# -- the Poisson-extended bracket ------------------------------------------------


def _gen_monomial(g: Generator) -> Monomial:
    return Monomial(((g, 1),))


def _bracket_monomials(s: BVStructure, m1: Monomial, m2: Monomial) -> MaybeElement:
    key = (m1, m2)
    cached = s._bracket_cache.get(key)
    if cached is not None:
        return cached
    value = _bracket_monomials_compute(s, m1, m2)
    s._bracket_cache[key] = value
    return value


def _bracket_monomials_compute(s: BVStructure, m1: Monomial, m2: Monomial) -> MaybeElement:
    field = s.field
    if m1.is_unit or m2.is_unit:
        return s.zero()
    parity1 = m1.degree + s.shift - 1
    if m2.wordlength > 1:
        g = m2.word()[0]
        rest = m2.remove_one(g)
        left = _bracket_monomials(s, m1, _gen_monomial(g))
        if isinstance(left, Undefined):
            return left
        right = _bracket_monomials(s, m1, rest)
        if isinstance(right, Undefined):
            return right
        rest_elt = Element.from_monomial(field, rest)
        g_elt = Element.from_generator(field, g)
        return (left * rest_elt
                + (g_elt * right).scale(field.sign(parity1 * g.degree)))
    if m1.wordlength > 1:
        flipped = _bracket_monomials(s, m2, m1)
        if isinstance(flipped, Undefined):
            return flipped
        parity2 = m2.degree + s.shift - 1
        return flipped.scale(-sign_exponent(parity1 * parity2))
    return s.bracket_pair(m1.word()[0], m2.word()[0])


def poisson_bracket(s: BVStructure, a: Element, b: Element) -> MaybeElement:
    """Bilinear Poisson extension of the generator bracket table."""
    out = s.zero()
    for m1, c1 in a.terms():
        for m2, c2 in b.terms():
            value = _bracket_monomials(s, m1, m2)
            if isinstance(value, Undefined):
                return value
            out = out + value.scale(s.field.mul(c1, c2))
    return out


# -- the free operator ----------------------------------------------------------


def differential_part(s: BVStructure, element: Element) -> Element:
    """Derivation-style extension of the negated Lie differential: the i-th
    letter is replaced by its differential with the sign -(-1)^(n_i), where
    n_i is the total degree of the preceding letters."""
    field = s.field
    out = s.zero()
    for mono, coeff in element.terms():
        word = mono.word()
        prefix = 0
        for i, g in enumerate(word):
            image = s.presentation.diff(g.id)
            if not image.is_zero:
                head = Element.from_monomial(field, Monomial.from_sorted_word(word[:i]))
                tail = Element.from_monomial(field, Monomial.from_sorted_word(word[i + 1:]))
                sgn = field.neg(field.sign(prefix))
                out = out + (head * image * tail).scale(field.mul(coeff, sgn))
            prefix += g.degree
    return out


def bracket_part(s: BVStructure, element: Element) -> MaybeElement:
    """Wordlength-lowering contraction: sum over position pairs i < j of
    {x_i, x_j} wedge (the word with both letters deleted), with the sign
    (-1)^(|x_i|) (-1)^(n_ij) where (-1)^(n_ij) moves x_i, x_j to the front."""
    field = s.field
    out = s.zero()
    for mono, coeff in element.terms():
        word = mono.word()
        k = len(word)
        prefix = [0] * (k + 1)
        for i, g in enumerate(word):
            prefix[i + 1] = prefix[i] + g.degree
        for i in range(k):
            for j in range(i + 1, k):
                br = s.bracket_pair(word[i], word[j])
                if isinstance(br, Undefined):
                    return br
                if br.is_zero:
                    continue
                n_ij = (word[i].degree * prefix[i]
                        + word[j].degree * (prefix[j] - word[i].degree))
                sgn = sign_exponent(word[i].degree) * sign_exponent(n_ij)
                rest = Element.from_monomial(
                    field, Monomial.from_sorted_word(word[:i] + word[i + 1:j] + word[j + 1:]))
                out = out + (br * rest).scale(field.mul(coeff, field.coerce(sgn)))
    return out


def free_bv(s: BVStructure, element: Element) -> Element:
    """The free operator: differential part plus bracket contraction."""
    if s.provenance != FREE:
        raise ValueError("free operator requested on a user-supplied structure")
    contraction = bracket_part(s, element)
    assert isinstance(contraction, Element)
    return differential_part(s, element) + contraction


def _free_bv_monomial(s: BVStructure, mono: Monomial) -> Element:
    return free_bv(s, Element.from_monomial(s.field, mono))


# -- user-supplied operators via the deviation recursion -------------------------


def _user_bv_monomial(s: BVStructure, mono: Monomial) -> MaybeElement:
    field = s.field
    if mono.is_unit:
        return s.zero()
    stored = s.stored_bv(mono)
    if stored is not None:
        return stored
    if mono.wordlength == 1:
        return Undefined(f"bv({mono.word()[0].id})")
    values: Dict[str, Element] = {}
    blocked: Optional[Undefined] = None
    prefix = 0
    seen = set()
    for g in mono.word():
        if g.id in seen:
            prefix += g.degree
            continue
        seen.add(g.id)
        rest = mono.remove_one(g)
        kappa = field.sign(g.degree * prefix)
        prefix += g.degree
        bv_g = _user_bv_monomial(s, _gen_monomial(g))
        if isinstance(bv_g, Undefined):
            blocked = blocked or bv_g
            continue
        br = _bracket_monomials(s, _gen_monomial(g), rest)
        if isinstance(br, Undefined):
            blocked = blocked or br
            continue
        bv_rest = s.bv_monomial(rest)
        if isinstance(bv_rest, Undefined):
            blocked = blocked or bv_rest
            continue
        g_elt = Element.from_generator(field, g)
        rest_elt = Element.from_monomial(field, rest)
        sgn = field.sign(g.degree)
        value = (br.scale(sgn) + bv_g * rest_elt
                 + (g_elt * bv_rest).scale(sgn)).scale(kappa)
        values[g.id] = value
    if not values:
        return blocked if blocked is not None else Undefined(str(mono))
    distinct = list(values.values())
    if any(v != distinct[0] for v in distinct[1:]):
        raise InconsistentExtensionError(
            mono, {f"peel {gid}": str(v) for gid, v in sorted(values.items())})
    return distinct[0]


def bv_extend(s: BVStructure, element: Element) -> MaybeElement:
    """Operator value by the deviation recursion from generator data.

    Returns Undefined with the blocking symbol when a needed value or
    bracket is missing; raises InconsistentExtensionError when two peeling
    orders disagree.
    """
    return s.bv_element(element)


def bv_operator(s: BVStructure, name: str = "bv") -> GradedMap:
    """The structure's operator as a graded map (gaps are explicit)."""

    def rule(mono: Monomial) -> Optional[Element]:
        value = s.bv_monomial(mono)
        return None if isinstance(value, Undefined) else value

    return GradedMap(s.field, s.shift - 1, rule=rule, name=name)


# -- deviation bracket extraction -------------------------------------------------


def bracket_from_operator(field: FieldSpec,
                          op_value: Callable[[Monomial], Optional[Element]],
                          a: Monomial, b: Monomial) -> Optional[Element]:
    """The bracket an operator induces through its deviation from being a
    product derivation; None when a needed value is missing."""
    prod = normalize_word(field, a.word() + b.word())
    op_ab = Element.zero(field)
    for mono, coeff in prod.terms():
        value = op_value(mono)
        if value is None:
            return None
        op_ab = op_ab + value.scale(coeff)
    op_a = op_value(a)
    op_b = op_value(b)
    if op_a is None or op_b is None:
        return None
    a_elt = Element.from_monomial(field, a)
    b_elt = Element.from_monomial(field, b)
    sgn = field.sign(a.degree)
    return (op_ab - op_a * b_elt - (a_elt * op_b).scale(sgn)).scale(sgn)


# -- verifiers --------------------------------------------------------------------


def _pairs(basis: Sequence[Monomial], bound: int):
    for i, a in enumerate(basis):
        for b in basis[i:]:
            if a.degree + b.degree <= bound:
                yield a, b


def _all_pairs(basis: Sequence[Monomial], bound: int):
    for a in basis:
        for b in basis:
            if a.degree + b.degree <= bound:
                yield a, b


def verify_square_zero(s: BVStructure, max_degree: Optional[int] = None) -> Report:
    """Square-zero identities on every basis monomial in the window; for free
    structures the two summands and their anticommutator are checked
    separately."""
    bound = s.truncation if max_degree is None else max_degree
    basis = s.basis(bound)
    checks = []
    if s.provenance == FREE and s.has_bv:
        d0_sq = CheckAccumulator("d0-squared")
        d1_sq = CheckAccumulator("d1-squared")
        anti = CheckAccumulator("d0-d1-anticommute")
        for mono in basis:
            elt = Element.from_monomial(s.field, mono)
            d0 = differential_part(s, elt)
            d1 = bracket_part(s, elt)
            assert isinstance(d1, Element)
            _record_zero(d0_sq, differential_part(s, d0), mono)
            d1_d1 = bracket_part(s, d1)
            assert isinstance(d1_d1, Element)
            _record_zero(d1_sq, d1_d1, mono)
            cross = bracket_part(s, d0)
            assert isinstance(cross, Element)
            _record_zero(anti, differential_part(s, d1) + cross, mono)
        checks.extend([d0_sq.result(), d1_sq.result(), anti.result()])
    bv_sq = CheckAccumulator("bv-squared")
    if s.has_bv:
        for mono in basis:
            status, value = s.bv_status(mono)
            if status != "ok":
                bv_sq.record_skip()
                continue
            second = s.bv_element(value)
            if isinstance(second, Undefined):
                bv_sq.record_skip()
                continue
            _record_zero(bv_sq, second, mono)
        checks.append(bv_sq.result())
    return Report(checks=checks)


def _record_zero(acc: CheckAccumulator, value: Element, mono: Monomial) -> None:
    if value.is_zero:
        acc.record_pass()
    else:
        acc.record_fail({"input": str(mono), "value": str(value)})


def verify_deviation_identity(s: BVStructure, max_degree: Optional[int] = None) -> Report:
    """The bracket equals the operator's deviation from being a derivation,
    on every homogeneous basis pair in the window."""
    bound = s.truncation if max_degree is None else max_degree
    basis = s.basis(bound)
    acc = CheckAccumulator("bv-deviation-is-bracket")
    if not s.has_bv:
        return Report(checks=[acc.result()])

    def op_value(mono: Monomial) -> Optional[Element]:
        status, value = s.bv_status(mono)
        return value if status == "ok" else None

    for a, b in _all_pairs(basis, bound):
        lhs = _bracket_monomials(s, a, b)
        if isinstance(lhs, Undefined):
            acc.record_skip()
            continue
        rhs = bracket_from_operator(s.field, op_value, a, b)
        if rhs is None:
            acc.record_skip()
            continue
        if lhs == rhs:
            acc.record_pass()
        else:
            acc.record_fail({
                "a": str(a), "b": str(b),
                "bracket": str(lhs),
                "operator deviation": str(rhs),
            })
    return Report(checks=[acc.result()])


def verify_bracket_compatibility(s: BVStructure, max_degree: Optional[int] = None) -> Report:
    """bv{a,b} = {bv a, b} + (-1)^(|a|+1) {a, bv b} on basis pairs."""
    bound = s.truncation if max_degree is None else max_degree
    basis = s.basis(bound)
    acc = CheckAccumulator("bv-bracket-compatibility")
    if not s.has_bv:
        return Report(checks=[acc.result()])
    for a, b in _all_pairs(basis, bound):
        br = _bracket_monomials(s, a, b)
        if isinstance(br, Undefined):
            acc.record_skip()
            continue
        lhs = s.bv_element(br)
        bv_a = s.bv_monomial(a)
        bv_b = s.bv_monomial(b)
        if any(isinstance(v, Undefined) for v in (lhs, bv_a, bv_b)):
            acc.record_skip()
            continue
        first = poisson_bracket(s, bv_a, Element.from_monomial(s.field, b))
        second = poisson_bracket(s, Element.from_monomial(s.field, a), bv_b)
        if isinstance(first, Undefined) or isinstance(second, Undefined):
            acc.record_skip()
            continue
        rhs = first + second.scale(s.field.sign(a.degree + 1))
        if lhs == rhs:
            acc.record_pass()
        else:
            acc.record_fail({
                "a": str(a), "b": str(b),
                "bv{a,b}": str(lhs),
                "{bv a,b} + sign*{a,bv b}": str(rhs),
            })
    return Report(checks=[acc.result()])


def verify_gerstenhaber(s: BVStructure, pair_degree: Optional[int] = None,
                        triple_degree: Optional[int] = None) -> Report:
    """Shifted antisymmetry on pairs; Jacobi and the Poisson relation on
    triples of basis monomials."""
    p_bound = s.truncation if pair_degree is None else pair_degree
    t_bound = p_bound if triple_degree is None else triple_degree
    basis = s.basis(p_bound)
    field = s.field
    antisym = CheckAccumulator("bracket-antisymmetry")
    for a, b in _all_pairs(basis, p_bound):
        lhs = _bracket_monomials(s, a, b)
        rhs = _bracket_monomials(s, b, a)
        if isinstance(lhs, Undefined) or isinstance(rhs, Undefined):
            antisym.record_skip()
            continue
        pa, pb = a.degree + s.shift - 1, b.degree + s.shift - 1
        expected = rhs.scale(-sign_exponent(pa * pb))
        if lhs == expected:
            antisym.record_pass()
        else:
            antisym.record_fail({"a": str(a), "b": str(b),
                                 "{a,b}": str(lhs), "-sign*{b,a}": str(expected)})

    jacobi = CheckAccumulator("bracket-jacobi")
    poisson = CheckAccumulator("poisson-relation")
    triple_basis = [m for m in basis if m.degree <= t_bound]
    for a in triple_basis:
        a_elt = Element.from_monomial(field, a)
        pa = a.degree + s.shift - 1
        for b in triple_basis:
            if a.degree + b.degree > t_bound:
                continue
            b_elt = Element.from_monomial(field, b)
            pb = b.degree + s.shift - 1
            for c in triple_basis:
                if a.degree + b.degree + c.degree > t_bound:
                    continue
                c_elt = Element.from_monomial(field, c)
                inner_bc = _bracket_monomials(s, b, c)
                inner_ac = _bracket_monomials(s, a, c)
                inner_ab = _bracket_monomials(s, a, b)
                if any(isinstance(v, Undefined) for v in (inner_bc, inner_ac, inner_ab)):
                    jacobi.record_skip()
                    poisson.record_skip()
                    continue
                lhs = poisson_bracket(s, a_elt, inner_bc)
                first = poisson_bracket(s, inner_ab, c_elt)
                second = poisson_bracket(s, b_elt, inner_ac)
                if any(isinstance(v, Undefined) for v in (lhs, first, second)):
                    jacobi.record_skip()
                else:
                    rhs = first + second.scale(sign_exponent(pa * pb))
                    if lhs == rhs:
                        jacobi.record_pass()
                    else:
                        jacobi.record_fail({
                            "triple": f"({a},{b},{c})",
                            "{a,{b,c}}": str(lhs),
                            "{{a,b},c} + sign*{b,{a,c}}": str(rhs),
                        })
                product_bc = b_elt * c_elt
                lhs_p = poisson_bracket(s, a_elt, product_bc)
                ac = poisson_bracket(s, a_elt, c_elt)
                if isinstance(lhs_p, Undefined) or isinstance(ac, Undefined):
                    poisson.record_skip()
                    continue
                rhs_p = (inner_ab * c_elt
                         + (b_elt * ac).scale(field.sign(pa * b.degree)))
                if lhs_p == rhs_p:
                    poisson.record_pass()
                else:
                    poisson.record_fail({
                        "triple": f"({a},{b},{c})",
                        "{a,bc}": str(lhs_p),
                        "{a,b}c + sign*b{a,c}": str(rhs_p),
                    })
    return Report(checks=[antisym.result(), jacobi.result(), poisson.result()])


def verify_bv_axioms(s: BVStructure, max_degree: Optional[int] = None,
                     triple_degree: Optional[int] = None) -> Report:
    """Full suite: square-zero, deviation identity, bracket compatibility,
    and the Gerstenhaber axioms; partial structures yield coverage < 1."""
    bound = s.truncation if max_degree is None else max_degree
    try:
        report = merge_reports(
            verify_square_zero(s, bound),
            verify_deviation_identity(s, bound),
            verify_bracket_compatibility(s, bound),
            verify_gerstenhaber(s, bound, triple_degree),
        )
    except InconsistentExtensionError as exc:
        acc = CheckAccumulator("bv-extension-consistency")
        certificate = {"input": str(exc.monomial)}
        certificate.update(exc.values)
        acc.record_fail(certificate)
        return Report(checks=[acc.result()])
    for g, value in s.defined_bv_generator_values():
        report.details[f"bv({g.id})"] = value
    return report


# -- universal extension -----------------------------------------------------------


def extend_morphism(assignment: Dict[str, Element], source: BVStructure,
                    target: BVStructure,
                    max_degree: Optional[int] = None) -> Tuple[Optional[GradedMap], Report]:
    """Multiplicative extension of a generator assignment out of a free
    structure; accepted only if the assignment respects degrees, brackets,
    and the operators on generators, and then verified to commute with the
    operators on all basis monomials in the window."""
    if source.provenance != FREE:
        raise ValueError("morphism extension needs a free source structure")
    field = source.field
    degree_acc = CheckAccumulator("morphism-degrees")
    for g in source.generators:
        image = assignment.get(g.id, Element.zero(target.field))
        d = image.homogeneous_degree()
        if image.is_zero or d == g.degree:
            degree_acc.record_pass()
        else:
            degree_acc.record_fail({
                "generator": g.id, "degree": str(g.degree),
                "image": str(image), "image degree": str(d),
            })
    if degree_acc.failures:
        return None, Report(checks=[degree_acc.result()])

    def apply_span(value: Element) -> Element:
        out = Element.zero(target.field)
        for mono, coeff in value.terms():
            out = out + assignment.get(mono.word()[0].id,
                                       Element.zero(target.field)).scale(coeff)
        return out

    bracket_acc = CheckAccumulator("morphism-brackets")
    for i, x in enumerate(source.generators):
        for y in source.generators[i:]:
            lhs = apply_span(source.presentation.bracket(x.id, y.id))
            rhs = poisson_bracket(target, assignment.get(x.id, target.zero()),
                                  assignment.get(y.id, target.zero()))
            if isinstance(rhs, Undefined):
                bracket_acc.record_skip()
            elif lhs == rhs:
                bracket_acc.record_pass()
            else:
                bracket_acc.record_fail({
                    "pair": f"[{x.id},{y.id}]",
                    "image of bracket": str(lhs),
                    "bracket of images": str(rhs),
                })

    diff_acc = CheckAccumulator("morphism-operators")
    for g in source.generators:
        lhs = apply_span(source.presentation.diff(g.id)).scale(-1)
        rhs = target.bv_element(assignment.get(g.id, target.zero()))
        if isinstance(rhs, Undefined):
            diff_acc.record_skip()
        elif lhs == rhs:
            diff_acc.record_pass()
        else:
            diff_acc.record_fail({
                "generator": g.id,
                "image of -d(x)": str(lhs),
                "bv of image": str(rhs),
            })

    if bracket_acc.failures or diff_acc.failures:
        return None, Report(checks=[degree_acc.result(), bracket_acc.result(),
                                    diff_acc.result()])

    def extension_rule(mono: Monomial) -> Element:
        out = Element.unit(target.field)
        for g in mono.word():
            out = out * assignment.get(g.id, Element.zero(target.field))
        return out

    extension = GradedMap(target.field, 0, rule=extension_rule, name="morphism")
    bound = source.truncation if max_degree is None else max_degree
    commute = CheckAccumulator("morphism-commutes-with-bv")
    for mono in source.basis(bound):
        lhs = extension.apply(free_bv(source, Element.from_monomial(field, mono)))
        rhs = target.bv_element(extension_rule(mono))
        if isinstance(rhs, Undefined):
            commute.record_skip()
        elif lhs == rhs:
            commute.record_pass()
        else:
            commute.record_fail({
                "input": str(mono),
                "morphism(bv(m))": str(lhs),
                "bv(morphism(m))": str(rhs),
            })
    report = Report(checks=[degree_acc.result(), bracket_acc.result(),
                            diff_acc.result(), commute.result()])
    return (extension if report.passed else None), report


# -- sums of operators --------------------------------------------------------------


def check_derivation(op: GradedMap, generators: Sequence[Generator],
                     max_degree: int, op_degree: Optional[int] = None) -> Report:
    """Product-derivation law on all basis pairs in the window."""
    field = op.field
    degree = op.degree if op.degree is not None else op_degree
    acc = CheckAccumulator("derivation-law")
    if degree is None:
        acc.record_fail({"reason": "operator degree unknown; no Koszul sign"})
        return Report(checks=[acc.result()])
    basis = monomial_basis(field, generators, max_degree)
    for a, b in _pairs(basis, max_degree):
        product = normalize_word(field, a.word() + b.word())
        try:
            lhs = op.apply(product)
            va = op.apply(Element.from_monomial(field, a))
            vb = op.apply(Element.from_monomial(field, b))
        except UndefinedValueError:
            acc.record_skip()
            continue
        rhs = (va * Element.from_monomial(field, b)
               + (Element.from_monomial(field, a) * vb).scale(field.sign(degree * a.degree)))
        if lhs == rhs:
            acc.record_pass()
        else:
            acc.record_fail({
                "a": str(a), "b": str(b),
                "op(ab)": str(lhs),
                "op(a)b + sign*a op(b)": str(rhs),
            })
    return Report(checks=[acc.result()])


def add_derivation_action(base_op: GradedMap, derivation_op: GradedMap,
                          generators: Sequence[Generator],
                          max_degree: int,
                          derivation_degree: Optional[int] = None) -> Tuple[GradedMap, Report]:
    """Sum of a bracket-carrying operator and a product derivation.

    Verifies (i) the derivation law for the second operator and (ii) that
    the deviation bracket of the sum equals that of the base operator alone
    on all basis pairs in the window.
    """
    field = base_op.field
    report = check_derivation(derivation_op, generators, max_degree, derivation_degree)
    total = base_op + derivation_op
    acc = CheckAccumulator("bracket-unchanged-by-derivation")
    basis = monomial_basis(field, generators, max_degree)
    for a, b in _pairs(basis, max_degree):
        combined = bracket_from_operator(field, total.value, a, b)
        base = bracket_from_operator(field, base_op.value, a, b)
        if combined is None or base is None:
            acc.record_skip()
            continue
        if combined == base:
            acc.record_pass()
        else:
            acc.record_fail({
                "a": str(a), "b": str(b),
                "bracket of sum": str(combined),
                "bracket of base": str(base),
            })
    report.checks.append(acc.result())
    return total, report
