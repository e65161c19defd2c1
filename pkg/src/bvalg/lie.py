"""Finite graded Lie presentations with a bracket of degree n-1.

A presentation at shift n stores generators with their degrees, one
orientation of each bracket pair (the other is derived through shifted
antisymmetry), and an optional differential of degree -1.  The degree rule
for a tabulated pair is |{x,y}| = |x| + |y| + (n-1); the sign parity of a
generator x in all Lie-side formulas is |x| + n - 1.

``desuspend`` converts between shifts: moving a presentation from shift s
to shift n lowers every degree by n - s and carries the bracket table and
differential along unchanged (they are read through the shift).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Element, Generator, sign_exponent
from .fields import FieldSpec
from .report import CheckAccumulator, Report

BracketKey = Tuple[str, str]


@dataclass
class LiePresentation:
    field: FieldSpec
    shift: int
    generators: List[Generator]
    brackets: Dict[BracketKey, Element] = dc_field(default_factory=dict)
    differential: Dict[str, Element] = dc_field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        ids = [g.id for g in self.generators]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate generator ids")
        self._by_id = {g.id: g for g in self.generators}
        normalized: Dict[BracketKey, Element] = {}
        for (x, y), value in self.brackets.items():
            self._require_span(value, f"bracket [{x},{y}]")
            gx, gy = self.gen(x), self.gen(y)
            key, flip = self._canonical_pair(gx, gy)
            if key in normalized:
                raise ValueError(f"bracket pair ({x},{y}) tabulated twice")
            normalized[key] = value.scale(self._flip_sign(gx, gy)) if flip else value
        self.brackets = normalized
        for x, value in self.differential.items():
            self.gen(x)
            self._require_span(value, f"differential of {x}")

    def _require_span(self, value: Element, what: str) -> None:
        if value.field != self.field:
            raise ValueError(f"{what}: field mismatch")
        for mono in value.monomials():
            if mono.wordlength != 1:
                raise ValueError(f"{what}: value must lie in the generator span")
            g = mono.word()[0]
            if self._by_id.get(g.id) != g:
                raise ValueError(f"{what}: unknown generator {g.id!r}")

    # -- access ------------------------------------------------------------

    def gen(self, gen_id: str) -> Generator:
        try:
            return self._by_id[gen_id]
        except KeyError:
            raise KeyError(f"unknown generator {gen_id!r}") from None

    def parity(self, g: Generator) -> int:
        return g.degree + self.shift - 1

    def bracket_degree(self, x: Generator, y: Generator) -> int:
        return x.degree + y.degree + self.shift - 1

    def _canonical_pair(self, x: Generator, y: Generator) -> Tuple[BracketKey, bool]:
        if (x.sort_key, x.id) <= (y.sort_key, y.id):
            return (x.id, y.id), False
        return (y.id, x.id), True

    def _flip_sign(self, x: Generator, y: Generator) -> int:
        return -sign_exponent(self.parity(x) * self.parity(y))

    def bracket(self, x_id: str, y_id: str) -> Element:
        """Bracket of two generators; the stored orientation is canonical and
        the other one is derived by shifted antisymmetry."""
        x, y = self.gen(x_id), self.gen(y_id)
        key, flip = self._canonical_pair(x, y)
        value = self.brackets.get(key, Element.zero(self.field))
        return value.scale(self._flip_sign(x, y)) if flip else value

    def bracket_elements(self, u: Element, v: Element) -> Element:
        """Bilinear extension of the bracket to the generator span."""
        out = Element.zero(self.field)
        for mu, cu in u.terms():
            for mv, cv in v.terms():
                val = self.bracket(mu.word()[0].id, mv.word()[0].id)
                out = out + val.scale(self.field.mul(cu, cv))
        return out

    def diff(self, gen_id: str) -> Element:
        return self.differential.get(gen_id, Element.zero(self.field))

    def diff_element(self, u: Element) -> Element:
        out = Element.zero(self.field)
        for mono, coeff in u.terms():
            out = out + self.diff(mono.word()[0].id).scale(coeff)
        return out

    @property
    def has_differential(self) -> bool:
        return any(not v.is_zero for v in self.differential.values())

    def span_element(self, gen_id: str, coeff=1) -> Element:
        return Element.from_generator(self.field, self.gen(gen_id), coeff)


def desuspend(presentation: LiePresentation, target_shift: int) -> LiePresentation:
    """Move a presentation to another shift, lowering each generator degree
    by (target_shift - shift).  Raises on negative resulting degrees."""
    delta = target_shift - presentation.shift
    mapping: Dict[str, Generator] = {}
    new_gens = []
    for g in presentation.generators:
        d = g.degree - delta
        if d < 0:
            raise ValueError(
                f"desuspension by {delta} sends {g.id!r} to negative degree {d}")
        ng = Generator(g.id, d)
        mapping[g.id] = ng
        new_gens.append(ng)

    def remap(value: Element) -> Element:
        out = Element.zero(presentation.field)
        for mono, coeff in value.terms():
            g = mono.word()[0]
            out = out + Element.from_generator(presentation.field, mapping[g.id], coeff)
        return out

    return LiePresentation(
        field=presentation.field,
        shift=target_shift,
        generators=new_gens,
        brackets={key: remap(v) for key, v in presentation.brackets.items()},
        differential={x: remap(v) for x, v in presentation.differential.items()},
        name=presentation.name,
    )


def _structural_check(presentation: LiePresentation) -> CheckAccumulator:
    acc = CheckAccumulator("bracket-degree")
    for (x_id, y_id), value in sorted(presentation.brackets.items()):
        x, y = presentation.gen(x_id), presentation.gen(y_id)
        expected = presentation.bracket_degree(x, y)
        got = value.homogeneous_degree()
        if value.is_zero or got == expected:
            acc.record_pass()
        else:
            acc.record_fail({
                "pair": f"[{x_id},{y_id}]",
                "expected degree": str(expected),
                "value": str(value),
                "value degree": str(got),
            })
    return acc


def check_lie_axioms(presentation: LiePresentation) -> Report:
    """Shifted antisymmetry and Jacobi on all generator pairs and triples.

    A degree mismatch in the table is a structural error reported before
    (and instead of) the axiom checks.
    """
    structural = _structural_check(presentation)
    if structural.failures:
        return Report(checks=[structural.result()])

    p = presentation
    antisym = CheckAccumulator("bracket-antisymmetry")
    for x in p.generators:
        for y in p.generators:
            lhs = p.bracket(x.id, y.id)
            rhs = p.bracket(y.id, x.id).scale(-sign_exponent(p.parity(x) * p.parity(y)))
            if x == y and p.parity(x) % 2 == 0 and p.field.characteristic != 2:
                # antisymmetry forces 2{x,x} = 0 here, so {x,x} = 0 away from char 2
                if lhs.is_zero:
                    antisym.record_pass()
                else:
                    antisym.record_fail({
                        "pair": f"[{x.id},{x.id}]",
                        "constraint": "even shifted parity forces {x,x} = 0",
                        "value": str(lhs),
                    })
            elif lhs == rhs:
                antisym.record_pass()
            else:
                antisym.record_fail({
                    "pair": f"[{x.id},{y.id}]",
                    "lhs": str(lhs),
                    "rhs": str(rhs),
                })

    jacobi = CheckAccumulator("bracket-jacobi")
    for x in p.generators:
        for y in p.generators:
            for z in p.generators:
                lhs = p.bracket_elements(p.span_element(x.id), p.bracket(y.id, z.id))
                first = p.bracket_elements(p.bracket(x.id, y.id), p.span_element(z.id))
                second = p.bracket_elements(p.span_element(y.id), p.bracket(x.id, z.id))
                rhs = first + second.scale(sign_exponent(p.parity(x) * p.parity(y)))
                if lhs == rhs:
                    jacobi.record_pass()
                else:
                    jacobi.record_fail({
                        "triple": f"({x.id},{y.id},{z.id})",
                        "lhs {x,{y,z}}": str(lhs),
                        "rhs {{x,y},z} + sign*{y,{x,z}}": str(rhs),
                    })

    return Report(checks=[structural.result(), antisym.result(), jacobi.result()])


def check_differential(presentation: LiePresentation) -> Report:
    """d has degree -1, squares to zero, and is a bracket derivation."""
    p = presentation
    degree_acc = CheckAccumulator("differential-degree")
    for x_id, value in sorted(p.differential.items()):
        expected = p.gen(x_id).degree - 1
        got = value.homogeneous_degree()
        if value.is_zero or got == expected:
            degree_acc.record_pass()
        else:
            degree_acc.record_fail({
                "generator": x_id,
                "expected degree": str(expected),
                "value": str(value),
                "value degree": str(got),
            })
    if degree_acc.failures:
        return Report(checks=[degree_acc.result()])

    square = CheckAccumulator("differential-squared")
    for x in p.generators:
        value = p.diff_element(p.diff(x.id))
        if value.is_zero:
            square.record_pass()
        else:
            square.record_fail({"generator": x.id, "d(d(x))": str(value)})

    leibniz = CheckAccumulator("differential-bracket-derivation")
    for x in p.generators:
        for y in p.generators:
            lhs = p.diff_element(p.bracket(x.id, y.id))
            rhs = (p.bracket_elements(p.diff(x.id), p.span_element(y.id))
                   + p.bracket_elements(p.span_element(x.id), p.diff(y.id))
                   .scale(sign_exponent(p.parity(x))))
            if lhs == rhs:
                leibniz.record_pass()
            else:
                leibniz.record_fail({
                    "pair": f"[{x.id},{y.id}]",
                    "d{x,y}": str(lhs),
                    "{dx,y} + sign*{x,dy}": str(rhs),
                })

    return Report(checks=[degree_acc.result(), square.result(), leibniz.result()])


def random_lie_presentation(rng: random.Random,
                            field: Optional[FieldSpec] = None,
                            max_generators: int = 3,
                            max_degree: int = 6,
                            shifts: Sequence[int] = (0, 2, 4),
                            basis_budget: int = 120,
                            window: int = 10,
                            max_attempts: int = 500) -> LiePresentation:
    """Rejection-sample a small presentation that passes the axiom checks.

    Structure constants are drawn sparsely among degree-compatible targets;
    candidates failing antisymmetry, Jacobi, or the differential checks are
    discarded.  The basis budget caps how many monomials the presentation
    spans inside the window, keeping downstream suites desk-scale.
    """
    from .algebra import monomial_basis  # local import to avoid cycle at load

    fields = [field] if field is not None else [FieldSpec.rationals(),
                                                FieldSpec.prime(2),
                                                FieldSpec.prime(5)]
    for attempt in range(max_attempts):
        f = rng.choice(fields)
        shift = rng.choice(list(shifts))
        gens = _propose_generators(rng, f, shift, max_generators, max_degree)
        candidate = LiePresentation(f, shift, gens)
        if len(monomial_basis(f, gens, window)) > basis_budget:
            continue
        brackets: Dict[BracketKey, Element] = {}
        for i, x in enumerate(gens):
            for y in gens[i:]:
                target = candidate.bracket_degree(x, y)
                span = [g for g in gens if g.degree == target]
                if not span or rng.random() < 0.3:
                    continue
                if (x == y and candidate.parity(x) % 2 == 0
                        and f.characteristic != 2):
                    continue
                value = Element.from_generator(f, rng.choice(span),
                                               rng.choice([1, 1, -1, 2]))
                brackets[(x.id, y.id)] = value
        differential: Dict[str, Element] = {}
        if rng.random() < 0.4:
            for x in gens:
                span = [g for g in gens if g.degree == x.degree - 1]
                if span and rng.random() < 0.5:
                    differential[x.id] = Element.from_generator(f, rng.choice(span))
        try:
            presentation = LiePresentation(f, shift, gens, brackets, differential,
                                           name=f"random-{attempt}")
        except ValueError:
            continue
        if not check_lie_axioms(presentation).passed:
            continue
        if presentation.differential and not check_differential(presentation).passed:
            continue
        return presentation
    raise RuntimeError("no valid random presentation found")


def _propose_generators(rng: random.Random, f: FieldSpec, shift: int,
                        max_generators: int, max_degree: int) -> List[Generator]:
    """Degrees biased toward bracket-closed families: most proposals include
    a generator sitting in the degree some pair brackets into."""
    if max_generators >= 2 and rng.random() < 0.7:
        if rng.random() < 0.5 or max_generators < 3:
            candidates = [d for d in range(1, max_degree + 1)
                          if 1 <= 2 * d + shift - 1 <= max_degree
                          and (f.characteristic == 2 or (d + shift - 1) % 2 == 1)]
            if candidates:
                d = rng.choice(candidates)
                return [Generator("g0", d), Generator("g1", 2 * d + shift - 1)]
        if max_generators >= 3:
            pairs = [(dx, dy) for dx in range(1, max_degree + 1)
                     for dy in range(dx, max_degree + 1)
                     if 1 <= dx + dy + shift - 1 <= max_degree]
            if pairs:
                dx, dy = rng.choice(pairs)
                return [Generator("g0", dx), Generator("g1", dy),
                        Generator("g2", dx + dy + shift - 1)]
    n_gens = rng.randint(1, max_generators)
    return [Generator(f"g{i}", rng.randint(1, max_degree)) for i in range(n_gens)]
