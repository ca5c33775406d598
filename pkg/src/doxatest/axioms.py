"""Postulate checking for the induced belief-change operation at a state.

Within one model, every formula denotes a definable event (a union of
valuation cells), so quantifying over "all formulas" collapses to quantifying
over definable events, and equality of two belief sets collapses to equality
of the cell closures of their supports.  Each postulate is decided through
such an event-level reduction; `axiom_status_via_formulas` re-decides it by
direct quantification over a formula pool, as an independent cross-check.

A failing verdict carries a witness: the events playing the two formula roles
plus a distinguishing definable event G.  Replaying the witness through the
membership primitives (no closures involved) must reproduce the violation —
see `replay_witness`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from .errors import PreconditionError, SizeLimitError
from .formulas import Formula, semantic_pool, truth_vector
from .frames import Model, bits, cells, definable_events, truth_set

DEFAULT_MAX_CELLS = 8


class AxiomId(str, Enum):
    D0 = "D0"
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    D4 = "D4"
    D5 = "D5"
    D6 = "D6"
    D7 = "D7"
    D9 = "D9"
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"
    R7 = "R7"
    R8 = "R8"


# update/revision postulates that are the same condition under the reduction
ALIASES: dict[AxiomId, AxiomId] = {
    AxiomId.R1: AxiomId.D0,
    AxiomId.R2: AxiomId.D1,
    AxiomId.R6: AxiomId.D4,
    AxiomId.R7: AxiomId.D5,
}


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class AxiomWitness:
    """Events for the formula slots of a failing postulate instance; `g` is
    the definable event separating the two belief sets involved."""

    e: int
    f: int | None = None
    g: int | None = None

    def to_obj(self, model: Model) -> dict:
        obj: dict = {"E": list(model.frame.event_ids(self.e))}
        if self.f is not None:
            obj["F"] = list(model.frame.event_ids(self.f))
        if self.g is not None:
            obj["G"] = list(model.frame.event_ids(self.g))
        return obj


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: AxiomId
    status: Status
    witness: AxiomWitness | None = None

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def to_obj(self, model: Model) -> dict:
        obj: dict = {"axiom": self.axiom.value}
        if self.status is Status.NOT_APPLICABLE:
            obj["holds"] = None
            obj["applicable"] = False
        else:
            obj["holds"] = self.status is Status.HOLDS
        if self.witness is not None:
            obj["witness"] = self.witness.to_obj(model)
        return obj


@dataclass
class ModelContext:
    """Shared per-model precomputation: cells, definable events, closures,
    and a support cache keyed by (belief-set, event)."""

    model: Model
    cell_masks: tuple[int, ...]
    definable: tuple[int, ...]  # nonempty definable events, ascending
    _sup: dict = field(default_factory=dict)

    @classmethod
    def of(cls, model: Model, max_cells: int = DEFAULT_MAX_CELLS) -> "ModelContext":
        cell_masks = cells(model)
        if len(cell_masks) > max_cells:
            raise SizeLimitError(
                f"{len(cell_masks)} cells exceed the definable-event bound {max_cells}"
            )
        return cls(model, cell_masks, definable_events(model, max_cells=max_cells))

    def closure(self, mask: int) -> int:
        out = 0
        for c in self.cell_masks:
            if c & mask:
                out |= c
        return out

    def sup(self, bmask: int, event: int) -> int:
        key = (bmask, event)
        got = self._sup.get(key)
        if got is None:
            got = 0
            for i in bits(bmask):
                got |= self.model.frame.sel(i, event)
            self._sup[key] = got
        return got


def is_complete_at(model: Model, s: int | str) -> bool:
    """True iff the beliefs at s decide every formula: B(s) fits in one cell."""
    i = model.frame.index(s) if isinstance(s, str) else s
    b = model.frame.belief[i]
    return any(not b & ~c for c in cells(model))


def _d1(ctx, b):
    for e in ctx.definable:
        if ctx.sup(b, e) & ~e:
            return AxiomWitness(e=e, g=e)
    return None


def _d2(ctx, b):
    for e in ctx.definable:
        if b & ~e:
            continue
        sup = ctx.sup(b, e)
        cb, cs = ctx.closure(b), ctx.closure(sup)
        if cb == cs:
            continue
        g = cb if sup & ~cb else cs
        return AxiomWitness(e=e, g=g)
    return None


def _r3(ctx, b):
    for e in ctx.definable:
        cs = ctx.closure(ctx.sup(b, e))
        if b & e & ~cs:
            return AxiomWitness(e=e, g=cs)
    return None


def _r4(ctx, b):
    for e in ctx.definable:
        if not b & e:
            continue
        cb = ctx.closure(b)
        if ctx.sup(b, e) & ~cb:
            return AxiomWitness(e=e, g=cb)
    return None


def _d5(ctx, b):
    for e in ctx.definable:
        for f in ctx.definable:
            ef = e & f
            if not ef:
                continue
            c = ctx.closure(ctx.sup(b, ef))
            if ctx.sup(b, e) & f & ~c:
                return AxiomWitness(e=e, f=f, g=c)
    return None


def _d6(ctx, b):
    for e in ctx.definable:
        sup_e = ctx.sup(b, e)
        for f in ctx.definable:
            sup_f = ctx.sup(b, f)
            if sup_e & ~f or sup_f & ~e:
                continue
            ce, cf = ctx.closure(sup_e), ctx.closure(sup_f)
            if ce == cf:
                continue
            g = ce if sup_f & ~ce else cf
            return AxiomWitness(e=e, f=f, g=g)
    return None


def _d7(ctx, b):
    for e in ctx.definable:
        for f in ctx.definable:
            c = ctx.closure(ctx.sup(b, e) | ctx.sup(b, f))
            if ctx.sup(b, e | f) & ~c:
                return AxiomWitness(e=e, f=f, g=c)
    return None


def _d9(ctx, b):
    for e in ctx.definable:
        sup_e = ctx.sup(b, e)
        for f in ctx.definable:
            inter = sup_e & f
            if not inter:
                continue
            c = ctx.closure(inter)
            if ctx.sup(b, e & f) & ~c:
                return AxiomWitness(e=e, f=f, g=c)
    return None


_REDUCTIONS: dict[AxiomId, Callable] = {
    AxiomId.D1: _d1,
    AxiomId.D2: _d2,
    AxiomId.R3: _r3,
    AxiomId.R4: _r4,
    AxiomId.D5: _d5,
    AxiomId.D6: _d6,
    AxiomId.D7: _d7,
    AxiomId.D9: _d9,
    AxiomId.R8: _d9,  # same event shape; scope differs (R8: every state)
}

_COMPLETE_ONLY = frozenset({AxiomId.D7, AxiomId.D9})
_STRUCTURAL = frozenset({AxiomId.D0, AxiomId.D4})
_EXTENSION_ONLY = frozenset({AxiomId.D3, AxiomId.R5})


def axiom_holds(
    model: Model,
    s: int | str,
    axiom: AxiomId,
    ctx: ModelContext | None = None,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> AxiomVerdict:
    """Decide one postulate at (model, s) over the definable events.

    D3/R5 only bite for formulas with no worlds at all, which never denote an
    event inside a model, so they are reported not-applicable here (the
    extension layer owns them).  D7 and D9 are conditions on complete belief
    states and are not-applicable elsewhere.
    """
    i = model.frame.index(s) if isinstance(s, str) else s
    resolved = ALIASES.get(axiom, axiom)
    if resolved in _EXTENSION_ONLY:
        return AxiomVerdict(axiom, Status.NOT_APPLICABLE)
    if resolved in _COMPLETE_ONLY and not is_complete_at(model, i):
        return AxiomVerdict(axiom, Status.NOT_APPLICABLE)
    if resolved in _STRUCTURAL:
        return AxiomVerdict(axiom, Status.HOLDS)
    if ctx is None:
        ctx = ModelContext.of(model, max_cells=max_cells)
    witness = _REDUCTIONS[resolved](ctx, model.frame.belief[i])
    if witness is None:
        return AxiomVerdict(axiom, Status.HOLDS)
    return AxiomVerdict(axiom, Status.FAILS, witness)


def replay_witness(
    model: Model, s: int | str, axiom: AxiomId, witness: AxiomWitness
) -> bool:
    """Reproduce a violation from its witness using only the membership
    primitives: Sup for the change operation, intersection-with-belief for
    expansion.  No cell closures are consulted."""
    i = model.frame.index(s) if isinstance(s, str) else s
    b = model.frame.belief[i]

    def sup(event):
        out = 0
        for j in bits(b):
            out |= model.frame.sel(j, event)
        return out

    def subset(x, y):
        return not x & ~y

    e, f, g = witness.e, witness.f, witness.g
    resolved = ALIASES.get(axiom, axiom)
    if resolved is AxiomId.D1:
        return not subset(sup(e), e)
    if resolved is AxiomId.D2:
        return subset(b, e) and subset(b, g) != subset(sup(e), g)
    if resolved is AxiomId.R3:
        return subset(sup(e), g) and not subset(b & e, g)
    if resolved is AxiomId.R4:
        return bool(b & e) and subset(b, g) and not subset(sup(e), g)
    if resolved is AxiomId.D5:
        return bool(e & f) and subset(sup(e & f), g) and not subset(sup(e) & f, g)
    if resolved is AxiomId.D6:
        return (
            subset(sup(e), f)
            and subset(sup(f), e)
            and subset(sup(e), g) != subset(sup(f), g)
        )
    if resolved is AxiomId.D7:
        return (
            subset(sup(e), g)
            and subset(sup(f), g)
            and not subset(sup(e | f), g)
        )
    if resolved in (AxiomId.D9, AxiomId.R8):
        inter = sup(e) & f
        return bool(inter) and subset(inter, g) and not subset(sup(e & f), g)
    raise ValueError(f"no replay for {axiom}")


# --- audits ---------------------------------------------------------------


@dataclass(frozen=True)
class LemmaReport:
    """Change-then-expand containment sweep: the changed belief set must
    extend the expanded one at every nonempty definable event."""

    violations: tuple[AxiomWitness, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_obj(self, model: Model) -> dict:
        return {
            "ok": self.ok,
            "violations": [w.to_obj(model) for w in self.violations],
        }


def audit_lemma_inclusion(model: Model, s: int | str) -> LemmaReport:
    """For every nonempty definable E: believers of the changed set must
    include every expansion believer — event side: B(s)∩E ⊆ C(Sup(E)).
    Events with B(s)∩E = ∅ pass vacuously (the expansion is inconsistent
    and contains everything)."""
    i = model.frame.index(s) if isinstance(s, str) else s
    ctx = ModelContext.of(model)
    b = model.frame.belief[i]
    out = []
    for e in ctx.definable:
        cs = ctx.closure(ctx.sup(b, e))
        if b & e & ~cs:
            out.append(AxiomWitness(e=e, g=cs))
    return LemmaReport(tuple(out))


@dataclass(frozen=True)
class Km8Report:
    holds: bool
    witness_event: int | None = None

    def to_obj(self, model: Model) -> dict:
        obj: dict = {"holds": self.holds}
        if self.witness_event is not None:
            obj["witness"] = {"E": list(model.frame.event_ids(self.witness_event))}
        return obj


def audit_km8(model: Model, w: int | str) -> Km8Report:
    """Identity between the two quantifier bases for membership after change:
    rows drawn from the believed worlds B(w) versus rows drawn from every
    world satisfying the belief set (the cell closure of B(w)).  Requires a
    uniform belief map; on canonically-valued models the two coincide, and a
    corrupted valuation that merges an outside world into a believed cell
    breaks the identity."""
    frame = model.frame
    if len(set(frame.belief)) != 1:
        raise PreconditionError("belief worlds must not vary across states")
    i = frame.index(w) if isinstance(w, str) else w
    ctx = ModelContext.of(model)
    b = frame.belief[i]
    kk = ctx.closure(b)
    for e in ctx.definable:
        if ctx.sup(b, e) != ctx.sup(kk, e):
            return Km8Report(False, e)
    return Km8Report(True)


# --- independent formula-level oracle -------------------------------------


def _pool_masks(model: Model, formulas: Sequence[Formula]) -> list[tuple[Formula, int]]:
    return [(f, truth_set(model, f)) for f in formulas]


def axiom_status_via_formulas(
    model: Model,
    s: int | str,
    axiom: AxiomId,
    formulas: Sequence[Formula] | None = None,
    depth: int = 3,
) -> Status:
    """Decide a postulate by quantifying over an explicit formula pool.

    Membership after change is per-believed-row selection containment;
    expansion membership is belief∩event containment; consequence for the
    closure postulate runs over full truth vectors of the model's atoms.
    This route never looks at cells or closures, so agreement with
    `axiom_holds` is a meaningful cross-check.
    """
    frame = model.frame
    i = frame.index(s) if isinstance(s, str) else s
    b = frame.belief[i]
    resolved = ALIASES.get(axiom, axiom)
    if resolved in _EXTENSION_ONLY:
        return Status.NOT_APPLICABLE
    if resolved in _COMPLETE_ONLY and not is_complete_at(model, i):
        return Status.NOT_APPLICABLE
    if formulas is None:
        # two spellings per truth-function so congruence has real work to do
        formulas = semantic_pool(model.atom_names, depth=depth, per_class=2)
    pool = _pool_masks(model, formulas)
    # quantification targets: membership depends only on the truth set, so
    # each distinct truth set needs checking once
    chi_masks = sorted({m for _, m in pool})
    nonempty = [m for m in chi_masks if m]

    rows = list(bits(b))
    _member: dict[tuple[int, int], bool] = {}

    def member(event: int, target: int) -> bool:
        got = _member.get((event, target))
        if got is None:
            got = all(not frame.sel(j, event) & ~target for j in rows)
            _member[(event, target)] = got
        return got

    def sup(event: int) -> int:
        out = 0
        for j in rows:
            out |= frame.sel(j, event)
        return out

    def ok(condition: bool) -> Status:
        return Status.HOLDS if condition else Status.FAILS

    if resolved is AxiomId.D0:
        # sampled deductive closure: singleton and pair premise sets drawn
        # from the believed formulas, consequence over full truth vectors
        names = model.atom_names
        pairs = [(truth_vector(f, names), m) for f, m in pool]
        seen = set()
        vecs = []
        for v, m in pairs:
            if v not in seen:
                seen.add(v)
                vecs.append((v, m))
        for ep in nonempty:
            inside = [(v, member(ep, m)) for v, m in vecs]
            member_vecs = [v for v, isin in inside if isin]
            outside = [v for v, isin in inside if not isin]
            for v1 in member_vecs:
                for v2 in member_vecs:
                    premise = v1 & v2
                    for vc in outside:
                        if not premise & ~vc:
                            return Status.FAILS
        return Status.HOLDS

    if resolved is AxiomId.D1:
        return ok(all(member(ep, ep) for ep in nonempty))

    if resolved is AxiomId.D2:
        for ep in nonempty:
            if b & ~ep:
                continue
            for mc in chi_masks:
                if member(ep, mc) != (not b & ~mc):
                    return Status.FAILS
        return Status.HOLDS

    if resolved is AxiomId.R3:
        for ep in nonempty:
            for mc in chi_masks:
                if member(ep, mc) and b & ep & ~mc:
                    return Status.FAILS
        return Status.HOLDS

    if resolved is AxiomId.R4:
        for ep in nonempty:
            if not b & ep:
                continue
            for mc in chi_masks:
                if not b & ~mc and not member(ep, mc):
                    return Status.FAILS
        return Status.HOLDS

    if resolved is AxiomId.D4:
        # tautologically equivalent inputs (equal truth vectors) must change
        # belief identically; the pool carries two spellings per function
        names = model.atom_names
        groups: dict[int, list[int]] = {}
        for f, m in pool:
            if m:
                groups.setdefault(truth_vector(f, names), []).append(m)
        for group in groups.values():
            first = group[0]
            for other in group[1:]:
                for mc in chi_masks:
                    if member(first, mc) != member(other, mc):
                        return Status.FAILS
        return Status.HOLDS

    if resolved is AxiomId.D5:
        for ep in nonempty:
            sup_p = sup(ep)
            for eq in nonempty:
                both = ep & eq
                if not both:
                    continue
                for mc in chi_masks:
                    if member(both, mc) and sup_p & eq & ~mc:
                        return Status.FAILS
        return Status.HOLDS

    if resolved is AxiomId.D6:
        for ep in nonempty:
            for eq in nonempty:
                if not (member(ep, eq) and member(eq, ep)):
                    continue
                for mc in chi_masks:
                    if member(ep, mc) != member(eq, mc):
                        return Status.FAILS
        return Status.HOLDS

    if resolved is AxiomId.D7:
        for ep in nonempty:
            for eq in nonempty:
                for mc in chi_masks:
                    if member(ep, mc) and member(eq, mc) and not member(ep | eq, mc):
                        return Status.FAILS
        return Status.HOLDS

    if resolved in (AxiomId.D9, AxiomId.R8):
        for ep in nonempty:
            sup_p = sup(ep)
            for eq in nonempty:
                if not sup_p & eq:
                    continue
                for mc in chi_masks:
                    if not sup_p & eq & ~mc and not member(ep & eq, mc):
                        return Status.FAILS
        return Status.HOLDS

    raise ValueError(f"no formula-level check for {axiom}")
