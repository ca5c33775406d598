"""Finite Kripke structures with Lewis-style selection functions.

States are indexed 0..n-1 and events are int bitmasks over those indices
(bit i = state i), which keeps the exhaustive sweeps cheap.  A frame carries
a serial belief relation and a *partial* selection table keyed by
(state index, event mask); operations that need an entry fail loudly when it
is missing rather than inventing one.  A model adds a valuation mapping atom
names to events.

The conditional reading implemented by `ri_support`: after receiving input
with truth set E, the agent at state s believes exactly the formulas true
throughout the union of f(s', E) over the belief-accessible states s'.
Belief sets are always represented by their support event (`BeliefRepr`):
a formula is believed iff the support is contained in its truth set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    InputFormatError,
    SizeLimitError,
    UndefinedSelectionError,
    UnknownAtomError,
    UnknownRuleError,
)
from .formulas import (
    ATOM_RE,
    Classification,
    Formula,
    And,
    FalseConst,
    Iff,
    Implies,
    Atom,
    Not,
    Or,
    TrueConst,
    classify,
)

Event = int


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def subsets_of(mask: int) -> list[int]:
    """All subsets of a bitmask (the empty set included), deterministic order."""
    positions = list(bits(mask))
    out = []
    for choice in range(1 << len(positions)):
        sub = 0
        for j, pos in enumerate(positions):
            if (choice >> j) & 1:
                sub |= 1 << pos
        out.append(sub)
    return out


@dataclass(frozen=True)
class Frame:
    """States, a serial belief relation, and a partial selection table."""

    states: tuple[str, ...]
    belief: tuple[int, ...]
    selection: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state ids")
        if len(self.belief) != len(self.states):
            raise ValueError("belief must assign an event to every state")

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def full(self) -> int:
        return (1 << len(self.states)) - 1

    def index(self, state_id: str) -> int:
        try:
            return self.states.index(state_id)
        except ValueError:
            raise InputFormatError(f"unknown state id {state_id!r}") from None

    def sel(self, s: int, event: Event) -> Event:
        try:
            return self.selection[(s, event)]
        except KeyError:
            raise UndefinedSelectionError(self.states[s], self.event_ids(event)) from None

    def has_sel(self, s: int, event: Event) -> bool:
        return (s, event) in self.selection

    def event_ids(self, mask: Event) -> tuple[str, ...]:
        return tuple(self.states[i] for i in bits(mask))

    def event_mask(self, ids: Iterable[str]) -> Event:
        return mask_of(self.index(i) for i in ids)


@dataclass(frozen=True)
class Model:
    """A frame plus a valuation: atom name -> event where the atom is true."""

    frame: Frame
    valuation: Mapping[str, int]

    def __post_init__(self):
        full = self.frame.full
        for name, ev in self.valuation.items():
            if not ATOM_RE.match(name):
                raise ValueError(f"bad atom name {name!r}")
            if ev & ~full:
                raise ValueError(f"valuation of {name!r} mentions unknown states")

    @property
    def atom_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.valuation))


# ---------------------------------------------------------------------------
# validation and completion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    """One broken frame invariant, as data: which clause, where."""

    clause: str
    state: str | None
    event: tuple[str, ...] | None
    detail: str

    def to_obj(self) -> dict:
        obj: dict = {"clause": self.clause}
        if self.state is not None:
            obj["s"] = self.state
        if self.event is not None:
            obj["event"] = list(self.event)
        obj["detail"] = self.detail
        return obj


def validate_frame(frame: Frame) -> list[Violation]:
    """Check the frame invariants on every defined selection entry.

    Clauses: seriality of the belief relation, and per selection entry
    consistency (nonempty value), success (value inside the event) and weak
    centering (a state inside the event selects itself among the result).
    Violations come back as data; an empty list means the frame conforms.
    """
    out: list[Violation] = []
    full = frame.full
    for s, b in enumerate(frame.belief):
        if b == 0:
            out.append(Violation("seriality", frame.states[s], None, "belief set is empty"))
        elif b & ~full:
            out.append(Violation("belief-range", frame.states[s], None, "belief set outside the state set"))
    for (s, event), value in sorted(frame.selection.items()):
        sid = frame.states[s]
        ev_ids = frame.event_ids(event & full)
        if event == 0:
            out.append(Violation("event-nonempty", sid, (), "selection keyed on the empty event"))
            continue
        if event & ~full:
            out.append(Violation("event-range", sid, ev_ids, "event outside the state set"))
            continue
        if value == 0:
            out.append(Violation("consistency", sid, ev_ids, "f(s,E) is empty"))
            continue
        if value & ~event:
            out.append(Violation("success", sid, ev_ids, "f(s,E) is not contained in E"))
        if (event >> s) & 1 and not (value >> s) & 1:
            out.append(Violation("weak-centering", sid, ev_ids, "s in E but s not in f(s,E)"))
    return out


def _default_rule(s: int, event: Event) -> Event:
    if (event >> s) & 1:
        return 1 << s
    return event & -event  # lowest-index member


COMPLETION_RULES = {"default": _default_rule}


def complete_selection(frame: Frame, rule: str = "default", max_states: int = 12) -> Frame:
    """Fill every missing (state, nonempty event) selection entry by rule.

    The ``default`` rule picks {s} when s is in the event and otherwise the
    lowest-index member, which satisfies all frame invariants.
    """
    try:
        fn = COMPLETION_RULES[rule]
    except KeyError:
        raise UnknownRuleError(f"unknown completion rule {rule!r}") from None
    if frame.n > max_states:
        raise SizeLimitError(f"refusing to complete a {frame.n}-state frame (limit {max_states})")
    filled = dict(frame.selection)
    for s in range(frame.n):
        for event in range(1, frame.full + 1):
            if (s, event) not in filled:
                filled[(s, event)] = fn(s, event)
    return Frame(frame.states, frame.belief, filled)


# ---------------------------------------------------------------------------
# truth sets, cells, definable events
# ---------------------------------------------------------------------------

def truth_set(model: Model, formula: Formula) -> Event:
    """The event where the formula holds; complement/union interpret !/|."""
    full = model.frame.full
    if isinstance(formula, Atom):
        try:
            return model.valuation[formula.name]
        except KeyError:
            raise UnknownAtomError(
                f"atom {formula.name!r} is not interpreted by the model"
            ) from None
    if isinstance(formula, Not):
        return full & ~truth_set(model, formula.child)
    if isinstance(formula, Or):
        return truth_set(model, formula.left) | truth_set(model, formula.right)
    if isinstance(formula, And):
        return truth_set(model, formula.left) & truth_set(model, formula.right)
    if isinstance(formula, Implies):
        return (full & ~truth_set(model, formula.left)) | truth_set(model, formula.right)
    if isinstance(formula, Iff):
        return full & ~(truth_set(model, formula.left) ^ truth_set(model, formula.right))
    if isinstance(formula, TrueConst):
        return full
    if isinstance(formula, FalseConst):
        return 0
    raise TypeError(f"not a formula: {formula!r}")


def cells(model: Model) -> tuple[Event, ...]:
    """Partition of the states by atom profile, ordered by lowest member."""
    names = model.atom_names
    groups: dict[tuple[bool, ...], int] = {}
    for i in range(model.frame.n):
        profile = tuple(bool((model.valuation[a] >> i) & 1) for a in names)
        groups[profile] = groups.get(profile, 0) | (1 << i)
    return tuple(sorted(groups.values(), key=lambda m: m & -m))


def cell_closure(model: Model, event: Event, cell_masks: Sequence[Event] | None = None) -> Event:
    """Smallest definable event containing ``event``: the union of all cells
    it meets."""
    if cell_masks is None:
        cell_masks = cells(model)
    out = 0
    for c in cell_masks:
        if c & event:
            out |= c
    return out


def definable_events(model: Model, max_cells: int = 12) -> list[Event]:
    """All nonempty unions of cells, ascending as cell-index sets.  Within a
    model these are exactly the truth sets of formulas, so quantifying over
    them realizes quantification over formulas."""
    cs = cells(model)
    if len(cs) > max_cells:
        raise SizeLimitError(f"{len(cs)} cells exceeds the definable-event bound {max_cells}")
    out = []
    for choice in range(1, 1 << len(cs)):
        ev = 0
        for j in bits(choice):
            ev |= cs[j]
        out.append(ev)
    return out


# ---------------------------------------------------------------------------
# belief supports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BeliefRepr:
    """A deductively closed belief set, represented by its support event.

    membership(psi)  iff  support is contained in the truth set of psi.
    On conforming frames the support is nonempty, making the set consistent.
    """

    model: Model
    support: Event

    def member(self, formula: Formula) -> bool:
        return self.support & ~truth_set(self.model, formula) == 0

    def member_event(self, event: Event) -> bool:
        return self.support & ~event == 0

    def support_ids(self) -> tuple[str, ...]:
        return self.model.frame.event_ids(self.support)


def support_of(model: Model, s: int, event: Event) -> Event:
    """Union of f(s', event) over the states s' believed possible at s."""
    frame = model.frame
    out = 0
    for i in bits(frame.belief[s]):
        out |= frame.sel(i, event)
    return out


def belief_support(model: Model, s: int) -> BeliefRepr:
    """The unconditional belief set at s, supported by B(s)."""
    return BeliefRepr(model, model.frame.belief[s])


def ri_support(model: Model, s: int, event: Event) -> BeliefRepr:
    """The belief set after receiving an input whose truth set is ``event``.

    Requires the event to be nonempty and the selection to be defined at
    (s', event) for every s' in B(s); a missing entry raises
    UndefinedSelectionError naming it.
    """
    if event == 0:
        raise ValueError("conditional belief support needs a nonempty event")
    return BeliefRepr(model, support_of(model, s, event))


def expansion_member(model: Model, s: int, phi: Formula, psi: Formula) -> bool:
    """Whether psi is in the expansion of the belief set at s by phi:
    B(s) intersected with the truth set of phi supports psi."""
    b = model.frame.belief[s]
    return (b & truth_set(model, phi)) & ~truth_set(model, psi) == 0


def _truth_set_total(model: Model, formula: Formula) -> Event:
    """Truth set under the totalized valuation: atoms the model leaves
    uninterpreted hold nowhere.  Keeps `extended_member` total on arbitrary
    formulas while `truth_set` stays strict for every other caller."""
    full = model.frame.full
    if isinstance(formula, Atom):
        return model.valuation.get(formula.name, 0)
    if isinstance(formula, Not):
        return full & ~_truth_set_total(model, formula.child)
    if isinstance(formula, Or):
        return _truth_set_total(model, formula.left) | _truth_set_total(model, formula.right)
    if isinstance(formula, And):
        return _truth_set_total(model, formula.left) & _truth_set_total(model, formula.right)
    if isinstance(formula, Implies):
        return (full & ~_truth_set_total(model, formula.left)) | _truth_set_total(
            model, formula.right
        )
    if isinstance(formula, Iff):
        return full & ~(
            _truth_set_total(model, formula.left) ^ _truth_set_total(model, formula.right)
        )
    if isinstance(formula, TrueConst):
        return full
    if isinstance(formula, FalseConst):
        return 0
    raise TypeError(f"not a formula node: {formula!r}")


def extended_member(model: Model, s: int, phi: Formula, psi: Formula) -> bool:
    """Conditional belief membership extended to inputs with an empty truth set.

    Nonempty truth set: the selection-based verdict.  Empty truth set with
    phi satisfiable over its own atoms: psi must be a tautological
    consequence of phi.  phi a contradiction: everything is believed.

    Both formulas are read under the totalized valuation (uninterpreted
    atoms hold nowhere), so the verdict is defined for every formula pair.
    """
    event = _truth_set_total(model, phi)
    if event:
        return support_of(model, s, event) & ~_truth_set_total(model, psi) == 0
    if classify(phi) is Classification.CONTRADICTION:
        return True
    return classify(Implies(phi, psi)) is Classification.TAUTOLOGY


# ---------------------------------------------------------------------------
# relabeling
# ---------------------------------------------------------------------------

def relabel_frame(frame: Frame, perm: Sequence[int]) -> Frame:
    """Rename states by a permutation; ``perm[old] = new`` index."""
    n = frame.n
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of the state indices")

    def remap(mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << perm[i]
        return out

    states = [""] * n
    belief = [0] * n
    for old in range(n):
        states[perm[old]] = frame.states[old]
        belief[perm[old]] = remap(frame.belief[old])
    selection = {
        (perm[s], remap(event)): remap(value)
        for (s, event), value in frame.selection.items()
    }
    return Frame(tuple(states), tuple(belief), selection)


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def frame_to_obj(frame: Frame) -> dict:
    return {
        "states": list(frame.states),
        "belief": {
            frame.states[s]: list(frame.event_ids(frame.belief[s]))
            for s in range(frame.n)
        },
        "selection": [
            {
                "s": frame.states[s],
                "event": list(frame.event_ids(event)),
                "selects": list(frame.event_ids(value)),
            }
            for (s, event), value in sorted(frame.selection.items())
        ],
    }


def model_to_obj(model: Model) -> dict:
    obj = frame_to_obj(model.frame)
    obj["valuation"] = {
        atom: list(model.frame.event_ids(model.valuation[atom]))
        for atom in sorted(model.valuation)
    }
    return obj


def _expect_list_of_str(value, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise InputFormatError(f"{what} must be a list of state ids")
    return value


def frame_from_obj(obj: dict) -> Frame:
    if not isinstance(obj, dict):
        raise InputFormatError("top level must be an object")
    states = obj.get("states")
    if not isinstance(states, list) or not states or not all(isinstance(s, str) for s in states):
        raise InputFormatError("'states' must be a nonempty list of ids")
    if len(set(states)) != len(states):
        raise InputFormatError("duplicate state ids")
    index = {sid: i for i, sid in enumerate(states)}

    def to_mask(ids: list[str], what: str) -> int:
        out = 0
        for sid in _expect_list_of_str(ids, what):
            if sid not in index:
                raise InputFormatError(f"{what} mentions unknown state {sid!r}")
            out |= 1 << index[sid]
        return out

    belief_obj = obj.get("belief", {})
    if not isinstance(belief_obj, dict):
        raise InputFormatError("'belief' must be an object keyed by state id")
    for sid in belief_obj:
        if sid not in index:
            raise InputFormatError(f"'belief' mentions unknown state {sid!r}")
    belief = tuple(
        to_mask(belief_obj.get(sid, []), f"belief[{sid}]") for sid in states
    )

    selection: dict[tuple[int, int], int] = {}
    entries = obj.get("selection", [])
    if not isinstance(entries, list):
        raise InputFormatError("'selection' must be a list of entries")
    for k, entry in enumerate(entries):
        if not isinstance(entry, dict) or not {"s", "event", "selects"} <= set(entry):
            raise InputFormatError(f"selection entry {k} needs 's', 'event' and 'selects'")
        sid = entry["s"]
        if sid not in index:
            raise InputFormatError(f"selection entry {k} names unknown state {sid!r}")
        event = to_mask(entry["event"], f"selection entry {k} event")
        if event == 0:
            raise InputFormatError(f"selection entry {k} has an empty event")
        key = (index[sid], event)
        if key in selection:
            raise InputFormatError(
                f"duplicate selection entry for state {sid!r} and event {sorted(entry['event'])}"
            )
        selection[key] = to_mask(entry["selects"], f"selection entry {k} selects")
    return Frame(tuple(states), belief, selection)


def model_from_obj(obj: dict) -> Model:
    frame = frame_from_obj(obj)
    val_obj = obj.get("valuation")
    if not isinstance(val_obj, dict):
        raise InputFormatError("'valuation' must be an object keyed by atom name")
    valuation: dict[str, int] = {}
    for atom, ids in val_obj.items():
        if not isinstance(atom, str) or not ATOM_RE.match(atom):
            raise InputFormatError(f"bad atom name {atom!r}")
        valuation[atom] = frame.event_mask(_expect_list_of_str(ids, f"valuation[{atom}]"))
    return Model(frame, valuation)


def structure_from_obj(obj: dict) -> Frame | Model:
    """A model when 'valuation' is present, a bare frame otherwise."""
    if isinstance(obj, dict) and "valuation" in obj:
        return model_from_obj(obj)
    return frame_from_obj(obj)


def load_structure(path: str) -> Frame | Model:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputFormatError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path} is not valid JSON: {e}") from None
    return structure_from_obj(obj)
