"""Guided branching engine for terminal separation.

Progress is measured by a potential mixing three quantities: unresolved
pair count, budget slack over the relaxation cost, and the budget itself.
Every committed two-way branch carries a claimed vector of minimum gains
whose weighted 1.977-power sum is below one; at run time each child's
realized gains are checked against the claim (or, failing that, the exact
potential drop), so a violated case analysis aborts loudly instead of
silently degrading.

Case naming follows the shape of the pushed extension pair around the
examined terminal: its cut growth on each side, the growth of the two
difference sets, and the small intersection left after merging.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .excess import decompose_excess2, side_view
from .flow import EXCEEDED, min_cut
from .reductions import NO_SOLUTION, SOLVED, ReduceResult, reduce_exhaustively
from .relaxation import (InstanceError, ProbeReport, RelaxationSolver,
                         TermSepInstance, TerminalSeparation, probe_branch)

ALPHA_T = Fraction("0.59950")
ALPHA_NU = Fraction("0.29774")
ALPHA_K = Fraction("0.10276")
BRANCH_BASE = 1.977
GOOD_MARGIN = 1e-6


class InvariantViolation(AssertionError):
    """The instance contradicts the case analysis; always a bug signal."""


# -- potential and branching vectors -----------------------------------------

@dataclass(frozen=True)
class Potential:
    t: int
    nu2: int  # doubled slack, exact
    k: int

    @property
    def mu(self) -> Fraction:
        return ALPHA_T * self.t + ALPHA_NU * Fraction(self.nu2, 2) + ALPHA_K * self.k


def potential(inst: TermSepInstance) -> Potential:
    return Potential(inst.t_count, inst.nu2(), inst.k)


Triple = tuple[int, int, int]          # (pairs, cost growth in halves, boundary count)
BranchingVector = tuple[Triple, Triple]


def vector_delta(triple: Triple) -> Fraction:
    t, nu, k = triple
    return ALPHA_T * t + ALPHA_NU * Fraction(nu, 2) + ALPHA_K * k


def vector_sum(vec: BranchingVector) -> float:
    return sum(BRANCH_BASE ** -float(vector_delta(tr)) for tr in vec)


def is_good_vector(vec: BranchingVector) -> bool:
    """Both branches' weighted gains beat the 1.977 budget, with a guard
    margin so float rounding can never admit a borderline vector."""
    return vector_sum(vec) < 1.0 - GOOD_MARGIN


GOOD_VECTOR_TABLE: tuple[BranchingVector, ...] = (
    ((1, 1, 0), (2, 1, 0)),
    ((1, 1, 1), (1, 2, 3)),
    ((1, 2, 0), (1, 3, 1)),
    ((1, 1, 0), (1, 4, 3)),
    ((1, 1, 2), (1, 2, 2)),
    ((1, 1, 1), (1, 3, 2)),
    ((1, 3, 0), (1, 3, 0)),
    ((1, 1, 0), (1, 5, 2)),
    ((1, 2, 1), (1, 2, 2)),
    ((1, 1, 1), (1, 4, 1)),
)

TWO_PAIRS_FIRST: BranchingVector = ((2, 1, 0), (1, 1, 0))
TWO_PAIRS_SECOND: BranchingVector = ((1, 1, 0), (2, 1, 0))


# -- orientation view ---------------------------------------------------------

@dataclass(frozen=True)
class View:
    """Accessor for one orientation of the two sides; `swap` exchanges the
    roles so every case handler is written once."""
    inst: TermSepInstance
    swap: bool

    @property
    def base_a(self) -> set[int]:
        return self.inst.b0 if self.swap else self.inst.a0

    @property
    def base_b(self) -> set[int]:
        return self.inst.a0 if self.swap else self.inst.b0

    @property
    def side_a_str(self) -> str:
        return "B" if self.swap else "A"

    @property
    def side_b_str(self) -> str:
        return "A" if self.swap else "B"

    def seeds(self, add_a, add_b) -> tuple[set[int], set[int]]:
        add_a, add_b = set(add_a), set(add_b)
        if self.swap:
            add_a, add_b = add_b, add_a
        return self.inst.a0 | add_a, self.inst.b0 | add_b

    def d(self, xs) -> int:
        return self.inst.g.cut_size(xs)

    def excess_a(self, xs) -> int:
        return self.d(xs) - self.d(self.base_a)

    def excess_b(self, xs) -> int:
        return self.d(xs) - self.d(self.base_b)

    def view_side(self, sep: TerminalSeparation, which: str) -> set[int]:
        if (which == "A") != self.swap:
            return sep.a if which == "A" else sep.b
        return sep.b if which == "A" else sep.a

    def natural_is_view_a(self, natural_true: str) -> bool:
        return (natural_true == "A") != self.swap


def _view_sides(view: View, sep: TerminalSeparation) -> tuple[set[int], set[int]]:
    """(view-A side, view-B side) of a true-coordinate separation."""
    return (sep.b, sep.a) if view.swap else (sep.a, sep.b)


# -- steps ---------------------------------------------------------------------

@dataclass
class Step:
    kind: str                    # "branch" | "reduce"
    case: str
    seeds: Optional[tuple] = None            # ((a1,b1),(a2,b2)) true coords
    claimed: Optional[BranchingVector] = None
    merge: Optional[frozenset] = None        # reduce: vertices to collapse
    adopt: Optional[tuple] = None            # reduce: (seed_a, seed_b) to fix


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    max_depth: int = 0
    rules: dict = field(default_factory=dict)
    cases: dict = field(default_factory=dict)

    def rule_event(self, name: str) -> None:
        self.rules[name] = self.rules.get(name, 0) + 1

    def case_event(self, name: str) -> None:
        self.cases[name] = self.cases.get(name, 0) + 1


# -- public probe op ------------------------------------------------------------

def basic_branch_probe(inst: TermSepInstance, pair: tuple[int, int]
                       ) -> tuple[ProbeReport, ProbeReport]:
    """Side-effect-free probes for both orientations of one pair."""
    s, t = pair
    first = probe_branch(inst, inst.a0 | {s}, inst.b0 | {t})
    second = probe_branch(inst, inst.a0 | {t}, inst.b0 | {s})
    return first, second


# -- antenna test -----------------------------------------------------------------

def is_antenna(inst: TermSepInstance, s: int) -> Optional[str]:
    """Natural side ('A' or 'B') if the terminal matches the antenna shape:
    its lone neighbor balances edges between one side and the outside, no
    strict growth around the natural anchor is free, and every landing on
    the other side costs, strictly more when anything tags along."""
    g = inst.g
    if g.degree(s) != 1:
        return None
    sp = g.neighbors(s)[0]
    if sp in inst.terminals():
        return None
    others = {v for p in inst.unresolved_pairs() for v in p} - {s}
    for natural in ("A", "B"):
        base = inst.a0 if natural == "A" else inst.b0
        other = inst.b0 if natural == "A" else inst.a0
        x = g.edges_between({sp}, base) if base else 0
        if x == 0 or (other and g.edges_between({sp}, other) > 0):
            continue
        outside = g.vertex_set() - base - other - {s}
        if g.edges_between({sp}, outside - {sp}) != x:
            continue
        if not _antenna_quantified(inst, s, sp, base, other, others):
            continue
        return natural
    return None


def _antenna_quantified(inst, s, sp, base, other, others) -> bool:
    g = inst.g
    d_base, d_other = g.cut_size(base), g.cut_size(other)
    sinks1 = other | others
    candidates1 = sorted(g.vertex_set() - base - other - others - {s, sp})
    for v in candidates1:
        value, _ = min_cut(g, base | {s, sp, v}, sinks1 - {v}, r_max=d_base)
        if value is not EXCEEDED:
            return False
    sinks2 = base | (others - {s})
    value, _ = min_cut(g, other | {s}, sinks2, r_max=d_other)
    if value is not EXCEEDED:
        return False
    candidates2 = sorted(g.vertex_set() - base - other - others - {s})
    for v in candidates2:
        value, _ = min_cut(g, other | {s, v}, sinks2, r_max=d_other + 1)
        if value is not EXCEEDED:
            return False
    return True


# -- per-pair analysis -------------------------------------------------------------

@dataclass
class SideAnalysis:
    """Pushed structure around one terminal of one pair."""
    s: int
    t: int
    swap: bool                      # False: the grown side is the true A side
    tag: str                        # Case10a | Antenna | Case11a/b/c | Case00
    As: set[int] = field(default_factory=set)   # view-A extension containing s
    Bs: set[int] = field(default_factory=set)   # view-B extension containing s
    dAs: int = 0
    dBs: int = 0
    dTA: int = 0                    # excess of As - Bs
    dTB: int = 0                    # excess of Bs - As
    natural: Optional[str] = None   # antennas: natural side, true coords
    payload: dict = field(default_factory=dict)


def _push_side(inst: TermSepInstance, grown: set[int], other_base: set[int]
               ) -> set[int]:
    """Unique maximal set with the same cut separating the grown side from
    the opposite base and every terminal outside it."""
    g = inst.g
    sinks = (other_base | inst.terminals()) - grown
    if not sinks:
        return set(g.vertices())
    d_grown = g.cut_size(grown)
    value, net = min_cut(g, grown, sinks, r_max=d_grown)
    if value is EXCEEDED or value != d_grown:
        raise InvariantViolation("pushed cut does not match the optimal side")
    return set(net.source_side("max"))


@dataclass
class PairData:
    pair: tuple[int, int]
    sep_st: TerminalSeparation      # maximal optimum extending (a0+s, b0+t)
    sep_ts: TerminalSeparation
    cost2_st: int
    cost2_ts: int
    resolved_st: int
    resolved_ts: int
    choice: Optional[tuple] = None  # two-pair resolution found pre-push
    A_max: dict = field(default_factory=dict)   # terminal -> pushed A side
    B_max: dict = field(default_factory=dict)   # terminal -> pushed B side
    analyses: dict = field(default_factory=dict)  # terminal -> SideAnalysis


def _collect_pair_data(inst: TermSepInstance, pairs) -> list[PairData]:
    base_assigned = inst.a0 | inst.b0
    out = []
    for (s, t) in pairs:
        entry = {}
        choice = None
        for (sa, sb) in ((s, t), (t, s)):
            solver = RelaxationSolver(inst, inst.a0 | {sa}, inst.b0 | {sb})
            if choice is None:
                for (qs, qt) in pairs:
                    if (qs, qt) == (s, t):
                        continue
                    for (qa, qb) in ((qs, qt), (qt, qs)):
                        if solver.resolves_free([qa], [qb]):
                            choice = ((sa, qa), (sb, qb))
                            break
                    if choice is not None:
                        break
            sep = solver.maximal_separation()
            resolved = sum(1 for p in pairs if p[0] in sep.assigned()
                           and p[0] not in base_assigned)
            entry[(sa, sb)] = (sep, solver.cost2, resolved)
        sep_st, c_st, r_st = entry[(s, t)]
        sep_ts, c_ts, r_ts = entry[(t, s)]
        out.append(PairData((s, t), sep_st, sep_ts, c_st, c_ts, r_st, r_ts, choice))
    return out


def _push_pair(inst: TermSepInstance, pd: PairData) -> None:
    s, t = pd.pair
    pd.A_max[s] = _push_side(inst, pd.sep_st.a, inst.b0)
    pd.B_max[t] = _push_side(inst, pd.sep_st.b, inst.a0)
    pd.A_max[t] = _push_side(inst, pd.sep_ts.a, inst.b0)
    pd.B_max[s] = _push_side(inst, pd.sep_ts.b, inst.a0)


def _classify_side(inst: TermSepInstance, pd: PairData, src: int) -> SideAnalysis:
    s = src
    t = pd.pair[1] if pd.pair[0] == src else pd.pair[0]
    A_true, B_true = pd.A_max[s], pd.B_max[s]
    d_a0, d_b0 = inst.g.cut_size(inst.a0), inst.g.cut_size(inst.b0)
    dA = inst.g.cut_size(A_true) - d_a0
    dB = inst.g.cut_size(B_true) - d_b0
    if (dA, dB) == (0, 0):
        raise InvariantViolation(f"terminal {s}: both pushed sides have zero excess")
    for delta, name in ((dA, "A"), (dB, "B")):
        if delta not in (0, 1):
            raise InvariantViolation(f"terminal {s}: pushed excess {delta} on side {name}")
    swap = dA == 0 and dB == 1
    if swap:
        As, Bs, dAs, dBs = B_true, A_true, dB, dA
    else:
        As, Bs, dAs, dBs = A_true, B_true, dA, dB
    view = View(inst, swap)
    an = SideAnalysis(s, t, swap, "", As, Bs, dAs, dBs)
    TA = As - Bs
    TB = Bs - As
    an.dTA = view.d(TA) - view.d(view.base_a)
    an.dTB = view.d(TB) - view.d(view.base_b)
    if (dAs, dBs) == (1, 0):
        if (an.dTA, an.dTB) == (1, 0):
            an.tag = "Case10a"
        elif (an.dTA, an.dTB) == (0, 1):
            an.tag = "Antenna"
            an.natural = view.side_b_str
        else:
            raise InvariantViolation(f"terminal {s}: case(1,0) shape "
                                     f"({an.dTA},{an.dTB})")
        return an
    # (1,1): never swapped so far; subcases may re-orient below
    Z = As & Bs
    R = inst.g.vertex_set() - (As | Bs)
    ezr = inst.g.edges_between(Z, R) if Z and R else 0
    if ezr == 1:
        if not (an.dTA == 0 and an.dTB == 0):
            raise InvariantViolation("case(1,1)(a) with grown difference sets")
        an.tag = "Case11a"
    elif an.dTA == 1 and an.dTB == 1:
        an.tag = "Case11b"
    elif {an.dTA, an.dTB} == {0, 2}:
        if an.dTA == 2:
            # mirror so the excess-2 difference set sits on the view-B side
            an.swap = not swap
            an.As, an.Bs = Bs, As
            an.dTA, an.dTB = an.dTB, an.dTA
        an.tag = "Case11c"
    else:
        raise InvariantViolation(f"terminal {s}: case(1,1) shape "
                                 f"({an.dTA},{an.dTB},E(Z,R)={ezr})")
    return an


def _partner_kind(analyses: dict, t: int) -> tuple[str, SideAnalysis]:
    an = analyses[t]
    if an.tag == "Antenna":
        return "antenna", an
    if an.tag in ("Case11a", "Case11b", "Case11c"):
        return "t11", an
    raise InvariantViolation(f"partner {t} classified {an.tag} survived to a (1,1) case")


# -- public per-pair operations ----------------------------------------------------

def push_extremal(inst: TermSepInstance, pair: tuple[int, int]
                  ) -> tuple[TerminalSeparation, TerminalSeparation]:
    """Extremal optimal separations for both orientations of a pair: the side
    holding the first terminal grown to its unique maximum, the other side
    shrunk accordingly (their union is invariant across optimal choices)."""
    s, t = pair
    sep_st = RelaxationSolver(inst, inst.a0 | {s}, inst.b0 | {t}).maximal_separation()
    a_max = _push_side(inst, sep_st.a, inst.b0)
    pushed_st = TerminalSeparation(a_max, (sep_st.a | sep_st.b) - a_max)
    sep_ts = RelaxationSolver(inst, inst.a0 | {t}, inst.b0 | {s}).maximal_separation()
    b_max = _push_side(inst, sep_ts.b, inst.a0)
    pushed_ts = TerminalSeparation((sep_ts.a | sep_ts.b) - b_max, b_max)
    return pushed_st, pushed_ts


def intersection_reduce(inst: TermSepInstance, pair: tuple[int, int]):
    """Merge the nontrivial part shared by the two pushed extensions around
    one terminal; persistence keeps the merge safe because the pair resolves
    one way or the other."""
    from .reductions import APPLIED, NOT_APPLICABLE, ReductionOutcome

    s, t = pair
    sep_s = RelaxationSolver(inst, inst.a0 | {s}, inst.b0 | {t}).maximal_separation()
    sep_t = RelaxationSolver(inst, inst.a0 | {t}, inst.b0 | {s}).maximal_separation()
    for (u, a_grown, b_grown) in ((s, sep_s.a, sep_t.b), (t, sep_t.a, sep_s.b)):
        a_max = _push_side(inst, a_grown, inst.b0)
        b_max = _push_side(inst, b_grown, inst.a0)
        z = (a_max & b_max) - {u}
        if len(z) >= 2:
            inst.merge_vertices(z)
            return ReductionOutcome(APPLIED, "intersection_reduce")
    return ReductionOutcome(NOT_APPLICABLE, "intersection_reduce")


def classify_pair(inst: TermSepInstance, pair: tuple[int, int],
                  source: Optional[int] = None) -> SideAnalysis:
    """Case classification of a pair as seen from one terminal, computed on
    fresh pushed extensions."""
    pair = tuple(sorted(pair))
    src = pair[0] if source is None else source
    pd = _collect_pair_data(inst, [pair])[0]
    _push_pair(inst, pd)
    return _classify_side(inst, pd, src)


# -- select_step --------------------------------------------------------------------

def select_step(inst: TermSepInstance) -> Step:
    """One applicable branching or reduction step for a reduced maximal
    instance, chosen by scanning pairs in canonical order under the fixed
    case precedence.  Exhaustion is a hard error: the case analysis covers
    every reduced instance."""
    pairs = inst.unresolved_pairs()
    if not pairs:
        raise InvariantViolation("select_step on an instance without open pairs")

    data = _collect_pair_data(inst, pairs)

    # two-way progress: some orientation resolves a second pair outright
    for pd in data:
        s, t = pd.pair
        if pd.resolved_st >= 2 or pd.resolved_ts >= 2:
            first_heavier = pd.resolved_st >= 2
            return Step("branch", "TwoPairs",
                        seeds=((inst.a0 | {s}, inst.b0 | {t}),
                               (inst.a0 | {t}, inst.b0 | {s})),
                        claimed=TWO_PAIRS_FIRST if first_heavier else TWO_PAIRS_SECOND)
    # ... or can be steered to resolve one at no extra cost
    for pd in data:
        if pd.choice is not None:
            (sa, qa), (sb, qb) = pd.choice
            return Step("branch", "TwoPairs",
                        seeds=((inst.a0 | {sa, qa}, inst.b0 | {sb, qb}),
                               (inst.a0 | {sb}, inst.b0 | {sa})),
                        claimed=TWO_PAIRS_FIRST)

    for pd in data:
        _push_pair(inst, pd)

    # small leftover intersections collapse before any case analysis
    for pd in data:
        s, t = pd.pair
        for u in (s, t):
            z = (pd.A_max[u] & pd.B_max[u]) - {u}
            if len(z) >= 2:
                return Step("reduce", "IntersectionReduce", merge=frozenset(z))

    for pd in data:
        for u in pd.pair:
            pd.analyses[u] = _classify_side(inst, pd, u)

    # the lopsided case acts first wherever it appears
    for pd in data:
        for u in sorted(pd.pair):
            if pd.analyses[u].tag == "Case10a":
                return _step_case10a(inst, pd, pd.analyses[u])

    for pd in data:
        ranked = sorted(sorted(pd.pair),
                        key=lambda u: {"Case11a": 0, "Case11b": 1,
                                       "Case11c": 2, "Antenna": 3}[pd.analyses[u].tag])
        lead = pd.analyses[ranked[0]]
        if lead.tag == "Case11a":
            return _step_case11a(inst, pd, lead)
        if lead.tag == "Case11b":
            return _step_case11b(inst, pd, lead)
        if lead.tag == "Case11c":
            return _step_case11c(inst, pd, lead)
        return _step_two_antennas(inst, pd)

    raise InvariantViolation("select_step exhausted the case analysis")


def _unique_neighbor(inst: TermSepInstance, s: int) -> int:
    nbs = inst.g.neighbors(s)
    if len(nbs) != 1 or inst.g.degree(s) != 1:
        raise InvariantViolation(f"terminal {s} is not pendant")
    return nbs[0]


def _resolves_second(inst: TermSepInstance, seeds: tuple[set, set], pairs) -> bool:
    solver = RelaxationSolver(inst, *seeds)
    sep = solver.maximal_separation()
    assigned = inst.a0 | inst.b0
    resolved = sum(1 for p in pairs if p[0] in sep.assigned() and p[0] not in assigned)
    return resolved >= 2


def _branch(case: str, seeds1, seeds2, claimed: BranchingVector) -> Step:
    return Step("branch", case, seeds=(seeds1, seeds2), claimed=claimed)


def _step_case10a(inst: TermSepInstance, pd: PairData, an: SideAnalysis) -> Step:
    """One difference set grew by a lone vertex `a`; branch on its side, or
    contract its pendant attachment when it has a unique outside contact."""
    s, t = an.s, an.t
    view = View(inst, an.swap)
    g = inst.g
    extra = an.As - an.Bs - view.base_a
    if len(extra) != 1:
        raise InvariantViolation("case(1,0)(a) difference set is not a singleton")
    a = next(iter(extra))
    sp = _unique_neighbor(inst, s)
    if an.As & an.Bs != {s, sp}:
        raise InvariantViolation("case(1,0)(a) intersection is not {s, s'}")
    p = g.multiplicity(sp, a)
    outside = g.vertex_set() - an.As - view.base_b
    x = g.edges_between({a}, outside) - 1
    if p < 1 or x < 0:
        raise InvariantViolation("case(1,0)(a) edge counts out of range")
    if x == 0:
        nbs = [v for v in g.neighbors(a) if v in outside]
        if len(nbs) != 1:
            raise InvariantViolation("case(1,0)(a) x=0 without a unique outside contact")
        ap = nbs[0]
        if ap in inst.terminals():
            raise InvariantViolation("case(1,0)(a) outside contact is a terminal")
        return Step("reduce", "Case10a", merge=frozenset({a, ap}))
    seeds1 = view.seeds({a}, ())
    seeds2 = view.seeds((), {a})
    pairs = inst.unresolved_pairs()
    if _resolves_second(inst, seeds2, pairs):
        return _branch("Case10a", seeds1, seeds2, TWO_PAIRS_SECOND)
    if _resolves_second(inst, seeds1, pairs):
        return _branch("Case10a", seeds1, seeds2, TWO_PAIRS_FIRST)
    if p == 1 and x == 1:
        solver = RelaxationSolver(inst, *seeds2)
        sep = solver.maximal_separation()
        d_b = view.d(_view_sides(view, sep)[1]) - view.d(view.base_b)
        if d_b >= 2:
            claimed = ((1, 1, 1), (1, 3, 2))
        else:
            claimed = ((1, 1, 2), (1, 2, 2))
    else:
        claimed = ((1, 1, p), (1, 2, p + x))
    return _branch("Case10a", seeds1, seeds2, claimed)


def _step_case11a(inst: TermSepInstance, pd: PairData, an: SideAnalysis) -> Step:
    s, t = an.s, an.t
    view = View(inst, an.swap)
    if an.As & an.Bs != {s}:
        raise InvariantViolation("case(1,1)(a) intersection is not {s}")
    sp = _unique_neighbor(inst, s)
    kind, t_an = _partner_kind(pd.analyses, t)
    if kind == "t11":
        claimed = ((1, 3, 0), (1, 3, 0))
    elif view.natural_is_view_a(t_an.natural):
        claimed = ((1, 3, 1), (1, 2, 0))
    else:
        claimed = ((1, 2, 0), (1, 3, 1))
    return _branch("Case11a", view.seeds({s, sp}, {t}), view.seeds({t}, {s, sp}),
                   claimed)


def _step_case11b(inst: TermSepInstance, pd: PairData, an: SideAnalysis) -> Step:
    s, t = an.s, an.t
    g = inst.g
    sp = _unique_neighbor(inst, s)
    view = View(inst, an.swap)
    # orient so the shared neighbor has no edges to the view-A base
    if g.edges_between({sp}, view.base_a) > 0:
        if g.edges_between({sp}, view.base_b) > 0:
            raise InvariantViolation("s' adjacent to both bases survived boundary")
        view = View(inst, not an.swap)
        an = SideAnalysis(s, t, view.swap, an.tag, an.Bs, an.As, an.dBs, an.dAs,
                          an.dTB, an.dTA)
    extra_a = an.As - an.Bs - view.base_a
    extra_b = an.Bs - an.As - view.base_b
    if len(extra_a) != 1 or len(extra_b) != 1:
        raise InvariantViolation("case(1,1)(b) difference sets are not singletons")
    a, b = next(iter(extra_a)), next(iter(extra_b))
    if an.As & an.Bs != {s, sp}:
        raise InvariantViolation("case(1,1)(b) intersection is not {s, s'}")
    p = g.multiplicity(sp, a)
    q = g.multiplicity(sp, b)
    qp = g.edges_between({sp}, view.base_b)
    if p < 1 or q < 1 or p != q + qp:
        raise InvariantViolation("case(1,1)(b) edge balance broken")
    tp = _unique_neighbor(inst, t)
    if tp == a:
        return Step("reduce", "Case11b", adopt=view.seeds({t}, {s}))
    if tp == b:
        return Step("reduce", "Case11b", adopt=view.seeds({s}, {t}))
    kind, t_an = _partner_kind(pd.analyses, t)
    if kind == "antenna":
        if view.natural_is_view_a(t_an.natural):
            claimed = ((1, 3, p + 1), (1, 1, p))
        else:
            claimed = ((1, 1, p), (1, 3, p + 1))
    else:
        if t_an.tag == "Case11b":
            claimed = ((1, 2, p + 1), (1, 2, p + 1))
        elif t_an.tag == "Case11c":
            t_view = View(inst, t_an.swap)
            tp_on_decomp_side_in_branch1 = (t_view.base_b == view.base_b)
            if tp_on_decomp_side_in_branch1:
                claimed = ((1, 2, p), (1, 2, p + 1))
            else:
                claimed = ((1, 2, p + 1), (1, 2, p))
        else:
            raise InvariantViolation("case(1,1)(b) partner in case (1,1)(a)")
    return _branch("Case11b", view.seeds({s, sp}, {t, tp}),
                   view.seeds({t, tp}, {s, sp}), claimed)


def _step_case11c(inst: TermSepInstance, pd: PairData, an: SideAnalysis) -> Step:
    s, t = an.s, an.t
    g = inst.g
    view = View(inst, an.swap)
    sp = _unique_neighbor(inst, s)
    tp = _unique_neighbor(inst, t)
    dec = decompose_excess2(inst, an.Bs - {s}, view.side_b_str)
    if dec.d_vertex != sp:
        raise InvariantViolation("case(1,1)(c) heavy vertex is not s'")
    sigma = dec.sigma
    assert sigma is not None and sigma >= 1
    if tp in dec.c_vertices:
        return Step("reduce", "Case11c", adopt=view.seeds({s}, {t}))
    z = an.As & an.Bs
    kind, t_an = _partner_kind(pd.analyses, t)
    if z == {s, sp}:
        p = g.edges_between({sp}, view.base_a)
        if p < 1 or sigma != p + 1:
            raise InvariantViolation("case(1,1)(c.i) edge balance broken")
        if kind == "t11":
            claimed = ((1, 2, sigma), (1, 2, p))
        elif view.natural_is_view_a(t_an.natural):
            claimed = ((1, 2, 1 + sigma), (1, 1, p))
        else:
            claimed = ((1, 2, sigma), (1, 1, 1 + p))
        return _branch("Case11c_i", view.seeds({s, sp}, {t}),
                       view.seeds({t}, {s, sp}), claimed)
    if z != {s}:
        raise InvariantViolation("case(1,1)(c) intersection shape")
    if kind == "t11":
        return _branch("Case11c_ii", view.seeds({s, sp}, {t}),
                       view.seeds({t}, {s, sp}), ((1, 3, sigma), (1, 2, 0)))
    if view.natural_is_view_a(t_an.natural):
        return _step_case11c_ii_A(inst, pd, an, view, sp, tp, sigma)
    return _step_case11c_ii_B(inst, pd, an, view, dec, sp, tp, sigma)


def _step_case11c_ii_A(inst, pd, an, view: View, sp: int, tp: int, sigma: int) -> Step:
    """Skewed branching: natural assignment of both terminals against the
    double-fixed unnatural one, refined down to a single-vertex branch when
    every coarser claim is too weak."""
    s, t = an.s, an.t
    g = inst.g
    pairs = inst.unresolved_pairs()
    x = g.edges_between({tp}, view.base_a)
    if x < 1:
        raise InvariantViolation("antenna with no anchor edges")
    nt_seeds = view.seeds({t}, {s})
    unt_seeds = view.seeds({s, sp}, {t, tp})
    solver = RelaxationSolver(inst, *unt_seeds)
    sep_unt = solver.maximal_separation()
    assigned = inst.a0 | inst.b0
    resolved = sum(1 for p in pairs if p[0] in sep_unt.assigned() and p[0] not in assigned)
    if resolved >= 2:
        return _branch("Case11c_ii_A", nt_seeds, unt_seeds, TWO_PAIRS_SECOND)
    d_b_unt = view.d(_view_sides(view, sep_unt)[1]) - view.d(view.base_b)
    if d_b_unt < 2:
        raise InvariantViolation("unnatural branch gained less than the pushing bound")
    if not (x == 1 and sigma == 1 and d_b_unt == 2):
        if x + sigma >= 3:
            claimed = ((1, 1, 0), (1, 4, x + sigma))
        else:
            claimed = ((1, 1, 0), (1, 5, 2))
        return _branch("Case11c_ii_A", nt_seeds, unt_seeds, claimed)
    outs = [v for v in g.neighbors(tp) if v != t and v not in view.base_a]
    if len(outs) != 1 or g.degree(tp) != 3:
        raise InvariantViolation("narrow antenna anchor expected degree 3")
    v = outs[0]
    if v in inst.terminals():
        # the unnatural extension would have resolved that terminal's pair
        raise InvariantViolation("free anchor neighbor is a terminal")
    if v == sp:
        return Step("reduce", "Case11c_ii_A", adopt=view.seeds({t}, {s}))
    ext_seeds = view.seeds({s, sp}, {t, tp, v})
    solver = RelaxationSolver(inst, *ext_seeds)
    sep_ext = solver.maximal_separation()
    resolved = sum(1 for p in pairs if p[0] in sep_ext.assigned() and p[0] not in assigned)
    if resolved >= 2:
        return _branch("Case11c_ii_A", nt_seeds, ext_seeds, TWO_PAIRS_SECOND)
    d_b_ext = view.d(_view_sides(view, sep_ext)[1]) - view.d(view.base_b)
    if d_b_ext >= 3:
        return _branch("Case11c_ii_A", nt_seeds, ext_seeds, ((1, 1, 0), (1, 5, 2)))
    if d_b_ext != 2:
        raise InvariantViolation("extended unnatural branch below the pushing bound")
    b_q = _view_sides(view, sep_ext)[1] - {t, tp}
    dec2 = decompose_excess2(inst, b_q, view.side_b_str)
    if dec2.d_vertex != v:
        raise InvariantViolation("greedy-fixed vertex is not the heavy one")
    sigma2 = dec2.sigma
    assert sigma2 is not None and sigma2 >= 1
    if sp in b_q:
        return Step("reduce", "Case11c_ii_A", adopt=view.seeds({t}, {s}))
    seeds_va = view.seeds({v}, ())
    seeds_vb = view.seeds((), {v})
    if _resolves_second(inst, seeds_va, pairs):
        return _branch("Case11c_ii_A", seeds_va, seeds_vb, TWO_PAIRS_FIRST)
    if _resolves_second(inst, seeds_vb, pairs):
        return _branch("Case11c_ii_A", seeds_va, seeds_vb, TWO_PAIRS_SECOND)
    if sigma2 >= 2:
        claimed = ((1, 2, sigma2), (1, 2, 1))
    else:
        solver = RelaxationSolver(inst, *seeds_va)
        sep_va = solver.maximal_separation()
        d_a_va = view.d(_view_sides(view, sep_va)[0]) - view.d(view.base_a)
        if d_a_va >= 3:
            claimed = ((1, 3, 1), (1, 2, 1))
        else:
            claimed = ((1, 2, 1), (1, 2, 2))
    return _branch("Case11c_ii_A", seeds_va, seeds_vb, claimed)


def _step_case11c_ii_B(inst, pd, an, view: View, dec, sp: int, tp: int,
                       sigma: int) -> Step:
    s, t = an.s, an.t
    g = inst.g
    pairs = inst.unresolved_pairs()
    others = {v for p in pairs for v in p} - {s}
    sp_term_contact = any(u in others for u in g.neighbors(sp))
    if sigma > 1 or sp_term_contact:
        seeds1 = view.seeds({s, sp}, {t})
        seeds2 = view.seeds({t}, {s, sp})
        if sp_term_contact:
            claimed = TWO_PAIRS_FIRST
        else:
            claimed = ((1, 2, sigma), (1, 2, 1))
        return _branch("Case11c_ii_B", seeds1, seeds2, claimed)
    r = len(dec.c_vertices)
    if r == 0:
        return _step_case11c_ii_B1(inst, pd, an, view, sp, tp)
    if r == 1:
        nbs = [v for v in g.neighbors(sp) if v not in (an.s, dec.c_vertices[0])]
        if len(nbs) != 1 or g.degree(sp) != 3:
            raise InvariantViolation("narrow heavy vertex expected degree 3")
        v = nbs[0]
        if v in inst.terminals():
            raise InvariantViolation("excluded terminal contact reappeared")
        return Step("reduce", "Case11c_ii_B2", merge=frozenset({sp, v}))
    raise InvariantViolation(f"sigma=1 decomposition with r={r}")


def _step_case11c_ii_B1(inst, pd, an, view: View, sp: int, tp: int) -> Step:
    s, t = an.s, an.t
    g = inst.g
    pairs = inst.unresolved_pairs()
    y = g.edges_between({tp}, view.base_b)
    if y < 1:
        raise InvariantViolation("antenna anchor lost its base edges")
    seeds_tb = view.seeds({s}, {t, tp})
    seeds_ta = view.seeds({t, tp}, {s})
    if y >= 2:
        return _branch("Case11c_ii_B1", seeds_tb, seeds_ta, ((1, 1, 1), (1, 3, y)))
    outs = [v for v in g.neighbors(tp) if v != t and v not in view.base_b]
    if len(outs) != 1 or g.degree(tp) != 3:
        raise InvariantViolation("narrow antenna anchor expected degree 3")
    w = outs[0]
    if w in inst.terminals():
        # the anchored extension resolves that pair at no extra cost
        return _branch("Case11c_ii_B1", seeds_tb, seeds_ta, TWO_PAIRS_SECOND)
    if w == sp:
        return Step("reduce", "Case11c_ii_B1", adopt=view.seeds({s}, {t}))
    if g.edges_between({w}, view.base_a) > 0:
        return _branch("Case11c_ii_B1", seeds_tb, seeds_ta, ((1, 1, 2), (1, 3, 1)))
    ext_seeds = view.seeds({t, tp, w}, {s})
    solver = RelaxationSolver(inst, *ext_seeds)
    sep_ext = solver.maximal_separation()
    assigned = inst.a0 | inst.b0
    resolved = sum(1 for p in pairs if p[0] in sep_ext.assigned() and p[0] not in assigned)
    if resolved >= 2:
        return _branch("Case11c_ii_B1", seeds_tb, ext_seeds, TWO_PAIRS_SECOND)
    d_a_ext = view.d(_view_sides(view, sep_ext)[0]) - view.d(view.base_a)
    if d_a_ext >= 3:
        return _branch("Case11c_ii_B1", seeds_tb, ext_seeds, ((1, 1, 1), (1, 4, 1)))
    if d_a_ext != 2:
        raise InvariantViolation("extended anchored branch below the pushing bound")
    a_q = _view_sides(view, sep_ext)[0] - {t, tp}
    dec3 = decompose_excess2(inst, a_q, view.side_a_str)
    if dec3.d_vertex != w:
        raise InvariantViolation("greedy-fixed vertex is not the heavy one")
    seeds_wa = view.seeds({w}, ())
    seeds_wb = view.seeds((), {w})
    if _resolves_second(inst, seeds_wa, pairs):
        return _branch("Case11c_ii_B1", seeds_wa, seeds_wb, TWO_PAIRS_FIRST)
    if _resolves_second(inst, seeds_wb, pairs):
        return _branch("Case11c_ii_B1", seeds_wa, seeds_wb, TWO_PAIRS_SECOND)
    return _branch("Case11c_ii_B1", seeds_wa, seeds_wb, ((1, 2, 1), (1, 2, 2)))


def _step_two_antennas(inst: TermSepInstance, pd: PairData) -> Step:
    """Both terminals are antennas; they must share a natural side, and the
    edge patterns around their anchors decide between an edge-fixing branch
    and an anchor contraction."""
    s, t = sorted(pd.pair)
    an_s, an_t = pd.analyses[s], pd.analyses[t]
    if an_s.natural != an_t.natural:
        raise InvariantViolation("antenna pair with opposite natural sides")
    view = View(inst, swap=an_s.natural == "A")
    g = inst.g
    sp, tp = _unique_neighbor(inst, s), _unique_neighbor(inst, t)
    x = g.edges_between({sp}, view.base_b)
    y = g.edges_between({tp}, view.base_b)
    if x < 1 or y < 1:
        raise InvariantViolation("antenna anchor without base edges")
    others = {v for p in inst.unresolved_pairs() for v in p} - {s, t}
    for (u, up, xv) in ((s, sp, x), (t, tp, y)):
        if any(w in others for w in g.neighbors(up)):
            other_t = t if u == s else s
            return _branch("AntennaPair",
                           view.seeds({u, up}, {other_t}),
                           view.seeds({other_t}, {u, up}),
                           TWO_PAIRS_FIRST)
    if x >= 3:
        return _branch("AntennaPair", view.seeds({s, sp}, {t}),
                       view.seeds({t}, {s, sp}), ((1, 2, x), (1, 1, 1)))
    if y >= 3:
        return _branch("AntennaPair", view.seeds({t, tp}, {s}),
                       view.seeds({s}, {t, tp}), ((1, 2, y), (1, 1, 1)))
    for (u, up) in ((s, sp), (t, tp)):
        ext = [v for v in g.neighbors(up) if v != u and v not in view.base_b]
        if len(set(ext)) == 1:
            return Step("reduce", "AntennaPair", merge=frozenset({up, ext[0]}))
    if x != 2 or y != 2:
        raise InvariantViolation("antenna counts escaped the case split")
    return _branch("AntennaPair", view.seeds({s, sp}, {t}),
                   view.seeds({t}, {s, sp}), ((1, 2, 2), (1, 1, 2)))


# -- recursive solver -----------------------------------------------------------

def solve_termsep(inst: TermSepInstance, stats: Optional[SearchStats] = None
                  ) -> Optional[TerminalSeparation]:
    """Integral separation extending the instance's partial one within its
    budget, or None.  The input instance is left untouched."""
    if stats is None:
        stats = SearchStats()
    work = inst.clone()
    return _solve(work, stats, depth=0, measure=None)


def _solve(inst: TermSepInstance, stats: SearchStats, depth: int,
           measure: Optional[dict]) -> Optional[TerminalSeparation]:
    stats.nodes += 1
    stats.max_depth = max(stats.max_depth, depth)
    while True:
        red = reduce_exhaustively(inst)
        for rule in red.applications:
            stats.rule_event(rule)
        if measure is not None:
            measure["outcome"] = red.outcome
            measure["cost2_norm"] = red.cost2_after_normalize
            measure["boundary"] = red.boundary_count
            measure["t_after"] = inst.t_count if red.outcome == "reduced" else 0
            measure["mu_after"] = potential(inst).mu if red.outcome == "reduced" else None
            measure = None  # only the entry reduction of this node counts
        if red.outcome == NO_SOLUTION:
            stats.leaves += 1
            return None
        if red.outcome == SOLVED:
            stats.leaves += 1
            return inst.lift(red.separation)
        step = select_step(inst)
        stats.case_event(step.case)
        if step.kind == "reduce":
            if step.merge is not None:
                inst.merge_vertices(step.merge)
            else:
                seed_a, seed_b = step.adopt
                inst.a0, inst.b0 = set(seed_a), set(seed_b)
            inst.emit("step", kind="reduce", case=step.case)
            continue
        return _branch_and_recurse(inst, step, stats, depth)


def _branch_and_recurse(inst: TermSepInstance, step: Step, stats: SearchStats,
                        depth: int) -> Optional[TerminalSeparation]:
    claimed = step.claimed
    if not is_good_vector(claimed):
        raise InvariantViolation(f"{step.case}: claimed vector {claimed} is not good")
    parent = potential(inst)
    parent_cost2 = inst.cost2()
    inst.emit("step", kind="branch", case=step.case, claimed=claimed,
              mu=float(parent.mu))
    for (seed_a, seed_b), claim in zip(step.seeds, claimed):
        child = inst.clone()
        child.a0 |= set(seed_a)
        child.b0 |= set(seed_b)
        report: dict = {}
        found = _solve(child, stats, depth + 1, report)
        _assert_dominance(step.case, claim, parent, parent_cost2, report)
        if found is not None:
            return inst.lift(found)
    return None


def _assert_dominance(case: str, claim: Triple, parent: Potential,
                      parent_cost2: int, report: dict) -> None:
    """Realized progress must cover the claim componentwise, or the exact
    potential must have dropped by the claim's weight.  Children that close
    outright (solved or infeasible) satisfy any claim."""
    if report["outcome"] != "reduced":
        return
    t_real = parent.t - report["t_after"]
    nu_real = report["cost2_norm"] - parent_cost2
    k_real = report["boundary"]
    ct, cn, ck = claim
    if t_real >= ct and nu_real >= cn and k_real >= ck:
        return
    drop = parent.mu - report["mu_after"]
    if drop >= vector_delta(claim):
        return
    raise InvariantViolation(
        f"{case}: realized ({t_real},{nu_real},{k_real}) below claim {claim} "
        f"and potential drop {float(drop):.4f} below {float(vector_delta(claim)):.4f}")
