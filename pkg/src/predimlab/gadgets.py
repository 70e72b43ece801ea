"""Constructive gadgets: Beatty sequences, the deficiency-one pair (X, Y),
the tower amalgam that pins a point to an orbit, and the two explicit
example families ("ex511" fan join, "ex512" double cycle).

Every builder is deterministic: identical parameters give byte-identical
structures.  Verifiers enumerate subsets exhaustively below their caps and
report DEGENERATE rather than guessing a repair when the construction's
arithmetic collapses (a 2-cycle under simple-graph semantics, or a base
with fewer than 2 points).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .classes import ControlFunction, MembershipResult, in_Cf
from .closures import cld, is_d_closed
from .errors import CapacityError, InputError
from .independence import perp
from .reports import (
    DEGENERATE,
    FAIL,
    PASS,
    VerificationReport,
    subset_witness,
)
from .structures import (
    FiniteStructure,
    delta_mask,
    delta_rel,
    free_amalgam,
    graph,
    hypergraph_signature,
    _bits,
)

M_EQUALS_1 = "M_EQUALS_1"
B_EQUALS_1 = "B_EQUALS_1"
B_GE_2 = "B_GE_2"


# -- Beatty sequences -------------------------------------------------------------


@dataclass(frozen=True)
class BeattySequence:
    """0/1 first differences of floor(i * ell / b), period of length b."""

    ell: int
    b: int
    period: tuple[int, ...]  # entries a_1 .. a_b

    def value(self, i: int) -> int:
        return self.period[(i - 1) % self.b]

    def window_sum(self, start: int, length: int) -> int:
        """Sum of entries start+1 .. start+length of the periodic extension."""
        return sum(self.value(j) for j in range(start + 1, start + length + 1))


def beatty(ell: int, b: int) -> BeattySequence:
    if not 0 < ell < b:
        raise InputError(f"need 0 < ell < b, got ell={ell}, b={b}")
    period = tuple((i * ell) // b - ((i - 1) * ell) // b for i in range(1, b + 1))
    return BeattySequence(ell, b, period)


# -- gadget parameters --------------------------------------------------------------


@dataclass(frozen=True)
class GadgetParams:
    n: int
    m: int
    r: int
    case: str  # M_EQUALS_1 / B_EQUALS_1 / B_GE_2
    a: Optional[int] = None
    c: Optional[int] = None
    b: Optional[int] = None
    ell: Optional[int] = None


def gadget_params(n: int, m: int, r: int = 2) -> GadgetParams:
    if n < 1 or m < 1:
        raise InputError(f"need n, m >= 1, got n={n}, m={m}")
    if math.gcd(n, m) != 1:
        raise InputError(f"n={n} and m={m} must be coprime")
    if r == 2:
        if n <= m:
            raise InputError(f"r=2 needs n > m, got n={n}, m={m}")
    elif r >= 3:
        if n < m:
            raise InputError(f"r>=3 needs n >= m, got n={n}, m={m}")
    else:
        raise InputError(f"arity must be >= 2, got {r}")
    if m == 1:
        return GadgetParams(n, m, r, M_EQUALS_1)
    a, c = divmod(n, m)
    b = pow(-c, -1, m)
    ell = (1 + c * b) // m
    if ell * m - c * b != 1 or not (0 < b < m) or not (0 < ell <= b):
        raise InputError(f"internal arithmetic failure for n={n}, m={m}")
    return GadgetParams(n, m, r, B_EQUALS_1 if b == 1 else B_GE_2, a=a, c=c, b=b, ell=ell)


# -- gadget construction --------------------------------------------------------------


@dataclass(frozen=True)
class GadgetPair:
    structure: FiniteStructure  # the Y
    x_set: frozenset[int]  # the distinguished X
    params: GadgetParams
    degenerate: bool = False
    degenerate_reason: str = ""

    @property
    def y_minus_x(self) -> frozenset[int]:
        return frozenset(self.structure.vertices) - self.x_set


def build_gadget(n: int, m: int, r: int = 2) -> GadgetPair:
    """Deterministic (X, Y) with delta(Y/X) = -1 whose proper parts stay tame.

    The binary skeleton is lifted to arity r by padding every edge with a
    fixed (r-2)-tuple of extra X points.
    """
    params = gadget_params(n, m, r)
    edges: list[tuple[int, int]] = []
    degenerate = False
    reason = ""
    if params.case == M_EQUALS_1:
        x_skel = list(range(n + 1))
        y0 = n + 1
        ys = [y0]
        edges = [(x, y0) for x in x_skel]
    elif params.case == B_EQUALS_1:
        a, ell = params.a, params.ell
        x_skel = list(range(a + ell))
        y0 = a + ell
        ys = [y0]
        edges = [(x, y0) for x in x_skel]
    else:
        a, b, ell = params.a, params.b, params.ell
        size_x = (a - 1) * b + ell
        x_skel = list(range(size_x))
        ys = [size_x + i for i in range(b)]
        edges = [(ys[i], ys[(i + 1) % b]) for i in range(b)]
        pool = list(x_skel)
        for i in range(b):
            for _ in range(a - 1):
                edges.append((pool.pop(0), ys[i]))
        seq = beatty(ell, b)
        positions = [i for i in range(b) if seq.value(i) == 1]
        for i in positions:
            edges.append((pool.pop(0), ys[i]))
        if pool:
            raise InputError("edge distribution did not exhaust X")
        if b == 2:
            degenerate = True
            reason = "a 2-cycle collapses to a single edge under simple-graph semantics"
        if size_x < 2:
            degenerate = True
            reason = (reason + "; " if reason else "") + "skeleton X has fewer than 2 points"
    next_id = (x_skel[-1] if x_skel else -1) + 1 + len(ys)
    pad: list[int] = []
    if r >= 3:
        pad = list(range(next_id, next_id + (r - 2)))
    sig = hypergraph_signature(n, m, r)
    instances = [tuple(sorted((u, v, *pad))) for u, v in edges]
    Y = FiniteStructure(sig, x_skel + ys + pad, {"R": instances})
    return GadgetPair(Y, frozenset(x_skel) | frozenset(pad), params, degenerate, reason)


def verify_gadget(g: GadgetPair, cap: int = 22) -> VerificationReport:
    """Exhaustive check of the three gadget clauses by subset enumeration."""
    rep = VerificationReport(suite="gadget-verify")
    S = g.structure
    tag = f"n={g.params.n},m={g.params.m},r={g.params.r}"
    if len(S.vertices) > cap:
        raise CapacityError("gadget verification", cap, len(S.vertices))
    if g.degenerate:
        for clause in ("deficiency", "proper-parts", "intermediate"):
            rep.add(f"{tag}:{clause}", DEGENERATE, note=g.degenerate_reason)
        return rep.finalize()
    xs = sorted(g.x_set)
    ys = sorted(g.y_minus_x)
    d = delta_rel(S, ys, xs)
    ok1 = d == -1 and len(xs) >= 2
    rep.add(
        f"{tag}:deficiency",
        PASS if ok1 else FAIL,
        witness=None if ok1 else f"delta(Y/X)={d}, |X|={len(xs)}",
        margin=Fraction(d + 1),
    )
    xmask = S.mask_of(xs)
    free_bits = [1 << i for i in _bits(S.mask_of(ys))]
    x_bits = [1 << i for i in _bits(xmask)]

    bad2 = None
    for um_free in range(1 << len(free_bits)):
        fmask = 0
        for k in range(len(free_bits)):
            if um_free >> k & 1:
                fmask |= free_bits[k]
        for um_x in range(1 << len(x_bits)):
            if um_x == (1 << len(x_bits)) - 1:
                continue  # X would be inside U
            xpart = 0
            for k in range(len(x_bits)):
                if um_x >> k & 1:
                    xpart |= x_bits[k]
            base = delta_mask(S, xpart)
            # minimum of delta over sets between U-cap-X and U
            for w in range(1 << len(free_bits)):
                if w & um_free != w:
                    continue
                wmask = 0
                for k in range(len(free_bits)):
                    if w >> k & 1:
                        wmask |= free_bits[k]
                if delta_mask(S, xpart | wmask) < base:
                    bad2 = (xpart | fmask, xpart | wmask)
                    break
            if bad2:
                break
        if bad2:
            break
    rep.add(
        f"{tag}:proper-parts",
        PASS if bad2 is None else FAIL,
        witness=None
        if bad2 is None
        else f"U={subset_witness(S.ids_of(bad2[0]))} "
        f"violating={subset_witness(S.ids_of(bad2[1]))}",
    )

    bad3 = None
    full_free = S.mask_of(ys)
    base_x = delta_mask(S, xmask)
    for w in range(1 << len(free_bits)):
        wmask = 0
        for k in range(len(free_bits)):
            if w >> k & 1:
                wmask |= free_bits[k]
        if wmask == full_free:
            continue
        if delta_mask(S, xmask | wmask) - base_x < 0:
            bad3 = xmask | wmask
            break
    rep.add(
        f"{tag}:intermediate",
        PASS if bad3 is None else FAIL,
        witness=None if bad3 is None else subset_witness(S.ids_of(bad3)),
    )
    return rep.finalize()


# -- tower amalgam ---------------------------------------------------------------------


@dataclass(frozen=True)
class TowerAmalgam:
    structure: FiniteStructure  # the E
    c_block: frozenset[int]  # image of C
    copy_blocks: tuple[frozenset[int], ...]  # images of the B copies
    x_points: tuple[int, ...]  # identified gadget base, x_1 = c first
    new_points: frozenset[int]  # gadget vertices glued beyond X


def build_tower_amalgam(
    C: FiniteStructure,
    B: FiniteStructure,
    base_ids: Iterable[int],
    g: GadgetPair,
    c_vertex: int | None = None,
    u0_vertex: int | None = None,
) -> TowerAmalgam:
    """Glue the gadget onto one distinguished point of C and copies of B.

    C and B share the base (same ids, same induced structure).  The gadget's
    base X is identified with (c, and the u0 copy in each of |X|-1 fresh
    copies of B); the rest of the gadget is added freely.  The gadget base
    must carry no relations among its own points.
    """
    if C.signature != g.structure.signature or B.signature != C.signature:
        raise InputError("C, B and the gadget must share a signature")
    base = frozenset(int(v) for v in base_ids)
    for name, tups in g.structure.induced(g.x_set).instances.items():
        if tups:
            raise InputError("gadget base X must be relation-free")
    k = len(g.x_set)
    c_pool = sorted(set(C.vertices) - base)
    if c_vertex is None:
        if not c_pool:
            raise InputError("C has no vertex outside the base")
        c_vertex = c_pool[0]
    elif c_vertex not in c_pool:
        raise InputError(f"c_vertex {c_vertex} must lie in C outside the base")
    b_pool = sorted(set(B.vertices) - base)
    if u0_vertex is None:
        u0_vertex = b_pool[0] if b_pool else None
    elif u0_vertex not in b_pool:
        raise InputError(f"u0_vertex {u0_vertex} must lie in B outside the base")

    next_id = max(list(C.vertices) + list(B.vertices) + [-1]) + 1
    factors = [C]
    copy_blocks = []
    x_points = [c_vertex]
    if u0_vertex is not None:
        for _ in range(k - 1):
            mapping = {}
            for v in B.vertices:
                if v in base:
                    mapping[v] = v
                else:
                    mapping[v] = next_id
                    next_id += 1
            copy = B.relabel(mapping)
            factors.append(copy)
            copy_blocks.append(frozenset(copy.vertices))
            x_points.append(mapping[u0_vertex])
        if len(set(x_points)) != k:
            raise InputError(f"could not identify {k} distinct x-points")
    # with empty amalgamation arms only the distinguished point is identified;
    # the rest of the gadget base stays fresh
    Z = free_amalgam(base, *factors)

    gx = sorted(g.x_set)
    gmap = {}
    new_points = []
    for i, xv in enumerate(gx):
        if i < len(x_points):
            gmap[xv] = x_points[i]
        else:
            gmap[xv] = next_id
            new_points.append(next_id)
            next_id += 1
    for v in g.structure.vertices:
        if v not in g.x_set:
            gmap[v] = next_id
            new_points.append(next_id)
            next_id += 1
    glued = g.structure.relabel(gmap)
    verts = set(Z.vertices) | set(glued.vertices)
    inst = {name: list(tups) for name, tups in Z.instances.items()}
    for name, tups in glued.instances.items():
        inst.setdefault(name, []).extend(tups)
    E = FiniteStructure(Z.signature, verts, inst)
    return TowerAmalgam(
        E,
        frozenset(C.vertices),
        tuple(copy_blocks),
        tuple(x_points),
        frozenset(new_points),
    )


# -- fan join ("ex511") ------------------------------------------------------------------


@dataclass(frozen=True)
class FanJoinResult:
    structure: FiniteStructure  # E: fan of copies joined by one new relation
    base: frozenset[int]  # A
    copy_blocks: tuple[frozenset[int], ...]  # B_i images, each containing A
    joined_vertex: int  # c
    membership: MembershipResult  # E in Cf
    copies_d_closed: tuple[bool, ...]
    base_with_join_d_closed: bool
    log_bound_checked: int  # subsets against the exact fan growth bound
    log_bound_ok: bool
    probe: "FanProbeResult"


@dataclass(frozen=True)
class FanProbeResult:
    structure: FiniteStructure  # F: one new relation hung on a fresh point over A
    base: frozenset[int]
    anchor: int  # a
    spokes: tuple[int, ...]  # e_1 .. e_{r-1}
    spokes_perp_base: tuple[bool, ...]
    anchor_in_closure: bool


def _fan_growth_bound_ok(r: int, yb1: int, yb1_minus_a: int) -> bool:
    """Exact form of the growth inequality guarding the fan's class membership.

    Checks (|Y_B1| + (r-2)|Y_B1 \\ A|) / (|Y_B1| - 1) <= r - 1/2 and, once per
    arity, that r - 1/2 is below a rational lower bound of e^(r-2).
    """
    lhs = Fraction(yb1 + (r - 2) * yb1_minus_a, yb1 - 1)
    mid = Fraction(2 * r - 1, 2)
    e_low = Fraction(271_828_182, 100_000_000) ** (r - 2)
    return lhs <= mid and mid <= e_low


def build_fan_join(
    B: FiniteStructure,
    base_ids: Iterable[int],
    b_vertex: int,
    r: int,
    f: ControlFunction,
) -> FanJoinResult:
    """Join r-1 fresh copies of B over the base by one new r-ary relation.

    Signature must be (n=1, m=1, arity r >= 3).  Returns the structure plus
    the ambient-relative verification of its class membership and the
    d-closedness claims for the copies and for base+join.
    """
    sig = B.signature
    if sig.vertex_weight != 1 or any(rel.weight != 1 for rel in sig.relations):
        raise InputError("fan join needs unit weights (n = m = 1)")
    rel = sig.relations[0]
    if rel.arity != r or r < 3:
        raise InputError(f"fan join needs the signature arity to equal r >= 3, got {rel.arity}")
    base = frozenset(int(v) for v in base_ids)
    if b_vertex in base or b_vertex not in B._index:
        raise InputError("b_vertex must lie in B outside the base")
    next_id = max(B.vertices) + 1
    factors = []
    copy_blocks = []
    b_copies = []
    for _ in range(r - 1):
        mapping = {}
        for v in B.vertices:
            if v in base:
                mapping[v] = v
            else:
                mapping[v] = next_id
                next_id += 1
        copy = B.relabel(mapping)
        factors.append(copy)
        copy_blocks.append(frozenset(copy.vertices))
        b_copies.append(mapping[b_vertex])
    F = free_amalgam(base, *factors)
    c = next_id
    E = F.with_added([c], {rel.name: [tuple(sorted(b_copies + [c]))]})

    membership = in_Cf(E, f)
    copies_closed = tuple(is_d_closed(E, blk) for blk in copy_blocks)
    join_closed = is_d_closed(E, base | {c})

    checked = 0
    bound_ok = True
    everything = list(E.vertices)
    n_e = len(everything)
    must = set(b_copies) | {c}
    blocks_new = [blk - base for blk in copy_blocks]
    for mask in range(1 << n_e):
        Y = {everything[i] for i in _bits(mask)}
        if not must <= Y or not Y & base:
            continue
        sizes = [len(Y & blk) for blk in blocks_new]
        mx = max(sizes)
        if mx < 2:
            continue
        i1 = sizes.index(mx)
        yb1 = len(Y & copy_blocks[i1])
        checked += 1
        if not _fan_growth_bound_ok(r, yb1, mx):
            bound_ok = False
    probe = _build_fan_probe(B, base, r)
    return FanJoinResult(
        E,
        base,
        tuple(copy_blocks),
        c,
        membership,
        copies_closed,
        join_closed,
        checked,
        bound_ok,
        probe,
    )


def _build_fan_probe(B: FiniteStructure, base: frozenset[int], r: int) -> FanProbeResult:
    """One new relation on a fresh anchor over the base; spokes split off freely."""
    sig = B.signature
    rel = sig.relations[0]
    next_id = max(list(B.vertices) + [-1]) + 1
    a = next_id
    spokes = tuple(range(next_id + 1, next_id + r))
    C = B.induced(base).with_added([a], {})
    probeF = C.with_added(spokes, {rel.name: [tuple(sorted((a, *spokes)))]})
    spokes_perp = tuple(
        perp(probeF, [e], frozenset(), base) for e in spokes
    )
    anchor_in = a in cld(probeF, base | set(spokes))
    return FanProbeResult(probeF, base, a, spokes, spokes_perp, anchor_in)


# -- double cycle ("ex512") ---------------------------------------------------------------


@dataclass(frozen=True)
class DoubleCycle:
    structure: FiniteStructure  # CD
    c_vertices: tuple[int, ...]
    d_vertices: tuple[int, ...]
    s: int
    step: int


def build_double_cycle(s: int, step: int) -> DoubleCycle:
    """2s-cycle on C and D vertices plus a single chord s-cycle on D.

    Needs gcd(step, s) = 1 and 6 <= step < s/12, which forces girth >= 6.
    """
    if math.gcd(step, s) != 1:
        raise InputError(f"step {step} must be coprime to s={s}")
    if not (6 <= step and 12 * step < s):
        raise InputError(f"need 6 <= step < s/12, got step={step}, s={s}")
    cs = tuple(range(s))
    ds = tuple(range(s, 2 * s))
    edges = []
    for i in range(s):
        edges.append((cs[i], ds[i]))
        edges.append((ds[i], cs[(i + 1) % s]))
        edges.append((ds[i], ds[(i + step) % s] if i != (i + step) % s else None))
    edges = [(a, b) for a, b in edges if b is not None]
    return DoubleCycle(graph(edges, n=2, m=1), cs, ds, s, step)


@dataclass(frozen=True)
class SampledInequality:
    samples: int
    distinct: int
    violations: tuple[tuple[int, ...], ...]
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def sample_closed_connected_subsets(
    dc: DoubleCycle,
    count: int = 1000,
    max_size: int = 18,
    seed: int = 0,
    max_seed_size: int = 5,
) -> SampledInequality:
    """Seeded d-closed connected samples; checks 2*delta(X) >= |X| + 3 exactly."""
    S = dc.structure
    rng = random.Random(seed)
    adj = S.adjacency()
    verts = list(S.vertices)
    full = frozenset(verts)
    violations = []
    seen = set()
    accepted = 0
    skipped = 0
    attempts = 0
    while accepted < count:
        attempts += 1
        if attempts > 80 * count:
            raise InputError("sampling could not reach the requested count")
        size = rng.randint(1, max_seed_size)
        seed_set = {rng.choice(verts)}
        while len(seed_set) < size:
            frontier = sorted(set().union(*(adj[v] for v in seed_set)) - seed_set)
            if not frontier:
                break
            seed_set.add(rng.choice(frontier))
        X = cld(S, seed_set)
        if X == full or len(X) > max_size or not _connected_in(adj, X):
            skipped += 1
            continue
        accepted += 1
        seen.add(X)
        if 2 * delta_mask(S, S.mask_of(X)) < len(X) + 3:
            violations.append(tuple(sorted(X)))
    return SampledInequality(accepted, len(seen), tuple(violations), skipped)


def sample_c_closures(
    dc: DoubleCycle,
    count: int = 300,
    seed: int = 1,
    max_seed_size: int = 6,
) -> SampledInequality:
    """Closures of seeds inside C; checks |closure| <= 4*|seed| - 3."""
    S = dc.structure
    rng = random.Random(seed)
    violations = []
    seen = set()
    for _ in range(count):
        size = rng.randint(1, max_seed_size)
        seed_set = frozenset(rng.sample(list(dc.c_vertices), size))
        X = cld(S, seed_set)
        seen.add(X)
        if len(X) > 4 * len(seed_set) - 3:
            violations.append(tuple(sorted(seed_set)))
    return SampledInequality(count, len(seen), tuple(violations))


def _connected_in(adj: dict[int, set[int]], X: frozenset[int]) -> bool:
    if not X:
        return True
    queue = [next(iter(X))]
    seen = {queue[0]}
    for u in queue:
        for w in adj[u]:
            if w in X and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen == X


@dataclass(frozen=True)
class CycleFanResult:
    structure: FiniteStructure  # E = B-copies + CD with matching edges
    base: frozenset[int]  # A
    copy_blocks: tuple[frozenset[int], ...]
    b_copies: tuple[int, ...]
    dc: DoubleCycle
    delta_e: int
    f_at_size: Fraction
    delta_bound_ok: bool
    smallest_valid_s: Optional[int]
    d_samples_closed: tuple[bool, ...]  # base + single D vertex d-closed in E
    copies_sampled_closed: tuple[bool, ...]
    b_closure_is_all: bool


def build_cycle_fan(
    dc: DoubleCycle,
    f: ControlFunction,
    Bp: FiniteStructure | None = None,
    base_ids: Iterable[int] = (),
    b_vertex: int | None = None,
    check_count: int = 3,
    seed: int = 0,
) -> CycleFanResult:
    """Hang one copy of Bp over the base on every C vertex of the double cycle.

    Defaults to the minimal block: empty base, Bp a single fresh vertex.
    d-closedness claims are verified on the full structure via the flow
    engine, on ``check_count`` seeded positions.
    """
    S = dc.structure
    s = dc.s
    base = frozenset(int(v) for v in base_ids)
    next_id = max(S.vertices) + 1
    if Bp is None:
        if base or b_vertex is not None:
            raise InputError("default block takes no base and no b_vertex")
        Bp = graph([], vertices=[next_id], n=2, m=1)
        b_vertex = next_id
        next_id += 1
    else:
        if Bp.signature != S.signature:
            raise InputError("block must share the double cycle's signature")
        if b_vertex is None or b_vertex in base or b_vertex not in Bp._index:
            raise InputError("b_vertex must lie in the block outside the base")
        if set(Bp.vertices) & set(S.vertices):
            raise InputError("block ids must be disjoint from the double cycle")
        next_id = max(next_id, max(Bp.vertices) + 1)

    copy_blocks = []
    b_copies = []
    factors = []
    for _ in range(s):
        mapping = {}
        for v in Bp.vertices:
            if v in base:
                mapping[v] = v
            else:
                mapping[v] = next_id
                next_id += 1
        copy = Bp.relabel(mapping)
        factors.append(copy)
        copy_blocks.append(frozenset(copy.vertices))
        b_copies.append(mapping[b_vertex])
    Bpart = free_amalgam(base, *factors)
    verts = set(Bpart.vertices) | set(S.vertices)
    inst = {name: list(tups) for name, tups in Bpart.instances.items()}
    for name, tups in S.instances.items():
        inst.setdefault(name, []).extend(tups)
    rel = S.signature.relations[0].name
    for i in range(s):
        inst[rel].append((b_copies[i], dc.c_vertices[i]))
    E = FiniteStructure(S.signature, verts, inst)

    delta_e = delta_mask(E, E.full_mask())
    f_at = f(len(E.vertices))
    bound_ok = Fraction(delta_e) >= f_at

    base_delta = delta_mask(E, E.mask_of(base))
    per_copy = delta_rel(Bp, set(Bp.vertices) - base, base)
    block_size = len(Bp.vertices) - len(base)
    smallest = None
    t = 73
    while t <= 12 * s + 1200:
        if math.gcd(6, t) == 1 and 72 < t:
            dlt = base_delta + t * per_copy
            size = len(base) + t * (block_size + 2)
            if Fraction(dlt) >= f(size):
                smallest = t
                break
        t += 1

    rng = random.Random(seed)
    d_choices = rng.sample(list(dc.d_vertices), min(check_count, s))
    d_closed = tuple(is_d_closed(E, base | {e}) for e in d_choices)
    copy_choices = rng.sample(range(s), min(check_count, s))
    copies_closed = tuple(is_d_closed(E, copy_blocks[i]) for i in copy_choices)
    ball = set(base)
    for blk in copy_blocks:
        ball |= blk
    b_closure_all = cld(E, ball) == frozenset(E.vertices)
    return CycleFanResult(
        E,
        base,
        tuple(copy_blocks),
        tuple(b_copies),
        dc,
        delta_e,
        f_at,
        bound_ok,
        smallest,
        d_closed,
        copies_closed,
        b_closure_all,
    )
