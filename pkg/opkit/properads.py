"""Connected permutations and vertical composition of bioperations.

A lower layer of operations with output profile (m1..mp) is wired to an
upper layer with input profile (n1..nq) by a permutation s of the K = Σmi
= Σnj middle wires: output wire k of the lower layer feeds input wire s(k)
of the upper layer. The wiring is admissible when the graph on the p + q
blocks, with an edge for every wire, is connected. With no wires at all the
graph is just the p + q isolated blocks.

Only the symmetric variant is covered here.
"""

import logging
from itertools import permutations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from opkit import conf
from opkit.diagrams import FiniteFunction, Variant, elementary_factors
from opkit.errors import CapExceeded, MalformedInput, VariantError
from opkit.fincat import CheckReport, QuotientSet, UnionFind, compare_quotients, quotient, render, sort_key

logger = logging.getLogger(__name__)

Profile = Tuple[int, ...]


def profile(values: Iterable) -> Profile:
    """Parse "2,1" or a sequence into a profile."""
    if isinstance(values, str):
        values = [v for v in values.replace(' ', '').split(',') if v != '']
    try:
        parsed = tuple(int(v) for v in values)
    except ValueError:
        raise MalformedInput(f"bad profile {values!r}")
    if any(v < 0 for v in parsed):
        raise MalformedInput(f"profile entries must be natural numbers: {parsed}")
    return parsed


def _owners(ps: Profile) -> List[int]:
    return [i for i, size in enumerate(ps) for _ in range(size)]


class ConnectedPerm:
    """A connected wiring s between the two profiles."""

    __slots__ = ('ms', 'ns', 'perm')

    def __init__(self, ms: Profile, ns: Profile, perm: FiniteFunction):
        self.ms, self.ns, self.perm = tuple(ms), tuple(ns), perm

    def __eq__(self, other):
        return isinstance(other, ConnectedPerm) and (self.ms, self.ns, self.perm) == (other.ms, other.ns, other.perm)

    def __hash__(self):
        return hash((self.ms, self.ns, self.perm.table))

    def __repr__(self):
        return f"ConnectedPerm({self.line()})"

    def sort_key(self):
        return (self.ms, self.ns, self.perm.table)

    def line(self) -> str:
        return ' '.join(str(x) for x in self.perm.table) or '()'

    def inverse(self) -> 'ConnectedPerm':
        return ConnectedPerm(self.ns, self.ms, self.perm.inverse())


def _check(ms: Profile, ns: Profile) -> int:
    total = sum(ms)
    if total != sum(ns):
        return -1
    if total > 12:
        raise CapExceeded(f"permutations of {total} wires", total, 12)
    return total


def connected_perms(ms: Sequence[int], ns: Sequence[int]) -> Tuple[ConnectedPerm, ...]:
    """All connected wirings, by depth-first assignment with pruning.

    A branch is cut as soon as a finished top block closes off a component
    (all its wires assigned, all bottom wires of the component used) that
    does not contain every block.
    """
    ms, ns = profile(ms), profile(ns)
    total = _check(ms, ns)
    if total < 0:
        return ()
    p, q = len(ms), len(ns)
    if total == 0:
        # nothing but isolated blocks
        return (ConnectedPerm(ms, ns, FiniteFunction.identity(0)),) if p + q <= 1 else ()
    if 0 in ms or 0 in ns:
        return ()
    top, bottom = _owners(ms), _owners(ns)
    ends = {sum(ms[:i + 1]) - 1 for i in range(p)}
    found: List[ConnectedPerm] = []
    table: List[int] = []
    used = [False] * total

    def components() -> UnionFind:
        uf = UnionFind(p + q)
        for k, t in enumerate(table):
            uf.union(top[k], p + bottom[t])
        return uf

    def closed_off() -> bool:
        uf = components()
        roots = {uf.find(v) for v in range(p + q)}
        if len(roots) == 1:
            return False
        open_roots = {uf.find(top[k]) for k in range(len(table), total)}
        open_roots |= {uf.find(p + bottom[t]) for t in range(total) if not used[t]}
        return bool(roots - open_roots)

    def extend(k: int):
        if k == total:
            uf = components()
            if len({uf.find(v) for v in range(p + q)}) <= 1:
                found.append(ConnectedPerm(ms, ns, FiniteFunction(total, total, tuple(table))))
            return
        for t in range(total):
            if used[t]:
                continue
            used[t] = True
            table.append(t)
            if k not in ends or not closed_off():
                extend(k + 1)
            table.pop()
            used[t] = False

    extend(0)
    logger.debug("connected wirings %s -> %s: %d", ms, ns, len(found))
    return tuple(sorted(found, key=lambda c: c.sort_key()))


def wiring_graph(ms: Profile, ns: Profile, perm: FiniteFunction) -> nx.Graph:
    """Blocks, top wires, bottom wires and the matching, as an undirected graph."""
    g = nx.Graph()
    g.add_nodes_from(('top', i) for i in range(len(ms)))
    g.add_nodes_from(('bottom', j) for j in range(len(ns)))
    for k, owner in enumerate(_owners(ms)):
        g.add_edge(('top', owner), ('out', k))
    for k, owner in enumerate(_owners(ns)):
        g.add_edge(('in', k), ('bottom', owner))
    for k in range(perm.dom):
        g.add_edge(('out', k), ('in', perm(k)))
    return g


def _connected(g: nx.Graph) -> bool:
    if g.number_of_nodes() == 0:
        return True
    start = next(iter(g.nodes))
    return len(nx.descendants(g, start)) + 1 == g.number_of_nodes()


def connected_perms_oracle(ms: Sequence[int], ns: Sequence[int]) -> Tuple[ConnectedPerm, ...]:
    """Every permutation, kept when breadth-first search reaches the whole graph."""
    ms, ns = profile(ms), profile(ns)
    total = _check(ms, ns)
    if total < 0:
        return ()
    found = []
    for table in permutations(range(total)):
        perm = FiniteFunction(total, total, table)
        if _connected(wiring_graph(ms, ns, perm)):
            found.append(ConnectedPerm(ms, ns, perm))
    return tuple(sorted(found, key=lambda c: c.sort_key()))


def compositions(total: int) -> List[Profile]:
    """Profiles with positive entries summing to `total`."""
    if total == 0:
        return [()]
    found = []
    for first in range(1, total + 1):
        found.extend((first,) + rest for rest in compositions(total - first))
    return found


def profile_pairs(max_total: int) -> List[Tuple[Profile, Profile]]:
    return [(ms, ns) for k in range(max_total + 1) for ms in compositions(k) for ns in compositions(k)]


def _compare_with_oracle(ms: Profile, ns: Profile, report: CheckReport) -> bool:
    report.instances += 1
    fast, slow = connected_perms(ms, ns), connected_perms_oracle(ms, ns)
    if fast != slow:
        report.witness('oracle-mismatch', ms=ms, ns=ns, enumerated=len(fast), oracle=len(slow))
        return False
    return True


def check_oracle(max_total: int = 5) -> CheckReport:
    report = CheckReport(f"connected_perms_oracle[<={max_total}]")
    for ms, ns in profile_pairs(max_total):
        if not _compare_with_oracle(ms, ns, report):
            break
    return _finish(report)


def check_oracle_pair(ms: Sequence[int], ns: Sequence[int]) -> CheckReport:
    ms, ns = profile(ms), profile(ns)
    report = CheckReport(f"connected_perms_oracle[{ms};{ns}]")
    _compare_with_oracle(ms, ns, report)
    return _finish(report)


def check_inverse_symmetry(max_total: int = 5) -> CheckReport:
    """s -> s^-1 is a bijection between the wirings of (ms, ns) and of (ns, ms)."""
    report = CheckReport(f"inverse_symmetry[<={max_total}]")
    for ms, ns in profile_pairs(max_total):
        report.instances += 1
        flipped = {c.inverse() for c in connected_perms(ms, ns)}
        if flipped != set(connected_perms(ns, ms)):
            report.witness('not-symmetric', ms=ms, ns=ns)
            break
    return _finish(report)


# Bioperations

class BioperationCollection:
    """Finite sets P(a, b) of operations with a inputs and b outputs.

    `act_in(σ, x)` and `act_out(σ, x)` are left actions of the symmetric
    groups on the inputs and on the outputs. Operations are relabelled, not
    reordered: after `act_out(σ, x)` the old output k is output σ(k).
    """

    def __init__(self, sets: Dict[Tuple[int, int], Iterable], act_in: Optional[Callable] = None,
                 act_out: Optional[Callable] = None, name: str = ''):
        self.sets = {(int(a), int(b)): tuple(sorted(v, key=sort_key)) for (a, b), v in sets.items()}
        self._act_in = act_in
        self._act_out = act_out
        self.name = name or 'P'

    def __repr__(self):
        return f"BioperationCollection({self.name}, {len(self.sets)} arities)"

    def at(self, a: int, b: int) -> Tuple:
        return self.sets.get((a, b), ())

    def act_in(self, perm: FiniteFunction, x):
        return x if self._act_in is None or perm.is_identity() else self._act_in(perm, x)

    def act_out(self, perm: FiniteFunction, x):
        return x if self._act_out is None or perm.is_identity() else self._act_out(perm, x)

    def with_outputs(self, b: int) -> List[Tuple[int, object]]:
        return [(a, x) for (a, bb), xs in sorted(self.sets.items()) if bb == b for x in xs]

    def with_inputs(self, a: int) -> List[Tuple[int, object]]:
        return [(b, x) for (aa, b), xs in sorted(self.sets.items()) if aa == a for x in xs]

    @classmethod
    def from_data(cls, sets: Dict, inputs: Optional[Dict] = None, outputs: Optional[Dict] = None,
                  name: str = '') -> 'BioperationCollection':
        """Sets keyed by "a,b"; actions keyed by permutation descriptors ("2>2:1,0").

        Missing actions are trivial; permutations not listed act through
        their transposition factors.
        """
        parsed = {}
        for key, values in sets.items():
            a, b = profile(key) if isinstance(key, str) else key
            parsed[(a, b)] = values

        def table_action(tables):
            if not tables:
                return None
            entries = {FiniteFunction.from_descriptor(k): dict(v) for k, v in tables.items()}

            def act(perm, x):
                if perm in entries:
                    return entries[perm].get(x, x)
                for layer in reversed(elementary_factors(perm)):
                    x = entries.get(layer.function, {}).get(x, x)
                return x

            return act

        return cls(parsed, table_action(inputs), table_action(outputs), name=name)


def identity_bioperation(variant='sigma') -> BioperationCollection:
    """The single identity operation with one input and one output."""
    variant = Variant.parse(variant)
    if variant.combinators != frozenset({'sigma'}):
        raise VariantError(f"connected composition is provided for {{σ}} only, not {variant.label}")
    return BioperationCollection({(1, 1): ('id',)}, name='Id')


def _block_perm(ps: Profile, i: int, sigma: FiniteFunction) -> FiniteFunction:
    """id ⊕ σ ⊕ id acting on the wires of block i."""
    offset = sum(ps[:i])
    table = list(range(sum(ps)))
    for k in range(ps[i]):
        table[offset + k] = offset + sigma(k)
    return FiniteFunction(len(table), len(table), tuple(table))


def _transpositions(n: int) -> List[FiniteFunction]:
    found = []
    for i in range(n - 1):
        table = list(range(n))
        table[i], table[i + 1] = i + 1, i
        found.append(FiniteFunction(n, n, tuple(table)))
    return found


def properad_vcompose(psi: BioperationCollection, phi: BioperationCollection, ms: Sequence[int],
                      ns: Sequence[int]) -> QuotientSet:
    """Φ-operations with outputs ms below, Ψ-operations with inputs ns above.

    Raw elements are (s, φ⃗, ψ⃗) with φ_i = (inputs, x) and ψ_j = (outputs, y).
    Relabelling the middle wires of one operation and moving the wiring
    along with it gives the same composite.
    """
    ms, ns = profile(ms), profile(ns)
    if sum(ms) != sum(ns):
        raise MalformedInput(f"profiles {ms} and {ns} carry different numbers of wires")
    wirings = connected_perms(ms, ns)
    lowers = _choices([phi.with_outputs(m) for m in ms])
    uppers = _choices([psi.with_inputs(n) for n in ns])
    size = len(wirings) * len(lowers) * len(uppers)
    if size > conf.cap():
        raise CapExceeded(f"composite along {ms} -> {ns}", size, conf.cap())
    raw = [(c.perm, low, up) for c in wirings for low in lowers for up in uppers]

    def relations():
        for s, low, up in raw:
            for i, m in enumerate(ms):
                for sigma in _transpositions(m):
                    moved = tuple((a, phi.act_out(sigma, x)) if j == i else (a, x) for j, (a, x) in enumerate(low))
                    # output sigma(k) now carries what output k did
                    yield (s, low, up), (s.compose(_block_perm(ms, i, sigma).inverse()), moved, up)
            for j, n in enumerate(ns):
                for tau in _transpositions(n):
                    moved = tuple((b, psi.act_in(tau, y)) if r == j else (b, y) for r, (b, y) in enumerate(up))
                    yield (s, low, up), (_block_perm(ns, j, tau).compose(s), low, moved)

    return quotient(raw, relations(), what=f"{psi.name}o{phi.name} along {ms}->{ns}")


def _choices(pools: Sequence[Sequence]) -> List[Tuple]:
    found: List[Tuple] = [()]
    for pool in pools:
        found = [prefix + (item,) for prefix in found for item in pool]
    return found


def compose_collections(psi: BioperationCollection, phi: BioperationCollection,
                        max_arity: int = 3) -> Dict[Tuple[int, int], Tuple]:
    """All composites with at most `max_arity` middle wires, keyed by outer arity.

    The empty wiring of no operations is not an operation and is left out.
    """
    found: Dict[Tuple[int, int], List] = {}
    for ms, ns in profile_pairs(max_arity):
        if not ms and not ns:
            continue
        q = properad_vcompose(psi, phi, ms, ns)
        for cls in q.classes:
            _, low, up = cls
            key = (sum(a for a, _ in low), sum(b for b, _ in up))
            found.setdefault(key, []).append((ms, ns, cls))
    return {k: tuple(v) for k, v in sorted(found.items())}


def check_unit_laws(coll: BioperationCollection, max_arity: int = 3) -> CheckReport:
    """Id∘P ≅ P and P∘Id ≅ P, one middle arity at a time."""
    report = CheckReport(f"properad_units[{coll.name}]")
    unit = identity_bioperation()
    for k in range(1, max_arity + 1):
        ones = (1,) * k
        above = properad_vcompose(unit, coll, (k,), ones)
        target = QuotientSet.discrete(coll.with_outputs(k))
        compare_quotients(above, target, lambda raw: (raw[1][0][0], coll.act_out(raw[0], raw[1][0][1])), report,
                          context=f"Id o P at {k} outputs")
        below = properad_vcompose(coll, unit, ones, (k,))
        target = QuotientSet.discrete(coll.with_inputs(k))
        compare_quotients(below, target,
                          lambda raw: (raw[2][0][0], coll.act_in(raw[0].inverse(), raw[2][0][1])), report,
                          context=f"P o Id at {k} inputs")
        if not report.passed:
            break
    return _finish(report)


def _finish(report: CheckReport) -> CheckReport:
    if report.passed:
        logger.debug("%s passed on %d instances", report.name, report.instances)
    else:
        logger.warning("%s failed: %s", report.name, render(report.witnesses[0]))
    return report
