"""Evaluation of closed planar trivalent networks.

A network is a rotation system: every vertex lists its three half-edges in
counter-clockwise order. A half-edge is ``(edge_id, end)`` with ``end = 0`` at
the tail of the edge and ``end = 1`` at its head; the edge label flows from
tail to head. Vertices use the isotopy normalization, so that

* a closed loop ``a`` is worth ``d_a``;
* a bigon ``a, b`` on a line ``c`` is worth ``sqrt(d_a d_b / d_c)`` times the line;
* an F-move across an internal edge uses ``F^{abc}_d[e, f]`` unchanged.

Rotating a vertex is treated as free, which is exact for gauges whose
tetrahedral symbols have full tetrahedral symmetry. ``first_edge`` lets a
caller force the first F-move onto a chosen edge to test that assumption.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .braided import CategoryData
from .errors import InadmissibleVertex, NonPlanar, NonTermination, StructuralError

__all__ = ["Edge", "PlanarNetwork", "eval_planar_network", "loop_network", "theta_network", "tetrahedron_network"]

HalfEdge = tuple[int, int]


@dataclass
class Edge:
    label: int
    tail: int
    head: int


class _Zero(Exception):
    """The network vanishes by charge conservation."""


class PlanarNetwork:
    def __init__(
        self,
        edges: dict[int, Edge] | Iterable[tuple[int, int, int, int]],
        rotation: dict[int, tuple[HalfEdge, ...]],
        loops: Iterable[int] = (),
    ):
        if isinstance(edges, dict):
            self.edges = {k: Edge(e.label, e.tail, e.head) for k, e in edges.items()}
        else:
            self.edges = {eid: Edge(lab, t, h) for eid, lab, t, h in edges}
        self.rotation = {v: tuple(hs) for v, hs in rotation.items()}
        self.loops = list(loops)

    def copy(self) -> "PlanarNetwork":
        return PlanarNetwork(self.edges, self.rotation, self.loops)

    def endpoint(self, h: HalfEdge) -> int:
        e = self.edges[h[0]]
        return e.head if h[1] else e.tail

    def out_label(self, h: HalfEdge, dual) -> int:
        lab = self.edges[h[0]].label
        return dual[lab] if h[1] else lab

    def check_structure(self) -> None:
        seen = set()
        for v, hs in self.rotation.items():
            if len(hs) != 3:
                raise InadmissibleVertex(f"vertex {v} has valence {len(hs)}")
            for h in hs:
                if h in seen or self.endpoint(h) != v:
                    raise StructuralError(f"half-edge {h} is attached inconsistently")
                seen.add(h)
        if len(seen) != 2 * len(self.edges):
            raise StructuralError("some edge ends are not attached to any vertex")

    def check_planar(self) -> None:
        """Euler characteristic of the rotation system must be 2 per component."""
        succ = {}
        for v, hs in self.rotation.items():
            for i, h in enumerate(hs):
                succ[h] = hs[(i + 1) % len(hs)]
        faces = 0
        unvisited = set(succ)
        while unvisited:
            start = unvisited.pop()
            h = start
            while True:
                twin = (h[0], 1 - h[1])
                h = succ[twin]
                if h == start:
                    break
                unvisited.discard(h)
            faces += 1
        parent = {v: v for v in self.rotation}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges.values():
            parent[find(e.tail)] = find(e.head)
        components = len({find(v) for v in self.rotation})
        if len(self.rotation) - len(self.edges) + faces != 2 * components:
            raise NonPlanar("rotation system does not embed in the sphere")


def loop_network(a: int) -> PlanarNetwork:
    return PlanarNetwork({}, {}, [a])


def theta_network(a: int, b: int, c: int) -> PlanarNetwork:
    """Two vertices joined by edges a, b, c all running from vertex 0 to vertex 1."""
    edges = [(0, a, 0, 1), (1, b, 0, 1), (2, c, 0, 1)]
    rotation = {0: ((0, 0), (1, 0), (2, 0)), 1: ((2, 1), (1, 1), (0, 1))}
    return PlanarNetwork(edges, rotation)


def tetrahedron_network(e01: int, e02: int, e03: int, e12: int, e13: int, e23: int) -> PlanarNetwork:
    """Complete graph on four vertices, edge ``eij`` running from i to j.

    Vertex 0 sits at the centre of the triangle 1-2-3 (counter-clockwise).
    """
    edges = [(0, e01, 0, 1), (1, e02, 0, 2), (2, e03, 0, 3), (3, e12, 1, 2), (4, e13, 1, 3), (5, e23, 2, 3)]
    rotation = {
        0: ((0, 0), (1, 0), (2, 0)),
        1: ((3, 0), (0, 1), (4, 0)),
        2: ((5, 0), (1, 1), (3, 1)),
        3: ((4, 1), (2, 1), (5, 1)),
    }
    return PlanarNetwork(edges, rotation)


class _Evaluator:
    def __init__(self, data: CategoryData, max_depth: int):
        self.data = data
        self.dual = data.ring.dual
        self.d = data.ring.d
        self.N = data.ring.N
        self.max_depth = max_depth
        self.f_moves = 0

    def admissible(self, net: PlanarNetwork, v: int) -> bool:
        a, b, c = (net.out_label(h, self.dual) for h in net.rotation[v])
        return bool(self.N[a, b, self.dual[c]])

    def evaluate(self, net: PlanarNetwork, depth: int = 0, first_edge: int | None = None) -> complex:
        if depth > self.max_depth:
            raise NonTermination(f"F-move recursion exceeded depth {self.max_depth}")
        net = net.copy()
        try:
            factor = self._simplify(net)
        except _Zero:
            return 0j
        if not net.rotation:
            return factor
        eid, legs = self._choose_edge(net, first_edge)
        self.f_moves += 1
        total = 0j
        for coeff, new in self._f_move(net, eid, legs):
            if coeff != 0:
                total += coeff * self.evaluate(new, depth + 1)
        return factor * total

    def _simplify(self, net: PlanarNetwork) -> complex:
        factor = 1.0 + 0j
        changed = True
        while changed:
            changed = False
            for eid in sorted(net.edges):
                if eid in net.edges and net.edges[eid].label == 0:
                    self._remove_edge(net, eid)
                    changed = True
            for v in sorted(net.rotation):
                if v not in net.rotation:
                    continue
                hs = net.rotation[v]
                for i, h in enumerate(hs):
                    if (h[0], 1 - h[1]) in hs:
                        # tadpole: the remaining leg must carry the unit
                        other = hs[3 - i - hs.index((h[0], 1 - h[1]))]
                        if net.out_label(other, self.dual) != 0:
                            raise _Zero
            for v in sorted(net.rotation):
                if v not in net.rotation:
                    continue
                found = self._find_bigon(net, v)
                if found:
                    factor *= self._collapse_bigon(net, *found)
                    changed = True
                    break
        while net.loops:
            factor *= self.d[net.loops.pop()]
        return factor

    def _remove_edge(self, net: PlanarNetwork, eid: int) -> None:
        e = net.edges.pop(eid)
        touched = []
        for end, v in ((0, e.tail), (1, e.head)):
            net.rotation[v] = tuple(h for h in net.rotation[v] if h != (eid, end))
            touched.append(v)
        for v in touched:
            self._smooth(net, v)

    def _smooth(self, net: PlanarNetwork, v: int) -> None:
        """Remove a vertex of valence below three, joining through it."""
        if v not in net.rotation:
            return
        hs = net.rotation[v]
        if len(hs) == 3:
            return
        if len(hs) == 0:
            del net.rotation[v]
            return
        if len(hs) == 1:
            (h,) = hs
            if net.out_label(h, self.dual) != 0:
                raise _Zero
            del net.rotation[v]
            e = net.edges.pop(h[0])
            w = e.head if h[1] == 0 else e.tail
            if w != v:
                net.rotation[w] = tuple(x for x in net.rotation[w] if x[0] != h[0])
                self._smooth(net, w)
            return
        h1, h2 = hs
        o1, o2 = net.out_label(h1, self.dual), net.out_label(h2, self.dual)
        if o1 != self.dual[o2]:
            raise _Zero
        del net.rotation[v]
        if h1[0] == h2[0]:
            net.edges.pop(h1[0])
            net.loops.append(o1)
            return
        self._join(net, h1, h2)

    def _join(self, net: PlanarNetwork, h1: HalfEdge, h2: HalfEdge) -> None:
        """Fuse the edges of ``h1`` and ``h2`` (both at a vertex being deleted)."""
        far1 = (h1[0], 1 - h1[1])
        far2 = (h2[0], 1 - h2[1])
        p, q = net.endpoint(far1), net.endpoint(far2)
        label = net.out_label(far1, self.dual)
        new_id = max(net.edges) + 1
        net.edges.pop(h1[0])
        net.edges.pop(h2[0])
        net.edges[new_id] = Edge(label, p, q)
        net.rotation[p] = tuple((new_id, 0) if x == far1 else x for x in net.rotation[p])
        net.rotation[q] = tuple((new_id, 1) if x == far2 else x for x in net.rotation[q])

    def _find_bigon(self, net: PlanarNetwork, u: int):
        hs = net.rotation[u]
        for i in range(3):
            for j in range(i + 1, 3):
                hi, hj = hs[i], hs[j]
                if hi[0] == hj[0]:
                    continue
                vi = net.endpoint((hi[0], 1 - hi[1]))
                vj = net.endpoint((hj[0], 1 - hj[1]))
                if vi == vj and vi != u:
                    return u, vi, hi, hj, hs[3 - i - j]
        return None

    def _collapse_bigon(self, net, u, v, hi, hj, hu) -> complex:
        a = net.out_label(hi, self.dual)
        b = net.out_label(hj, self.dual)
        c = net.out_label(hu, self.dual)
        hv = next(h for h in net.rotation[v] if h[0] not in (hi[0], hj[0]))
        if net.out_label(hv, self.dual) != self.dual[c]:
            raise _Zero
        value = math.sqrt(self.d[a] * self.d[b] / self.d[c])
        for h in (hi, hj):
            net.edges.pop(h[0])
        del net.rotation[u]
        del net.rotation[v]
        if hu[0] == hv[0]:
            net.edges.pop(hu[0])
            net.loops.append(c)
        else:
            # hu and hv now act like the two legs of a deleted bivalent vertex
            far_u = (hu[0], 1 - hu[1])
            far_v = (hv[0], 1 - hv[1])
            p, q = net.endpoint(far_u), net.endpoint(far_v)
            label = net.out_label(far_u, self.dual)
            new_id = max(net.edges) + 1
            net.edges.pop(hu[0])
            net.edges.pop(hv[0])
            net.edges[new_id] = Edge(label, p, q)
            net.rotation[p] = tuple((new_id, 0) if x == far_u else x for x in net.rotation[p])
            net.rotation[q] = tuple((new_id, 1) if x == far_v else x for x in net.rotation[q])
        return value

    def _legs(self, net: PlanarNetwork, eid: int):
        e = net.edges[eid]
        ru, rv = net.rotation[e.tail], net.rotation[e.head]
        i, j = ru.index((eid, 0)), rv.index((eid, 1))
        w1, w2 = ru[(i + 1) % 3], ru[(i + 2) % 3]
        w3, w4 = rv[(j + 1) % 3], rv[(j + 2) % 3]
        return w1, w2, w3, w4

    def _choose_edge(self, net: PlanarNetwork, first_edge: int | None):
        candidates = []
        for eid in sorted(net.edges):
            e = net.edges[eid]
            if e.tail == e.head:
                continue
            w1, w2, w3, w4 = self._legs(net, eid)
            far = lambda h: net.endpoint((h[0], 1 - h[1]))  # noqa: E731
            makes_bigon = (w4[0] != w1[0] and far(w4) == far(w1)) or (w2[0] != w3[0] and far(w2) == far(w3))
            candidates.append((not makes_bigon, eid))
            if first_edge is not None and eid == first_edge:
                return eid, (w1, w2, w3, w4)
        if not candidates:
            raise NonTermination("no edge available for an F-move")
        eid = min(candidates)[1]
        return eid, self._legs(net, eid)

    def _f_move(self, net: PlanarNetwork, eid: int, legs):
        w1, w2, w3, w4 = legs
        e = net.edges[eid]
        u, v = e.tail, e.head
        dual = self.dual
        a = net.out_label(w4, dual)
        b = net.out_label(w3, dual)
        c = net.out_label(w2, dual)
        d = dual[net.out_label(w1, dual)]
        elab = e.label
        for f in self.data.ring.fuse(b, c):
            if not self.N[a, f, d]:
                continue
            coeff = self.data.F.get((a, b, c, d, elab, f))
            if coeff is None:
                continue
            new = net.copy()
            new.edges.pop(eid)
            # reuse u for {w4, w1} and v for {w2, w3}
            new.edges[eid] = Edge(f, u, v)
            for h, vert in ((w4, u), (w1, u), (w2, v), (w3, v)):
                old = new.edges[h[0]]
                if h[1] == 0:
                    new.edges[h[0]] = Edge(old.label, vert, old.head)
                else:
                    new.edges[h[0]] = Edge(old.label, old.tail, vert)
            new.rotation[u] = ((eid, 0), w4, w1)
            new.rotation[v] = ((eid, 1), w2, w3)
            yield coeff, new


def eval_planar_network(data: CategoryData, net: PlanarNetwork, first_edge: int | None = None) -> complex:
    """Scalar value of a closed planar trivalent network."""
    net.check_structure()
    net.check_planar()
    dual, N = data.ring.dual, data.ring.N
    for v, hs in net.rotation.items():
        a, b, c = (net.out_label(h, dual) for h in hs)
        if not N[a, b, dual[c]]:
            raise InadmissibleVertex(f"vertex {v} with outgoing labels {(a, b, c)} is not admissible")
    depth = max(1, len(net.edges)) ** 2
    return _Evaluator(data, depth).evaluate(net, first_edge=first_edge)


def count_f_moves(data: CategoryData, net: PlanarNetwork) -> int:
    ev = _Evaluator(data, max(1, len(net.edges)) ** 2)
    ev.evaluate(net)
    return ev.f_moves
