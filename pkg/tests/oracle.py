"""Independent reference implementations used by the tests.

Nothing here calls the package's enumeration or resonance code.  Paths come
from networkx on a position-labelled grid graph, node labels are recomputed
from the layout rules, and phases are checked in pi units with
``fractions.Fraction`` when the inputs are on a decimal grid.
"""

from __future__ import annotations

import math
from fractions import Fraction

import networkx as nx


def label(n, numbering, r, c):
    """Node id of cell (r, c), row 0 at the top."""
    if numbering == "row":
        return r * n + c + 1
    # column-major, counted upward from the bottom-left
    return c * n + (n - r)


def grid_graph(n, adjacency):
    g = nx.grid_2d_graph(n, n)
    if adjacency == "king":
        for r in range(n - 1):
            for c in range(n):
                if c + 1 < n:
                    g.add_edge((r, c), (r + 1, c + 1))
                if c - 1 >= 0:
                    g.add_edge((r, c), (r + 1, c - 1))
    return g


def simple_paths(n, adjacency, numbering, in_row, out_row):
    """Node-id tuples of all simple paths from input row to output row (1-based rows)."""
    g = grid_graph(n, adjacency)
    a, b = (in_row - 1, 0), (out_row - 1, n - 1)
    if a == b:
        return [(label(n, numbering, *a),)]
    return [tuple(label(n, numbering, r, c) for r, c in p) for p in nx.all_simple_paths(g, a, b)]


def pi_units(x):
    """Radians to an exact fraction of pi, snapped to 1e-9 pi."""
    return Fraction(round(x / math.pi * 10**9), 10**9)


def resonant_set(circuit):
    """{(input row, output row, node ids)} of every resonant path, computed from scratch."""
    mesh, el = circuit.mesh, circuit.electric
    n = mesh.n
    deltas = {node.id: pi_units(node.delta) for node in mesh.nodes}
    filters = {node.id: set(node.filter) for node in mesh.nodes}
    tol = Fraction(circuit.phase_tolerance / math.pi)
    found = set()
    for ip in el.ports:
        if ip.side != "input" or not ip.switch:
            continue
        for op in el.ports:
            if op.side != "output" or not op.switch:
                continue
            for ids in simple_paths(n, mesh.adjacency, mesh.numbering, ip.row, op.row):
                if not set.intersection(*(filters[i] for i in ids)):
                    continue
                if el.gain - op.attenuation < len(ids) + 1:
                    continue
                total = (sum(deltas[i] for i in ids) + pi_units(op.psi)) % 2
                if min(total, 2 - total) <= tol:
                    found.add((ip.row, op.row, ids))
    return found


def lattice_walks(n):
    """Count monotone right/up walks across an n x n cell grid by explicit recursion."""

    def walk(x, y):
        if x == n and y == n:
            return 1
        total = 0
        if x < n:
            total += walk(x + 1, y)
        if y < n:
            total += walk(x, y + 1)
        return total

    return walk(0, 0)


def factor_subset(n, primes):
    """Subset of primes whose product is n, by trial division, or None."""
    chosen = []
    for p in primes:
        if n % p == 0:
            n //= p
            chosen.append(p)
            if n % p == 0:
                return None
    return frozenset(chosen) if n == 1 else None
