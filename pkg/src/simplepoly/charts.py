"""Chart catalog for double points.

A double point is locally the cone over the 1-skeleton of a tetrahedron:
four triple-edge germs (ports 0..3) and six region germs, one for every
unordered pair of ports.  Charts are plain data so that a transcription
fix never touches algorithm code.

Conventions used by the tables:

* ``corner_incidence`` of a port ``p`` maps each slot ``c`` to the port
  ``q`` whose germ shares the region germ leaving ``p`` through ``c``.
* Through transitions are *canonical*: walking from port ``p`` to port
  ``q``, the prong heading for a third port ``r`` continues as the prong
  heading for ``r``, and the prong joining ``p`` to ``q`` turns into the
  prong joining ``q`` back to ``p``.  Corner passages use the same rule.
* The thickening block is a single tetrahedron whose face ``j`` (opposite
  corner ``j``) caps port ``j``.  ``OUTWARD_FACE`` lists the corners of
  each face in the order giving the outward normal for a positively
  oriented tetrahedron ``(0, 1, 2, 3)``.
"""
from __future__ import annotations

from dataclasses import dataclass

PORTS = (0, 1, 2, 3)

OUTWARD_FACE = {
    0: (1, 2, 3),
    1: (0, 3, 2),
    2: (0, 1, 3),
    3: (0, 2, 1),
}


@dataclass(frozen=True)
class Chart:
    name: str
    description: str
    port_count: int
    region_germs: tuple[tuple[int, int], ...]
    through_rule: str
    thickening_block: str


CHARTS = {
    "X": Chart(
        name="X",
        description="transverse crossing of two triple arcs (cone over K4)",
        port_count=4,
        region_germs=((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
        through_rule="canonical",
        thickening_block="tetrahedron",
    ),
}


def get_chart(chart_id):
    return CHARTS.get(chart_id)


def canonical_transition(phi_p, phi_q, p, q):
    """Slot bijection for passing from port ``p`` to port ``q``.

    ``phi_p[c]`` is the port reached from ``p`` through slot ``c``.
    Returns a tuple ``t`` with ``t[c]`` the slot at ``q``.
    """

    def swap(g):
        if g == p:
            return q
        if g == q:
            return p
        return g

    return tuple(phi_q.index(swap(phi_p[c])) for c in range(3))
