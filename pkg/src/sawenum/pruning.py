"""Lower bounds on the steps still needed to finish a spanning walk.

A state can be discarded as soon as ``n_cur + n_add`` exceeds the truncation
order N, where ``n_cur`` is the minimum degree of the state's generating
function and ``n_add`` is an admissible (never over-estimating) lower bound on
the number of additional occupied edges.  ``n_add`` is the sum of three
independent bounds:

* connection cost: each prescribed arc from position i to j needs at least
  ``j - i`` vertical steps, plus ``2 * reach`` horizontal bypass steps, where
  ``reach`` is the number of columns the arc's path is forced away from the
  cut-line: one more than the largest reach among the arcs it directly
  encloses.  Siblings nested inside the same arc share one detour column, so
  the bypass charge depends on the nesting *height* of an arc's subtree, not
  on its depth (a depth-based ``2*l`` charge over-estimates for branching
  nesting patterns and is not admissible);
* border cost: rows still separating the occupied band from an untouched
  bottom/top border;
* extension cost: columns still needed to reach length L >= W, less the
  columns the connection detours already guarantee (an arc of reach R forces
  paths R columns past the cut-line, so charging those columns again would
  over-estimate).

A signature with no free edge has both walk end-points already placed, so
every future excursion starts and ends on the cut-line: border dips and
extension columns then cost two steps each instead of one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .signatures import EMPTY, FREE, LOWER, UPPER, Arc, Signature


@dataclass(frozen=True)
class PruneContext:
    """Geometry for the prune test.

    ``column`` is the index of the next column of vertices to be built, so a
    completion during that column ends a box of exactly ``column`` cells.
    ``n_max`` is the truncation order N (2*W_max + 1 for a standard run).
    """

    width: int
    column: int
    n_max: int


def connection_cost(arcs: list[Arc]) -> int:
    """Minimum edges needed to realize every prescribed arc connection.

    An arc from i to j needs j - i vertical steps plus 2 * reach horizontal
    bypass steps, where reach(a) = 1 + max(reach of arcs directly inside a)
    and 0 for an innermost arc.  Arcs nested side by side share one detour
    column, so the bypass charge follows the height of an arc's nesting
    subtree, not its depth.
    """
    cost = 0
    stack: list[list[int]] = []  # per open arc: [upper, 1 + max child reach]
    def _close() -> None:
        nonlocal cost
        _, s = stack.pop()
        cost += 2 * s
        if stack and s + 1 > stack[-1][1]:
            stack[-1][1] = s + 1
    for a in sorted(arcs, key=lambda x: x.lower):
        cost += a.upper - a.lower
        while stack and stack[-1][0] < a.lower:
            _close()
        stack.append([a.upper, 0])
    while stack:
        _close()
    return cost


def border_cost(sig: Signature, ctx: PruneContext) -> int:
    """Rows separating the occupied band from any yet-untouched border.

    Positions are row indices (bottom = 0), so a walk piece whose lowest
    occupied edge sits at row r needs at least r more vertical steps to reach
    the bottom border, and symmetrically for the top.  Without a free edge the
    dip must also climb back to the occupied band, doubling the cost.
    """
    lo = hi = -1
    has_free = False
    for pos, e in enumerate(sig.edges):
        if e != EMPTY:
            if lo < 0:
                lo = pos
            hi = pos
            if e == FREE:
                has_free = True
    if lo < 0:
        # nothing occupied: only the untouched seed; spanning needs all W rows
        return 0 if (sig.bottom_touched and sig.top_touched) else ctx.width
    trip = 1 if has_free else 2
    cost = 0
    if not sig.bottom_touched:
        cost += trip * lo
    if not sig.top_touched:
        cost += trip * (ctx.width - hi)
    return cost


def extension_cost(ctx: PruneContext, reach: int = 0,
                   has_free: bool = True) -> int:
    """Columns still needed before a completion can occur at length >= W.

    ``reach`` is the largest arc reach of the signature; the detour edges
    already charged by the connection cost carry the walk that many columns
    past the cut-line, so only the remainder is charged here.  Without a free
    edge the extension must also return to the cut-line, doubling the cost
    per column.
    """
    trip = 1 if has_free else 2
    return trip * max(0, ctx.width - ctx.column - reach)


def should_prune(n_cur: int, n_add: int, ctx: PruneContext) -> bool:
    return n_cur + n_add > ctx.n_max


def additional_steps(
    edges: tuple[int, ...],
    bottom: bool,
    top: bool,
    ctx: PruneContext,
    visits: list[int] | None = None,
) -> int:
    """n_add for a boundary signature, in one pass over the entries.

    ``visits`` (when given) accumulates the number of elementary
    signature-entry reads, for the O(W) cost check.
    """
    cost = 0
    depth = 0
    lo = hi = -1
    has_free = False
    # 6 bits per open arc: 1 + max reach of its already-closed children
    stack = 0
    top_reach = 0
    for pos, e in enumerate(edges):
        if e == EMPTY:
            continue
        if lo < 0:
            lo = pos
        hi = pos
        if e == LOWER:
            depth += 1
            stack <<= 6
            cost -= pos  # contributes -lower to (upper - lower)
        elif e == UPPER:
            depth -= 1
            reach = stack & 63
            stack >>= 6
            cost += pos + 2 * reach
            if depth:
                if reach + 1 > (stack & 63):
                    stack = (stack & ~63) | (reach + 1)
            elif reach > top_reach:
                top_reach = reach
        else:
            has_free = True
    if visits is not None:
        visits[0] += len(edges)
        visits[1] += 1
    if lo >= 0:
        trip = 1 if has_free else 2
        if not bottom:
            cost += trip * lo
        if not top:
            cost += trip * (ctx.width - hi)
        cost += extension_cost(ctx, top_reach, has_free)
    else:
        if not (bottom and top):
            cost += ctx.width
        cost += extension_cost(ctx, top_reach, True)
    return cost


def additional_steps_mid(
    key: int,
    r: int,
    width: int,
    bottom: bool,
    top: bool,
    column: int,
    visits: list[int] | None = None,
) -> int:
    """n_add for a mid-column state, right after the kink move at row ``r``.

    ``key``'s low 2*(width+2) bits hold the slots: 0..r are the new
    right-pointing edges (future end-point at row = slot, one column past the
    cut), slot r+1 the vertical kink edge (future end-point at row r+1), slots
    r+2..width+1 the remaining left edges (future end-point at row =
    slot - 1).  The mapped positions are exact.

    The connection cost is column-aware.  An arc's reach is the number of
    columns past the cut-line its path is forced: at least 0 when both ends
    sit in the old column, at least 1 otherwise (a new-column or mixed end
    already starts one column over), and always one more than the largest
    reach among the arcs it directly encloses.  The horizontal charge is
    2 * reach minus one already-paid column hop per new-column end (2 for a
    both-new arc, 1 for a mixed arc, 0 for a both-old arc).  Only a lower end
    can be new, and side-by-side arcs share a detour column, so the charge
    follows subtree reach, not nesting depth.
    """
    cost = 0
    depth = 0
    lo = hi = -1
    has_free = False
    lstack = 0  # bit per open arc: 1 if its lower end is a right-pointing edge
    rstack = 0  # 6 bits per open arc: 1 + max reach of closed children
    top_reach = 0
    nslots = width + 2
    for slot in range(nslots):
        e = (key >> (2 * slot)) & 3
        if e == EMPTY:
            continue
        pos = slot if slot <= r + 1 else slot - 1
        if lo < 0:
            lo = pos
        hi = pos
        if e == LOWER:
            depth += 1
            lstack = (lstack << 1) | (slot <= r)
            rstack <<= 6
            cost -= pos
        elif e == UPPER:
            depth -= 1
            lower_is_new = lstack & 1
            lstack >>= 1
            s = rstack & 63
            rstack >>= 6
            if lower_is_new:
                reach = s if s > 1 else 1
                # both-new arcs start a column over at each end; mixed at one
                horiz = 2 * reach - (2 if slot <= r else 1)
            else:
                reach = s
                horiz = 2 * reach
            cost += pos + horiz
            if depth:
                if reach + 1 > (rstack & 63):
                    rstack = (rstack & ~63) | (reach + 1)
            elif reach > top_reach:
                top_reach = reach
        else:
            has_free = True
    if visits is not None:
        visits[0] += nslots
        visits[1] += 1
    new_any = 1 if key & ((1 << (2 * (r + 1))) - 1) else 0
    reached = column + new_any
    credit = max(0, top_reach - new_any)
    if lo >= 0:
        trip = 1 if has_free else 2
        if not bottom:
            cost += trip * lo
        if not top:
            cost += trip * (width - hi)
        cost += trip * max(0, width - reached - credit)
    else:
        if not (bottom and top):
            cost += width
        cost += max(0, width - reached - credit)
    return cost


def additional_steps_packed(
    ekey: int,
    bottom: bool,
    top: bool,
    ctx: PruneContext,
    visits: list[int] | None = None,
) -> int:
    """``additional_steps`` on a packed row vector (row q at bits 2q..2q+1).

    Same bound, same visit count, no tuple materialization; this is the form
    the sweep's inner loop uses.
    """
    cost = 0
    depth = 0
    lo = hi = -1
    has_free = False
    stack = 0  # 6 bits per open arc: 1 + max reach of closed children
    top_reach = 0
    nrows = ctx.width + 1
    for pos in range(nrows):
        e = (ekey >> (2 * pos)) & 3
        if e == EMPTY:
            continue
        if lo < 0:
            lo = pos
        hi = pos
        if e == LOWER:
            depth += 1
            stack <<= 6
            cost -= pos
        elif e == UPPER:
            depth -= 1
            reach = stack & 63
            stack >>= 6
            cost += pos + 2 * reach
            if depth:
                if reach + 1 > (stack & 63):
                    stack = (stack & ~63) | (reach + 1)
            elif reach > top_reach:
                top_reach = reach
        else:
            has_free = True
    if visits is not None:
        visits[0] += nrows
        visits[1] += 1
    if lo >= 0:
        trip = 1 if has_free else 2
        if not bottom:
            cost += trip * lo
        if not top:
            cost += trip * (ctx.width - hi)
        cost += extension_cost(ctx, top_reach, has_free)
    else:
        if not (bottom and top):
            cost += ctx.width
        cost += extension_cost(ctx, top_reach, True)
    return cost
