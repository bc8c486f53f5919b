"""Optional compiled fast path for the mid-column prune bound.

``additional_steps_mid_fast`` is a numba-compiled twin of
``pruning.additional_steps_mid`` for valid (balanced) states; the test suite
enforces bit-for-bit agreement.  The engine falls back to the pure-Python
form when numba is unavailable or when visit instrumentation is requested.

The only representational difference is the child-reach accumulator stack:
5 bits per open arc instead of 6, so that the deepest possible nesting of a
width-28 state (the widest the packed key layout admits) still fits a single
64-bit register.  Reaches never exceed width + 2 < 31, so the results are
identical.
"""

from __future__ import annotations

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

additional_steps_mid_fast = None

if numba is not None:
    @numba.njit("int64(uint64, int64, int64, boolean, boolean, int64)",
                cache=True)
    def additional_steps_mid_fast(key, r, width, bottom, top, column):  # noqa: F811
        cost = 0
        depth = 0
        lo = -1
        hi = -1
        has_free = False
        lstack = numba.uint64(0)
        rstack = numba.uint64(0)  # 5 bits per open arc: 1 + max child reach
        top_reach = 0
        nslots = width + 2
        for slot in range(nslots):
            e = (key >> numba.uint64(2 * slot)) & numba.uint64(3)
            if e == 0:
                continue
            pos = slot if slot <= r + 1 else slot - 1
            if lo < 0:
                lo = pos
            hi = pos
            if e == 1:
                depth += 1
                lstack = lstack << numba.uint64(1)
                if slot <= r:
                    lstack |= numba.uint64(1)
                rstack = rstack << numba.uint64(5)
                cost -= pos
            elif e == 2:
                depth -= 1
                lower_is_new = lstack & numba.uint64(1)
                lstack >>= numba.uint64(1)
                s = numba.int64(rstack & numba.uint64(31))
                rstack >>= numba.uint64(5)
                if lower_is_new:
                    reach = s if s > 1 else 1
                    horiz = 2 * reach - (2 if slot <= r else 1)
                else:
                    reach = s
                    horiz = 2 * reach
                cost += pos + horiz
                if depth > 0:
                    if reach + 1 > numba.int64(rstack & numba.uint64(31)):
                        rstack = (rstack & ~numba.uint64(31)) | numba.uint64(
                            reach + 1)
                elif reach > top_reach:
                    top_reach = reach
            else:
                has_free = True
        new_mask = (numba.uint64(1) << numba.uint64(2 * (r + 1))) - numba.uint64(1)
        new_any = 1 if (key & new_mask) != numba.uint64(0) else 0
        reached = column + new_any
        credit = top_reach - new_any
        if credit < 0:
            credit = 0
        rem = width - reached - credit
        if rem < 0:
            rem = 0
        if lo >= 0:
            trip = 1 if has_free else 2
            if not bottom:
                cost += trip * lo
            if not top:
                cost += trip * (width - hi)
            cost += trip * rem
        else:
            if not (bottom and top):
                cost += width
            cost += rem
        return cost
