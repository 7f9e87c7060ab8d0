"""Dynamic program for consecutive envy-free feasible allocations.

Envy-freeness of a consecutive allocation only needs checking between the
two agents on either side of each block boundary, which turns the search
into an O(k n^3) table fill over (agents used, taxis used, last block size).
"""

from fractions import Fraction
from typing import Optional

from .core import Allocation, Instance, phi
from .errors import BlocksNotAdjacent


def _block_types(inst: Instance, start: int, end: int) -> tuple:
    """Destinations of agents start..end (inclusive, 1-based); sorted already."""
    return inst.destinations[start - 1 : end]


def boundary_envy_ok(inst: Instance, left_block, right_block) -> bool:
    """No envy in either direction between the last agent of the left block
    and the first agent of the right block.

    Blocks are (start, end) index pairs, inclusive, and must be adjacent.
    """
    ls, le = left_block
    rs, re = right_block
    if le + 1 != rs:
        raise BlocksNotAdjacent(f"blocks {left_block} and {right_block} do not touch")
    left = _block_types(inst, ls, le)
    right = _block_types(inst, rs, re)
    x_t = inst.x(le)  # last drop-off of the left block
    x_s = inst.x(rs)  # first drop-off of the right block
    # x_t's view: own block versus replacing the right block's first agent
    if phi(right[1:] + (x_t,), x_t) < phi(left, x_t):
        return False
    # x_s's view: own block versus replacing the left block's last agent
    if phi(left[:-1] + (x_s,), x_s) < phi(right, x_s):
        return False
    return True


def solve_ef_consecutive(inst: Instance) -> Optional[Allocation]:
    """A consecutive envy-free feasible allocation, or None if none exists.

    reach[mu][kappa][ell] says the first mu agents fit into kappa consecutive
    blocks with nonincreasing sizes ending in a block of size ell, every
    block within its taxi's quota and every boundary envy-free.  Unused taxis
    trail as empties, so any kappa <= k may finish the table.
    """
    n, k = inst.n, inst.k
    kmax = min(k, n)
    reach = [[dict() for _ in range(kmax + 1)] for _ in range(n + 1)]
    for ell in range(1, min(n, inst.q(1)) + 1):
        reach[ell][1][ell] = None  # single block of the first ell agents

    boundary_cache = {}

    def boundary_ok(mu_prev: int, ell_prev: int, ell: int) -> bool:
        # blocks [mu_prev-ell_prev+1 .. mu_prev] and [mu_prev+1 .. mu_prev+ell]
        key = (mu_prev, ell_prev, ell)
        hit = boundary_cache.get(key)
        if hit is None:
            hit = boundary_envy_ok(
                inst,
                (mu_prev - ell_prev + 1, mu_prev),
                (mu_prev + 1, mu_prev + ell),
            )
            boundary_cache[key] = hit
        return hit

    for kappa in range(2, kmax + 1):
        for mu in range(kappa, n + 1):
            for ell in range(1, min(mu - kappa + 1, inst.q(kappa)) + 1):
                # largest feasible previous block first, for deterministic output
                for ell_prev in range(inst.q(kappa - 1), ell - 1, -1):
                    if ell_prev not in reach[mu - ell][kappa - 1]:
                        continue
                    if boundary_ok(mu - ell, ell_prev, ell):
                        reach[mu][kappa][ell] = ell_prev
                        break

    for kappa in range(kmax, 0, -1):
        for ell in range(n, 0, -1):
            if ell in reach[n][kappa]:
                blocks = []
                mu = n
                while kappa >= 1:
                    blocks.append(frozenset(range(mu - ell + 1, mu + 1)))
                    prev = reach[mu][kappa][ell]
                    mu -= ell
                    kappa -= 1
                    ell = prev
                return tuple(reversed(blocks))
    return None
