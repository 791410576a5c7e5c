# cython: language_level=3
"""Breadth-first search over dense total states, the oracle's inner loop.

States are packed into single integers: plain bitmasks for binary domains,
mixed-radix digits otherwise.  The module is valid Cython "pure Python"
source; compiled it shadows this file, uncompiled it runs as-is.

Search contract: actions are expanded in declaration order and the frontier
is FIFO, so the first goal state dequeued is reached by the lexicographically
smallest among the shortest action-id sequences.
"""

try:
    import cython
except ImportError:  # pragma: no cover - stand-in when Cython is absent
    class _CythonShim:
        compiled = False

        @staticmethod
        def locals(**_kw):
            return lambda f: f

        def __getattr__(self, _name):
            return object

    cython = _CythonShim()

FOUND = 0
NOT_FOUND = 1
EXHAUSTED = 2


def pack_state(values, d):
    s = 0
    for x in reversed(values):
        s = s * d + x
    return s


def unpack_state(s, n, d):
    out = []
    for _ in range(n):
        out.append(s % d)
        s //= d
    return tuple(out)


def _reconstruct(parent, state):
    plan = []
    while True:
        prev, aid = parent[state]
        if aid < 0:
            break
        plan.append(aid)
        state = prev
    plan.reverse()
    return plan


@cython.locals(s=cython.ulonglong, t=cython.ulonglong, pm=cython.ulonglong,
               pb=cython.ulonglong, em=cython.ulonglong, eb=cython.ulonglong,
               goal_mask=cython.ulonglong, goal_bits=cython.ulonglong,
               init_int=cython.ulonglong, aid=cython.int)
def _bfs_binary(init_int, acts, goal_mask, goal_bits, k, budget):
    """acts: list of (pre_mask, pre_bits, eff_mask, eff_bits)."""
    if init_int & goal_mask == goal_bits:
        return (FOUND, [], 1)
    parent = {init_int: (0, -1)}
    frontier = [init_int]
    for _depth in range(k):
        next_frontier = []
        for s in frontier:
            for aid in range(len(acts)):
                pm, pb, em, eb = acts[aid]
                if s & pm != pb:
                    continue
                t = (s & ~em) | eb
                if t in parent:
                    continue
                parent[t] = (s, aid)
                if len(parent) > budget:
                    return (EXHAUSTED, None, len(parent))
                if t & goal_mask == goal_bits:
                    return (FOUND, _reconstruct(parent, t), len(parent))
                next_frontier.append(t)
        if not next_frontier:
            return (NOT_FOUND, None, len(parent))
        frontier = next_frontier
    return (NOT_FOUND, None, len(parent))


def _holds(s, cond, d):
    for w, x in cond:
        if (s // w) % d != x:
            return False
    return True


def _bfs_general(init_int, acts, goal, d, k, budget):
    """acts: list of (pre, eff) with pre/eff tuples of (weight, value)."""
    if _holds(init_int, goal, d):
        return (FOUND, [], 1)
    parent = {init_int: (0, -1)}
    frontier = [init_int]
    for _depth in range(k):
        next_frontier = []
        for s in frontier:
            for aid in range(len(acts)):
                pre, eff = acts[aid]
                if not _holds(s, pre, d):
                    continue
                t = s
                for w, x in eff:
                    t += (x - (t // w) % d) * w
                if t in parent:
                    continue
                parent[t] = (s, aid)
                if len(parent) > budget:
                    return (EXHAUSTED, None, len(parent))
                if _holds(t, goal, d):
                    return (FOUND, _reconstruct(parent, t), len(parent))
                next_frontier.append(t)
        if not next_frontier:
            return (NOT_FOUND, None, len(parent))
        frontier = next_frontier
    return (NOT_FOUND, None, len(parent))


def bfs_shortest(n, d, init_values, actions, goal_items, k, budget):
    """Shortest plan of length <= k, or absence thereof.

    actions: list of (pre_items, eff_items), each a sequence of (var, value)
    pairs.  Returns (status, plan ids or None, states visited).
    """
    if d == 2 and n <= 63:
        init_int = 0
        for v in range(n):
            if init_values[v]:
                init_int |= 1 << v
        acts = []
        for pre, eff in actions:
            pm = pb = em = eb = 0
            for v, x in pre:
                pm |= 1 << v
                if x:
                    pb |= 1 << v
            for v, x in eff:
                em |= 1 << v
                if x:
                    eb |= 1 << v
            acts.append((pm, pb, em, eb))
        gm = gb = 0
        for v, x in goal_items:
            gm |= 1 << v
            if x:
                gb |= 1 << v
        return _bfs_binary(init_int, acts, gm, gb, k, budget)

    weights = [d ** v for v in range(n)]
    init_int = pack_state(init_values, d)
    acts = []
    for pre, eff in actions:
        acts.append((tuple((weights[v], x) for v, x in pre),
                     tuple((weights[v], x) for v, x in eff)))
    goal = tuple((weights[v], x) for v, x in goal_items)
    return _bfs_general(init_int, acts, goal, d, k, budget)
