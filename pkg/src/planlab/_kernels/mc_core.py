# cython: language_level=3
"""Evaluation core for first-order model checking on finite structures.

Formulas arrive pre-compiled into flat arrays (see fomc.compile_query):
node kinds + payloads, relations as sets of radix-packed tuples, quantified
variables as integer slots into a single environment list.

Two evaluators are provided.  `evaluate_basic` is the plain recursive
short-circuiting definition of satisfaction.  `evaluate_program` handles the
common shape here -- a closed formula with an outer existential block -- and
additionally checks each top-level conjunct as soon as its variables are
bound, with conflict-directed backjumping over the existential block.  Both
try universe elements in index order, so the first witness is deterministic
and identical for both.

Written in Cython "pure Python" style: the annotations below speed up the
compiled build and are inert when running from source.
"""

try:
    import cython
except ImportError:  # pragma: no cover - stand-in when Cython is absent
    class _CythonShim:
        compiled = False

        @staticmethod
        def cfunc(f):
            return f

        @staticmethod
        def locals(**_kw):
            return lambda f: f

        @staticmethod
        def returns(_t):
            return lambda f: f

        def __getattr__(self, _name):
            return object

    cython = _CythonShim()

ATOM = 0
EQ = 1
NOT = 2
AND = 3
OR = 4
IMPLIES = 5
EXISTS = 6
FORALL = 7
ATOM_BM = 8  # atom over a relation stored as a byte bitmap

TRUE = object()  # sentinel distinct from any conflict set


@cython.cfunc
@cython.returns(cython.bint)
@cython.locals(kind=cython.int, node=cython.int, key=cython.long,
               U=cython.int, val=cython.int, slot=cython.int)
def eval_node(kinds, payload, rels, U, env, node):
    kind = kinds[node]
    if kind == ATOM_BM:
        rel_id, slots = payload[node]
        key = 0
        for s in slots:
            key = key * U + env[s]
        return rels[rel_id][key] != 0
    if kind == ATOM:
        rel_id, slots = payload[node]
        key = 0
        for s in slots:
            key = key * U + env[s]
        return key in rels[rel_id]
    if kind == EQ:
        a, b = payload[node]
        return env[a] == env[b]
    if kind == NOT:
        return not eval_node(kinds, payload, rels, U, env, payload[node])
    if kind == AND:
        for child in payload[node]:
            if not eval_node(kinds, payload, rels, U, env, child):
                return False
        return True
    if kind == OR:
        for child in payload[node]:
            if eval_node(kinds, payload, rels, U, env, child):
                return True
        return False
    if kind == IMPLIES:
        a, b = payload[node]
        if not eval_node(kinds, payload, rels, U, env, a):
            return True
        return eval_node(kinds, payload, rels, U, env, b)
    if kind == EXISTS:
        slot, child = payload[node]
        for val in range(U):
            env[slot] = val
            if eval_node(kinds, payload, rels, U, env, child):
                env[slot] = -1
                return True
        env[slot] = -1
        return False
    if kind == FORALL:
        slot, child = payload[node]
        for val in range(U):
            env[slot] = val
            if not eval_node(kinds, payload, rels, U, env, child):
                env[slot] = -1
                return False
        env[slot] = -1
        return True
    raise ValueError(f"unknown node kind {kind}")


def evaluate_basic(kinds, payload, rels, U, n_slots, root):
    env = [-1] * n_slots
    return eval_node(kinds, payload, rels, U, env, root)


def _try_level(kinds, payload, rels, U, env, prefix_slots, cands, sched, L,
               counter):
    """Bind prefix level L..end.  Returns TRUE or the conflict level set."""
    last = len(prefix_slots) - 1
    slot = prefix_slots[L]
    conflict = set()
    for val in cands[L]:
        counter[0] += 1
        env[slot] = val
        failed = False
        for node, levels in sched[L]:
            if not eval_node(kinds, payload, rels, U, env, node):
                conflict.update(levels)
                failed = True
                break
        if failed:
            continue
        if L == last:
            return TRUE
        res = _try_level(kinds, payload, rels, U, env, prefix_slots, cands,
                         sched, L + 1, counter)
        if res is TRUE:
            return TRUE
        if L not in res:
            env[slot] = -1
            return res  # backjump: failure did not involve this level
        res.discard(L)
        conflict.update(res)
    env[slot] = -1
    conflict.discard(L)
    return conflict


def evaluate_program(kinds, payload, rels, U, n_slots, prefix_slots,
                     cands, const_nodes, sched):
    """Returns (satisfied, witness values for the prefix or None, assignments).

    cands[L]: the index-ordered candidate elements for prefix level L
    (pre-filtered through any unary guard conjuncts on that variable).
    const_nodes: conjuncts with no free prefix variable, checked once.
    sched[L]: (node, conflict levels) pairs checked right after binding
    prefix level L; every conjunct appears exactly once across const_nodes,
    the candidate filters, and sched.
    """
    env = [-1] * n_slots
    counter = [0]
    for node in const_nodes:
        if not eval_node(kinds, payload, rels, U, env, node):
            return (False, None, counter[0])
    if not prefix_slots:
        return (True, [], counter[0])
    res = _try_level(kinds, payload, rels, U, env, prefix_slots, cands, sched,
                     0, counter)
    if res is TRUE:
        return (True, [env[s] for s in prefix_slots], counter[0])
    return (False, None, counter[0])
