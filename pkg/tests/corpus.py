"""Shared generated corpus for the property suites."""
import functools
import random

from openclosure.analysis import gen_confluence_instance, gen_context, gen_typed_term
from openclosure.errors import EscapeError, GenerationExhausted
from openclosure.subst import scoping_checks, subst_annotated
from openclosure.syntax import alpha_equal, ctx_alpha_equal, dep_get, strip


@functools.lru_cache(maxsize=None)
def corpus(size=1000, max_depth=6, allow_fix=False):
    """``size`` well-typed terms as ``(seed, ctx, term)``, depth at most ``max_depth``."""
    out = []
    seed = 0
    while len(out) < size:
        rng = random.Random(seed)
        ctx = gen_context(rng)
        depth = rng.randint(1, max_depth)
        try:
            out.append((seed, ctx, gen_typed_term(ctx, None, depth, seed, allow_fix=allow_fix)))
        except GenerationExhausted:
            pass
        seed += 1
    return tuple(out)


def _both_orders(actx, tau, xa, pa, xb, pb):
    """Substitute in both orders with the adjusted vectors; None if the lemma does not apply."""
    try:
        subst_annotated(actx, xa, pa, tau)
        subst_annotated(actx, xb, pb, tau)
    except EscapeError:
        return None
    kb = dep_get(pb, xa)
    pb_adj = tuple((n, d | (kb & dep_get(pa, n))) for n, d in pb if n != xa)
    c1, t1, _ = subst_annotated(actx, xa, pa, tau)
    c1, t1, _ = subst_annotated(c1, xb, pb_adj, t1)
    c2, t2, _ = subst_annotated(actx, xb, pb, tau)
    c2, t2, _ = subst_annotated(c2, xa, pa, t2)
    return (c1, t1), (c2, t2)


def confluence_failures(count, seed0=0):
    """Run the confluence check on ``count`` applicable instances."""
    checked, failures, seed = 0, [], seed0
    with scoping_checks():
        while checked < count:
            rng = random.Random(seed)
            inst = gen_confluence_instance(rng, rng.randint(2, 6), 2)
            seed += 1
            res = _both_orders(*inst)
            if res is None:
                continue
            checked += 1
            (c1, t1), (c2, t2) = res
            (p1, d1), (p2, d2) = strip(c1), strip(c2)
            if not (alpha_equal(t1, t2) and d1 == d2 and ctx_alpha_equal(p1, p2)):
                failures.append(seed - 1)
    return checked, failures
