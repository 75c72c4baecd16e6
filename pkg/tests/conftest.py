import itertools
import math

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fdds.core import Fdds
from fdds.cyclesum import CycleSum

settings.register_profile(
    "fdds", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("fdds")


@st.composite
def systems(draw, min_states=0, max_states=6):
    n = draw(st.integers(min_states, max_states))
    succ = draw(st.lists(st.integers(0, max(n - 1, 0)), min_size=n, max_size=n))
    return Fdds(tuple(succ))


@st.composite
def connected_systems(draw, max_states=6, max_cycle=None):
    n = draw(st.integers(1, max_states))
    length = draw(st.integers(1, min(n, max_cycle or n)))
    succ = [(i + 1) % length for i in range(length)]
    for i in range(length, n):
        succ.append(draw(st.integers(0, i - 1)))
    return Fdds(tuple(succ))


@st.composite
def cycle_sums(draw, max_len=8, max_count=4, max_terms=4, min_terms=0):
    pairs = draw(
        st.lists(
            st.tuples(st.integers(1, max_len), st.integers(1, max_count)),
            min_size=min_terms,
            max_size=max_terms,
        )
    )
    return CycleSum(tuple(pairs))


@st.composite
def pseudo_cancelable(draw, max_base=4, max_mult=4, max_terms=3):
    m = draw(st.integers(1, max_base))
    mults = draw(st.lists(st.integers(1, max_mult), min_size=0, max_size=max_terms - 1))
    counts = draw(st.lists(st.integers(1, 3), min_size=len(mults) + 1, max_size=len(mults) + 1))
    return CycleSum(tuple(zip([m] + [m * k for k in mults], counts)))


@st.composite
def relabellings(draw, a):
    perm = draw(st.permutations(range(len(a))))
    return relabel(a, perm)


def relabel(a: Fdds, perm) -> Fdds:
    """State ``i`` becomes ``perm[i]``."""
    succ = [0] * len(a)
    for i, v in enumerate(a.succ):
        succ[perm[i]] = perm[v]
    return Fdds(tuple(succ))


def iso_by_permutations(a: Fdds, b: Fdds) -> bool:
    """Isomorphism by trying every bijection; only for tiny systems."""
    if len(a) != len(b):
        return False
    n = len(a)
    for perm in itertools.permutations(range(n)):
        if all(perm[a.succ[i]] == b.succ[perm[i]] for i in range(n)):
            return True
    return False


def pair_product(a: Fdds, b: Fdds) -> Fdds:
    """Direct product with explicit pair labels, independent of numpy."""
    pairs = [(u, v) for u in range(len(a)) for v in range(len(b))]
    index = {p: k for k, p in enumerate(pairs)}
    return Fdds(tuple(index[(a.succ[u], b.succ[v])] for u, v in pairs))


def factor(n: int) -> dict:
    out: dict = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def anti_lcm_oracle(b: int, a: int) -> int:
    """From prime factorisations by trial division."""
    fb, fa = factor(b), factor(a)
    return math.prod(p**e for p, e in fb.items() if e > fa.get(p, 0))
