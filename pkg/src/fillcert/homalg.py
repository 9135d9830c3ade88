"""Finite abelian groups, Betti vectors and order contradictions.

Orders of torsion groups are tracked by their p-adic valuations, so every
exact sequence becomes a linear equation over Z.  A contradiction is a
system with no integer solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, lcm

from sympy import Matrix, factorint
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.utilities.iterables import partitions

from .errors import InvalidInput, InvariantViolation, Refusal, ReplayMismatch


# ---------------------------------------------------------------- groups

@dataclass(frozen=True, order=True)
class FinAb:
    invariant_factors: tuple = ()

    def __post_init__(self):
        f = self.invariant_factors
        if any(d < 2 for d in f):
            raise InvalidInput("invariant factors must be >= 2")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise InvalidInput(f"{f} is not a divisibility chain")

    @property
    def order(self):
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @classmethod
    def cyclic(cls, m):
        return cls(() if m == 1 else (m,))

    @classmethod
    def from_cyclic_orders(cls, orders):
        """Invariant factors of a product of cyclic groups Z/m_1 x ... x Z/m_r."""
        by_prime = {}
        for m in orders:
            for q, e in factorint(m).items():
                by_prime.setdefault(q, []).append(q**e)
        width = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * width
        for powers in by_prime.values():
            powers.sort(reverse=True)
            for idx, qe in enumerate(powers):
                factors[width - 1 - idx] *= qe
        return cls(tuple(d for d in factors if d > 1))

    def elements(self):
        return list(product(*(range(d) for d in self.invariant_factors)))

    def add(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def scale(self, t, a):
        return tuple((t * x) % d for x, d in zip(a, self.invariant_factors))

    def element_order(self, a):
        out = 1
        for x, d in zip(a, self.invariant_factors):
            out = lcm(out, d // gcd(x, d))
        return out

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def groups_of_order(m):
    """Every abelian group of order m, by partitions of each prime exponent."""
    if m < 1:
        raise InvalidInput("order must be positive")
    per_prime = []
    for q, e in sorted(factorint(m).items()):
        options = []
        for part in partitions(e):
            exps = sorted((a for a, c in part.items() for _ in range(c)), reverse=True)
            options.append([q**a for a in exps])
        per_prime.append(options)
    out = []
    for choice in product(*per_prime):
        out.append(FinAb.from_cyclic_orders([x for powers in choice for x in powers]))
    return sorted(set(out))


def catalogue(max_order):
    return [g for m in range(1, max_order + 1) for g in groups_of_order(m)]


def order_signature(group, subset=None):
    """Sorted element-order multiset; determines a finite abelian group up to isomorphism."""
    elems = group.elements() if subset is None else subset
    return tuple(sorted(group.element_order(a) for a in elems))


@lru_cache(maxsize=None)
def _signature_index(max_order):
    return {(g.order, order_signature(g)): g for g in catalogue(max_order)}


def identify(order, signature, max_order=64):
    try:
        return _signature_index(max_order)[(order, signature)]
    except KeyError:
        raise InvariantViolation(f"no catalogued group with order {order} and signature") from None


def subgroups(group):
    """All subgroups as frozensets of elements, built by adjoining one element at a time."""
    zero = tuple(0 for _ in group.invariant_factors)
    elems = group.elements()
    start = frozenset([zero])
    found = {start}
    frontier = [start]
    while frontier:
        h = frontier.pop()
        for g in elems:
            if g in h:
                continue
            # <H, g> = H + <g> because H is already a subgroup
            multiples = [group.scale(t, g) for t in range(group.element_order(g))]
            bigger = frozenset(group.add(x, m) for x in h for m in multiples)
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def quotient_signature(group, sub):
    """Element orders of G/H: the order of g+H is the least t with t*g in H."""
    reps = []
    seen = set()
    for g in group.elements():
        if g in seen:
            continue
        coset = {group.add(g, h) for h in sub}
        seen |= coset
        reps.append(g)
    out = []
    for g in reps:
        t = 1
        while group.scale(t, g) not in sub:
            t += 1
        out.append(t)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def sub_quotient_pairs(group):
    """{(type of H, type of G/H)} over all subgroups H of G."""
    pairs = set()
    for h in subgroups(group):
        sub_t = identify(len(h), order_signature(group, h))
        quo_t = identify(group.order // len(h), quotient_signature(group, h))
        pairs.add((sub_t, quo_t))
    return frozenset(pairs)


def alternating_order_identity(sequence):
    """prod |A_i|^((-1)^i) == 1 for 0 -> A_1 -> ... -> A_m -> 0."""
    num, den = 1, 1
    for i, g in enumerate(sequence):
        if i % 2 == 0:
            num *= g.order
        else:
            den *= g.order
    return num == den


def exactness_reachable(prefix):
    """Types T such that 0 -> prefix -> T -> 0 admits an exact sequence.

    Exactness at A_i means the image of A_{i-1} is a subgroup H of A_i
    isomorphic to the cokernel carried over, and A_i/H is what must inject
    into A_{i+1}.  The last group must be isomorphic to that cokernel.
    """
    if not prefix:
        return {FinAb()}
    states = {prefix[0]}
    for g in prefix[1:]:
        nxt = set()
        pairs = sub_quotient_pairs(g)
        for sub_t, quo_t in pairs:
            if sub_t in states:
                nxt.add(quo_t)
        states = nxt
        if not states:
            break
    return states


def exactness_witness(sequence):
    """True iff some maps make 0 -> A_1 -> ... -> A_m -> 0 exact."""
    if len(sequence) < 2:
        return all(g.order == 1 for g in sequence)
    return sequence[-1] in exactness_reachable(tuple(sequence[:-1]))


def surjection_kernels(group, p):
    """Isomorphism types of ker(phi) over surjections phi: G -> Z/p."""
    gens = [tuple(1 if j == i else 0 for j in range(len(group.invariant_factors)))
            for i in range(len(group.invariant_factors))]
    kernels = set()
    for images in product(range(p), repeat=len(gens)):
        if not any(images):
            continue
        # a generator of order d can only go to t with d*t = 0 mod p
        if any((d * t) % p for d, t in zip(group.invariant_factors, images)):
            continue
        ker = [a for a in group.elements()
               if sum(x * t for x, t in zip(a, images)) % p == 0]
        kernels.add(identify(len(ker), order_signature(group, ker)))
    return kernels


def paired_model_search(p, max_order=64):
    """Search for groups X, X', Y, Y' of order <= max_order realising both sequences

        0 -> Y' -> X -> Z/p -> Y -> X' -> 0   with X -> Z/p onto,
        0 -> X' -> Y -> Z/p -> X -> Y' -> 0   with Y -> Z/p onto.

    Exactness plus surjectivity forces Y' = ker(X -> Z/p), Y = X',
    X' = ker(Y -> Z/p), X = Y'.  Returns the list of models found.
    """
    cat = catalogue(max_order)
    kernels = {g: surjection_kernels(g, p) for g in cat}
    models = []
    checked = 0
    for X in cat:
        for Y in cat:
            checked += 1
            Yp, Xp = X, Y  # from the second sequence and the first
            if Yp in kernels[X] and Xp in kernels[Y]:
                models.append((X, Xp, Y, Yp))
    return models, {"groups": len(cat), "pairs_checked": checked}


# ----------------------------------------------------------- Betti vectors

@dataclass(frozen=True)
class BettiVector:
    ranks: tuple

    def __post_init__(self):
        r = self.ranks
        if len(r) % 2 == 0 or len(r) < 3:
            raise InvalidInput("need ranks b_0..b_{2n}")
        top = len(r) - 1
        if r[0] != 1 or r[top] != 0 or any(x < 0 for x in r):
            raise InvalidInput("need b_0 = 1, b_2n = 0 and nonnegative ranks")
        if any(r[i] != r[top - i] for i in range(1, top)):
            raise InvalidInput("ranks are not symmetric under i -> 2n - i")

    @property
    def n(self):
        return (len(self.ranks) - 1) // 2

    def even_total(self):
        return sum(self.ranks[0::2])

    def odd_total(self):
        return sum(self.ranks[1::2])

    def as_dict(self):
        return list(self.ranks)


def _middle_step(n):
    # n odd: the middle group carries a nondegenerate skew pairing, so b_n is even
    return 2 if n % 2 else 1


def feasible_betti_vectors(n, even_bound, odd_bound, minimal=False):
    """Symmetric rank vectors within the bounds.

    With ``minimal`` only one vector per support pattern is produced, the
    one with every nonzero entry as small as allowed.  Contradiction
    routes only look at which degrees vanish, so these representatives
    decide the same question as the full list.
    """
    if n < 2:
        raise InvalidInput("need n >= 2")
    out = []

    def choices(i, room):
        weight = 1 if i == n else 2
        step_ = _middle_step(n) if i == n else 1
        vals = range(0, room // weight + 1, step_)
        if minimal:
            vals = [v for v in vals if v in (0, step_)]
        return weight, vals

    def rec(i, ranks, even, odd):
        if i > n:
            full = [1] + ranks + ranks[-2::-1] + [0]
            out.append(BettiVector(tuple(full)))
            return
        is_even = i % 2 == 0
        room = (even_bound - even) if is_even else (odd_bound - odd)
        weight, vals = choices(i, room)
        for b in vals:
            rec(i + 1, ranks + [b],
                even + (weight * b if is_even else 0),
                odd + (0 if is_even else weight * b))

    if even_bound >= 1 and odd_bound >= 0:
        rec(1, [], 1, 0)
    out.sort(key=lambda v: v.ranks)
    return out


def count_feasible_betti_vectors(n, even_bound, odd_bound):
    """Size of the full feasible list, by dynamic programming over degrees."""

    @lru_cache(maxsize=None)
    def count(i, even_room, odd_room):
        if i > n:
            return 1
        weight = 1 if i == n else 2
        step_ = _middle_step(n) if i == n else 1
        room = even_room if i % 2 == 0 else odd_room
        total = 0
        for b in range(0, room // weight + 1, step_):
            if i % 2 == 0:
                total += count(i + 1, even_room - weight * b, odd_room)
            else:
                total += count(i + 1, even_room, odd_room - weight * b)
        return total

    if even_bound < 1 or odd_bound < 0:
        return 0
    return count(1, even_bound - 1, odd_bound)


# -------------------------------------------------- order contradictions

def _H(d):
    return f"H^{d}"


def _Hrel(d):
    return f"H^{d}(W,dW)"


def duality_substitute(term, n):
    """Torsion part of H^j(W, dW) is H^{2n-j+1}(W)."""
    if term.endswith("(W,dW)"):
        j = int(term[2:].split("(")[0])
        return _H(2 * n - j + 1)
    return term


def sequence_equation(terms, p):
    """Valuation equation sum (-1)^i v(A_i) = 0 as (coeffs, const).

    Z/p contributes a known valuation 1, moved to the constant side.
    """
    coeffs = {}
    const = 0
    for i, t in enumerate(terms):
        sign = 1 if i % 2 == 0 else -1
        if t == f"Z/{p}":
            const -= sign
        else:
            coeffs[t] = coeffs.get(t, 0) + sign
    return {v: c for v, c in coeffs.items() if c}, const


@dataclass
class OrderConstraintSystem:
    p: int
    equations: list  # (coeffs dict, const)

    @property
    def variables(self):
        return sorted({v for c, _ in self.equations for v in c})

    def matrix(self):
        vs = self.variables
        A = Matrix([[c.get(v, 0) for v in vs] for c, _ in self.equations])
        b = Matrix([const for _, const in self.equations])
        return A, b

    def inconsistency(self):
        """None if some integer valuations satisfy every equation, else a reason."""
        if not self.equations:
            return None
        A, b = self.matrix()
        if A.rank() < A.row_join(b).rank():
            return "rational"
        S, U, _ = smith_normal_decomp(A)
        c = U * b
        for i in range(S.rows):
            d = S[i, i] if i < S.cols else 0
            if d == 0:
                if c[i] != 0:
                    return "rational"
            elif c[i] % d:
                return "integral"
        return None


def chern_surjective_degrees(n, I):
    """Even degrees 2i where H^{2i}(W) -> H^{2i}(boundary) = Z/p is onto."""
    return sorted(2 * i for i in I)


def _needs_torsion(betti, degrees, n):
    blocked = [d for d in degrees if betti.ranks[d] != 0]
    if blocked:
        raise Refusal(f"degrees {blocked} carry positive rank", evidence=blocked)


def torsion_contradiction(n, p, d, betti, surjective_degrees):
    """Derivation log of an order contradiction at the paired degrees d, 2n - d."""
    if d % 2 or not 2 <= d <= 2 * n - 2:
        raise InvalidInput("d must be an even degree in [2, 2n-2]")
    e = 2 * n - d
    _needs_torsion(betti, sorted({d - 1, d, d + 1, e - 1, e, e + 1}), n)
    missing = [x for x in (d, e) if x not in surjective_degrees]
    if missing:
        raise Refusal(f"no surjectivity onto Z/{p} in degrees {missing}", evidence=missing)
    zp = f"Z/{p}"
    log = [{"rule": "torsion", "degrees": sorted({d - 1, d, d + 1, e - 1, e, e + 1})}]
    equations = []
    for a in (d, e):
        raw = [_Hrel(a), _H(a), zp, _Hrel(a + 1), _H(a + 1)]
        sub = [duality_substitute(t, n) for t in raw]
        log.append({"rule": "pair_sequence", "degree": a, "terms": raw})
        log.append({"rule": "duality", "degree": a, "terms": sub})
        # H^a(W) -> Z/p onto: the sequence splits into two short exact pieces
        left, right = sub[0:3], sub[3:5]
        log.append({"rule": "surjective_split", "degree": a, "pieces": [left, right]})
        for piece in (left, right):
            coeffs, const = sequence_equation(piece, p)
            equations.append((coeffs, const))
            log.append({"rule": "equation", "terms": piece, "coeffs": coeffs, "const": const})
    return _close_log(log, p, equations)


def middle_degree_contradiction(n, p, betti):
    """n even: the self-paired sequence 0 -> X' -> X -> Z/p -> X -> X' -> 0."""
    if n % 2:
        raise InvalidInput("middle degree route needs n even")
    _needs_torsion(betti, [n - 1, n, n + 1], n)
    zp = f"Z/{p}"
    raw = [_Hrel(n), _H(n), zp, _Hrel(n + 1), _H(n + 1)]
    sub = [duality_substitute(t, n) for t in raw]
    coeffs, const = sequence_equation(sub, p)
    log = [
        {"rule": "torsion", "degrees": [n - 1, n, n + 1]},
        {"rule": "pair_sequence", "degree": n, "terms": raw},
        {"rule": "duality", "degree": n, "terms": sub},
        {"rule": "equation", "terms": sub, "coeffs": coeffs, "const": const},
    ]
    return _close_log(log, p, [(coeffs, const)])


def _close_log(log, p, equations):
    reason = OrderConstraintSystem(p, equations).inconsistency()
    if reason is None:
        return {"contradiction": False, "log": log}
    log.append({"rule": "inconsistent", "kind": reason})
    return {"contradiction": True, "log": log}


def replay_contradiction_log(n, p, betti, log, surjective_degrees=()):
    """Check each step of a contradiction log mechanically; raise on mismatch."""
    zp = f"Z/{p}"
    equations = []
    torsion = set()
    raw = {}
    available = []  # sequences that equations may be read from
    for entry in log:
        rule = entry["rule"]
        if rule == "torsion":
            torsion = set(entry["degrees"])
            if any(betti.ranks[x] for x in torsion):
                raise ReplayMismatch("a degree declared torsion has positive rank")
        elif rule == "pair_sequence":
            a = entry["degree"]
            if entry["terms"] != [_Hrel(a), _H(a), zp, _Hrel(a + 1), _H(a + 1)]:
                raise ReplayMismatch(f"wrong pair sequence at degree {a}")
            mirror = 2 * n - a
            if {a - 1, a, a + 1, mirror - 1, mirror, mirror + 1} - torsion:
                raise ReplayMismatch(f"pair sequence at {a} uses non-torsion groups")
            raw[a] = entry["terms"]
        elif rule == "duality":
            a = entry["degree"]
            if a not in raw or entry["terms"] != [duality_substitute(t, n) for t in raw[a]]:
                raise ReplayMismatch("bad duality substitution")
            available.append(entry["terms"])
        elif rule == "surjective_split":
            a = entry["degree"]
            if a not in surjective_degrees:
                raise ReplayMismatch(f"no surjectivity fact for degree {a}")
            whole = [duality_substitute(t, n) for t in raw.get(a, [])]
            if whole not in available or entry["pieces"] != [whole[0:3], whole[3:5]]:
                raise ReplayMismatch("bad split of the pair sequence")
            available.remove(whole)
            available.extend(entry["pieces"])
        elif rule == "equation":
            if entry["terms"] not in available:
                raise ReplayMismatch("equation from a sequence not in the log")
            coeffs, const = sequence_equation(entry["terms"], p)
            if coeffs != entry["coeffs"] or const != entry["const"]:
                raise ReplayMismatch("equation does not follow from exactness")
            equations.append((coeffs, const))
        elif rule == "inconsistent":
            if OrderConstraintSystem(p, equations).inconsistency() != entry["kind"]:
                raise ReplayMismatch("claimed inconsistency does not hold")
            return True
        else:
            raise ReplayMismatch(f"unknown rule {rule!r}")
    raise ReplayMismatch("log does not end in an inconsistency")


def select_contradiction_degree(n, p, betti, I_half):
    """Smallest d = 2i, i in I_half, with b_{2i-1} = b_{2i} = b_{2i+1} = 0."""
    for i in sorted(I_half):
        d = 2 * i
        if all(betti.ranks[x] == 0 for x in (d - 1, d, d + 1)):
            return d
    return None


def middle_degree_available(n, betti):
    return n % 2 == 0 and all(betti.ranks[x] == 0 for x in (n - 1, n, n + 1))


def counting_inequality(card_I_half, p):
    """The cardinality comparison |I_half| > (p - 3) + (p - 1)/2 for odd p."""
    blocked = (p - 3) + (p - 1) // 2
    return {"card_I_half": card_I_half, "blocked_bound": blocked, "holds": card_I_half > blocked}
