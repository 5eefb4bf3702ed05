"""Brute-force oracles on raw permutation tuples; they share no code with the library."""


def compose(g, h):  # apply h first, then g
    return tuple(g[h[i]] for i in range(len(h)))


def inverse(g):
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def closure(gens, ident):
    S = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in S:
                    S.add(y)
                    new.append(y)
        frontier = new
    return frozenset(S)


def all_subgroups(elements):
    """Every subgroup is a join of cyclic subgroups: iterate joins to a fixpoint."""
    ident = tuple(range(len(next(iter(elements)))))
    cyc = {closure([g], ident) for g in elements}
    subs = set(cyc)
    frontier = set(cyc)
    while frontier:
        new = set()
        for A in frontier:
            for C in cyc:
                if not C <= A:
                    J = closure(list(A | C), ident)
                    if J not in subs:
                        new.add(J)
        subs |= new
        frontier = new
    return subs


def elements(G):
    return [tuple(e) for e in G.elements]


def is_normal(S, elements):
    return all(frozenset(compose(compose(g, s), inverse(g)) for s in S) == S for g in elements)


def perm_order(g):
    ident, x, n = tuple(range(len(g))), g, 1
    while x != ident:
        x, n = compose(g, x), n + 1
    return n


def is_qpower(n, q):
    while n % q == 0:
        n //= q
    return n == 1
