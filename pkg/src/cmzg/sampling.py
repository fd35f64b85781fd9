"""Random test objects: polynomials, unimodular matrices, block sums."""

from __future__ import annotations

from .cm import INF, FgCM, I, block_sum
from .kernel import DEFAULT_PREC, QQ, Field, SeriesMatrix, TruncSeries


def random_poly(rng, deg=2, lo=-3, hi=3, prec=DEFAULT_PREC, field: Field = QQ):
    return TruncSeries([rng.randint(lo, hi) for _ in range(deg + 1)], prec, field, exact=True)


def random_unimodular(rng, n, steps=None, prec=DEFAULT_PREC, field: Field = QQ):
    """A product of elementary matrices with polynomial entries and a permutation, with its exact inverse."""
    P = SeriesMatrix.identity(n, prec, field)
    Pinv = SeriesMatrix.identity(n, prec, field)
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = random_poly(rng, rng.randint(0, 2), prec=prec, field=field)
        E = SeriesMatrix.identity(n, prec, field)
        E.rows[i][j] = c
        Einv = SeriesMatrix.identity(n, prec, field)
        Einv.rows[i][j] = -c
        P = E @ P
        Pinv = Pinv @ Einv
    perm = list(range(n))
    rng.shuffle(perm)
    Q = SeriesMatrix.zeros(n, n, prec, field)
    Qi = SeriesMatrix.zeros(n, n, prec, field)
    for a, b in enumerate(perm):
        Q.rows[a][b] = TruncSeries.one(prec, field)
        Qi.rows[b][a] = TruncSeries.one(prec, field)
    return Q @ P, Pinv @ Qi


def random_block_sum(rng, max_rank=6, max_n=6, max_inf=2):
    """Summand list of total rank <= max_rank with at most ``max_inf`` copies of I_inf."""
    blocks = []
    rank = rng.randint(1, max_rank)
    used = infs = 0
    while used < rank:
        if rank - used >= 2 and (infs >= max_inf or rng.random() < 0.7):
            blocks.append(I(rng.randint(0, max_n)))
            used += 2
        elif infs < max_inf:
            blocks.append(INF)
            infs += 1
            used += 1
        else:
            break
    return blocks or [I(rng.randint(0, max_n))]


def random_conjugate(rng, blocks, prec=DEFAULT_PREC, field: Field = QQ):
    """``(M, P)`` with ``M.X = P X P^-1`` for X the canonical block sum."""
    C = block_sum(blocks, prec, field)
    P, Pinv = random_unimodular(rng, C.rank, prec=prec, field=field)
    return FgCM(P @ C.X @ Pinv), P
