"""Integer kernels over finite multiplication tables.

Every kernel has a numba implementation (``*_nb``) and a pure-numpy one
(``*_np``).  The public names dispatch on ``FREEBYCYCLIC_DISABLE_NUMBA``: any
value other than ``""``/``"0"`` forces the numpy path.  Both paths must agree
bit for bit; ``tests/test_kernels.py`` checks that.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover
    nb = None

_flag = os.environ.get("FREEBYCYCLIC_DISABLE_NUMBA", "")
USE_NUMBA = nb is not None and _flag in ("", "0")

njit_kwargs = {"nogil": True, "cache": True}


def _njit(fn):
    if nb is None:  # pragma: no cover
        return fn
    return nb.njit(**njit_kwargs)(fn)


def set_backend(name: str) -> None:
    """Switch between ``"numba"`` and ``"numpy"`` at runtime."""
    global USE_NUMBA
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and nb is None:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    USE_NUMBA = name == "numba"


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# -- word evaluation ---------------------------------------------------------
# letters: signed generator indices (1-based); images: (N, m) element indices.


def eval_words_np(table, inverse, images, letters):
    n_rows = images.shape[0]
    out = np.zeros(n_rows, dtype=np.int64)
    for x in letters:
        col = images[:, abs(x) - 1]
        if x < 0:
            col = inverse[col]
        out = table[out, col]
    return out


@_njit
def eval_words_nb(table, inverse, images, letters):
    n_rows = images.shape[0]
    out = np.zeros(n_rows, dtype=np.int64)
    for r in range(n_rows):
        cur = 0
        for x in letters:
            if x > 0:
                g = images[r, x - 1]
            else:
                g = inverse[images[r, -x - 1]]
            cur = table[cur, g]
        out[r] = cur
    return out


# -- subgroup generated by each tuple ---------------------------------------


def generated_sizes_np(table, tuples):
    n = table.shape[0]
    n_rows = tuples.shape[0]
    mask = np.zeros((n_rows, n), dtype=np.bool_)
    mask[:, 0] = True
    rows = np.arange(n_rows)[:, None]
    while True:
        new = mask.copy()
        for j in range(tuples.shape[1]):
            prod = table[np.arange(n)[None, :], tuples[:, j][:, None]]
            hit = np.zeros_like(mask)
            r_idx = np.broadcast_to(rows, prod.shape)[mask]
            hit[r_idx, prod[mask]] = True
            new |= hit
        if (new == mask).all():
            return mask.sum(axis=1).astype(np.int64)
        mask = new


@_njit
def generated_sizes_nb(table, tuples):
    n = table.shape[0]
    n_rows = tuples.shape[0]
    out = np.zeros(n_rows, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    queue = np.zeros(n, dtype=np.int64)
    for r in range(n_rows):
        seen[:] = False
        seen[0] = True
        queue[0] = 0
        head, tail = 0, 1
        while head < tail:
            e = queue[head]
            head += 1
            for j in range(tuples.shape[1]):
                f = table[e, tuples[r, j]]
                if not seen[f]:
                    seen[f] = True
                    queue[tail] = f
                    tail += 1
        out[r] = tail
    return out


# -- conjugacy classes -------------------------------------------------------


def conjugacy_labels_np(table, inverse):
    conj = table[inverse[None, :], table]  # [g, h] -> h^-1 g h
    return conj.min(axis=1).astype(np.int64)


@_njit
def conjugacy_labels_nb(table, inverse):
    n = table.shape[0]
    out = np.empty(n, dtype=np.int64)
    for g in range(n):
        best = g
        for h in range(n):
            c = table[inverse[h], table[g, h]]
            if c < best:
                best = c
        out[g] = best
    return out


# -- table axioms ------------------------------------------------------------


def is_associative_np(table):
    left = table[table, :]  # [a, b, c] -> (ab)c
    right = table[:, table]  # [a, b, c] -> a(bc)
    return bool((left == right).all())


@_njit
def is_associative_nb(table):
    n = table.shape[0]
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    return False
    return True


# -- semidirect products G0 x| Z/n -------------------------------------------
# Element i*n0 + g stands for tau^i g, multiplied by (tau^a g)(tau^b h) =
# tau^(a+b) beta^b(g) h.  beta_powers[j] is beta^j as a permutation of G0.


def semidirect_table_np(table0, beta_powers, n):
    n0 = table0.shape[0]
    order_beta = beta_powers.shape[0]
    a = np.repeat(np.arange(n), n0)
    g = np.tile(np.arange(n0), n)
    A, B = np.meshgrid(a, a, indexing="ij")
    G, H = np.meshgrid(g, g, indexing="ij")
    moved = beta_powers[B % order_beta, G]
    return (((A + B) % n) * n0 + table0[moved, H]).astype(np.int64)


@_njit
def semidirect_table_nb(table0, beta_powers, n):
    n0 = table0.shape[0]
    order_beta = beta_powers.shape[0]
    size = n * n0
    out = np.empty((size, size), dtype=np.int64)
    for x in range(size):
        a, g = x // n0, x % n0
        for y in range(size):
            b, h = y // n0, y % n0
            out[x, y] = ((a + b) % n) * n0 + table0[beta_powers[b % order_beta, g], h]
    return out


# -- marked-group canonical numbering ----------------------------------------


def bfs_order_np(table, gens):
    n = table.shape[0]
    order = [0]
    pos = np.full(n, -1, dtype=np.int64)
    pos[0] = 0
    head = 0
    while head < len(order):
        e = order[head]
        head += 1
        for g in gens:
            f = int(table[e, g])
            if pos[f] < 0:
                pos[f] = len(order)
                order.append(f)
    return np.asarray(order, dtype=np.int64)


@_njit
def bfs_order_nb(table, gens):
    n = table.shape[0]
    pos = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    order[0] = 0
    pos[0] = 0
    head, tail = 0, 1
    while head < tail:
        e = order[head]
        head += 1
        for g in gens:
            f = table[e, g]
            if pos[f] < 0:
                pos[f] = tail
                order[tail] = f
                tail += 1
    return order[:tail].copy()


# -- extending a generator assignment to an endomorphism ---------------------
# Returns the element map as an array, or an array filled with -1 when the
# assignment gens[j] -> imgs[j] does not extend to a homomorphism.


def extend_hom_np(table, gens, imgs):
    n = table.shape[0]
    fmap = np.full(n, -1, dtype=np.int64)
    fmap[0] = 0
    order = [0]
    head = 0
    while head < len(order):
        e = order[head]
        head += 1
        for j in range(len(gens)):
            f = int(table[e, gens[j]])
            if fmap[f] < 0:
                fmap[f] = table[fmap[e], imgs[j]]
                order.append(f)
    if (fmap < 0).any():
        return np.full(n, -1, dtype=np.int64)
    elems = np.arange(n)
    for j in range(len(gens)):
        if not (fmap[table[elems, gens[j]]] == table[fmap, imgs[j]]).all():
            return np.full(n, -1, dtype=np.int64)
    return fmap


@_njit
def extend_hom_nb(table, gens, imgs):
    n = table.shape[0]
    fmap = np.full(n, -1, dtype=np.int64)
    fmap[0] = 0
    queue = np.empty(n, dtype=np.int64)
    queue[0] = 0
    head, tail = 0, 1
    while head < tail:
        e = queue[head]
        head += 1
        for j in range(gens.shape[0]):
            f = table[e, gens[j]]
            if fmap[f] < 0:
                fmap[f] = table[fmap[e], imgs[j]]
                queue[tail] = f
                tail += 1
    if tail < n:
        fmap[:] = -1
        return fmap
    for e in range(n):
        for j in range(gens.shape[0]):
            if fmap[table[e, gens[j]]] != table[fmap[e], imgs[j]]:
                fmap[:] = -1
                return fmap
    return fmap


# -- dispatch ----------------------------------------------------------------


def _dispatch(name):
    np_fn = globals()[name + "_np"]
    nb_fn = globals()[name + "_nb"]

    def call(*args):
        return nb_fn(*args) if USE_NUMBA else np_fn(*args)

    call.__name__ = name
    return call


eval_words = _dispatch("eval_words")
generated_sizes = _dispatch("generated_sizes")
conjugacy_labels = _dispatch("conjugacy_labels")
is_associative = _dispatch("is_associative")
semidirect_table = _dispatch("semidirect_table")
bfs_order = _dispatch("bfs_order")
extend_hom = _dispatch("extend_hom")

KERNELS = (
    "eval_words",
    "generated_sizes",
    "conjugacy_labels",
    "is_associative",
    "semidirect_table",
    "bfs_order",
    "extend_hom",
)
