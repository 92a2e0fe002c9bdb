"""Pure-Python kernels. Same signatures and results as the compiled ``_ckernels``.

Tables are 2-D integer arrays. In category tables ``-1`` marks a
non-composable pair and ``-2`` a product outside the truncation window.
"""
import numpy as np

UNDEFINED = -1
OVERFLOW = -2


def find_nonassociative(table):
    """First (a, b, c) with (ab)c != a(bc), or None."""
    n = table.shape[0]
    for a in range(n):
        row = table[a]
        left = table[row]          # left[b, c] = (ab)c
        right = row[table]         # right[b, c] = a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = bad[0]
            return (a, int(b), int(c))
    return None


def natural_leq_matrix(table, lam):
    """leq[s, t] is True iff s = t lam(s)."""
    n = table.shape[0]
    prod = table[:, lam]           # prod[t, s] = t lam(s)
    return prod.T == np.arange(n)[:, None]


def find_ample_violation(table, proj):
    """First (s, t, u) with st = su but proj(s)t != proj(s)u, or None.

    With ``proj = lam`` this tests left ampleness. Passing the transposed
    table and ``rho`` tests right ampleness.
    """
    n = table.shape[0]
    for s in range(n):
        row = table[s]
        prow = table[proj[s]]
        first = {}
        for t in range(n):
            v = int(row[t])
            u = first.setdefault(v, t)
            if u != t and prow[u] != prow[t]:
                return (s, u, t)
    return None


def find_order_split_violation(table, lam, rho, leq):
    """First (s, t, y) breaking
    rho(y) <= lam(st)  <=>  rho(y) <= lam(t) and rho(ty) <= lam(s)."""
    n = table.shape[0]
    rho_y = rho
    for s in range(n):
        for t in range(n):
            st = table[s, t]
            lhs = leq[rho_y, lam[st]]
            rhs = leq[rho_y, lam[t]] & leq[rho[table[t]], lam[s]]
            bad = np.nonzero(lhs != rhs)[0]
            if len(bad):
                return (s, t, int(bad[0]))
    return None


def find_category_assoc_violation(comp):
    """Return (witness, skipped). Triples touching the overflow marker are skipped."""
    n = comp.shape[0]
    skipped = 0
    for a in range(n):
        for b in np.nonzero(comp[a] != UNDEFINED)[0]:
            ab = comp[a, b]
            for c in np.nonzero(comp[b] != UNDEFINED)[0]:
                bc = comp[b, c]
                if ab < 0 or bc < 0:
                    skipped += 1
                    continue
                x = comp[ab, c]
                y = comp[a, bc]
                if x == OVERFLOW or y == OVERFLOW:
                    skipped += 1
                    continue
                if x != y or x < 0:
                    return (a, int(b), int(c)), skipped
    return None, skipped


def find_left_cancel_violation(comp):
    """Return ((x, y, w), skipped) with xy = xw and y != w, or (None, skipped)."""
    n = comp.shape[0]
    skipped = 0
    for x in range(n):
        seen = {}
        for y in range(n):
            z = comp[x, y]
            if z == UNDEFINED:
                continue
            if z == OVERFLOW:
                skipped += 1
                continue
            w = seen.setdefault(int(z), y)
            if w != y:
                return (x, w, y), skipped
    return None, skipped


def conv_accumulate(xs, ys, zs, f, g, out):
    """out[z] += f[x] g[y] over the given composable triples (complex128)."""
    np.add.at(out, zs, f[xs] * g[ys])
