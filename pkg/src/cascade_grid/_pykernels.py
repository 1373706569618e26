"""Pure-Python implementations of the hot loops.

Same signatures and bit-identical results as the compiled ``_ckernels``
module. Arrays come in as numpy ``int64`` (indices, weights) and ``uint8``
(alive masks); masks are updated in place.
"""

import numpy as np


def component_labels(indptr, indices, alive):
    """Label connected components over alive nodes by breadth-first search.

    Components are numbered in order of their smallest node index. Dead
    nodes get label -1. Returns ``(labels, sizes)``.
    """
    n = len(alive)
    ptr = indptr.tolist()
    nbr = indices.tolist()
    live = alive.tolist()
    labels = [-1] * n
    sizes = []
    for s in range(n):
        if not live[s] or labels[s] >= 0:
            continue
        lab = len(sizes)
        labels[s] = lab
        queue = [s]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for j in range(ptr[v], ptr[v + 1]):
                w = nbr[j]
                if live[w] and labels[w] < 0:
                    labels[w] = lab
                    queue.append(w)
        sizes.append(len(queue))
    return np.array(labels, dtype=np.int64), np.array(sizes, dtype=np.int64)


def prune_to_giant(indptr, indices, alive):
    """Kill every alive node outside the largest component; return the count.

    Ties go to the component holding the smallest node index.
    """
    labels, sizes = component_labels(indptr, indices, alive)
    if len(sizes) <= 1:
        return 0
    best = int(np.argmax(sizes))
    removed = 0
    for i, lab in enumerate(labels.tolist()):
        if lab >= 0 and lab != best:
            alive[i] = 0
            removed += 1
    return removed


def alive_degrees(indptr, indices, alive):
    n = len(alive)
    ptr = indptr.tolist()
    nbr = indices.tolist()
    live = alive.tolist()
    out = [0] * n
    for v in range(n):
        if live[v]:
            out[v] = sum(1 for j in range(ptr[v], ptr[v + 1]) if live[nbr[j]])
    return np.array(out, dtype=np.int64)


def fail_unsupported_power(sup_indptr, sup_indices, comm_alive, power_alive):
    ptr = sup_indptr.tolist()
    sup = sup_indices.tolist()
    comm = comm_alive.tolist()
    removed = 0
    for b in range(len(power_alive)):
        if not power_alive[b]:
            continue
        if not any(comm[sup[j]] for j in range(ptr[b], ptr[b + 1])):
            power_alive[b] = 0
            removed += 1
    return removed


def fail_unsupported_comm(support_of_comm, power_alive, comm_alive):
    supporter = support_of_comm.tolist()
    power = power_alive.tolist()
    removed = 0
    for a in range(len(comm_alive)):
        if comm_alive[a] and not power[supporter[a]]:
            comm_alive[a] = 0
            removed += 1
    return removed


def weighted_sample(weights, uniforms):
    """Successive weighted sampling without replacement on a Fenwick tree.

    Each uniform in ``[0, 1)`` draws one item with probability
    ``weight / remaining total``; the item's weight then drops to zero.
    Integer weights keep the arithmetic exact. Sampling stops early when
    the remaining total weight hits zero, so the result may be shorter
    than ``uniforms``.
    """
    n = len(weights)
    w = weights.tolist()
    tree = [0] * (n + 1)
    for i in range(1, n + 1):
        tree[i] += w[i - 1]
        j = i + (i & -i)
        if j <= n:
            tree[j] += tree[i]
    total = sum(w)
    top = 1
    while top * 2 <= n:
        top *= 2

    picks = []
    for u in uniforms.tolist():
        if total <= 0:
            break
        target = int(u * total)
        if target >= total:
            target = total - 1
        pos = 0
        step = top
        while step:
            nxt = pos + step
            if nxt <= n and tree[nxt] <= target:
                pos = nxt
                target -= tree[nxt]
            step >>= 1
        picks.append(pos)
        wi = w[pos]
        w[pos] = 0
        total -= wi
        i = pos + 1
        while i <= n:
            tree[i] -= wi
            i += i & -i
    return np.array(picks, dtype=np.int64)
