"""Array-based weighted blossom kernel (Edmonds' primal-dual method).

Maximum-weight maximum-cardinality matching on a general graph, in the
classic O(n^3) formulation that keeps every structure in flat integer arrays
so that it compiles under numba. Vertices are ``0..n-1``; non-trivial
blossoms reuse ids ``n..2n-1``. Edge ``k`` owns the endpoint ids ``2k`` and
``2k+1``; ``endpoint[2k]`` is its first vertex, ``endpoint[2k+1]`` its second.

Vertex and blossom dual variables are stored doubled so that slacks need no
division. At termination they form a feasible dual solution for the
perfect-matching LP (vertex duals unrestricted in sign, blossom duals
non-negative), which callers use as an optimality certificate.
"""

import numpy as np

from ._jit import jit

# rows of the integer state table
LABEL = 0
LABELEND = 1
INBLOSSOM = 2
PARENT = 3
BASE = 4
BESTEDGE = 5
MATE = 6
HAS_BEST_LIST = 7
N_ROWS = 8


@jit
def _slack(k, endpoint, wts, dualvar):
    return dualvar[endpoint[2 * k]] + dualvar[endpoint[2 * k + 1]] - 2.0 * wts[k]


@jit
def _to_array(values):
    out = np.empty(len(values), np.int64)
    for i in range(len(values)):
        out[i] = values[i]
    return out


@jit
def _index_of(arr, x):
    for i in range(len(arr)):
        if arr[i] == x:
            return i
    return -1


@jit
def _leaves(b, n, childs):
    out = [b]
    if b < n:
        return _to_array(out)
    out.pop()
    stack = [b]
    while len(stack) > 0:
        t = stack.pop()
        if t < n:
            out.append(t)
        else:
            ch = childs[t]
            for i in range(len(ch) - 1, -1, -1):
                stack.append(ch[i])
    return _to_array(out)


@jit
def _assign_label(w, t, p, n, st, endpoint, childs, queue):
    while True:
        b = st[INBLOSSOM, w]
        st[LABEL, w] = t
        st[LABEL, b] = t
        st[LABELEND, w] = p
        st[LABELEND, b] = p
        st[BESTEDGE, w] = -1
        st[BESTEDGE, b] = -1
        if t == 1:
            if b < n:
                queue.append(b)
            else:
                for v in _leaves(b, n, childs):
                    queue.append(v)
            return
        # T-blossom: its base is matched; the mate becomes S
        mp = st[MATE, st[BASE, b]]
        w = endpoint[mp]
        t = 1
        p = mp ^ 1


@jit
def _scan_blossom(v, w, st, endpoint):
    """Trace back from v and w; return the new blossom base or -1 on an
    augmenting path."""
    path = [v]
    path.pop()
    base = -1
    while v != -1 or w != -1:
        b = st[INBLOSSOM, v]
        if st[LABEL, b] & 4:
            base = st[BASE, b]
            break
        path.append(b)
        st[LABEL, b] = 5
        if st[LABELEND, b] == -1:
            v = -1
        else:
            v = endpoint[st[LABELEND, b]]
            b = st[INBLOSSOM, v]
            v = endpoint[st[LABELEND, b]]
        if w != -1:
            v, w = w, v
    for b in path:
        st[LABEL, b] = 1
    return base


@jit
def _consider_best(kk, b, bestedgeto, st, endpoint, wts, dualvar):
    i = endpoint[2 * kk]
    j = endpoint[2 * kk + 1]
    if st[INBLOSSOM, j] == b:
        i, j = j, i
    bj = st[INBLOSSOM, j]
    if bj != b and st[LABEL, bj] == 1:
        cur = bestedgeto[bj]
        if cur == -1 or _slack(kk, endpoint, wts, dualvar) < _slack(cur, endpoint, wts, dualvar):
            bestedgeto[bj] = kk


@jit
def _add_blossom(base, k, n, st, dualvar, endpoint, wts, nb_ptr, nb_end,
                 childs, endps, best_lists, unused, queue):
    v = endpoint[2 * k]
    w = endpoint[2 * k + 1]
    bb = st[INBLOSSOM, base]
    bv = st[INBLOSSOM, v]
    bw = st[INBLOSSOM, w]
    b = unused.pop()
    st[BASE, b] = base
    st[PARENT, b] = -1
    st[PARENT, bb] = b

    path = [bb]
    path.pop()
    eps = [k]
    eps.pop()
    while bv != bb:
        st[PARENT, bv] = b
        path.append(bv)
        eps.append(st[LABELEND, bv])
        v = endpoint[st[LABELEND, bv]]
        bv = st[INBLOSSOM, v]
    path.append(bb)
    path.reverse()
    eps.reverse()
    eps.append(2 * k)
    while bw != bb:
        st[PARENT, bw] = b
        path.append(bw)
        eps.append(st[LABELEND, bw] ^ 1)
        w = endpoint[st[LABELEND, bw]]
        bw = st[INBLOSSOM, w]

    st[LABEL, b] = 1
    st[LABELEND, b] = st[LABELEND, bb]
    dualvar[b] = 0.0
    childs[b] = _to_array(path)
    endps[b] = _to_array(eps)
    for lv in _leaves(b, n, childs):
        if st[LABEL, st[INBLOSSOM, lv]] == 2:
            # former T-vertex is now inside an S-blossom
            queue.append(lv)
        st[INBLOSSOM, lv] = b

    bestedgeto = np.full(2 * n, -1, np.int64)
    for sub in path:
        if st[HAS_BEST_LIST, sub] == 0:
            for lv in _leaves(sub, n, childs):
                for idx in range(nb_ptr[lv], nb_ptr[lv + 1]):
                    _consider_best(nb_end[idx] // 2, b, bestedgeto, st, endpoint, wts, dualvar)
        else:
            for kk in best_lists[sub]:
                _consider_best(kk, b, bestedgeto, st, endpoint, wts, dualvar)
        st[HAS_BEST_LIST, sub] = 0
        best_lists[sub] = np.empty(0, np.int64)
        st[BESTEDGE, sub] = -1

    cnt = 0
    for x in bestedgeto:
        if x != -1:
            cnt += 1
    lst = np.empty(cnt, np.int64)
    cnt = 0
    for x in bestedgeto:
        if x != -1:
            lst[cnt] = x
            cnt += 1
    best_lists[b] = lst
    st[HAS_BEST_LIST, b] = 1
    mybest = -1
    for kk in lst:
        if mybest == -1 or _slack(kk, endpoint, wts, dualvar) < _slack(mybest, endpoint, wts, dualvar):
            mybest = kk
    st[BESTEDGE, b] = mybest


@jit
def _expand_blossom(b, endstage, n, st, dualvar, allowedge, endpoint,
                    childs, endps, best_lists, unused, queue):
    ch = childs[b]
    for s in ch:
        st[PARENT, s] = -1
        if s < n:
            st[INBLOSSOM, s] = s
        elif endstage and dualvar[s] == 0.0:
            _expand_blossom(s, endstage, n, st, dualvar, allowedge, endpoint,
                            childs, endps, best_lists, unused, queue)
        else:
            for lv in _leaves(s, n, childs):
                st[INBLOSSOM, lv] = s

    if (not endstage) and st[LABEL, b] == 2:
        # expanding a T-blossom mid-stage: relabel the alternating path
        # from the entry child to the base
        ep = endps[b]
        entrychild = st[INBLOSSOM, endpoint[st[LABELEND, b] ^ 1]]
        j = _index_of(ch, entrychild)
        if j & 1:
            j -= len(ch)
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        p = st[LABELEND, b]
        while j != 0:
            st[LABEL, endpoint[p ^ 1]] = 0
            st[LABEL, endpoint[ep[j - endptrick] ^ endptrick ^ 1]] = 0
            _assign_label(endpoint[p ^ 1], 2, p, n, st, endpoint, childs, queue)
            allowedge[ep[j - endptrick] // 2] = True
            j += jstep
            p = ep[j - endptrick] ^ endptrick
            allowedge[p // 2] = True
            j += jstep
        bv = ch[j]
        st[LABEL, endpoint[p ^ 1]] = 2
        st[LABEL, bv] = 2
        st[LABELEND, endpoint[p ^ 1]] = p
        st[LABELEND, bv] = p
        st[BESTEDGE, bv] = -1
        j += jstep
        while ch[j] != entrychild:
            bv = ch[j]
            if st[LABEL, bv] == 1:
                j += jstep
                continue
            found = -1
            for lv in _leaves(bv, n, childs):
                if st[LABEL, lv] != 0:
                    found = lv
                    break
            if found != -1:
                st[LABEL, found] = 0
                st[LABEL, endpoint[st[MATE, st[BASE, bv]]]] = 0
                _assign_label(found, 2, st[LABELEND, found], n, st, endpoint, childs, queue)
            j += jstep

    st[LABEL, b] = -1
    st[LABELEND, b] = -1
    childs[b] = np.empty(0, np.int64)
    endps[b] = np.empty(0, np.int64)
    st[BASE, b] = -1
    best_lists[b] = np.empty(0, np.int64)
    st[HAS_BEST_LIST, b] = 0
    st[BESTEDGE, b] = -1
    unused.append(b)


@jit
def _augment_blossom(b, v, n, st, endpoint, childs, endps):
    t = v
    while st[PARENT, t] != b:
        t = st[PARENT, t]
    if t >= n:
        _augment_blossom(t, v, n, st, endpoint, childs, endps)
    ch = childs[b]
    ep = endps[b]
    i = _index_of(ch, t)
    j = i
    if i & 1:
        j -= len(ch)
        jstep = 1
        endptrick = 0
    else:
        jstep = -1
        endptrick = 1
    while j != 0:
        j += jstep
        t = ch[j]
        p = ep[j - endptrick] ^ endptrick
        if t >= n:
            _augment_blossom(t, endpoint[p], n, st, endpoint, childs, endps)
        j += jstep
        t = ch[j]
        if t >= n:
            _augment_blossom(t, endpoint[p ^ 1], n, st, endpoint, childs, endps)
        st[MATE, endpoint[p]] = p ^ 1
        st[MATE, endpoint[p ^ 1]] = p
    childs[b] = np.concatenate((ch[i:], ch[:i]))
    endps[b] = np.concatenate((ep[i:], ep[:i]))
    st[BASE, b] = st[BASE, childs[b][0]]


@jit
def _augment_matching(k, n, st, endpoint, childs, endps):
    for side in range(2):
        if side == 0:
            s = endpoint[2 * k]
            p = 2 * k + 1
        else:
            s = endpoint[2 * k + 1]
            p = 2 * k
        while True:
            bs = st[INBLOSSOM, s]
            if bs >= n:
                _augment_blossom(bs, s, n, st, endpoint, childs, endps)
            st[MATE, s] = p
            if st[LABELEND, bs] == -1:
                break
            t = endpoint[st[LABELEND, bs]]
            bt = st[INBLOSSOM, t]
            s = endpoint[st[LABELEND, bt]]
            j = endpoint[st[LABELEND, bt] ^ 1]
            if bt >= n:
                _augment_blossom(bt, j, n, st, endpoint, childs, endps)
            st[MATE, j] = st[LABELEND, bt]
            p = st[LABELEND, bt] ^ 1


@jit
def blossom_kernel(n, endpoint, wts, nb_ptr, nb_end):
    """Maximum-weight maximum-cardinality matching.

    Returns ``(mate, dualvar, parent, base)``: ``mate[v]`` is the matched
    vertex or -1, ``dualvar`` the doubled duals (vertices then blossom ids),
    ``parent``/``base`` the final blossom forest (``base[b] == -1`` marks an
    unused blossom id).
    """
    m = len(wts)
    maxweight = 0.0
    for k in range(m):
        if wts[k] > maxweight:
            maxweight = wts[k]

    st = np.full((N_ROWS, 2 * n), -1, np.int64)
    st[LABEL, :] = 0
    st[HAS_BEST_LIST, :] = 0
    for v in range(n):
        st[INBLOSSOM, v] = v
        st[BASE, v] = v
    dualvar = np.zeros(2 * n)
    dualvar[:n] = maxweight
    allowedge = np.zeros(m, np.bool_)
    childs = [np.empty(0, np.int64) for _ in range(2 * n)]
    endps = [np.empty(0, np.int64) for _ in range(2 * n)]
    best_lists = [np.empty(0, np.int64) for _ in range(2 * n)]
    unused = [n + i for i in range(n)]
    queue = [0]
    queue.pop()

    for _stage in range(n):
        st[LABEL, :] = 0
        st[BESTEDGE, :] = -1
        for b in range(n, 2 * n):
            if st[HAS_BEST_LIST, b] == 1:
                best_lists[b] = np.empty(0, np.int64)
                st[HAS_BEST_LIST, b] = 0
        allowedge[:] = False
        while len(queue) > 0:
            queue.pop()

        for v in range(n):
            if st[MATE, v] == -1 and st[LABEL, st[INBLOSSOM, v]] == 0:
                _assign_label(v, 1, -1, n, st, endpoint, childs, queue)

        augmented = False
        while True:
            while len(queue) > 0 and not augmented:
                v = queue.pop()
                for idx in range(nb_ptr[v], nb_ptr[v + 1]):
                    p = nb_end[idx]
                    k = p // 2
                    w = endpoint[p]
                    if st[INBLOSSOM, v] == st[INBLOSSOM, w]:
                        continue
                    kslack = 0.0
                    if not allowedge[k]:
                        kslack = _slack(k, endpoint, wts, dualvar)
                        if kslack <= 0.0:
                            allowedge[k] = True
                    if allowedge[k]:
                        bw_label = st[LABEL, st[INBLOSSOM, w]]
                        if bw_label == 0:
                            _assign_label(w, 2, p ^ 1, n, st, endpoint, childs, queue)
                        elif bw_label == 1:
                            base = _scan_blossom(v, w, st, endpoint)
                            if base >= 0:
                                _add_blossom(base, k, n, st, dualvar, endpoint, wts,
                                             nb_ptr, nb_end, childs, endps,
                                             best_lists, unused, queue)
                            else:
                                _augment_matching(k, n, st, endpoint, childs, endps)
                                augmented = True
                                break
                        elif st[LABEL, w] == 0:
                            # w sits in a T-blossom but was not reached itself
                            st[LABEL, w] = 2
                            st[LABELEND, w] = p ^ 1
                    elif st[LABEL, st[INBLOSSOM, w]] == 1:
                        b = st[INBLOSSOM, v]
                        cur = st[BESTEDGE, b]
                        if cur == -1 or kslack < _slack(cur, endpoint, wts, dualvar):
                            st[BESTEDGE, b] = k
                    elif st[LABEL, w] == 0:
                        cur = st[BESTEDGE, w]
                        if cur == -1 or kslack < _slack(cur, endpoint, wts, dualvar):
                            st[BESTEDGE, w] = k
            if augmented:
                break

            deltatype = -1
            delta = 0.0
            deltaedge = -1
            deltablossom = -1
            for v in range(n):
                if st[LABEL, st[INBLOSSOM, v]] == 0 and st[BESTEDGE, v] != -1:
                    d = _slack(st[BESTEDGE, v], endpoint, wts, dualvar)
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = st[BESTEDGE, v]
            for b in range(2 * n):
                if st[PARENT, b] == -1 and st[LABEL, b] == 1 and st[BESTEDGE, b] != -1:
                    d = _slack(st[BESTEDGE, b], endpoint, wts, dualvar) / 2.0
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = st[BESTEDGE, b]
            for b in range(n, 2 * n):
                if (st[BASE, b] >= 0 and st[PARENT, b] == -1 and st[LABEL, b] == 2
                        and (deltatype == -1 or dualvar[b] < delta)):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                # no augmenting path left: cardinality is maximal
                deltatype = 1
                delta = max(0.0, dualvar[:n].min())

            for v in range(n):
                lab = st[LABEL, st[INBLOSSOM, v]]
                if lab == 1:
                    dualvar[v] -= delta
                elif lab == 2:
                    dualvar[v] += delta
            for b in range(n, 2 * n):
                if st[BASE, b] >= 0 and st[PARENT, b] == -1:
                    if st[LABEL, b] == 1:
                        dualvar[b] += delta
                    elif st[LABEL, b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i = endpoint[2 * deltaedge]
                if st[LABEL, st[INBLOSSOM, i]] == 0:
                    i = endpoint[2 * deltaedge + 1]
                queue.append(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                queue.append(endpoint[2 * deltaedge])
            else:
                _expand_blossom(deltablossom, False, n, st, dualvar, allowedge,
                                endpoint, childs, endps, best_lists, unused, queue)

        if not augmented:
            break
        for b in range(n, 2 * n):
            if (st[PARENT, b] == -1 and st[BASE, b] >= 0 and st[LABEL, b] == 1
                    and dualvar[b] == 0.0):
                _expand_blossom(b, True, n, st, dualvar, allowedge,
                                endpoint, childs, endps, best_lists, unused, queue)

    mate = np.full(n, -1, np.int64)
    for v in range(n):
        if st[MATE, v] >= 0:
            mate[v] = endpoint[st[MATE, v]]
    return mate, dualvar, st[PARENT].copy(), st[BASE].copy()
