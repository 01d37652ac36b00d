"""Pure-Python iteration kernels (fallback for the compiled ``_kernels``).

A loop body over states ``0..n-1`` is encoded as a sequence of ints:
``code[s] >= 0`` is ``Right(code[s])``, ``code[s] < 0`` is an exit carrying
payload index ``-code[s] - 1``. Kernels return payload indices, or
``DIVERGE`` (-1) when the path revisits a state.
"""

DIVERGE = -1


def exit_code(payload):
    return -payload - 1


def iterate_from(code, start):
    n = len(code)
    if not 0 <= start < n:
        raise IndexError(start)
    seen = bytearray(n)
    s = start
    while True:
        if seen[s]:
            return DIVERGE
        seen[s] = 1
        c = code[s]
        if c < 0:
            return -c - 1
        s = c


def iterate_all(code):
    n = len(code)
    result = [DIVERGE] * n
    mark = bytearray(n)  # 0 fresh, 1 on current path, 2 resolved
    path = []
    for start in range(n):
        if mark[start]:
            continue
        s = start
        while True:
            if mark[s] == 2:
                value = result[s]
                break
            if mark[s] == 1:
                value = DIVERGE
                break
            mark[s] = 1
            path.append(s)
            c = code[s]
            if c < 0:
                value = -c - 1
                break
            s = c
        for p in path:
            result[p] = value
            mark[p] = 2
        path.clear()
    return result


def bounded_from(code, start, fuel):
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    s = start
    for _ in range(fuel):
        c = code[s]
        if c < 0:
            return -c - 1
        s = c
    return DIVERGE


def bounded_chain(code, start, n_max):
    """Bounded iterates for every fuel ``0..n_max`` in one pass."""
    chain = [DIVERGE] * (n_max + 1)
    s = start
    for k in range(n_max):
        c = code[s]
        if c < 0:
            payload = -c - 1
            for n in range(k + 1, n_max + 1):
                chain[n] = payload
            break
        s = c
    return chain
