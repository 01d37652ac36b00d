# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled iteration kernels; same encoding and API as ``_kernels_py``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

DIVERGE = -1


def exit_code(long payload):
    return -payload - 1


cdef long* _load(object code, Py_ssize_t* n_out) except NULL:
    cdef Py_ssize_t n = len(code)
    cdef Py_ssize_t i
    cdef long* buf = <long*> malloc((n if n > 0 else 1) * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            buf[i] = code[i]
            if buf[i] >= n:
                raise IndexError(f"target {buf[i]} outside 0..{n - 1}")
    except BaseException:
        free(buf)
        raise
    n_out[0] = n
    return buf


def iterate_from(object code, long start):
    cdef Py_ssize_t n
    cdef long* buf = _load(code, &n)
    cdef unsigned char* seen
    cdef long s = start, c, out = DIVERGE
    try:
        if not 0 <= start < n:
            raise IndexError(start)
        seen = <unsigned char*> malloc(n)
        if seen == NULL:
            raise MemoryError()
        memset(seen, 0, n)
        while True:
            if seen[s]:
                out = -1
                break
            seen[s] = 1
            c = buf[s]
            if c < 0:
                out = -c - 1
                break
            s = c
        free(seen)
        return out
    finally:
        free(buf)


def iterate_all(object code):
    cdef Py_ssize_t n
    cdef long* buf = _load(code, &n)
    cdef long* result = NULL
    cdef long* path = NULL
    cdef unsigned char* mark = NULL
    cdef Py_ssize_t start, p, depth
    cdef long s, c, value
    try:
        result = <long*> malloc((n if n > 0 else 1) * sizeof(long))
        path = <long*> malloc((n if n > 0 else 1) * sizeof(long))
        mark = <unsigned char*> malloc(n if n > 0 else 1)
        if result == NULL or path == NULL or mark == NULL:
            raise MemoryError()
        memset(mark, 0, n)
        for start in range(n):
            if mark[start]:
                continue
            s = start
            depth = 0
            while True:
                if mark[s] == 2:
                    value = result[s]
                    break
                if mark[s] == 1:
                    value = -1
                    break
                mark[s] = 1
                path[depth] = s
                depth += 1
                c = buf[s]
                if c < 0:
                    value = -c - 1
                    break
                s = c
            for p in range(depth):
                result[path[p]] = value
                mark[path[p]] = 2
        return [result[p] for p in range(n)]
    finally:
        free(buf)
        free(result)
        free(path)
        free(mark)


def bounded_from(object code, long start, long fuel):
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    cdef Py_ssize_t n
    cdef long* buf = _load(code, &n)
    cdef long s = start, c, k
    try:
        if fuel > 0 and not 0 <= start < n:
            raise IndexError(start)
        for k in range(fuel):
            c = buf[s]
            if c < 0:
                return -c - 1
            s = c
        return DIVERGE
    finally:
        free(buf)


def bounded_chain(object code, long start, long n_max):
    cdef Py_ssize_t n
    cdef long* buf = _load(code, &n)
    cdef long s = start, c, k, j
    chain = [DIVERGE] * (n_max + 1)
    try:
        if n_max > 0 and not 0 <= start < n:
            raise IndexError(start)
        for k in range(n_max):
            c = buf[s]
            if c < 0:
                for j in range(k + 1, n_max + 1):
                    chain[j] = -c - 1
                break
            s = c
        return chain
    finally:
        free(buf)
