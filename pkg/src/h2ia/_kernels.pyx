# cython: boundscheck=False, wraparound=False
"""Compiled word kernels; same contract as ``_kernels_py``."""

from cpython.mem cimport PyMem_Malloc, PyMem_Realloc, PyMem_Free
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF


cdef struct Buf:
    int *data
    Py_ssize_t size
    Py_ssize_t cap


cdef int buf_init(Buf *b, Py_ssize_t cap) except -1:
    if cap < 16:
        cap = 16
    b.data = <int *> PyMem_Malloc(cap * sizeof(int))
    if b.data == NULL:
        raise MemoryError()
    b.size = 0
    b.cap = cap
    return 0


cdef inline int buf_push(Buf *b, int x) except -1:
    cdef int *grown
    if b.size > 0 and b.data[b.size - 1] == -x:
        b.size -= 1
        return 0
    if b.size == b.cap:
        grown = <int *> PyMem_Realloc(b.data, 2 * b.cap * sizeof(int))
        if grown == NULL:
            raise MemoryError()
        b.data = grown
        b.cap *= 2
    b.data[b.size] = x
    b.size += 1
    return 0


cdef tuple buf_tuple(Buf *b):
    cdef tuple out = PyTuple_New(b.size)
    cdef Py_ssize_t i
    cdef object item
    for i in range(b.size):
        item = b.data[i]
        Py_INCREF(item)
        PyTuple_SET_ITEM(out, i, item)
    return out


def reduce_word(seq):
    cdef Buf b
    buf_init(&b, len(seq))
    try:
        for x in seq:
            buf_push(&b, x)
        return buf_tuple(&b)
    finally:
        PyMem_Free(b.data)


def invert_word(w):
    w = tuple(w)
    cdef Py_ssize_t n = len(w)
    cdef tuple out = PyTuple_New(n)
    cdef Py_ssize_t i
    cdef object item
    for i in range(n):
        item = -(<int> w[n - 1 - i])
        Py_INCREF(item)
        PyTuple_SET_ITEM(out, i, item)
    return out


cdef tuple _substitute(tuple images, tuple w):
    cdef Buf b
    cdef int x, y
    cdef Py_ssize_t j
    cdef tuple piece
    buf_init(&b, 4 * len(w))
    try:
        for x in w:
            if x > 0:
                piece = <tuple> images[x - 1]
                for j in range(len(piece)):
                    buf_push(&b, <int> piece[j])
            else:
                piece = <tuple> images[-x - 1]
                for j in range(len(piece) - 1, -1, -1):
                    y = piece[j]
                    buf_push(&b, -y)
        return buf_tuple(&b)
    finally:
        PyMem_Free(b.data)


def substitute(images, w):
    return _substitute(tuple(images), tuple(w))


def compose_chain(images, updates):
    cdef tuple current = tuple(images)
    cdef list nxt
    cdef int idx
    for update in updates:
        nxt = list(current)
        for idx, img in update:
            nxt[idx - 1] = _substitute(current, <tuple> img)
        current = tuple(nxt)
    return current
