# cython: language_level=3
"""Compiled text-scanning kernels.

Must stay behaviourally identical to ``alignru._kernels_py``; the per-char
predicates below are the C equivalents of ``str.isspace``/``isupper``/
``isdigit`` for single characters.
"""

from cpython.unicode cimport (
    Py_UNICODE_ISDIGIT,
    Py_UNICODE_ISSPACE,
    Py_UNICODE_ISUPPER,
)


def boundary_candidates(str text):
    """Indices of terminal punctuation followed by whitespace and then an
    uppercase letter or digit."""
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i, j
    cdef Py_UCS4 ch, nxt
    out = []
    for i in range(n):
        ch = text[i]
        if ch != u'.' and ch != u'!' and ch != u'?' and ch != u'…':
            continue
        j = i + 1
        if j >= n or not Py_UNICODE_ISSPACE(<Py_UCS4> text[j]):
            continue
        while j < n and Py_UNICODE_ISSPACE(<Py_UCS4> text[j]):
            j += 1
        if j >= n:
            continue
        nxt = text[j]
        if Py_UNICODE_ISUPPER(nxt) or Py_UNICODE_ISDIGIT(nxt):
            out.append(i)
    return out


def count_ws_tokens(str text):
    """Number of whitespace-separated tokens; equals ``len(text.split())``."""
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i
    cdef Py_ssize_t count = 0
    cdef bint in_token = False
    for i in range(n):
        if Py_UNICODE_ISSPACE(<Py_UCS4> text[i]):
            in_token = False
        elif not in_token:
            in_token = True
            count += 1
    return count
