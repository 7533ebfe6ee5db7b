"""Pure-Python word kernels.

Words are tuples of nonzero ints: ``i`` is the basis letter x_i and ``-i`` its
inverse. Image tables are tuples of words, entry ``i - 1`` being the image of x_i.
The compiled module ``_kernels`` exposes the same four functions.
"""


def reduce_word(seq):
    out = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(w):
    return tuple(-x for x in reversed(w))


def substitute(images, w):
    out = []
    for x in w:
        if x > 0:
            piece = images[x - 1]
        else:
            piece = invert_word(images[-x - 1])
        for y in piece:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def compose_chain(images, updates):
    """Right-compose ``images`` with each sparse update in turn.

    An update is a tuple of ``(index, word)`` pairs giving the non-trivial basis
    images of a map; the result is images ∘ u1 ∘ u2 ∘ ... as an image table.
    """
    current = tuple(images)
    for update in updates:
        nxt = list(current)
        for idx, img in update:
            nxt[idx - 1] = substitute(current, img)
        current = tuple(nxt)
    return current
