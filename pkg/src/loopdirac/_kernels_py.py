"""Pure-Python fallback for the graded character convolution kernel.

Entries map (energy, parity, *coords) to an integer multiplicity.  The
convolution truncates at a total energy cap.  The compiled extension in
``_kernels.pyx`` implements the same contract.
"""

from __future__ import annotations

COMPILED = False


def graded_convolve(items_a, items_b, cap):
    """Convolve two graded multisets, dropping products above the energy cap.

    ``items_a``/``items_b``: iterables of ((n, parity, coords...), mult).
    Returns a dict with the same key layout.
    """
    by_energy: dict[int, list] = {}
    for key, mult in items_b:
        by_energy.setdefault(key[0], []).append((key, mult))
    out: dict[tuple, int] = {}
    get = out.get
    for ka, ma in items_a:
        na = ka[0]
        pa = ka[1]
        ca = ka[2:]
        for nb in range(cap - na + 1):
            bucket = by_energy.get(nb)
            if not bucket:
                continue
            for kb, mb in bucket:
                key = (na + nb, pa ^ kb[1]) + tuple(x + y for x, y in zip(ca, kb[2:]))
                out[key] = get(key, 0) + ma * mb
                get = out.get
    return out
