"""Activation encodings that decide which gene slots are expressed.

Every encoding maps a row of small integers (the activation state) to a
selection, i.e. one 0-based subdivision option per component:

tags     one-hot flags per component, concatenated in catalog order
dv-int   one integer per component in [1, n_i]
dv-num   one integer in [1, Card(F_w)] indexing the whole configuration
dv-bin   per component, ceil(log2 n_i) bits holding the option index

The dimensional-variable encodings are varied by SBX and polynomial mutation
in a relaxed real interval widened by half a unit on each side, then rounded
and clipped (``dv-bin`` additionally wraps out-of-range codes modulo n_i).
"""

from __future__ import annotations

import math

import numpy as np

from ..catalog import ConfigurationSpace
from .operators import polynomial_mutation, sbx_crossover

__all__ = [
    "Encoding",
    "TagEncoding",
    "IntegerDVEncoding",
    "NumericIndexDVEncoding",
    "BinaryDVEncoding",
    "METHODS",
    "make_encoding",
    "tag_crossover",
    "tag_mutation",
    "dv_variation",
]


class Encoding:
    name = ""

    def __init__(self, space: ConfigurationSpace):
        self.space = space
        self.counts = np.array(space.counts, dtype=np.int64)

    @property
    def width(self) -> int:
        raise NotImplementedError

    @property
    def mutation_units(self) -> int:
        """Number of independently mutated activation variables."""
        return self.width

    def encode(self, selections) -> np.ndarray:
        raise NotImplementedError

    def decode(self, states) -> np.ndarray:
        raise NotImplementedError

    def is_valid(self, states) -> np.ndarray:
        raise NotImplementedError

    def random_selections(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Uniform over configurations: independent uniform option per component."""
        return np.floor(rng.random((n, len(self.counts))) * self.counts).astype(np.int64)

    def random(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.encode(self.random_selections(rng, n))

    def config_index(self, states) -> np.ndarray:
        sel = self.decode(states)
        idx = np.zeros(sel.shape[0], dtype=np.int64)
        for j, n in enumerate(self.counts):
            idx = idx * n + sel[:, j]
        return idx

    def crossover(self, a, b, rng, prob, **kw):
        raise NotImplementedError

    def mutate(self, states, rng, prob, **kw):
        raise NotImplementedError


class TagEncoding(Encoding):
    name = "tags"

    def __init__(self, space: ConfigurationSpace, n_points: int = 1):
        super().__init__(space)
        self.n_points = n_points
        self.starts = np.concatenate([[0], np.cumsum(self.counts)[:-1]]).astype(np.int64)
        self.group = np.repeat(np.arange(len(self.counts)), self.counts)

    @property
    def width(self) -> int:
        return int(self.counts.sum())

    @property
    def mutation_units(self) -> int:
        return len(self.counts)

    def encode(self, selections) -> np.ndarray:
        sel = np.atleast_2d(np.asarray(selections, dtype=np.int64))
        out = np.zeros((sel.shape[0], self.width), dtype=np.int64)
        rows = np.arange(sel.shape[0])[:, None]
        out[rows, self.starts[None, :] + sel] = 1
        return out

    def group_sums(self, states) -> np.ndarray:
        states = np.atleast_2d(states)
        return np.add.reduceat(states, self.starts, axis=1)

    def is_valid(self, states) -> np.ndarray:
        states = np.atleast_2d(np.asarray(states))
        binary = np.all((states == 0) | (states == 1), axis=1)
        return binary & np.all(self.group_sums(states) == 1, axis=1)

    def decode(self, states) -> np.ndarray:
        states = np.atleast_2d(np.asarray(states, dtype=np.int64))
        if not np.all(self.is_valid(states)):
            raise ValueError("tag vector is not one-hot per component")
        pos = np.arange(self.width)[None, :] - self.starts[self.group][None, :]
        return np.add.reduceat(states * pos, self.starts, axis=1)

    def crossover(self, a, b, rng, prob, n_points=None):
        """n-point crossover whose cut points lie only on component boundaries."""
        a = np.atleast_2d(np.asarray(a, dtype=np.int64))
        b = np.atleast_2d(np.asarray(b, dtype=np.int64))
        if not (np.all(self.is_valid(a)) and np.all(self.is_valid(b))):
            raise ValueError("tag crossover needs one-hot-valid parents")
        n_points = self.n_points if n_points is None else n_points
        n_comp = len(self.counts)
        do = rng.random(a.shape[0]) < prob
        # A cut after component c (1 <= c < n_comp) swaps the tails.
        keys = rng.random((a.shape[0], max(n_comp - 1, 0)))
        c1, c2 = a.copy(), b.copy()
        if n_comp < 2:
            return c1, c2
        k = min(n_points, n_comp - 1)
        cuts = np.argsort(keys, axis=1, kind="stable")[:, :k] + 1
        comp_swapped = np.zeros((a.shape[0], n_comp), dtype=bool)
        for j in range(k):
            comp_swapped ^= np.arange(n_comp)[None, :] >= cuts[:, j : j + 1]
        swap = comp_swapped[:, self.group] & do[:, None]
        c1[swap] = b[swap]
        c2[swap] = a[swap]
        return c1, c2

    def mutate(self, states, rng, prob):
        """Per component, with probability ``prob`` move the flag to another option."""
        sel = self.decode(states)
        hit = rng.random(sel.shape) < prob
        shift = np.floor(rng.random(sel.shape) * np.maximum(self.counts - 1, 1)).astype(np.int64) + 1
        new = np.where(hit & (self.counts > 1), (sel + shift) % self.counts, sel)
        return self.encode(new)


class _RelaxedDV(Encoding):
    """Shared relax-round-clip variation for integer-valued activation genes."""

    def _bounds(self):
        raise NotImplementedError

    def _repair(self, values: np.ndarray) -> np.ndarray:
        return values

    def _round(self, x):
        lo, hi = self._bounds()
        return np.clip(np.floor(x + 0.5), lo, hi).astype(np.int64)

    def crossover(self, a, b, rng, prob, eta_c=15.0, prob_var=0.5):
        a = np.atleast_2d(np.asarray(a, dtype=np.float64))
        b = np.atleast_2d(np.asarray(b, dtype=np.float64))
        lo, hi = self._bounds()
        do = rng.random(a.shape[0]) < prob
        c1, c2 = sbx_crossover(a, b, eta_c, prob_var, lo - 0.5, hi + 0.5, rng)
        c1 = np.where(do[:, None], c1, a)
        c2 = np.where(do[:, None], c2, b)
        return self._repair(self._round(c1)), self._repair(self._round(c2))

    def mutate(self, states, rng, prob, eta_m=20.0):
        x = np.atleast_2d(np.asarray(states, dtype=np.float64))
        lo, hi = self._bounds()
        y = polynomial_mutation(x, eta_m, prob, lo - 0.5, hi + 0.5, rng)
        return self._repair(self._round(y))


class IntegerDVEncoding(_RelaxedDV):
    name = "dv-int"

    @property
    def width(self) -> int:
        return len(self.counts)

    def _bounds(self):
        return np.ones_like(self.counts), self.counts

    def encode(self, selections):
        return np.atleast_2d(np.asarray(selections, dtype=np.int64)) + 1

    def decode(self, states):
        states = np.atleast_2d(np.asarray(states, dtype=np.int64))
        if not np.all(self.is_valid(states)):
            raise ValueError("dimensional variable out of range")
        return states - 1

    def is_valid(self, states):
        states = np.atleast_2d(np.asarray(states))
        return np.all((states >= 1) & (states <= self.counts), axis=1)


class NumericIndexDVEncoding(_RelaxedDV):
    name = "dv-num"

    @property
    def width(self) -> int:
        return 1

    def _bounds(self):
        return np.array([1]), np.array([self.space.size])

    def encode(self, selections):
        sel = np.atleast_2d(np.asarray(selections, dtype=np.int64))
        idx = np.zeros(sel.shape[0], dtype=np.int64)
        for j, n in enumerate(self.counts):
            idx = idx * n + sel[:, j]
        return idx[:, None] + 1

    def decode(self, states):
        states = np.atleast_2d(np.asarray(states, dtype=np.int64))
        if not np.all(self.is_valid(states)):
            raise ValueError("configuration index out of range")
        idx = states[:, 0] - 1
        out = np.empty((states.shape[0], len(self.counts)), dtype=np.int64)
        for j in range(len(self.counts) - 1, -1, -1):
            idx, out[:, j] = np.divmod(idx, self.counts[j])
        return out

    def is_valid(self, states):
        states = np.atleast_2d(np.asarray(states))
        return (states.shape[1] == 1) & (states[:, 0] >= 1) & (states[:, 0] <= self.space.size)


class BinaryDVEncoding(_RelaxedDV):
    name = "dv-bin"

    def __init__(self, space: ConfigurationSpace):
        super().__init__(space)
        self.bits = np.array([math.ceil(math.log2(n)) if n > 1 else 0 for n in self.counts], dtype=np.int64)
        self.bit_group = np.repeat(np.arange(len(self.counts)), self.bits)
        # weight of each bit inside its group, most significant first
        self.bit_weight = np.concatenate(
            [2 ** np.arange(b - 1, -1, -1, dtype=np.int64) for b in self.bits] or [np.zeros(0, np.int64)]
        ).astype(np.int64)

    @property
    def width(self) -> int:
        return int(self.bits.sum())

    def _bounds(self):
        return np.zeros(self.width, dtype=np.int64), np.ones(self.width, dtype=np.int64)

    def _codes(self, states):
        states = np.atleast_2d(np.asarray(states, dtype=np.int64))
        codes = np.zeros((states.shape[0], len(self.counts)), dtype=np.int64)
        if self.width:
            np.add.at(codes.T, self.bit_group, (states * self.bit_weight).T)
        return codes

    def encode(self, selections):
        sel = np.atleast_2d(np.asarray(selections, dtype=np.int64))
        return (sel[:, self.bit_group] // self.bit_weight) % 2

    def _repair(self, values):
        return self.encode(self._codes(values) % self.counts)

    def decode(self, states):
        if not np.all(self.is_valid(states)):
            raise ValueError("binary dimensional variables encode an invalid option")
        return self._codes(states)

    def is_valid(self, states):
        states = np.atleast_2d(np.asarray(states))
        binary = np.all((states == 0) | (states == 1), axis=1)
        return binary & np.all(self._codes(states) < self.counts, axis=1)


METHODS = {
    "tags": TagEncoding,
    "dv-int": IntegerDVEncoding,
    "dv-num": NumericIndexDVEncoding,
    "dv-bin": BinaryDVEncoding,
}


def make_encoding(method: str, space: ConfigurationSpace, **kw) -> Encoding:
    try:
        cls = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}") from None
    return cls(space, **kw)


def tag_crossover(t1, t2, space: ConfigurationSpace, rng, n_points: int = 1, prob: float = 1.0):
    """Cross two tag vectors at component boundaries; returns two tag vectors."""
    enc = TagEncoding(space, n_points=n_points)
    c1, c2 = enc.crossover(np.asarray(t1)[None, :], np.asarray(t2)[None, :], rng, prob)
    return c1[0], c2[0]


def tag_mutation(t, space: ConfigurationSpace, prob: float, rng):
    return TagEncoding(space).mutate(np.asarray(t)[None, :], rng, prob)[0]


def dv_variation(dv, other, encoding: Encoding, rng, p_cross=1.0, p_mut=0.2, eta_c=15.0, eta_m=20.0):
    """SBX with ``other`` then polynomial mutation, both in the relaxed space."""
    c1, _ = encoding.crossover(np.asarray(dv)[None, :], np.asarray(other)[None, :], rng, p_cross, eta_c=eta_c)
    return encoding.mutate(c1, rng, p_mut, eta_m=eta_m)[0]
