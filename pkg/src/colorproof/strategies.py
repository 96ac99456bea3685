"""Classical prover strategies and the brute-force classical-value oracle.

A classical pair is two response functions plus a per-round shared-randomness
draw. The halves only ever see their own challenge half and the round's
shared randomness, so no-signaling holds by construction.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .games import (
    BcsResponseA,
    BcsResponseB,
    EdgeConstraint,
    EdgeResponseA,
    EdgeResponseB,
    GameKind,
    GameType,
    RzkpChallenge,
    RzkpResponseA,
    RzkpResponseB,
    Transcript,
    VertexConstraint,
    VertexResponse,
)
from .graphs import Edge, Graph, PlantedInstance

PERMS3 = tuple(itertools.permutations((0, 1, 2)))


class StrategiesError(ValueError):
    pass


class TooLargeError(StrategiesError):
    pass


class NoSamplesError(StrategiesError):
    pass


@dataclass(frozen=True)
class ClassicalStrategyPair:
    """Shared-randomness draw plus one response function per prover half."""

    shared: Callable[[GameKind, Graph, random.Random], object]
    answer_a: Callable[[GameKind, object, object], object]
    answer_b: Callable[[GameKind, object, object], object]


@dataclass(frozen=True)
class Labelled:
    """Per-round coloring and its additive label split (w0 + w1 = c mod 3)."""

    colors: tuple[int, ...]
    w0: tuple[int, ...]
    w1: tuple[int, ...]


def _draw_labelling(colors: Sequence[int], rng: random.Random, permute: bool) -> Labelled:
    if permute:
        perm = PERMS3[rng.randrange(6)]
        colors = tuple(perm[c] for c in colors)
    else:
        colors = tuple(colors)
    w0 = tuple(rng.randrange(3) for _ in colors)
    w1 = tuple((c - w) % 3 for c, w in zip(colors, w0))
    return Labelled(colors, w0, w1)


def _answer_a_from(lab: Labelled, kind: GameKind, chal):
    if kind.game is GameType.ALT_RZKP:
        i, j = chal
        return RzkpResponseA((lab.w0[i], lab.w1[i], lab.w0[j], lab.w1[j]))
    if kind.game is GameType.ALT_EDGE:
        i, j = chal
        return EdgeResponseA((lab.colors[i], lab.colors[j]))
    if kind.game is GameType.BCS:
        if isinstance(chal, VertexConstraint):
            c = lab.colors[chal.vertex]
            return BcsResponseA(tuple(int(c == a) for a in (0, 1, 2)))
        assert isinstance(chal, EdgeConstraint)
        i, j = chal.edge
        return BcsResponseA((int(lab.colors[i] == chal.color), int(lab.colors[j] == chal.color)))
    return VertexResponse(lab.colors[chal])


def _answer_b_from(lab: Labelled, kind: GameKind, chal):
    if kind.game is GameType.ALT_RZKP:
        (i, j), b = chal
        w = lab.w0 if b == 0 else lab.w1
        return RzkpResponseB((w[i], w[j]))
    if kind.game is GameType.ALT_EDGE:
        return EdgeResponseB(lab.colors[chal])
    if kind.game is GameType.BCS:
        k, beta = chal
        return BcsResponseB(int(lab.colors[k] == beta))
    return VertexResponse(lab.colors[chal])


def honest_pair(inst: PlantedInstance) -> ClassicalStrategyPair:
    """Honest provers: fresh color permutation and label split every round."""
    if not inst.witness:
        raise StrategiesError("instance has no witness")

    def shared(kind: GameKind, g: Graph, rng: random.Random) -> Labelled:
        return _draw_labelling(inst.witness, rng, permute=True)

    return ClassicalStrategyPair(shared, _answer_a_from_shared, _answer_b_from_shared)


def fixed_coloring_pair(colors: Sequence[int]) -> ClassicalStrategyPair:
    """Deterministic cheating baseline: both halves answer from one fixed coloring.

    The label split is still drawn fresh from shared randomness (a prover must
    answer something), but there is no per-round permutation, which is exactly
    what the transcript-uniformity negative control needs.
    """
    colors = tuple(colors)

    def shared(kind: GameKind, g: Graph, rng: random.Random) -> Labelled:
        return _draw_labelling(colors, rng, permute=False)

    return ClassicalStrategyPair(shared, _answer_a_from_shared, _answer_b_from_shared)


def mismatched_pair(colors_a: Sequence[int], colors_b: Sequence[int]) -> ClassicalStrategyPair:
    """Provers who agreed on the label split but hold different colorings.

    Mirrors two networked provers configured with the same shared seed but
    different witnesses: the bit-0 labels coincide while bit-1 labels differ
    wherever the colorings do.
    """
    ca, cb = tuple(colors_a), tuple(colors_b)
    if len(ca) != len(cb):
        raise StrategiesError("colorings must have equal length")

    def shared(kind: GameKind, g: Graph, rng: random.Random) -> tuple[Labelled, Labelled]:
        perm = PERMS3[rng.randrange(6)]
        w0 = tuple(rng.randrange(3) for _ in ca)
        la = tuple(perm[c] for c in ca)
        lb = tuple(perm[c] for c in cb)
        lab_a = Labelled(la, w0, tuple((c - w) % 3 for c, w in zip(la, w0)))
        lab_b = Labelled(lb, w0, tuple((c - w) % 3 for c, w in zip(lb, w0)))
        return lab_a, lab_b

    def answer_a(kind: GameKind, chal, sh):
        return _answer_a_from(sh[0], kind, chal)

    def answer_b(kind: GameKind, chal, sh):
        return _answer_b_from(sh[1], kind, chal)

    return ClassicalStrategyPair(shared, answer_a, answer_b)


def _answer_a_from_shared(kind: GameKind, chal, lab: Labelled):
    return _answer_a_from(lab, kind, chal)


def _answer_b_from_shared(kind: GameKind, chal, lab: Labelled):
    return _answer_b_from(lab, kind, chal)


# ---------------------------------------------------------------------------
# Brute-force classical value of the vertex game's edge-verification branch


_BRUTE_CHUNK = 1 << 20


def brute_force_vertex3col_value(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """Exact max over all 3^n colorings of (1 - violations/|E|).

    Returns the value as an exact rational together with the lexicographically
    smallest maximizing coloring. Enumerates in chunks with numpy, so n <= 16
    stays within the 3^n <= 4.3e7 envelope.
    """
    if g.n > 16:
        raise TooLargeError(f"3^{g.n} colorings is past the brute-force envelope (n <= 16)")
    if not g.edges:
        raise StrategiesError("graph has no edges")
    total = 3**g.n
    # digit weights chosen so row order is lexicographic in the coloring
    weights = np.array([3 ** (g.n - 1 - v) for v in range(g.n)], dtype=np.int64)
    ei = np.array([e[0] for e in g.edges])
    ej = np.array([e[1] for e in g.edges])
    best_viol = len(g.edges) + 1
    best_idx = -1
    for start in range(0, total, _BRUTE_CHUNK):
        idx = np.arange(start, min(start + _BRUTE_CHUNK, total), dtype=np.int64)
        cols = (idx[:, None] // weights[None, :]) % 3
        viol = (cols[:, ei] == cols[:, ej]).sum(axis=1)
        k = int(viol.argmin())
        if viol[k] < best_viol:
            best_viol = int(viol[k])
            best_idx = int(idx[k])
    digits = tuple(int(best_idx // w % 3) for w in weights)
    return Fraction(len(g.edges) - best_viol, len(g.edges)), digits


# ---------------------------------------------------------------------------
# Transcript uniformity (empirical zero-knowledge surrogate)

ADMISSIBLE_QUADS = tuple(
    q for q in itertools.product((0, 1, 2), repeat=4) if (q[0] + q[1]) % 3 != (q[2] + q[3]) % 3
)


@dataclass(frozen=True)
class UniformityReport:
    edge: Edge
    samples: int
    tv_from_uniform: float
    support: int
    counts: dict


def transcript_uniformity(transcripts: Iterable[Transcript], edge: Edge) -> UniformityReport:
    """TV distance of prover A's quadruple distribution from uniform-over-54.

    Only rounds whose A-challenge equals `edge` contribute. Mass on quadruples
    outside the admissible support (sums equal) counts fully against the
    distance.
    """
    counts: dict[tuple[int, int, int, int], int] = {}
    n = 0
    for t in transcripts:
        ch = t.challenge
        if not isinstance(ch, RzkpChallenge) or ch.edge_a != tuple(edge):
            continue
        if t.response_a is None or not isinstance(t.response_a, RzkpResponseA):
            continue
        counts[t.response_a.w] = counts.get(t.response_a.w, 0) + 1
        n += 1
    if n == 0:
        raise NoSamplesError(f"no transcripts carry A-challenge {edge}")
    uniform = 1.0 / len(ADMISSIBLE_QUADS)
    tv = 0.0
    for q in ADMISSIBLE_QUADS:
        tv += abs(counts.get(q, 0) / n - uniform)
    for q, c in counts.items():
        if q not in ADMISSIBLE_QUADS:
            tv += c / n
    return UniformityReport(
        edge=tuple(edge),
        samples=n,
        tv_from_uniform=tv / 2.0,
        support=len(counts),
        counts={",".join(map(str, q)): c for q, c in sorted(counts.items())},
    )
