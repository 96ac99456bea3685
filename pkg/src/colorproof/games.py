"""The four two-prover 3-coloring games: samplers, exact pmfs, verdicts.

Game variants:
  * alt-rzkp  -- prover A gets an edge (i, j) and answers two labellings per
                 endpoint; prover B gets an adjacent edge (i', j') plus a bit
                 b and answers the bit-b labels of its endpoints.
  * alt-edge  -- A gets an edge and answers both colors; B gets a vertex and
                 answers its color.
  * bcs       -- binary constraint system over color indicators: A gets a
                 constraint (vertex consistency or edge disjointness), B gets
                 one (vertex, color) indicator query.
  * vertex    -- both provers get one vertex each; equal answers required on
                 the diagonal, distinct answers across an edge.

Edge challenges always carry i < j. All samplers draw from an explicit
`random.Random` stream and match `challenge_pmf` exactly.
"""

from __future__ import annotations

import enum
import json
import math
import random
from dataclasses import dataclass
from typing import Optional, Union

from .graphs import Edge, Graph
from .seeds import substream

F3 = (0, 1, 2)


class GameType(enum.Enum):
    ALT_RZKP = "alt-rzkp"
    ALT_EDGE = "alt-edge"
    BCS = "bcs"
    VERTEX = "vertex"


@dataclass(frozen=True, slots=True)
class GameKind:
    """Game variant plus the mixture weight for the two-branch variants.

    For bcs, `mix` is the probability of an edge-disjointness constraint; for
    vertex, the probability of a well-definition (diagonal) challenge. The
    weight is a simulation knob only; the soundness bounds use nothing but
    the edge-verification branch.
    """

    game: GameType
    mix: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.mix <= 1.0:
            raise ValueError(f"mixture weight {self.mix} outside [0,1]")


ALT_RZKP = GameKind(GameType.ALT_RZKP)
ALT_EDGE = GameKind(GameType.ALT_EDGE)
BCS = GameKind(GameType.BCS)
VERTEX = GameKind(GameType.VERTEX)


class GamesError(ValueError):
    pass


class EmptyGraphError(GamesError):
    pass


# ---------------------------------------------------------------------------
# Challenges


@dataclass(frozen=True, slots=True)
class RzkpChallenge:
    edge_a: Edge
    edge_b: Edge
    bit: int


@dataclass(frozen=True, slots=True)
class EdgeChallenge:
    edge_a: Edge
    vertex_b: int


@dataclass(frozen=True, slots=True)
class VertexConstraint:
    vertex: int


@dataclass(frozen=True, slots=True)
class EdgeConstraint:
    edge: Edge
    color: int


@dataclass(frozen=True, slots=True)
class BcsChallenge:
    constraint: Union[VertexConstraint, EdgeConstraint]
    vertex_b: int
    color_b: int


@dataclass(frozen=True, slots=True)
class VertexChallenge:
    vertex_a: int
    vertex_b: int


Challenge = Union[RzkpChallenge, EdgeChallenge, BcsChallenge, VertexChallenge]


def half_a(ch: Challenge):
    """The part of a challenge that prover A is allowed to see."""
    if isinstance(ch, RzkpChallenge):
        return ch.edge_a
    if isinstance(ch, EdgeChallenge):
        return ch.edge_a
    if isinstance(ch, BcsChallenge):
        return ch.constraint
    return ch.vertex_a


def half_b(ch: Challenge):
    """The part of a challenge that prover B is allowed to see."""
    if isinstance(ch, RzkpChallenge):
        return (ch.edge_b, ch.bit)
    if isinstance(ch, EdgeChallenge):
        return ch.vertex_b
    if isinstance(ch, BcsChallenge):
        return (ch.vertex_b, ch.color_b)
    return ch.vertex_b


# ---------------------------------------------------------------------------
# Responses


@dataclass(frozen=True, slots=True)
class RzkpResponseA:
    w: tuple[int, int, int, int]  # (w_i^0, w_i^1, w_j^0, w_j^1)


@dataclass(frozen=True, slots=True)
class RzkpResponseB:
    w: tuple[int, int]  # bit-b labels of (i', j')


@dataclass(frozen=True, slots=True)
class EdgeResponseA:
    colors: tuple[int, int]


@dataclass(frozen=True, slots=True)
class EdgeResponseB:
    color: int


@dataclass(frozen=True, slots=True)
class BcsResponseA:
    bits: tuple[int, ...]  # 3 bits for a vertex constraint, 2 for an edge constraint


@dataclass(frozen=True, slots=True)
class BcsResponseB:
    bit: int


@dataclass(frozen=True, slots=True)
class VertexResponse:
    color: int


Response = Union[
    RzkpResponseA, RzkpResponseB, EdgeResponseA, EdgeResponseB, BcsResponseA, BcsResponseB, VertexResponse
]


# ---------------------------------------------------------------------------
# Verdicts


class Reason(enum.Enum):
    EDGE_VERIFICATION = "edge-verification"
    WELL_DEFINITION = "well-definition"
    CONSTRAINT_SATISFACTION = "constraint-satisfaction"
    MALFORMED = "malformed"
    TIMEOUT = "timeout"


@dataclass(frozen=True, slots=True)
class Verdict:
    accept: bool
    reason: Optional[Reason] = None


ACCEPT = Verdict(True)


def _reject(reason: Reason) -> Verdict:
    return Verdict(False, reason)


@dataclass(frozen=True, slots=True)
class Transcript:
    round: int
    challenge: Challenge
    response_a: Optional[Response]
    response_b: Optional[Response]
    verdict: Verdict


@dataclass(frozen=True, slots=True)
class WinStats:
    rounds: int
    accepts: int
    win_rate: float
    wilson_95: tuple[float, float]
    degenerate: bool = False


# ---------------------------------------------------------------------------
# Sampling and exact pmfs


def _require_edges(g: Graph) -> None:
    if not g.edges:
        raise EmptyGraphError("game needs a graph with at least one edge")


def sample_challenge(kind: GameKind, g: Graph, rng: random.Random) -> Challenge:
    """Draw one challenge from the game's exact distribution."""
    _require_edges(g)
    edges = g.edges
    if kind.game is GameType.ALT_RZKP:
        i, j = edges[rng.randrange(len(edges))]
        b = rng.randrange(2)
        v = i if rng.randrange(2) == 0 else j
        nbrs = g.adjacency[v]
        u = nbrs[rng.randrange(len(nbrs))]
        eb = (v, u) if v < u else (u, v)
        return RzkpChallenge(edge_a=(i, j), edge_b=eb, bit=b)
    if kind.game is GameType.ALT_EDGE:
        i, j = edges[rng.randrange(len(edges))]
        v = i if rng.randrange(2) == 0 else j
        return EdgeChallenge(edge_a=(i, j), vertex_b=v)
    if kind.game is GameType.BCS:
        if rng.random() < kind.mix:
            e = edges[rng.randrange(len(edges))]
            alpha = rng.randrange(3)
            k = e[rng.randrange(2)]
            return BcsChallenge(EdgeConstraint(edge=e, color=alpha), vertex_b=k, color_b=alpha)
        i = rng.randrange(g.n)
        beta = rng.randrange(3)
        return BcsChallenge(VertexConstraint(vertex=i), vertex_b=i, color_b=beta)
    # vertex game
    if rng.random() < kind.mix:
        i = rng.randrange(g.n)
        return VertexChallenge(i, i)
    i, j = edges[rng.randrange(len(edges))]
    return VertexChallenge(i, j)


def challenge_pmf(kind: GameKind, g: Graph) -> dict[Challenge, float]:
    """Exact challenge distribution as a finite map (probabilities sum to 1)."""
    _require_edges(g)
    ne = len(g.edges)
    pmf: dict[Challenge, float] = {}
    if kind.game is GameType.ALT_RZKP:
        # (1/2|E|) * [ (d_ii' + d_ij') / 2|N(i)| + (d_jj' + d_ji') / 2|N(j)| ]
        for i, j in g.edges:
            for ep in g.edges:
                for b in (0, 1):
                    w = 0.0
                    w += (int(i == ep[0]) + int(i == ep[1])) / (2 * g.degree(i))
                    w += (int(j == ep[1]) + int(j == ep[0])) / (2 * g.degree(j))
                    if w:
                        ch = RzkpChallenge(edge_a=(i, j), edge_b=ep, bit=b)
                        pmf[ch] = pmf.get(ch, 0.0) + w / (2 * ne)
        return pmf
    if kind.game is GameType.ALT_EDGE:
        for i, j in g.edges:
            pmf[EdgeChallenge((i, j), i)] = 1.0 / (2 * ne)
            pmf[EdgeChallenge((i, j), j)] = 1.0 / (2 * ne)
        return pmf
    if kind.game is GameType.BCS:
        lam = kind.mix
        if lam > 0.0:
            for e in g.edges:
                for alpha in F3:
                    for k in e:
                        ch = BcsChallenge(EdgeConstraint(e, alpha), k, alpha)
                        pmf[ch] = pmf.get(ch, 0.0) + lam / (6 * ne)
        if lam < 1.0:
            for i in range(g.n):
                for beta in F3:
                    ch = BcsChallenge(VertexConstraint(i), i, beta)
                    pmf[ch] = pmf.get(ch, 0.0) + (1.0 - lam) / (3 * g.n)
        return pmf
    lam = kind.mix
    if lam > 0.0:
        for i in range(g.n):
            ch = VertexChallenge(i, i)
            pmf[ch] = pmf.get(ch, 0.0) + lam / g.n
    if lam < 1.0:
        for i, j in g.edges:
            ch = VertexChallenge(i, j)
            pmf[ch] = pmf.get(ch, 0.0) + (1.0 - lam) / ne
    return pmf


# ---------------------------------------------------------------------------
# Verdict machine


def _colors_ok(*vals: int) -> bool:
    return all(v in (0, 1, 2) for v in vals)


def _bits_ok(*vals: int) -> bool:
    return all(v in (0, 1) for v in vals)


def verdict(kind: GameKind, ch: Challenge, ra: Response, rb: Response) -> Verdict:
    """Apply the game's checks; total (malformed input rejects, never raises)."""
    try:
        return _verdict(kind, ch, ra, rb)
    except Exception:
        return _reject(Reason.MALFORMED)


def _verdict(kind: GameKind, ch: Challenge, ra: Response, rb: Response) -> Verdict:
    if kind.game is GameType.ALT_RZKP:
        if not (isinstance(ch, RzkpChallenge) and isinstance(ra, RzkpResponseA) and isinstance(rb, RzkpResponseB)):
            return _reject(Reason.MALFORMED)
        wi0, wi1, wj0, wj1 = ra.w
        if not (_colors_ok(wi0, wi1, wj0, wj1) and _colors_ok(*rb.w) and ch.bit in (0, 1)):
            return _reject(Reason.MALFORMED)
        if (wi0 + wi1) % 3 == (wj0 + wj1) % 3:
            return _reject(Reason.EDGE_VERIFICATION)
        i, j = ch.edge_a
        b = ch.bit
        a_label = {i: ra.w[b], j: ra.w[2 + b]}
        b_label = {ch.edge_b[0]: rb.w[0], ch.edge_b[1]: rb.w[1]}
        for v in (i, j):
            if v in b_label and a_label[v] != b_label[v]:
                return _reject(Reason.WELL_DEFINITION)
        return ACCEPT

    if kind.game is GameType.ALT_EDGE:
        if not (isinstance(ch, EdgeChallenge) and isinstance(ra, EdgeResponseA) and isinstance(rb, EdgeResponseB)):
            return _reject(Reason.MALFORMED)
        ci, cj = ra.colors
        if not _colors_ok(ci, cj, rb.color):
            return _reject(Reason.MALFORMED)
        if ci == cj:
            return _reject(Reason.EDGE_VERIFICATION)
        i, j = ch.edge_a
        if ch.vertex_b == i and ci != rb.color:
            return _reject(Reason.WELL_DEFINITION)
        if ch.vertex_b == j and cj != rb.color:
            return _reject(Reason.WELL_DEFINITION)
        return ACCEPT

    if kind.game is GameType.BCS:
        if not (isinstance(ch, BcsChallenge) and isinstance(ra, BcsResponseA) and isinstance(rb, BcsResponseB)):
            return _reject(Reason.MALFORMED)
        if not _bits_ok(*ra.bits, rb.bit):
            return _reject(Reason.MALFORMED)
        con = ch.constraint
        if isinstance(con, VertexConstraint):
            if len(ra.bits) != 3:
                return _reject(Reason.MALFORMED)
            if sum(ra.bits) != 1:
                return _reject(Reason.CONSTRAINT_SATISFACTION)
            if ch.vertex_b == con.vertex and ra.bits[ch.color_b] != rb.bit:
                return _reject(Reason.WELL_DEFINITION)
            return ACCEPT
        if len(ra.bits) != 2:
            return _reject(Reason.MALFORMED)
        if ra.bits[0] * ra.bits[1] != 0:
            return _reject(Reason.CONSTRAINT_SATISFACTION)
        if ch.color_b == con.color:
            i, j = con.edge
            if ch.vertex_b == i and ra.bits[0] != rb.bit:
                return _reject(Reason.WELL_DEFINITION)
            if ch.vertex_b == j and ra.bits[1] != rb.bit:
                return _reject(Reason.WELL_DEFINITION)
        return ACCEPT

    if not (isinstance(ch, VertexChallenge) and isinstance(ra, VertexResponse) and isinstance(rb, VertexResponse)):
        return _reject(Reason.MALFORMED)
    if not _colors_ok(ra.color, rb.color):
        return _reject(Reason.MALFORMED)
    if ch.vertex_a == ch.vertex_b:
        if ra.color != rb.color:
            return _reject(Reason.WELL_DEFINITION)
        return ACCEPT
    if ra.color == rb.color:
        return _reject(Reason.EDGE_VERIFICATION)
    return ACCEPT


# ---------------------------------------------------------------------------
# Round loop


def wilson_interval(accepts: int, rounds: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if rounds == 0:
        return (0.0, 1.0)
    p = accepts / rounds
    denom = 1.0 + z * z / rounds
    center = (p + z * z / (2 * rounds)) / denom
    half = z * math.sqrt(p * (1.0 - p) / rounds + z * z / (4.0 * rounds * rounds)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def play_rounds(
    kind: GameKind,
    g: Graph,
    pair,
    rounds: int,
    seed: int,
    keep_log: bool = False,
) -> tuple[WinStats, Optional[list[Transcript]]]:
    """Play independent rounds against a strategy pair.

    Deterministic given the seed: all randomness comes from one substream
    derived from it, consumed in round order. Callers wanting parallelism
    split the work into chunks with distinct derived seeds. The pair either
    exposes split halves (`shared`/`answer_a`/`answer_b`, no cross-talk
    possible) or a joint sampler `respond` (used for Born-rule simulation of
    quantum strategies). Strategy exceptions count as Reject(malformed).
    """
    if rounds < 0:
        raise GamesError("negative round count")
    if rounds == 0:
        return WinStats(0, 0, 1.0, (0.0, 1.0), degenerate=True), ([] if keep_log else None)
    log: Optional[list[Transcript]] = [] if keep_log else None
    accepts = 0
    split = hasattr(pair, "answer_a")
    rng = substream("rounds", seed)
    for r in range(rounds):
        ch = sample_challenge(kind, g, rng)
        ra = rb = None
        try:
            if split:
                shared = pair.shared(kind, g, rng)
                ra = pair.answer_a(kind, half_a(ch), shared)
                rb = pair.answer_b(kind, half_b(ch), shared)
            else:
                ra, rb = pair.respond(kind, ch, rng)
            v = verdict(kind, ch, ra, rb)
        except Exception:
            v = _reject(Reason.MALFORMED)
        if v.accept:
            accepts += 1
        if log is not None:
            log.append(Transcript(r, ch, ra, rb, v))
    stats = WinStats(rounds, accepts, accepts / rounds, wilson_interval(accepts, rounds))
    return stats, log


# ---------------------------------------------------------------------------
# Transcript logs (JSON lines)


def _challenge_to_json(ch: Challenge) -> dict:
    if isinstance(ch, RzkpChallenge):
        return {"kind": "alt-rzkp", "edge_a": list(ch.edge_a), "edge_b": list(ch.edge_b), "bit": ch.bit}
    if isinstance(ch, EdgeChallenge):
        return {"kind": "alt-edge", "edge_a": list(ch.edge_a), "vertex_b": ch.vertex_b}
    if isinstance(ch, BcsChallenge):
        con = ch.constraint
        if isinstance(con, VertexConstraint):
            c = {"type": "vertex", "vertex": con.vertex}
        else:
            c = {"type": "edge", "edge": list(con.edge), "color": con.color}
        return {"kind": "bcs", "constraint": c, "vertex_b": ch.vertex_b, "color_b": ch.color_b}
    return {"kind": "vertex", "vertex_a": ch.vertex_a, "vertex_b": ch.vertex_b}


def _response_to_json(r: Optional[Response]):
    if r is None:
        return None
    if isinstance(r, (RzkpResponseA, RzkpResponseB)):
        return list(r.w)
    if isinstance(r, EdgeResponseA):
        return list(r.colors)
    if isinstance(r, EdgeResponseB):
        return r.color
    if isinstance(r, BcsResponseA):
        return list(r.bits)
    if isinstance(r, BcsResponseB):
        return r.bit
    return r.color


def transcript_to_json_line(t: Transcript) -> str:
    rec = {
        "round": t.round,
        "challenge": _challenge_to_json(t.challenge),
        "responses": [_response_to_json(t.response_a), _response_to_json(t.response_b)],
        "verdict": "accept" if t.verdict.accept else "reject",
        "reason": t.verdict.reason.value if t.verdict.reason else None,
    }
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))
