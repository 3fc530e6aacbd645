"""Games as branching-time frames.

A game is a strict partial order of time points.  Play moves along covers
(immediate successors), the instant of a point is fixed by how many points
lie in its past, and instant ``i`` belongs to player ``((i - 1) mod m) + 1``.
A play ending at a non-tie point of instant ``i`` is won by the player who
moved last, ``((i - 2) mod m) + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from modalcount.errors import InputError
from modalcount.modal import Atom, Diamond, Model, extension
from modalcount.prng import SplitMix64
from modalcount.relations import Frame, frame_from_edges, transitive_closure

PLAYER_COLORS = {1: "gold", 2: "skyblue"}


@dataclass(frozen=True)
class Instant:
    index: int
    points: frozenset[int]


@dataclass(frozen=True)
class Game:
    order: Frame
    covers: Frame
    ties: frozenset[int]
    players: int
    labels: tuple[str, ...]
    past_sizes: tuple[int, ...] = field(repr=False)
    root: int | None = None

    @property
    def points(self) -> int:
        return self.order.n

    def children(self, t: int) -> list[int]:
        return self.covers.successors(t)

    def is_terminal(self, t: int) -> bool:
        return self.covers.rows[t] == 0

    def instant_of(self, t: int) -> int:
        return self.past_sizes[t] + 1

    def player_of_instant(self, i: int) -> int:
        return (i - 1) % self.players + 1

    def mover(self, t: int) -> int:
        return self.player_of_instant(self.instant_of(t))

    @cached_property
    def graded(self) -> bool:
        """Every cover step moves exactly one instant forward."""
        return all(
            self.past_sizes[b] == self.past_sizes[a] + 1
            for a in range(self.points)
            for b in self.children(a)
        )

    def check_point(self, t: int) -> None:
        if not isinstance(t, int) or not 0 <= t < self.points:
            raise InputError(f"unknown point {t!r}; game has points 0..{self.points - 1}")

    def require_root(self) -> int:
        if self.root is None:
            raise InputError("no initial turn t_0: the order has more than one minimal point")
        return self.root

    def to_json(self) -> dict:
        doc = {
            "points": self.points,
            "order": [[a, b] for a, b in self.covers.edges()],
            "ties": sorted(self.ties),
            "players": self.players,
        }
        if self.labels != tuple(str(t) for t in range(self.points)):
            doc["labels"] = list(self.labels)
        return doc


def build_game(
    points: int,
    order_edges: Iterable[tuple[int, int]],
    ties: Iterable[int] = (),
    players: int = 2,
    labels: Iterable[str] | None = None,
) -> Game:
    """Close ``order_edges`` transitively and derive covers, past sizes and root."""
    if points < 1:
        raise InputError(f"a game needs at least one point, got {points}")
    if players < 1:
        raise InputError(f"a game needs at least one player, got {players}")
    order = transitive_closure(frame_from_edges(points, order_edges))
    cyclic = [t for t in range(points) if order.holds(t, t)]
    if cyclic:
        raise InputError(f"not a strict order: point {cyclic[0]} lies on a cycle")
    cover_rows = []
    for a in range(points):
        later = order.rows[a]
        skipped = 0
        for c in order.successors(a):
            skipped |= order.rows[c]
        cover_rows.append(later & ~skipped)
    covers = Frame(points, tuple(cover_rows))
    past_sizes = tuple(order.predecessors_mask(t).bit_count() for t in range(points))
    tie_set = frozenset(ties)
    for t in sorted(tie_set):
        if not 0 <= t < points:
            raise InputError(f"tie point {t} out of range")
        if cover_rows[t]:
            raise InputError(f"tie marker on non-terminal point {t}")
    minima = [t for t in range(points) if past_sizes[t] == 0]
    names = tuple(labels) if labels is not None else tuple(str(t) for t in range(points))
    if len(names) != points:
        raise InputError(f"expected {points} labels, got {len(names)}")
    return Game(
        order=order,
        covers=covers,
        ties=tie_set,
        players=players,
        labels=names,
        past_sizes=past_sizes,
        root=minima[0] if len(minima) == 1 else None,
    )


def game_from_json(doc) -> Game:
    if not isinstance(doc, dict) or "points" not in doc:
        raise InputError('game JSON needs a "points" field')
    try:
        edges = [(int(a), int(b)) for a, b in doc.get("order", [])]
        ties = [int(t) for t in doc.get("ties", [])]
    except (TypeError, ValueError):
        raise InputError('"order" must hold [a, b] pairs and "ties" integers') from None
    return build_game(int(doc["points"]), edges, ties, int(doc.get("players", 2)), doc.get("labels"))


def past_is_strict_order(g: Game, t: int) -> bool:
    """Literal check: ``<`` restricted to the past of t is irreflexive and transitive."""
    g.check_point(t)
    below = [s for s in range(g.points) if g.order.holds(s, t)]
    for a in below:
        if g.order.holds(a, a):
            return False
        for b in below:
            if g.order.holds(a, b):
                for c in below:
                    if g.order.holds(b, c) and not g.order.holds(a, c):
                        return False
    return True


def is_tree_like(g: Game) -> bool:
    """Every point has a linearly ordered past (the usual branching-time condition)."""
    for t in range(g.points):
        below = [s for s in range(g.points) if g.order.holds(s, t)]
        for i, a in enumerate(below):
            for b in below[i + 1:]:
                if not (g.order.holds(a, b) or g.order.holds(b, a)):
                    return False
    return True


# -- histories, instants, articulated histories ---------------------------------


def histories(g: Game) -> list[tuple[int, ...]]:
    """Maximal chains, each ascending; the list is sorted lexicographically."""
    out = []
    for start in range(g.points):
        if g.past_sizes[start]:
            continue
        stack = [(start,)]
        while stack:
            path = stack.pop()
            kids = g.children(path[-1])
            if not kids:
                out.append(path)
            for c in reversed(kids):
                stack.append(path + (c,))
    return sorted(out)


def instants(g: Game) -> list[Instant]:
    groups: dict[int, set[int]] = {}
    for t in range(g.points):
        groups.setdefault(g.instant_of(t), set()).add(t)
    return [Instant(i, frozenset(pts)) for i, pts in sorted(groups.items())]


def articulated(g: Game, t: int) -> tuple[frozenset[int], list[frozenset[int]]]:
    """Past of ``t`` and the distinct futures of ``t`` along each history through it."""
    g.check_point(t)
    past = frozenset(a for a in range(g.points) if g.order.holds(a, t))
    futures = {frozenset(h[h.index(t) + 1 :]) for h in histories(g) if t in h}
    return past, sorted(futures, key=lambda s: (len(s), sorted(s)))


def game_length(g: Game) -> int:
    """Longest future of the root over all histories."""
    return _heights(g)[g.require_root()]


def _heights(g: Game) -> list[int]:
    height = [0] * g.points
    for t in sorted(range(g.points), key=lambda t: -g.past_sizes[t]):
        kids = g.children(t)
        if kids:
            height[t] = 1 + max(height[c] for c in kids)
    return height


def winner_at(g: Game, t: int) -> int | None:
    """Player who wins when play stops at ``t``; None at ties and non-terminal points."""
    g.check_point(t)
    if not g.is_terminal(t) or t in g.ties:
        return None
    return (g.instant_of(t) - 2) % g.players + 1


# -- solving -----------------------------------------------------------------


@dataclass(frozen=True)
class SolveResult:
    """Outcome of backward induction.

    ``winner`` is the player who can force a win, or None.  With two
    players None means the game is a tie under best play.  ``forcing`` is
    the set of players able to force a win (at most one).  ``strategy``
    maps non-terminal points to the chosen cover successor and ``lengths``
    gives the longest remaining play from every point.
    """

    winner: int | None
    strategy: dict[int, int]
    lengths: dict[int, int]
    forcing: frozenset[int]

    @property
    def outcome(self) -> str:
        return "tie" if self.winner is None else f"player {self.winner}"


def _require_solvable(g: Game) -> int:
    root = g.require_root()
    if not g.graded:
        raise InputError("cannot solve: some cover step skips an instant, so turn order is undefined")
    return root


def solve(g: Game) -> SolveResult:
    root = _require_solvable(g)
    heights = _heights(g)
    lengths = {t: heights[t] for t in range(g.points)}
    bottom_up = sorted(range(g.points), key=lambda t: -g.past_sizes[t])
    if g.players == 2:
        return _solve_two(g, root, bottom_up, lengths)
    return _solve_many(g, root, bottom_up, lengths)


def _solve_two(g, root, bottom_up, lengths) -> SolveResult:
    value: dict[int, int | None] = {}
    strategy: dict[int, int] = {}
    for t in bottom_up:
        kids = g.children(t)
        if not kids:
            value[t] = winner_at(g, t)
            continue
        me = g.mover(t)

        def score(c):
            v = value[c]
            return 2 if v == me else 1 if v is None else 0

        best = max(kids, key=lambda c: (score(c), -c))
        strategy[t] = best
        value[t] = value[best]
    winner = value[root]
    forcing = frozenset() if winner is None else frozenset({winner})
    return SolveResult(winner, strategy, lengths, forcing)


def _solve_many(g, root, bottom_up, lengths) -> SolveResult:
    can: dict[int, dict[int, bool]] = {}
    for k in range(1, g.players + 1):
        ck: dict[int, bool] = {}
        for t in bottom_up:
            kids = g.children(t)
            if not kids:
                ck[t] = winner_at(g, t) == k
            elif g.mover(t) == k:
                ck[t] = any(ck[c] for c in kids)
            else:
                ck[t] = all(ck[c] for c in kids)
        can[k] = ck
    forcing = frozenset(k for k in can if can[k][root])
    winner = min(forcing) if forcing else None
    strategy: dict[int, int] = {}
    if winner is not None:
        ck = can[winner]
        for t in range(g.points):
            kids = g.children(t)
            if kids and g.mover(t) == winner:
                strategy[t] = next((c for c in kids if ck[c]), kids[0])
    return SolveResult(winner, strategy, lengths, forcing)


def game_to_model(g: Game) -> Model:
    """Kripke model over the cover relation with the built-in outcome atoms.

    ``tie``, ``terminal``, ``win_k`` (play ends at a win for k), ``lose_k``
    (play ends at a non-tie point won by someone else) and ``open_k``
    (not a tie and not a win for k: the unrestricted loss disjunction).
    """
    valuation: dict[str, frozenset[int]] = {
        "tie": frozenset(g.ties),
        "terminal": frozenset(t for t in range(g.points) if g.is_terminal(t)),
    }
    winners = {t: winner_at(g, t) for t in range(g.points)}
    for k in range(1, g.players + 1):
        valuation[f"win_{k}"] = frozenset(t for t, w in winners.items() if w == k)
        valuation[f"lose_{k}"] = frozenset(t for t, w in winners.items() if w is not None and w != k)
        valuation[f"open_{k}"] = frozenset(t for t, w in winners.items() if t not in g.ties and w != k)
    return Model(g.covers, valuation)


def check_winning_strategy(g: Game, k: int, strategy: Mapping[int, int]) -> bool:
    """Whether following ``strategy`` wins for player ``k`` against every opponent move.

    Besides reaching a terminal won by ``k`` on every consistent play, each
    point of each play must satisfy <>^r win_k in :func:`game_to_model`,
    where r is the number of moves left on that play.
    """
    root = g.require_root()
    if not 1 <= k <= g.players:
        raise InputError(f"player {k} outside 1..{g.players}")
    model = game_to_model(g)
    masks = model.masks()
    reach = [masks[f"win_{k}"]]  # reach[r]: points satisfying <>^r win_k
    step = Diamond(Atom("_reach"))

    def certified(t: int, r: int) -> bool:
        while len(reach) <= r:
            reach.append(extension(g.covers, {"_reach": reach[-1]}, step))
        return bool(reach[r] >> t & 1)

    stack = [(root,)]
    while stack:
        play = stack.pop()
        t = play[-1]
        kids = g.children(t)
        if not kids:
            if winner_at(g, t) != k:
                return False
            if not all(certified(p, len(play) - 1 - i) for i, p in enumerate(play)):
                return False
            continue
        if g.mover(t) == k:
            if t not in strategy:
                raise InputError(f"strategy has no move at decision point {t} ({g.labels[t]})")
            choice = strategy[t]
            if choice not in kids:
                raise InputError(f"strategy moves from {t} to {choice}, which is not an immediate successor")
            stack.append(play + (choice,))
        else:
            stack.extend(play + (c,) for c in kids)
    return True


# -- Nim ---------------------------------------------------------------------


def nim_moves(tokens: int) -> list[tuple[int, ...]]:
    """Move sequences of take-1-or-2 Nim from ``tokens``, in depth-first order."""
    if tokens < 1:
        raise InputError(f"Nim needs at least one token, got {tokens}")
    out = []

    def walk(seq, left):
        out.append(seq)
        for take in (1, 2):
            if take <= left:
                walk(seq + (take,), left - take)

    walk((), tokens)
    return out


def nim(tokens: int) -> Game:
    seqs = nim_moves(tokens)
    index = {s: i for i, s in enumerate(seqs)}
    edges = [(index[s[:-1]], i) for i, s in enumerate(seqs) if s]
    labels = ["root" if not s else ".".join(map(str, s)) for s in seqs]
    return build_game(len(seqs), edges, (), 2, labels)


def chi(x: int) -> int:
    """Reply that brings the two-move total to three; 0 stays 0 (game over)."""
    replies = {2: 1, 1: 2, 0: 0}
    if x not in replies:
        raise InputError(f"a Nim move takes 0, 1 or 2 tokens, got {x}")
    return replies[x]


def chi_strategy(tokens: int, player: int, opening: int | None = None) -> dict[int, int]:
    """Strategy answering every opponent move x with chi(x).

    If ``player`` moves first, ``opening`` says how many tokens to take at the root.
    """
    seqs = nim_moves(tokens)
    index = {s: i for i, s in enumerate(seqs)}
    strategy = {}
    for i, seq in enumerate(seqs):
        if sum(seq) == tokens or len(seq) % 2 != player - 1:
            continue
        if not seq:
            if opening is None:
                raise InputError("player 1 moves first: pass an opening move")
            take = opening
        else:
            take = chi(seq[-1])
        child = index.get(seq + (take,))
        if child is not None:
            strategy[i] = child
    return strategy


# -- export and random instances -----------------------------------------------


def to_dot(g: Game) -> str:
    lines = ["digraph game {", "  node [style=filled];"]
    for t in range(g.points):
        color = PLAYER_COLORS.get(g.mover(t), "gray") if g.players >= 2 else "gray"
        label = g.labels[t]
        if g.is_terminal(t):
            w = winner_at(g, t)
            label += "\\ntie" if w is None else f"\\nwin: player {w}"
        lines.append(f'  {t} [label="{label}", fillcolor={color}];')
    for a, b in g.covers.edges():
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def random_tree(size: int, seed: int, players: int = 2) -> Game:
    """Random recursive tree: point i > 0 hangs below a uniform earlier point."""
    rng = SplitMix64(seed)
    edges = [(rng.below(i), i) for i in range(1, size)]
    return build_game(size, edges, (), players)
