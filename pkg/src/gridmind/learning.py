"""Mirrored compositional learning over symbolic grids.

`observe` decomposes a grid into features (maximal straight boundary runs,
isolated boundary cells and interior fill regions, per symbol), stores each
feature as a concept anchored at its top-left-most cell and groups all
co-active features under a root composite. Reconstruction expands the
composition links top-down and reproduces the input, which is the mirror
property everything else leans on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import ConceptGraph, NodeKind
from .grid import MAX_DIM, Grid
from .inhibition import SessionStack

Coord = tuple[int, int]

PRIMITIVE_PREFIX = "cell:"
ACTION_PREFIX = "action:"
TRANSFORM_PREFIX = "tf:"


class LearningError(Exception):
    pass


class EmptyInputError(LearningError):
    pass


class InhibitedError(LearningError):
    pass


class NoFitError(LearningError):
    pass


class BoundsError(LearningError):
    pass


@dataclass(frozen=True)
class FeatureInstance:
    """A feature shape detected at a concrete grid position."""

    symbol: str
    offsets: frozenset[Coord]  # anchor-relative, anchor cell at (0, 0)
    anchor: Coord


@dataclass(frozen=True)
class RecognitionMatch:
    concept: int
    anchor: Coord
    score: Fraction


@dataclass(frozen=True)
class Discrepancy:
    missing: frozenset[tuple[int, int, str]]
    surplus: frozenset[tuple[int, int, str]]

    def is_empty(self) -> bool:
        return not self.missing and not self.surplus


@dataclass(frozen=True)
class ObserveReport:
    root: int
    nodes_created: int
    nodes_reused: int


def _normalize(cells: set[Coord]) -> tuple[frozenset[Coord], Coord]:
    """Shift cells so the top-left-most one lands on (0, 0)."""
    ay, ax = min((y, x) for x, y in cells)
    return frozenset((x - ax, y - ay) for x, y in cells), (ax, ay)


def extract_features(g: Grid) -> list[FeatureInstance]:
    """Deterministic feature decomposition of a grid.

    Per symbol: boundary cells (those with a non-matching 4-neighbour) are
    carved into maximal horizontal and vertical runs of length >= 2; cells
    in no run become single-cell features; interior cells form fill-region
    features per connected component. Every occupied cell is covered.
    """
    features: list[FeatureInstance] = []
    by_symbol: dict[str, set[Coord]] = {}
    for pos, sym in g.cells.items():
        by_symbol.setdefault(sym, set()).add(pos)
    for sym in sorted(by_symbol):
        cells = by_symbol[sym]
        boundary = {
            (x, y)
            for x, y in cells
            if any(
                (x + dx, y + dy) not in cells
                for dx, dy in ((0, -1), (1, 0), (0, 1), (-1, 0))
            )
        }
        interior = cells - boundary
        covered: set[Coord] = set()
        for x, y in sorted(boundary, key=lambda p: (p[1], p[0])):
            if (x - 1, y) in boundary:
                continue
            run = [(x, y)]
            while (run[-1][0] + 1, y) in boundary:
                run.append((run[-1][0] + 1, y))
            if len(run) >= 2:
                features.append(
                    FeatureInstance(
                        sym, frozenset((i, 0) for i in range(len(run))), (x, y)
                    )
                )
                covered.update(run)
        for x, y in sorted(boundary, key=lambda p: (p[1], p[0])):
            if (x, y - 1) in boundary:
                continue
            run = [(x, y)]
            while (x, run[-1][1] + 1) in boundary:
                run.append((x, run[-1][1] + 1))
            if len(run) >= 2:
                features.append(
                    FeatureInstance(
                        sym, frozenset((0, i) for i in range(len(run))), (x, y)
                    )
                )
                covered.update(run)
        for x, y in sorted(boundary - covered, key=lambda p: (p[1], p[0])):
            features.append(FeatureInstance(sym, frozenset([(0, 0)]), (x, y)))
        seen: set[Coord] = set()
        for start in sorted(interior, key=lambda p: (p[1], p[0])):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                cx, cy = stack.pop()
                for dx, dy in ((0, -1), (1, 0), (0, 1), (-1, 0)):
                    nb = (cx + dx, cy + dy)
                    if nb in interior and nb not in comp:
                        comp.add(nb)
                        stack.append(nb)
            seen |= comp
            offsets, anchor = _normalize(comp)
            features.append(FeatureInstance(sym, offsets, anchor))
    features.sort(key=lambda f: (f.anchor[1], f.anchor[0], f.symbol, sorted(f.offsets)))
    return features


# -- transformations -------------------------------------------------------

_DIRECT_KINDS = ("identity", "rotate90", "reflect_h", "reflect_v")


@dataclass(frozen=True)
class Transformation:
    kind: str  # identity | translate | rotate90 | reflect_h | reflect_v | scale
    dx: int = 0
    dy: int = 0
    k: int = 0

    def __str__(self) -> str:
        if self.kind == "translate":
            return f"translate:{self.dx}:{self.dy}"
        if self.kind == "rotate90":
            return f"rotate90:{self.k}"
        if self.kind == "scale":
            return f"scale:{self.k}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "Transformation":
        parts = text.split(":")
        if parts[0] == "translate":
            return cls("translate", dx=int(parts[1]), dy=int(parts[2]))
        if parts[0] == "rotate90":
            return cls("rotate90", k=int(parts[1]))
        if parts[0] == "scale":
            return cls("scale", k=int(parts[1]))
        if parts[0] in ("identity", "reflect_h", "reflect_v"):
            return cls(parts[0])
        raise ValueError(f"unknown transformation {text!r}")

    def apply(self, g: Grid) -> Grid:
        if self.kind == "identity":
            return g
        if self.kind == "translate":
            cells = {}
            for (x, y), s in g.cells.items():
                nx, ny = x + self.dx, y + self.dy
                if not (0 <= nx < g.width and 0 <= ny < g.height):
                    raise BoundsError(f"translate moves ({x},{y}) off the canvas")
                cells[(nx, ny)] = s
            return Grid(g.width, g.height, cells)
        if self.kind == "rotate90":
            w, h = g.width, g.height
            cells = dict(g.cells)
            for _ in range(self.k % 4):
                cells = {(h - 1 - y, x): s for (x, y), s in cells.items()}
                w, h = h, w
            return Grid(w, h, cells)
        if self.kind == "reflect_h":
            return Grid(
                g.width,
                g.height,
                {(g.width - 1 - x, y): s for (x, y), s in g.cells.items()},
            )
        if self.kind == "reflect_v":
            return Grid(
                g.width,
                g.height,
                {(x, g.height - 1 - y): s for (x, y), s in g.cells.items()},
            )
        if self.kind == "scale":
            k = self.k
            if k < 2:
                raise ValueError("scale factor must be >= 2")
            if g.width * k > MAX_DIM or g.height * k > MAX_DIM:
                raise BoundsError("scaled grid exceeds the maximum canvas")
            cells = {}
            for (x, y), s in g.cells.items():
                for i in range(k):
                    for j in range(k):
                        cells[(x * k + i, y * k + j)] = s
            return Grid(g.width * k, g.height * k, cells)
        raise ValueError(f"unknown transformation kind {self.kind!r}")

    def inverse_apply(self, g: Grid) -> Grid | None:
        """Pre-image of g under this transformation, or None if it has none."""
        if self.kind == "identity":
            return g
        if self.kind == "translate":
            try:
                return Transformation("translate", dx=-self.dx, dy=-self.dy).apply(g)
            except BoundsError:
                return None
        if self.kind == "rotate90":
            return Transformation("rotate90", k=(4 - self.k) % 4).apply(g)
        if self.kind in ("reflect_h", "reflect_v"):
            return self.apply(g)
        if self.kind == "scale":
            k = self.k
            if g.width % k or g.height % k:
                return None
            cells = {}
            for (x, y), s in g.cells.items():
                cells.setdefault((x // k, y // k), set()).add(s)
            out = {}
            for (x, y), syms in cells.items():
                if len(syms) != 1:
                    return None
                out[(x, y)] = next(iter(syms))
            for (x, y), s in out.items():
                block = {
                    g.cells.get((x * k + i, y * k + j))
                    for i in range(k)
                    for j in range(k)
                }
                if block != {s}:
                    return None
            return Grid(g.width // k, g.height // k, out)
        raise ValueError(f"unknown transformation kind {self.kind!r}")


IDENTITY = Transformation("identity")


def apply_transformation(t: Transformation, g: Grid) -> Grid:
    return t.apply(g)


def _translate_candidate(before: Grid, after: Grid) -> Transformation | None:
    if before.width != after.width or before.height != after.height:
        return None
    if before.is_empty() or after.is_empty():
        return None
    bx, by = before.anchor()
    ax, ay = after.anchor()
    return Transformation("translate", dx=ax - bx, dy=ay - by)


def transformation_candidates(before: Grid, after: Grid) -> list[Transformation]:
    """Family members worth trying for mapping `before` onto `after`."""
    out: list[Transformation] = [IDENTITY]
    t = _translate_candidate(before, after)
    if t is not None:
        out.append(t)
    out.extend(Transformation("rotate90", k=k) for k in (1, 2, 3))
    out.append(Transformation("reflect_h"))
    out.append(Transformation("reflect_v"))
    if (
        before.width >= 1
        and after.width % before.width == 0
        and after.height % before.height == 0
    ):
        k = after.width // before.width
        if k >= 2 and after.height // before.height == k:
            out.append(Transformation("scale", k=k))
    return out


def find_transformation(before: Grid, after: Grid) -> Transformation:
    """First family member t with t(before) == after, in canonical order."""
    for t in transformation_candidates(before, after):
        try:
            if t.apply(before) == after:
                return t
        except BoundsError:
            continue
    raise NoFitError("no transformation in the family maps before to after")


# -- the learner -----------------------------------------------------------


class Learner:
    """Owns the bottom-up/top-down learning loops over a concept graph."""

    def __init__(self, graph: ConceptGraph | None = None):
        self.graph = graph if graph is not None else ConceptGraph()
        self._symbol_nodes: dict[str, int] = {}
        self._label_nodes: dict[str, int] = {}
        for node in self.graph.nodes.values():
            if node.kind is NodeKind.PRIMITIVE and node.label.startswith(PRIMITIVE_PREFIX):
                self._symbol_nodes.setdefault(node.label[len(PRIMITIVE_PREFIX):], node.id)
            if node.label:
                self._label_nodes.setdefault(node.label, node.id)

    # node helpers

    def _symbol_node(self, sym: str, counter: list[int]) -> int:
        node_id = self._symbol_nodes.get(sym)
        if node_id is None:
            node_id = self.graph.create_primitive(PRIMITIVE_PREFIX + sym, 1)
            self._symbol_nodes[sym] = node_id
            counter[0] += 1
        else:
            counter[1] += 1
        return node_id

    def _feature_node(self, feat: FeatureInstance, counter: list[int]) -> int:
        prim = self._symbol_node(feat.symbol, counter)
        if feat.offsets == frozenset([(0, 0)]):
            return prim
        children = [(prim, off) for off in sorted(feat.offsets)]
        before = len(self.graph)
        node_id = self.graph.create_composite(children)
        counter[0 if len(self.graph) > before else 1] += 1
        return node_id

    def _lookup_feature_node(self, feat: FeatureInstance) -> int | None:
        prim = self._symbol_nodes.get(feat.symbol)
        if prim is None:
            return None
        if feat.offsets == frozenset([(0, 0)]):
            return prim
        children = [(prim, off) for off in sorted(feat.offsets)]
        return self.graph.find_composite(children)

    def labeled_node(self, label: str, kind: NodeKind = NodeKind.PRIMITIVE) -> int:
        node_id = self._label_nodes.get(label)
        if node_id is None:
            node_id = self.graph.create_atom(kind, label, 1)
            self._label_nodes[label] = node_id
        return node_id

    # observe / reconstruct

    def observe(self, g: Grid) -> ObserveReport:
        if g.is_empty():
            raise EmptyInputError("observe requires at least one occupied cell")
        counter = [0, 0]  # created, reused
        features = extract_features(g)
        instances = [(self._feature_node(f, counter), f.anchor) for f in features]
        if len(instances) == 1:
            root = instances[0][0]
        else:
            px, py = g.anchor()
            children = [(n, (ax - px, ay - py)) for n, (ax, ay) in instances]
            before = len(self.graph)
            root = self.graph.create_composite(children)
            counter[0 if len(self.graph) > before else 1] += 1
        self.graph.record_association(sorted({n for n, _ in instances}))
        return ObserveReport(root, counter[0], counter[1])

    def _expand(self, node_id: int) -> dict[Coord, str]:
        node = self.graph.node(node_id)
        if node.kind is NodeKind.PRIMITIVE:
            if not node.label.startswith(PRIMITIVE_PREFIX):
                raise LearningError(f"node {node_id} is not a grid primitive")
            return {(0, 0): node.label[len(PRIMITIVE_PREFIX):]}
        cells: dict[Coord, str] = {}
        for child, (dx, dy) in self.graph.children_of(node_id):
            for (x, y), s in self._expand(child).items():
                cells[(x + dx, y + dy)] = s
        return cells

    def reconstruct(self, root: int, sessions: SessionStack | None = None) -> Grid:
        if sessions is not None and sessions.is_inhibited(root):
            raise InhibitedError(f"node {root} is inhibited")
        return Grid.from_cells(self._expand(root))

    # recognition

    def _detected_instances(self, g: Grid) -> set[tuple[int, Coord]]:
        out = set()
        for feat in extract_features(g):
            node_id = self._lookup_feature_node(feat)
            if node_id is not None:
                out.add((node_id, feat.anchor))
        return out

    def recognize(self, g: Grid, sessions: SessionStack | None = None) -> list[RecognitionMatch]:
        detected = self._detected_instances(g)
        detected_nodes = {n for n, _ in detected}
        anchors_by_node: dict[int, list[Coord]] = {}
        for n, a in detected:
            anchors_by_node.setdefault(n, []).append(a)
        matches = []
        for node_id in self.graph.node_ids():
            node = self.graph.nodes[node_id]
            if node.kind is not NodeKind.COMPOSITE:
                continue
            if sessions is not None and sessions.is_inhibited(node_id):
                continue
            if node_id in detected_nodes:
                anchor = min(anchors_by_node[node_id], key=lambda a: (a[1], a[0]))
                matches.append(RecognitionMatch(node_id, anchor, Fraction(1)))
                continue
            placements = self.graph.children_of(node_id)
            candidates = set()
            for child, (dx, dy) in placements:
                for n, (ax, ay) in detected:
                    if n == child:
                        candidates.add((ax - dx, ay - dy))
            best: tuple[Fraction, Coord] | None = None
            for cand in sorted(candidates, key=lambda a: (a[1], a[0])):
                hit = sum(
                    1
                    for child, (dx, dy) in placements
                    if (child, (cand[0] + dx, cand[1] + dy)) in detected
                )
                score = Fraction(hit, len(placements))
                if best is None or score > best[0]:
                    best = (score, cand)
            if best is not None and best[0] > 0:
                matches.append(RecognitionMatch(node_id, best[1], best[0]))
        matches.sort(
            key=lambda m: (-m.score, -self.graph.nodes[m.concept].scale, m.concept)
        )
        return matches

    def match_under_transformations(
        self, g: Grid
    ) -> list[tuple[RecognitionMatch, Transformation]]:
        results: list[tuple[int, RecognitionMatch, Transformation]] = []
        base = self.recognize(g)
        order = 0
        for m in base:
            results.append((order, m, IDENTITY))
        for dy in range(-(g.height - 1), g.height):
            for dx in range(-(g.width - 1), g.width):
                if dx == 0 and dy == 0:
                    continue
                order += 1
                t = Transformation("translate", dx=dx, dy=dy)
                if t.inverse_apply(g) is None:
                    continue
                # recognition is anchor-based: shifting the grid shifts anchors
                for m in base:
                    results.append(
                        (order, RecognitionMatch(m.concept, (m.anchor[0] - dx, m.anchor[1] - dy), m.score), t)
                    )
        rest: list[Transformation] = [Transformation("rotate90", k=k) for k in (1, 2, 3)]
        rest += [Transformation("reflect_h"), Transformation("reflect_v")]
        rest += [
            Transformation("scale", k=k) for k in range(2, max(g.width, g.height) + 1)
        ]
        for t in rest:
            order += 1
            pre = t.inverse_apply(g)
            if pre is None:
                continue
            for m in self.recognize(pre):
                results.append((order, m, t))
        results.sort(
            key=lambda e: (
                -e[1].score,
                -self.graph.nodes[e[1].concept].scale,
                e[1].concept,
                e[0],
            )
        )
        return [(m, t) for _, m, t in results]

    # transformations as concepts

    def learn_transformation(self, before: Grid, after: Grid, action_label: str) -> int:
        if before.is_empty():
            raise EmptyInputError("before-grid must have at least one occupied cell")
        t = find_transformation(before, after)
        t_node = self.labeled_node(TRANSFORM_PREFIX + str(t), NodeKind.TRANSFORMATION)
        a_node = self.labeled_node(ACTION_PREFIX + action_label, NodeKind.PRIMITIVE)
        self.graph.record_association([t_node, a_node])
        return t_node

    def transformation_of(self, node_id: int) -> Transformation:
        node = self.graph.node(node_id)
        if not node.label.startswith(TRANSFORM_PREFIX):
            raise LearningError(f"node {node_id} is not a transformation")
        return Transformation.parse(node.label[len(TRANSFORM_PREFIX):])

    # discrepancy

    def compute_discrepancy(self, g: Grid, goal: int) -> Discrepancy:
        rec = self.reconstruct(goal)
        anchor = None
        for m in self.recognize(g):
            if m.concept == goal:
                anchor = m.anchor
                break
        if anchor is None:
            anchor = g.anchor() if not g.is_empty() else (0, 0)
        lx, ly = rec.anchor()
        expected = {
            (anchor[0] + x - lx, anchor[1] + y - ly, s) for (x, y), s in rec.cells.items()
        }
        actual = {(x, y, s) for (x, y), s in g.cells.items()}
        return Discrepancy(frozenset(expected - actual), frozenset(actual - expected))

    # imagination

    def imagine(self, seed: int, steps: int, sessions: SessionStack | None = None) -> list[int]:
        self.graph.node(seed)
        visited = {seed}
        chain = []
        current = seed
        for _ in range(steps):
            options = [
                (w, n)
                for w, n in self.graph.neighbors_by_weight(current)
                if n not in visited
                and (sessions is None or not sessions.is_inhibited(n))
            ]
            if not options:
                break
            _, nxt = max(options, key=lambda e: (e[0], -e[1]))
            chain.append(nxt)
            visited.add(nxt)
            current = nxt
        return chain
