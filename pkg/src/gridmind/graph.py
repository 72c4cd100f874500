"""Concept node/link store.

Nodes are never deleted; ids are dense non-negative integers assigned in
creation order. Links come in three flavors: composition (parent -> child
with a placement role), excitatory association (symmetric co-occurrence
counter) and mutex (symmetric inhibitory pair).

Roles are (dx, dy) integer offsets of the child's anchor inside the
parent's frame; ordinal positions (state sequences) are encoded as (i, 0).
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass
from enum import Enum

Role = tuple[int, int]


class NodeKind(Enum):
    PRIMITIVE = "Primitive"
    COMPOSITE = "Composite"
    STATE = "State"
    TRANSFORMATION = "Transformation"
    SOLUTION = "SolutionConcept"


class GraphError(Exception):
    pass


class CycleError(GraphError):
    pass


class ArityError(GraphError):
    pass


class SelfMutexError(GraphError):
    pass


class UnknownNodeError(GraphError):
    pass


class ParseError(GraphError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class ConceptNode:
    id: int
    kind: NodeKind
    label: str = ""
    scale: int = 1


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class ConceptGraph:
    def __init__(self):
        self.nodes: dict[int, ConceptNode] = {}
        self._children: dict[int, list[tuple[int, Role]]] = {}
        self._parents: dict[int, set[int]] = {}
        self._composite_index: dict[tuple, int] = {}
        self.excitatory: dict[tuple[int, int], int] = {}
        self.mutex: set[tuple[int, int]] = set()

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> ConceptNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeError(f"no node {node_id}") from None

    def node_ids(self) -> list[int]:
        return sorted(self.nodes)

    # -- creation ----------------------------------------------------------

    def _new_node(self, kind: NodeKind, label: str = "", scale: int = 1) -> int:
        node_id = len(self.nodes)
        self.nodes[node_id] = ConceptNode(node_id, kind, label, scale)
        self._children[node_id] = []
        self._parents[node_id] = set()
        return node_id

    def create_primitive(self, label: str, scale: int = 1) -> int:
        if scale < 1:
            raise ValueError("scale must be positive")
        return self._new_node(NodeKind.PRIMITIVE, label, scale)

    def create_atom(self, kind: NodeKind, label: str = "", scale: int = 1) -> int:
        """Childless node of an arbitrary kind (states, transformations)."""
        if scale < 1:
            raise ValueError("scale must be positive")
        return self._new_node(kind, label, scale)

    @staticmethod
    def _composite_key(children: list[tuple[int, Role]]) -> tuple:
        return tuple(sorted((c, r[0], r[1]) for c, r in children))

    def create_composite(
        self,
        children: list[tuple[int, Role]],
        kind: NodeKind = NodeKind.COMPOSITE,
        label: str = "",
    ) -> int:
        children = sorted(set(children))
        if len(children) < 2:
            raise ArityError(f"composite needs >= 2 children, got {len(children)}")
        for child, _role in children:
            self.node(child)
        key = self._composite_key(children)
        existing = self._composite_index.get(key)
        if existing is not None:
            return existing
        scale = sum(self.nodes[c].scale for c, _ in children)
        node_id = self._new_node(kind, label, scale)
        for child, role in children:
            self._link(node_id, child, role)
        self._composite_index[key] = node_id
        return node_id

    def _link(self, parent: int, child: int, role: Role) -> None:
        if parent == child or parent in self.descendants(child):
            raise CycleError(f"link {parent}->{child} would close a cycle")
        entry = (child, role)
        if entry not in self._children[parent]:
            self._children[parent].append(entry)
            self._parents[child].add(parent)

    # -- associations ------------------------------------------------------

    def add_mutex(self, a: int, b: int) -> None:
        if a == b:
            raise SelfMutexError(f"mutex requires two distinct nodes, got {a}")
        self.node(a)
        self.node(b)
        self.mutex.add(_pair(a, b))

    def mutex_partners(self, n: int) -> set[int]:
        out = set()
        for a, b in self.mutex:
            if a == n:
                out.add(b)
            elif b == n:
                out.add(a)
        return out

    def record_association(self, co_active) -> None:
        ids = sorted(set(co_active))
        for n in ids:
            self.node(n)
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                self.excitatory[(a, b)] = self.excitatory.get((a, b), 0) + 1

    def association_weight(self, a: int, b: int) -> int:
        return self.excitatory.get(_pair(a, b), 0)

    def neighbors_by_weight(self, n: int) -> list[tuple[int, int]]:
        """(weight, other) pairs for every excitatory link touching n."""
        out = []
        for (a, b), w in self.excitatory.items():
            if a == n:
                out.append((w, b))
            elif b == n:
                out.append((w, a))
        return out

    # -- structure queries -------------------------------------------------

    def parents_of(self, n: int) -> set[int]:
        self.node(n)
        return set(self._parents[n])

    def children_of(self, n: int) -> list[tuple[int, Role]]:
        self.node(n)
        return list(self._children[n])

    def ancestors(self, n: int) -> set[int]:
        seen: set[int] = set()
        stack = list(self._parents.get(n, ()))
        while stack:
            p = stack.pop()
            if p not in seen:
                seen.add(p)
                stack.extend(self._parents[p])
        return seen

    def descendants(self, n: int) -> set[int]:
        seen: set[int] = set()
        stack = [c for c, _ in self._children.get(n, ())]
        while stack:
            c = stack.pop()
            if c not in seen:
                seen.add(c)
                stack.extend(ch for ch, _ in self._children[c])
        return seen

    def exclusive_descendants(self, n: int) -> set[int]:
        """Descendants with no parent outside n's descendant closure."""
        desc = self.descendants(n)
        closure = desc | {n}
        return {d for d in desc if self._parents[d] <= closure}

    def find_composite(self, children: list[tuple[int, Role]]) -> int | None:
        return self._composite_index.get(self._composite_key(children))

    # -- persistence -------------------------------------------------------

    def export_text(self) -> str:
        lines = ["CGRAPH 1"]
        for node_id in sorted(self.nodes):
            n = self.nodes[node_id]
            lines.append(f"N {n.id} {n.kind.value} {n.scale} {_quote(n.label)}")
        comp = []
        for parent in sorted(self._children):
            for child, (dx, dy) in self._children[parent]:
                comp.append((parent, child, dx, dy))
        for parent, child, dx, dy in sorted(comp):
            lines.append(f"C {parent} {child} {dx} {dy}")
        for (a, b) in sorted(self.excitatory):
            lines.append(f"E {a} {b} {self.excitatory[(a, b)]}")
        for (a, b) in sorted(self.mutex):
            lines.append(f"M {a} {b}")
        return "\n".join(lines) + "\n"

    def export_file(self, destination) -> None:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(self.export_text())

    @classmethod
    def import_text(cls, text: str) -> "ConceptGraph":
        lines = text.splitlines()
        if not lines or lines[0].strip() != "CGRAPH 1":
            raise ParseError(1, "missing 'CGRAPH 1' header")
        g = cls()
        kinds = {k.value: k for k in NodeKind}
        pending_links: list[tuple[int, int, int, int, int]] = []
        for line_no, raw in enumerate(lines[1:], start=2):
            line = raw.strip()
            if not line:
                continue
            try:
                fields = shlex.split(line)
            except ValueError as exc:
                raise ParseError(line_no, f"unparseable record: {exc}") from None
            tag = fields[0]
            try:
                if tag == "N":
                    _, sid, kind_name, sscale, label = fields
                    node_id, scale = int(sid), int(sscale)
                    if node_id in g.nodes:
                        raise ParseError(line_no, f"duplicate node id {node_id}")
                    if kind_name not in kinds:
                        raise ParseError(line_no, f"unknown kind {kind_name!r}")
                    if node_id != len(g.nodes):
                        raise ParseError(line_no, f"node ids must be dense, got {node_id}")
                    g._new_node(kinds[kind_name], label, scale)
                elif tag == "C":
                    _, p, c, dx, dy = fields
                    pending_links.append((line_no, int(p), int(c), int(dx), int(dy)))
                elif tag == "E":
                    _, a, b, w = fields
                    ia, ib, iw = int(a), int(b), int(w)
                    if ia not in g.nodes or ib not in g.nodes:
                        raise ParseError(line_no, "excitatory link to unknown node")
                    if iw < 1:
                        raise ParseError(line_no, f"weight must be >= 1, got {iw}")
                    g.excitatory[_pair(ia, ib)] = iw
                elif tag == "M":
                    _, a, b = fields
                    ia, ib = int(a), int(b)
                    if ia not in g.nodes or ib not in g.nodes:
                        raise ParseError(line_no, "mutex link to unknown node")
                    if ia == ib:
                        raise ParseError(line_no, "mutex link must join distinct nodes")
                    g.mutex.add(_pair(ia, ib))
                else:
                    raise ParseError(line_no, f"unknown record tag {tag!r}")
            except ParseError:
                raise
            except (ValueError, IndexError) as exc:
                raise ParseError(line_no, f"malformed record: {exc}") from None
        for line_no, parent, child, dx, dy in pending_links:
            if parent not in g.nodes or child not in g.nodes:
                raise ParseError(line_no, f"composition link to unknown node {parent}->{child}")
            try:
                g._link(parent, child, (dx, dy))
            except CycleError as exc:
                raise ParseError(line_no, str(exc)) from None
        for node_id, entries in g._children.items():
            if entries:
                g._composite_index.setdefault(g._composite_key(entries), node_id)
        return g

    @classmethod
    def import_file(cls, source) -> "ConceptGraph":
        with open(source, "r", encoding="utf-8") as fh:
            return cls.import_text(fh.read())

    def structurally_equals(self, other: "ConceptGraph") -> bool:
        return self.export_text() == other.export_text()


def _quote(label: str) -> str:
    if label == "" or any(ch.isspace() for ch in label) or '"' in label:
        return '"' + label.replace('"', '\\"') + '"'
    return label
