"""Session-scoped inhibition with fixpoint propagation.

Inhibition is layered: depth 0 is permanent base knowledge, deeper layers
are revocable counterfactual assumptions. `propagate` closes the inhibited
set under:

  A) parents of an inhibited node are inhibited;
  B) a node all of whose parents are inhibited (and that has at least one
     parent) is inhibited;
  C) on a state-graph view, a non-target state whose every transition
     leads to an inhibited state is inhibited (zero transitions counts);

plus the mutex-activation closure: partners of Active nodes are inhibited.
Trying to inhibit an Active node raises ConflictError, which is the signal
to backtrack and look for an alternative set of assumptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import ConceptGraph


class InhibitionError(Exception):
    pass


class UnderflowError(InhibitionError):
    pass


class ConflictError(InhibitionError):
    pass


@dataclass
class StateGraphView:
    states: set[int]
    transitions: dict[int, list[int]]
    targets: set[int]


@dataclass
class _Layer:
    depth: int
    assumptions: set[int] = field(default_factory=set)
    derived: set[int] = field(default_factory=set)


class SessionStack:
    """Activation/inhibition bookkeeping over a concept graph."""

    def __init__(self, graph: ConceptGraph):
        self.graph = graph
        self._layers: list[_Layer] = [_Layer(0)]
        self._inhibited: dict[int, int] = {}  # node -> shallowest inhibiting depth
        self._active: set[int] = set()

    @property
    def depth(self) -> int:
        return len(self._layers) - 1

    def begin_session(self) -> int:
        self._layers.append(_Layer(self.depth + 1))
        return self.depth

    def release_session(self) -> None:
        if self.depth == 0:
            raise UnderflowError("cannot release the base layer")
        layer = self._layers.pop()
        for n in layer.assumptions | layer.derived:
            if self._inhibited.get(n) == layer.depth:
                del self._inhibited[n]

    def is_inhibited(self, n: int) -> bool:
        return n in self._inhibited

    def inhibited_depth(self, n: int) -> int | None:
        return self._inhibited.get(n)

    def inhibited_nodes(self) -> set[int]:
        return set(self._inhibited)

    def is_active(self, n: int) -> bool:
        return n in self._active

    def active_nodes(self) -> set[int]:
        return set(self._active)

    def status(self, n: int) -> str:
        if n in self._inhibited:
            return f"Inhibited({self._inhibited[n]})"
        if n in self._active:
            return "Active"
        return "Neutral"

    def inhibit(self, n: int) -> None:
        self.graph.node(n)
        if n in self._active:
            raise ConflictError(f"node {n} is Active, cannot inhibit")
        layer = self._layers[-1]
        if n not in self._inhibited:
            self._inhibited[n] = layer.depth
            layer.assumptions.add(n)

    def set_active(self, n: int) -> None:
        self.graph.node(n)
        if n in self._inhibited:
            raise ConflictError(f"node {n} is Inhibited, cannot activate")
        self._active.add(n)

    def clear_active(self, n: int) -> None:
        self._active.discard(n)

    def clear_all_active(self) -> None:
        self._active.clear()

    def _derive(self, n: int, derived: set[int]) -> bool:
        if n in self._inhibited:
            return False
        if n in self._active:
            raise ConflictError(f"propagation would inhibit Active node {n}")
        self._inhibited[n] = self._layers[-1].depth
        self._layers[-1].derived.add(n)
        derived.add(n)
        return True

    def propagate(
        self,
        state_view: StateGraphView | None = None,
        worklist_order: list[int] | None = None,
    ) -> set[int]:
        """Run rules A/B/C plus the mutex closure to fixpoint.

        `worklist_order` only changes the processing order, never the
        result (the rules are monotone, hence confluent).
        """
        g = self.graph
        order = worklist_order if worklist_order is not None else g.node_ids()
        derived: set[int] = set()
        changed = True
        while changed:
            changed = False
            for n in order:
                if n in self._active:
                    for partner in g.mutex_partners(n):
                        if partner in self._active:
                            raise ConflictError(
                                f"mutex partners {n} and {partner} are both Active"
                            )
                        if partner not in self._inhibited:
                            self._derive(partner, derived)
                            changed = True
            for n in order:
                if n in self._inhibited:
                    for parent in g.parents_of(n):
                        if parent not in self._inhibited:
                            self._derive(parent, derived)
                            changed = True
            for n in order:
                if n not in self._inhibited:
                    parents = g.parents_of(n)
                    if parents and all(p in self._inhibited for p in parents):
                        self._derive(n, derived)
                        changed = True
            if state_view is not None:
                for s in sorted(state_view.states):
                    if s in state_view.targets or s in self._inhibited:
                        continue
                    succs = state_view.transitions.get(s, [])
                    if all(t in self._inhibited for t in succs):
                        self._derive(s, derived)
                        changed = True
        return derived
